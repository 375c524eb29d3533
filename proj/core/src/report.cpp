#include "rankfreq/report.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <utility>

#include "rankfreq/error.hpp"
#include "rankfreq/json_format.hpp"

namespace rankfreq {
namespace {

// Runs one pipeline stage; a throw is recorded against the stage name.
template <class F>
bool run_stage(AnalysisReport& report, const char* stage, F&& body) {
  try {
    body();
    return true;
  } catch (const std::exception& e) {
    report.errors.push_back({stage, e.what()});
    report.null_reasons.emplace(stage, std::string(stage) + " failed: " + e.what());
    return false;
  }
}

void null_because(AnalysisReport& report, const std::string& field,
                  std::string reason) {
  report.null_reasons.emplace(field, std::move(reason));
}

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_arithmetic_v<T>) {
    return *v;
  } else {
    return to_json(*v);
  }
}

std::string cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

TokenCounts read_and_tokenize(const std::string& path, Mode mode, Filter filter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  if (in.bad()) throw Error("read error on '" + path + "'");
  return tokenize(text, mode, filter);
}

AnalysisReport analyze(const TokenCounts& tokens, const AnalysisOptions& options,
                       std::vector<CorpusSource> sources) {
  AnalysisReport report;
  report.mode = tokens.mode();
  report.filter = options.filter;
  report.N = tokens.total();
  report.n = tokens.distinct();
  report.sources = std::move(sources);
  if (report.sources.empty()) report.sources.push_back({"", report.N, report.n});

  std::optional<RankFrequency> rf;
  if (!run_stage(report, "rank", [&] { rf = rank(tokens); })) return report;

  run_stage(report, "zipf_range",
            [&] { report.zipf = detect_zipf_range(*rf, options.zipf); });

  if (report.zipf) {
    const PowerLawFit& z = *report.zipf;
    run_stage(report, "nls", [&] { report.nls = nls_fit(*rf, z.r_min, z.r_max); });
    run_stage(report, "mle",
              [&] { report.mle = mle_exponent(*rf, z.r_min, z.r_max); });
    report.pre_zipf_mass = z.r_min > 1 ? range_mass(*rf, 1, z.r_min - 1) : 0.0;
    report.zipf_mass = range_mass(*rf, z.r_min, z.r_max);
    report.abs_d = std::abs(zipf_deviation(*rf, z));
    run_stage(report, "ks", [&] {
      report.ks = ks_test_zipf(*rf, z);
      report.ks_log = ks_test_zipf_log(*rf, z);
    });
  } else {
    for (const char* field :
         {"zipf", "nls", "mle", "pre_zipf_mass", "zipf_mass", "abs_d", "ks",
          "ks_log", "model"}) {
      null_because(report, field, "no Zipfian range detected");
    }
  }

  run_stage(report, "hapax_boundary", [&] {
    report.r_b = hapax_boundary(*rf, options.rb_threshold);
    if (!report.r_b) {
      null_because(report, "r_b",
                   "no frequency is shared by more than " +
                       std::to_string(options.rb_threshold) + " types");
    }
  });

  if (report.zipf && report.r_b && *report.r_b >= report.zipf->r_max + 10) {
    const std::size_t lo = report.zipf->r_max + 1;
    const std::size_t hi = *report.r_b;
    run_stage(report, "exp_fit",
              [&] { report.exp_fit = fit_exponential(*rf, lo, hi); });
  } else if (report.zipf && report.r_b) {
    null_because(report, "exp_fit",
                 "r_b - r_max < 10: exponential-like range absent or not "
                 "distinguishable");
  } else {
    null_because(report, "exp_fit", "needs both a Zipfian range and r_b");
  }

  std::optional<ModelCurve> model_curve;
  if (report.zipf && options.model_overlay) {
    run_stage(report, "model", [&] {
      report.model = solve_mu(report.zipf->c, 2.0, report.n, report.N);
      model_curve.emplace(*report.model);
    });
    if (report.zipf->c > 0.25) {
      report.warnings.push_back(
          "fitted c > 0.25: outside the small-mu regime of the beta = 2 model");
    }
  } else if (report.zipf) {
    null_because(report, "model", "model overlay disabled");
  }

  run_stage(report, "rgf",
            [&] { report.rgf = rgf_fit(report.N, report.n, rf->freq(1)); });
  run_stage(report, "waring", [&] { report.waring = waring_fit(*rf); });

  run_stage(report, "hapax", [&] {
    HapaxPredictors predictors;
    if (report.zipf) predictors.zipf_c = report.zipf->c;
    predictors.model = model_curve;
    predictors.rgf = report.rgf;
    predictors.waring = report.waring;
    predictors.depth = options.hapax_depth;
    report.hapax = compare_predictors(*rf, predictors);
    for (const auto& w : report.hapax->warnings) report.warnings.push_back(w);
  });

  report.curve.resize(rf->size());
  for (std::size_t r = 1; r <= rf->size(); ++r) {
    CurveRow& row = report.curve[r - 1];
    row.rank = r;
    row.frequency = rf->freq(r);
    row.count = rf->count(r);
    if (report.zipf) {
      const auto rd = static_cast<double>(r);
      row.zipf_model = report.zipf->c * std::pow(rd, -report.zipf->gamma);
      row.gz_model = generalized_zipf(report.zipf->c, report.n, rd);
    }
  }
  if (model_curve) {
    run_stage(report, "model_curve", [&] {
      for (auto& row : report.curve) {
        row.model_phi = model_curve->phi(static_cast<double>(row.rank));
      }
    });
  }
  return report;
}

AnalysisReport analyze_file(const std::string& path,
                            const AnalysisOptions& options) {
  std::optional<TokenCounts> tokens;
  AnalysisReport failed;
  failed.mode = options.mode;
  failed.filter = options.filter;
  failed.sources.push_back({path, 0, 0});
  if (!run_stage(failed, "tokenize", [&] {
        tokens = read_and_tokenize(path, options.mode, options.filter);
      })) {
    return failed;
  }
  return analyze(*tokens, options,
                 {{path, tokens->total(), tokens->distinct()}});
}

AnalysisReport analyze_mix(const std::vector<std::string>& paths,
                           const AnalysisOptions& options) {
  if (paths.size() < 2) throw DomainError("mix needs at least two inputs");
  AnalysisReport failed;
  failed.mode = options.mode;
  failed.filter = options.filter;
  std::optional<TokenCounts> mixed;
  std::vector<CorpusSource> sources;
  for (const auto& path : paths) {
    failed.sources.push_back({path, 0, 0});
    std::optional<TokenCounts> tokens;
    if (!run_stage(failed, "tokenize", [&] {
          tokens = read_and_tokenize(path, options.mode, options.filter);
        })) {
      return failed;
    }
    sources.push_back({path, tokens->total(), tokens->distinct()});
    mixed = mixed ? mix(*mixed, *tokens) : std::move(*tokens);
  }
  return analyze(*mixed, options, std::move(sources));
}

nlohmann::json to_json(const AnalysisReport& report) {
  nlohmann::json sources = nlohmann::json::array();
  for (const auto& s : report.sources) {
    sources.push_back({{"path", s.path}, {"N", s.N}, {"n", s.n}});
  }
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& e : report.errors) {
    errors.push_back({{"stage", e.stage}, {"message", e.message}});
  }
  nlohmann::json cross = {{"nls", opt_json(report.nls)},
                          {"mle", opt_json(report.mle)},
                          {"gamma_diff_nls", nullptr},
                          {"gamma_diff_mle", nullptr}};
  if (report.zipf && report.nls) {
    cross["gamma_diff_nls"] = std::abs(report.nls->gamma - report.zipf->gamma);
  }
  if (report.zipf && report.mle) {
    cross["gamma_diff_mle"] = std::abs(report.mle->gamma - report.zipf->gamma);
  }

  nlohmann::json j = {
      {"corpus",
       {{"sources", std::move(sources)},
        {"mode", std::string(to_string(report.mode))},
        {"filter", report.filter ? nlohmann::json(std::string(to_string(*report.filter)))
                                 : nlohmann::json(nullptr)},
        {"N", report.N},
        {"n", report.n}}},
      {"zipf", opt_json(report.zipf)},
      {"cross_checks", std::move(cross)},
      {"masses",
       {{"pre_zipfian", opt_json(report.pre_zipf_mass)},
        {"zipfian", opt_json(report.zipf_mass)}}},
      {"abs_d", opt_json(report.abs_d)},
      {"r_b", opt_json(report.r_b)},
      {"exp_fit", opt_json(report.exp_fit)},
      {"ks", {{"original", opt_json(report.ks)}, {"log", opt_json(report.ks_log)}}},
      {"model", opt_json(report.model)},
      {"hapax",
       {{"table", opt_json(report.hapax)},
        {"rgf", opt_json(report.rgf)},
        {"waring", opt_json(report.waring)}}},
      {"null_reasons", report.null_reasons},
      {"errors", std::move(errors)},
      {"warnings", report.warnings}};
  if (!report.annotations.is_null()) j["annotations"] = report.annotations;
  return j;
}

void write_curve_csv(std::ostream& os, const AnalysisReport& report) {
  os << "rank,frequency,count,zipf_model,gz_model,model_curve_phi\n";
  for (const auto& row : report.curve) {
    os << row.rank << ',' << format_double(row.frequency) << ',' << row.count
       << ',' << cell(row.zipf_model) << ',' << cell(row.gz_model) << ','
       << cell(row.model_phi) << '\n';
  }
}

ModelTable tabulate_model(const ModelParams& params) {
  const ModelCurve curve(params);
  ModelTable table{params, std::vector<double>(params.n)};
  for (std::size_t r = 1; r <= params.n; ++r) {
    table.phi[r - 1] = curve.phi(static_cast<double>(r));
  }
  return table;
}

void write_model_csv(std::ostream& os, const ModelTable& table) {
  os << "rank,phi,generalized_zipf\n";
  for (std::size_t r = 1; r <= table.phi.size(); ++r) {
    os << r << ',' << format_double(table.phi[r - 1]) << ','
       << format_double(generalized_zipf(table.params.c_beta, table.params.n,
                                         static_cast<double>(r)))
       << '\n';
  }
}

}  // namespace rankfreq
