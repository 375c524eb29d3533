// rankfreq: rank-frequency analysis of text corpora.
//
//   rankfreq analyze [options] FILE...   one report per input
//   rankfreq mix [options] FILE...       one report for the pooled corpus
//   rankfreq model --c-beta C [--beta B] --n N [--tokens T]
//   rankfreq generate --c-beta C [--beta B] --n N --tokens T --seed S -o FILE
//
// Exit status: 0 success, 1 pipeline error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rankfreq/corpus.hpp"
#include "rankfreq/error.hpp"
#include "rankfreq/json_format.hpp"
#include "rankfreq/model.hpp"
#include "rankfreq/report.hpp"

namespace fs = std::filesystem;
using namespace rankfreq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPipeline = 1;
constexpr int kExitUsage = 2;

struct PipelineFlags {
  std::string mode = "char";
  std::string filter = "han";
  double ss_max = 0.05;
  double r2_min = 0.995;
  std::size_t rb_threshold = kDefaultHapaxThreshold;
  std::size_t hapax_k = kDefaultHapaxDepth;
  unsigned threads = 0;
  bool counts_input = false;
  bool no_model = false;
  std::string annotate;
  std::string out_dir = ".";
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
  cmd->add_option("--mode", f.mode, "Tokenization unit")
      ->check(CLI::IsMember({"char", "character", "word"}))
      ->capture_default_str();
  cmd->add_option("--filter", f.filter, "Token filter")
      ->check(CLI::IsMember({"han", "alpha", "none"}))
      ->capture_default_str();
  cmd->add_option("--ss-max", f.ss_max, "Zipfian range: SS_err bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--r2-min", f.r2_min, "Zipfian range: R^2 bound")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--rb-threshold", f.rb_threshold,
                  "Types sharing one frequency that mark r_b")
      ->capture_default_str();
  cmd->add_option("--hapax-k", f.hapax_k, "Depth of the hapax comparison table")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "Range-scan threads (0: all cores)")
      ->capture_default_str();
  cmd->add_flag("--counts", f.counts_input,
                "Inputs are token-count JSON files (as written by 'generate')");
  cmd->add_flag("--no-model", f.no_model, "Skip the latent-model overlay");
  cmd->add_option("--annotate", f.annotate,
                  "JSON file echoed verbatim into the report")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", f.out_dir, "Directory for reports and CSVs")
      ->capture_default_str();
}

AnalysisOptions to_options(const PipelineFlags& f) {
  AnalysisOptions o;
  o.mode = parse_mode(f.mode);
  o.filter = parse_filter(f.filter);
  o.zipf.ss_max = f.ss_max;
  o.zipf.r2_min = f.r2_min;
  o.zipf.threads = f.threads;
  o.rb_threshold = f.rb_threshold;
  o.hapax_depth = f.hapax_k;
  o.model_overlay = !f.no_model;
  return o;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return nlohmann::json::parse(in);
}

AnalysisReport analyze_counts_file(const std::string& path,
                                   const AnalysisOptions& options) {
  const TokenCounts tc = token_counts_from_json(read_json_file(path));
  AnalysisReport report = analyze(tc, options, {{path, tc.total(), tc.distinct()}});
  report.filter.reset();
  return report;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

template <class Writer>
void write_with(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  writer(out);
}

void emit_report(AnalysisReport& report, const std::string& stem,
                 const PipelineFlags& flags) {
  if (!flags.annotate.empty()) report.annotations = read_json_file(flags.annotate);
  const fs::path dir(flags.out_dir);
  fs::create_directories(dir);
  write_text(dir / (stem + ".report.json"), format_json(to_json(report)));
  write_with(dir / (stem + ".curve.csv"),
             [&](std::ostream& os) { write_curve_csv(os, report); });
  if (report.hapax) {
    write_with(dir / (stem + ".hapax.csv"),
               [&](std::ostream& os) { write_csv(os, *report.hapax); });
  }

  std::cout << stem << ": N=" << report.N << " n=" << report.n;
  if (report.zipf) {
    std::cout << " zipf=[" << report.zipf->r_min << ", " << report.zipf->r_max
              << "] c=" << format_double(report.zipf->c)
              << " gamma=" << format_double(report.zipf->gamma);
  }
  if (report.r_b) std::cout << " r_b=" << *report.r_b;
  std::cout << '\n';
  for (const auto& e : report.errors) {
    std::cerr << stem << ": " << e.stage << ": " << e.message << '\n';
  }
}

std::vector<std::string> unique_stems(const std::vector<std::string>& paths) {
  std::vector<std::string> stems;
  std::set<std::string> seen;
  for (const auto& p : paths) {
    std::string stem = fs::path(p).stem().string();
    std::string candidate = stem;
    for (int i = 2; seen.count(candidate); ++i) {
      candidate = stem + "-" + std::to_string(i);
    }
    seen.insert(candidate);
    stems.push_back(candidate);
  }
  return stems;
}

int run_analyze(const std::vector<std::string>& inputs, const PipelineFlags& flags) {
  const AnalysisOptions options = to_options(flags);
  // Inputs are independent; each report is owned by its own task.
  std::vector<std::future<AnalysisReport>> tasks;
  for (const auto& path : inputs) {
    tasks.push_back(std::async(std::launch::async, [&, path] {
      if (!flags.counts_input) return analyze_file(path, options);
      try {
        return analyze_counts_file(path, options);
      } catch (const std::exception& e) {
        AnalysisReport failed;
        failed.sources.push_back({path, 0, 0});
        failed.errors.push_back({"read_counts", e.what()});
        return failed;
      }
    }));
  }
  const auto stems = unique_stems(inputs);
  int status = kExitOk;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    AnalysisReport report = tasks[i].get();
    emit_report(report, stems[i], flags);
    if (!report.ok()) status = kExitPipeline;
  }
  return status;
}

int run_mix(const std::vector<std::string>& inputs, const std::string& name,
            const PipelineFlags& flags) {
  const AnalysisOptions options = to_options(flags);
  AnalysisReport report;
  if (flags.counts_input) {
    std::vector<CorpusSource> sources;
    std::optional<TokenCounts> pooled;
    for (const auto& path : inputs) {
      TokenCounts tc = token_counts_from_json(read_json_file(path));
      sources.push_back({path, tc.total(), tc.distinct()});
      pooled = pooled ? mix(*pooled, tc) : std::move(tc);
    }
    report = analyze(*pooled, options, std::move(sources));
    report.filter.reset();
  } else {
    report = analyze_mix(inputs, options);
  }
  emit_report(report, name, flags);
  return report.ok() ? kExitOk : kExitPipeline;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-frequency analysis: Zipfian range, latent model, hapax "
               "predictors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rankfreq 0.1.0");

  PipelineFlags analyze_flags;
  std::vector<std::string> analyze_inputs;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze each input separately");
  add_pipeline_flags(analyze_cmd, analyze_flags);
  analyze_cmd->add_option("inputs", analyze_inputs, "Text files (UTF-8)")
      ->required()
      ->check(CLI::ExistingFile);

  PipelineFlags mix_flags;
  std::vector<std::string> mix_inputs;
  std::string mix_name = "mix";
  auto* mix_cmd = app.add_subcommand("mix", "Pool the inputs and analyze the mixture");
  add_pipeline_flags(mix_cmd, mix_flags);
  mix_cmd->add_option("--name", mix_name, "Stem of the output files")
      ->capture_default_str();
  mix_cmd->add_option("inputs", mix_inputs, "Text files (UTF-8), at least two")
      ->required()
      ->expected(2, -1)
      ->check(CLI::ExistingFile);

  double c_beta = 0.0;
  double beta = 2.0;
  std::size_t n_types = 0;
  std::uint64_t n_tokens = 0;
  double gamma_e = kSeedGammaE;
  std::string model_dir = ".";
  auto* model_cmd = app.add_subcommand("model", "Tabulate the solved model curve");
  model_cmd->add_option("--c-beta", c_beta, "Prior prefactor")->required();
  model_cmd->add_option("--beta", beta, "Prior exponent in (1, 2]")->capture_default_str();
  model_cmd->add_option("--n", n_types, "Number of types")->required();
  model_cmd->add_option("--tokens", n_tokens, "Number of tokens N (optional)");
  model_cmd->add_option("--gamma-e", gamma_e, "Constant of the beta = 2 mu seed")
      ->capture_default_str();
  model_cmd->add_option("--out-dir", model_dir, "Output directory")->capture_default_str();

  std::uint64_t seed = 0;
  std::string generate_out;
  auto* gen_cmd = app.add_subcommand("generate", "Sample a synthetic corpus from the model");
  gen_cmd->add_option("--c-beta", c_beta, "Prior prefactor")->required();
  gen_cmd->add_option("--beta", beta, "Prior exponent in (1, 2]")->capture_default_str();
  gen_cmd->add_option("--n", n_types, "Number of types")->required();
  gen_cmd->add_option("--tokens", n_tokens, "Number of tokens N")->required();
  gen_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("-o,--out", generate_out, "Token-count JSON to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze_cmd) return run_analyze(analyze_inputs, analyze_flags);
    if (*mix_cmd) return run_mix(mix_inputs, mix_name, mix_flags);
    if (*model_cmd) {
      const ModelParams params = solve_mu(c_beta, beta, n_types, n_tokens, gamma_e);
      const ModelTable table = tabulate_model(params);
      const fs::path dir(model_dir);
      fs::create_directories(dir);
      write_with(dir / "model.csv",
                 [&](std::ostream& os) { write_model_csv(os, table); });
      write_text(dir / "model.json", format_json(to_json(params)));
      std::cout << "mu=" << format_double(params.mu) << '\n';
      return kExitOk;
    }
    if (*gen_cmd) {
      const ModelParams params = solve_mu(c_beta, beta, n_types, n_tokens);
      const TokenCounts tc = generate_corpus(params, n_tokens, seed);
      write_text(generate_out, format_json(to_json(tc)));
      std::cout << "N=" << tc.total() << " n=" << tc.distinct() << '\n';
      return kExitOk;
    }
  } catch (const DomainError& e) {
    std::cerr << "rankfreq: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "rankfreq: " << e.what() << '\n';
    return kExitPipeline;
  }
  return kExitUsage;
}
