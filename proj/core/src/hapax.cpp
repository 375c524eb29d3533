#include "rankfreq/hapax.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "rankfreq/error.hpp"

namespace rankfreq {
namespace {

// ln of sum_{k>=k0}^inf e^{-b (k-1)} k^{-gamma}: explicit terms for a while,
// then Euler-Maclaurin with the integral done by quadrature.
double log_rgf_tail(double b, double gamma, std::uint64_t k0) {
  constexpr std::uint64_t kExplicit = 2000;
  auto f = [&](double x) { return std::exp(-b * (x - 1.0) - gamma * std::log(x)); };
  double sum = 0.0;
  const std::uint64_t k_end = k0 + kExplicit;
  for (std::uint64_t k = k0; k < k_end; ++k) sum += f(static_cast<double>(k));
  const auto K = static_cast<double>(k_end);
  const double fk = f(K);
  if (fk > 1e-300) {
    thread_local boost::math::quadrature::exp_sinh<double> es;
    const double integral =
        es.integrate([&](double s) { return f(K + s); }, 1e-12);
    const double dfk = -fk * (b + gamma / K);
    sum += integral + 0.5 * fk - dfk / 12.0;
  }
  return std::log(sum);
}

// Residuals of the two RGF conditions at (b, gamma):
// E[k] / mean - 1 and ln(n_types * sum_{k >= k_max} P(k)).
struct RgfResidual {
  double mean_rel = 0.0;
  double tail = 0.0;
  double norm() const { return std::max(std::abs(mean_rel), std::abs(tail)); }
};

RgfResidual rgf_residual(double b, double gamma, std::uint64_t k_max,
                         double mean_count, double n_types) {
  // Weights are relative to k = 1, the largest one for b, gamma > 0.
  double s = 0.0;
  double s_k = 0.0;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    const auto kd = static_cast<double>(k);
    const double w = std::exp(-b * (kd - 1.0) - gamma * std::log(kd));
    s += w;
    s_k += w * kd;
  }
  RgfResidual r;
  r.mean_rel = s_k / s / mean_count - 1.0;
  r.tail = log_rgf_tail(b, gamma, k_max) - std::log(s) + std::log(n_types);
  return r;
}

bool in_box(double b, double gamma) {
  return b > 0.0 && b <= 1.0 && gamma > 0.0 && gamma <= 4.0;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double rel_err(double pred, std::size_t r_k) {
  return std::abs(pred - static_cast<double>(r_k)) / static_cast<double>(r_k);
}

}  // namespace

double predict_gz(double k, std::uint64_t N, std::size_t n, double c) {
  if (!(k >= 0.0) || N == 0 || n == 0 || !(c > 0.0)) {
    throw DomainError("predict_gz: need k >= 0, N, n >= 1 and c > 0");
  }
  // n / (1 + k n / (N c)): same value, and exactly n at k = 0.
  const auto nd = static_cast<double>(n);
  return nd / (1.0 + k * nd / (static_cast<double>(N) * c));
}

double predict_gz_beta(double k, const ModelCurve& curve) {
  const auto N = curve.params().N;
  if (N == 0) throw DomainError("predict_gz_beta: model has no token count N");
  if (!(k >= 1.0)) throw DomainError("predict_gz_beta: k must be >= 1");
  const double r = curve.rank_at(k / static_cast<double>(N));
  if (r < 1.0) {
    throw DomainError("predict_gz_beta: k/N = " + fmt(k / static_cast<double>(N)) +
                      " lies above the curve maximum phi_1");
  }
  return r;
}

double lotka_counts(std::uint64_t k) {
  if (k < 2) throw DomainError("lotka_counts: k must be >= 2");
  const auto kd = static_cast<double>(k);
  return 1.0 / (kd * (kd - 1.0));
}

double RgfParams::p(std::uint64_t k) const {
  if (k < 1 || k > k_max) return 0.0;
  const auto kd = static_cast<double>(k);
  return A * std::exp(-b * kd - gamma * std::log(kd));
}

RgfParams rgf_params(double b, double gamma, std::uint64_t k_max) {
  if (k_max < 1) throw DomainError("rgf_params: k_max must be >= 1");
  if (!(b >= 0.0) || !(gamma >= 0.0)) {
    throw DomainError("rgf_params: b and gamma must be non-negative");
  }
  double s = 0.0;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    const auto kd = static_cast<double>(k);
    s += std::exp(-b * kd - gamma * std::log(kd));
  }
  RgfParams out;
  out.b = b;
  out.gamma = gamma;
  out.k_max = k_max;
  out.A = 1.0 / s;
  return out;
}

RgfParams rgf_solve(double mean_count, double n_types, std::uint64_t k_max) {
  if (k_max < 2 || !(mean_count > 1.0) ||
      !(mean_count < static_cast<double>(k_max)) || !(n_types >= 1.0)) {
    throw FitError("rgf_solve: need k_max >= 2, 1 < N/n < k_max and n >= 1");
  }
  constexpr double kTarget = 1e-12;
  constexpr double kAccept = 1e-9;
  constexpr std::array<double, 4> kStartB{1e-3, 1e-4, 1e-2, 1e-1};
  constexpr std::array<double, 4> kStartGamma{1.5, 1.0, 2.0, 3.0};
  auto residual = [&](double b, double gamma) {
    return rgf_residual(b, gamma, k_max, mean_count, n_types);
  };

  double best_norm = std::numeric_limits<double>::infinity();
  double best_b = 0.0;
  double best_gamma = 0.0;

  for (double gamma0 : kStartGamma) {
    for (double b0 : kStartB) {
      double b = b0;
      double gamma = gamma0;
      RgfResidual f = residual(b, gamma);
      for (int iter = 0; iter < 100 && f.norm() > kTarget; ++iter) {
        // Central-difference Jacobian; b is stepped relatively because it
        // spans several decades.
        const double hb = 1e-6 * b;
        const double hg = 1e-6 * std::max(gamma, 1e-3);
        const RgfResidual fb1 = residual(b + hb, gamma);
        const RgfResidual fb0 = residual(b - hb, gamma);
        const RgfResidual fg1 = residual(b, gamma + hg);
        const RgfResidual fg0 = residual(b, gamma - hg);
        const double j11 = (fb1.mean_rel - fb0.mean_rel) / (2.0 * hb);
        const double j21 = (fb1.tail - fb0.tail) / (2.0 * hb);
        const double j12 = (fg1.mean_rel - fg0.mean_rel) / (2.0 * hg);
        const double j22 = (fg1.tail - fg0.tail) / (2.0 * hg);
        const double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || det == 0.0) break;
        const double db = (-f.mean_rel * j22 + f.tail * j12) / det;
        const double dg = (-f.tail * j11 + f.mean_rel * j21) / det;

        double step = 1.0;
        bool moved = false;
        for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
          const double nb = b + step * db;
          const double ng = gamma + step * dg;
          if (!in_box(nb, ng)) continue;
          const RgfResidual nf = residual(nb, ng);
          if (nf.norm() < f.norm()) {
            b = nb;
            gamma = ng;
            f = nf;
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
      if (f.norm() < best_norm) {
        best_norm = f.norm();
        best_b = b;
        best_gamma = gamma;
      }
      if (best_norm < kAccept) return rgf_params(best_b, best_gamma, k_max);
    }
  }
  throw SolverError("rgf_solve: no root in b in (0, 1], gamma in (0, 4]; best "
                    "max-residual " + fmt(best_norm) + " at b = " + fmt(best_b) +
                        ", gamma = " + fmt(best_gamma),
                    best_norm, best_norm);
}

RgfParams rgf_fit(std::uint64_t N, std::size_t n, double f1) {
  if (N == 0 || n == 0) throw DomainError("rgf_fit: N and n must be positive");
  const double inv_n = 1.0 / static_cast<double>(N);
  if (!(f1 >= inv_n * (1.0 - 1e-12) && f1 <= 1.0)) {
    throw DomainError("rgf_fit: f1 must lie in [1/N, 1]");
  }
  const auto k_max =
      static_cast<std::uint64_t>(std::llround(f1 * static_cast<double>(N)));
  return rgf_solve(static_cast<double>(N) / static_cast<double>(n),
                   static_cast<double>(n), k_max);
}

double rank_from_spectrum(std::span<const double> p, std::size_t n,
                          std::uint64_t l) {
  if (l < 1 || l > p.size()) {
    throw DomainError("rank_from_spectrum: l must lie in [1, " +
                      std::to_string(p.size()) + "]");
  }
  // Upper tail rather than 1 - head, so that the last l gives exactly zero.
  double tail = 0.0;
  for (std::size_t k = p.size(); k > l; --k) tail += p[k - 1];
  return static_cast<double>(n) * tail;
}

double predict_rgf(const RgfParams& params, std::size_t n, std::uint64_t l) {
  if (l < 1 || l > params.k_max) {
    throw DomainError("predict_rgf: l must lie in [1, k_max]");
  }
  std::vector<double> p(params.k_max);
  for (std::uint64_t k = 1; k <= params.k_max; ++k) p[k - 1] = params.p(k);
  return rank_from_spectrum(p, n, l);
}

WaringParams waring_fit(const RankFrequency& rf) {
  if (!rf.has_counts()) throw DomainError("waring_fit: needs occurrence counts");
  const auto counts = rf.counts();
  const auto n1 = static_cast<std::size_t>(
      std::count(counts.begin(), counts.end(), std::uint64_t{1}));
  const std::size_t n = rf.size();
  if (n1 == 0) {
    throw FitError("waring_fit: no type occurs exactly once; a = (1/(1-P1) - P1 "
                   "- 1)^-1 has its pole at P1 = 0");
  }
  if (n1 == n) {
    throw FitError("waring_fit: degenerate spectrum, every type occurs once");
  }
  WaringParams out;
  out.n1 = n1;
  out.n = n;
  out.p1 = static_cast<double>(n1) / static_cast<double>(n);
  const double p = out.p1;
  // (1/(1-p) - p - 1)^-1 = (1-p)/p^2 and x = a/(1-p) = 1/p^2, written without
  // the cancelling difference.
  out.a = (1.0 - p) / (p * p);
  out.x = 1.0 / (p * p);
  if (!std::isfinite(out.a) || !std::isfinite(out.x) || !(out.x > out.a - 1.0)) {
    throw FitError("waring_fit: recurrence would not be decreasing (x <= a - 1)");
  }
  return out;
}

double predict_waring(const WaringParams& params, std::uint64_t l) {
  if (l < 1) throw DomainError("predict_waring: l must be >= 1");
  double expected = static_cast<double>(params.n1);  // n P(1)
  double r = static_cast<double>(params.n) - expected;
  for (std::uint64_t k = 1; k < l; ++k) {
    const auto kd = static_cast<double>(k);
    expected *= (params.a + kd - 1.0) / (params.x + kd);
    if (!(expected > 0.0)) {
      throw FitError("predict_waring: recurrence produced P(" +
                     std::to_string(k + 1) + ") <= 0");
    }
    r -= expected;
  }
  return r;
}

std::optional<double> HapaxTable::mean_error(const std::string& column) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& row : rows) {
    const std::optional<double>* e = nullptr;
    if (column == "gz") e = &row.gz_err;
    else if (column == "gz_beta") e = &row.gz_beta_err;
    else if (column == "rgf") e = &row.rgf_err;
    else if (column == "wh") e = &row.wh_err;
    else throw DomainError("unknown hapax column '" + column + "'");
    if (e->has_value()) {
      sum += **e;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

HapaxTable compare_predictors(const RankFrequency& rf,
                              const HapaxPredictors& predictors) {
  const JumpRanks jr = jump_ranks(rf);
  const std::uint64_t N = rf.total();
  const std::size_t n = rf.size();

  HapaxTable table;
  for (std::size_t k = 1; k <= predictors.depth; ++k) {
    HapaxRow row;
    row.k = k;
    row.r_k = jr.at(k);
    if (row.r_k == 0) {
      table.warnings.push_back("hapax table truncated at k = " +
                               std::to_string(k - 1) + ": r_" +
                               std::to_string(k) + " is zero");
      break;
    }
    const auto kd = static_cast<double>(k);
    if (predictors.zipf_c) {
      row.gz = predict_gz(kd, N, n, *predictors.zipf_c);
      row.gz_err = rel_err(*row.gz, row.r_k);
    }
    if (predictors.model) {
      try {
        row.gz_beta = predict_gz_beta(kd, *predictors.model);
        row.gz_beta_err = rel_err(*row.gz_beta, row.r_k);
      } catch (const DomainError& e) {
        table.warnings.push_back("gz_beta at k = " + std::to_string(k) + ": " +
                                 e.what());
      }
    }
    if (predictors.rgf && k <= predictors.rgf->k_max) {
      row.rgf = predict_rgf(*predictors.rgf, n, k);
      row.rgf_err = rel_err(*row.rgf, row.r_k);
    }
    if (predictors.waring) {
      row.wh = predict_waring(*predictors.waring, k);
      row.wh_err = rel_err(*row.wh, row.r_k);
    }

    const std::array<std::pair<const char*, const std::optional<double>*>, 4>
        columns{{{"gz", &row.gz_err},
                 {"gz_beta", &row.gz_beta_err},
                 {"rgf", &row.rgf_err},
                 {"wh", &row.wh_err}}};
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [name, err] : columns) {
      if (err->has_value() && **err < best) {
        best = **err;
        row.winner = name;
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_csv(std::ostream& os, const HapaxTable& table) {
  auto cell = [&os](const std::optional<double>& v) {
    os << ',';
    if (v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", *v);
      os << buf;
    }
  };
  os << "k,r_k,gz,gz_err,gz_beta,gz_beta_err,rgf,rgf_err,wh,wh_err\n";
  for (const auto& row : table.rows) {
    os << row.k << ',' << row.r_k;
    cell(row.gz);
    cell(row.gz_err);
    cell(row.gz_beta);
    cell(row.gz_beta_err);
    cell(row.rgf);
    cell(row.rgf_err);
    cell(row.wh);
    cell(row.wh_err);
    os << '\n';
  }
}

nlohmann::json to_json(const RgfParams& params) {
  return {{"A", params.A},
          {"b", params.b},
          {"gamma", params.gamma},
          {"k_max", params.k_max}};
}

nlohmann::json to_json(const WaringParams& params) {
  return {{"a", params.a},   {"x", params.x}, {"p1", params.p1},
          {"n1", params.n1}, {"n", params.n}};
}

nlohmann::json to_json(const HapaxTable& table) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"k", row.k},
                    {"r_k", row.r_k},
                    {"gz", opt(row.gz)},
                    {"gz_err", opt(row.gz_err)},
                    {"gz_beta", opt(row.gz_beta)},
                    {"gz_beta_err", opt(row.gz_beta_err)},
                    {"rgf", opt(row.rgf)},
                    {"rgf_err", opt(row.rgf_err)},
                    {"wh", opt(row.wh)},
                    {"wh_err", opt(row.wh_err)},
                    {"winner", row.winner.empty() ? nlohmann::json(nullptr)
                                                  : nlohmann::json(row.winner)}});
  }
  nlohmann::json mean = nlohmann::json::object();
  for (const char* col : {"gz", "gz_beta", "rgf", "wh"}) {
    mean[col] = opt(table.mean_error(col));
  }
  return {{"rows", std::move(rows)},
          {"mean_error", std::move(mean)},
          {"warnings", table.warnings}};
}

}  // namespace rankfreq
