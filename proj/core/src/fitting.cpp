#include "rankfreq/fitting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "rankfreq/error.hpp"

namespace rankfreq {
namespace {

void check_window(const RankFrequency& rf, std::size_t lo, std::size_t hi,
                  std::size_t min_span, const char* what) {
  if (lo < 1 || hi > rf.size() || lo > hi) {
    throw DomainError(std::string(what) + ": window [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "] outside ranks [1, " +
                      std::to_string(rf.size()) + "]");
  }
  if (hi - lo < min_span) {
    throw FitError(std::string(what) + ": window [" + std::to_string(lo) + ", " +
                   std::to_string(hi) + "] too small (need hi - lo >= " +
                   std::to_string(min_span) + ")");
  }
}

// SS_err and coefficient of determination of ln f against ln c - gamma ln r.
void loglog_quality(const RankFrequency& rf, std::size_t r_min, std::size_t r_max,
                    double c, double gamma, double& ss_err, double& r_squared) {
  const double ln_c = std::log(c);
  double mean_y = 0.0;
  for (std::size_t r = r_min; r <= r_max; ++r) mean_y += std::log(rf.freq(r));
  mean_y /= static_cast<double>(r_max - r_min + 1);
  double ss = 0.0;
  double ss_tot = 0.0;
  for (std::size_t r = r_min; r <= r_max; ++r) {
    const double y = std::log(rf.freq(r));
    const double e = y - (ln_c - gamma * std::log(static_cast<double>(r)));
    ss += e * e;
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  ss_err = ss;
  r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss / ss_tot, 0.0, 1.0) : 0.0;
}

struct Candidate {
  std::size_t r_min = 0;
  std::size_t r_max = 0;
  bool found = false;

  std::size_t width() const { return r_max - r_min; }
  bool beats(const Candidate& other) const {
    if (!found) return false;
    if (!other.found) return true;
    if (width() != other.width()) return width() > other.width();
    if (r_min != other.r_min) return r_min < other.r_min;
    return r_max < other.r_max;
  }
};

}  // namespace

std::string_view to_string(FitMethod method) {
  switch (method) {
    case FitMethod::lls:
      return "LLS";
    case FitMethod::nls:
      return "NLS";
    case FitMethod::mle:
      return "MLE";
  }
  return "LLS";
}

PowerLawFit loglog_linfit(const RankFrequency& rf, std::size_t r_min,
                          std::size_t r_max) {
  check_window(rf, r_min, r_max, 2, "loglog_linfit");
  const auto m = static_cast<double>(r_max - r_min + 1);

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t r = r_min; r <= r_max; ++r) {
    mean_x += std::log(static_cast<double>(r));
    mean_y += std::log(rf.freq(r));
  }
  mean_x /= m;
  mean_y /= m;

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t r = r_min; r <= r_max; ++r) {
    const double dx = std::log(static_cast<double>(r)) - mean_x;
    const double dy = std::log(rf.freq(r)) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }

  PowerLawFit fit;
  fit.method = FitMethod::lls;
  fit.r_min = r_min;
  fit.r_max = r_max;
  fit.gamma = -sxy / sxx;
  const double ln_c = mean_y + fit.gamma * mean_x;
  fit.c = std::exp(ln_c);

  double ss = 0.0;
  double explained = 0.0;
  for (std::size_t r = r_min; r <= r_max; ++r) {
    const double x = std::log(static_cast<double>(r));
    const double y_hat = ln_c - fit.gamma * x;
    const double e = std::log(rf.freq(r)) - y_hat;
    ss += e * e;
    explained += (y_hat - mean_y) * (y_hat - mean_y);
  }
  fit.ss_err = ss;
  fit.r_squared = syy > 0.0 ? std::clamp(explained / syy, 0.0, 1.0) : 0.0;
  return fit;
}

PowerLawFit detect_zipf_range(const RankFrequency& rf,
                              const ZipfSearchOptions& options) {
  const std::size_t n = rf.size();
  const std::size_t min_width = std::max<std::size_t>(options.min_width, 2);
  if (n < 10 || n <= min_width) {
    throw FitError("no Zipfian range: table has only " + std::to_string(n) +
                   " ranks");
  }

  std::vector<double> x(n + 1);
  std::vector<double> y(n + 1);
  for (std::size_t r = 1; r <= n; ++r) {
    x[r] = std::log(static_cast<double>(r));
    y[r] = std::log(rf.freq(r));
  }

  // Largest qualifying width seen so far, shared only to prune stripes that
  // cannot reach it; the reduction below decides the winner.
  std::atomic<std::size_t> best_width{0};
  std::atomic<bool> any_found{false};

  auto scan_stripe = [&](std::size_t r_min) {
    Candidate best;
    best.r_min = r_min;
    if (any_found.load(std::memory_order_relaxed) &&
        n - r_min < best_width.load(std::memory_order_relaxed)) {
      return best;
    }
    detail::RunningLogLogFit acc;
    for (std::size_t r_max = r_min; r_max <= n; ++r_max) {
      acc.push(x[r_max], y[r_max]);
      if (r_max - r_min < min_width) continue;
      if (acc.slope() < 0.0 && acc.ss_err() < options.ss_max &&
          acc.r_squared() > options.r2_min) {
        best.r_max = r_max;
        best.found = true;
      }
    }
    if (best.found) {
      std::size_t w = best_width.load(std::memory_order_relaxed);
      while (best.width() > w &&
             !best_width.compare_exchange_weak(w, best.width())) {
      }
      any_found.store(true, std::memory_order_relaxed);
    }
    return best;
  };

  const std::size_t last_r_min = n - min_width;
  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency()
                                          : options.threads;
  threads = std::clamp<unsigned>(threads, 1, 64);

  std::vector<Candidate> per_worker(threads);
  auto worker = [&](unsigned id) {
    // Interleaved stripes keep the per-worker load balanced (short windows
    // at high r_min are cheap).
    for (std::size_t r_min = 1 + id; r_min <= last_r_min; r_min += threads) {
      Candidate c = scan_stripe(r_min);
      if (c.beats(per_worker[id])) per_worker[id] = c;
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
    for (auto& t : pool) t.join();
  }

  Candidate best;
  for (const auto& c : per_worker) {
    if (c.beats(best)) best = c;
  }
  if (!best.found) {
    throw FitError("no Zipfian range: no window of width >= " +
                   std::to_string(min_width) + " has SS_err < " +
                   std::to_string(options.ss_max) + " and R^2 > " +
                   std::to_string(options.r2_min));
  }
  return loglog_linfit(rf, best.r_min, best.r_max);
}

PowerLawFit mle_exponent(const RankFrequency& rf, std::size_t r_min,
                         std::size_t r_max) {
  check_window(rf, r_min, r_max, 1, "mle_exponent");

  const std::size_t m = r_max - r_min + 1;
  std::vector<double> log_rank(m);
  std::vector<double> weight(m);
  double total_weight = 0.0;
  double weighted_log = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = r_min + i;
    log_rank[i] = std::log(static_cast<double>(r));
    weight[i] = rf.has_counts() ? static_cast<double>(rf.count(r)) : rf.freq(r);
    total_weight += weight[i];
    weighted_log += weight[i] * log_rank[i];
  }
  const double sample_mean_log = weighted_log / total_weight;

  // d/dgamma of the mean log-likelihood: E_gamma[ln r] - sample mean of ln r.
  // Strictly decreasing in gamma, so its zero is the unique maximizer.
  auto score = [&](double gamma) {
    double h = 0.0;
    double hl = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double p = std::exp(-gamma * (log_rank[i] - log_rank[0]));
      h += p;
      hl += p * log_rank[i];
    }
    return hl / h - sample_mean_log;
  };

  constexpr double kGammaLo = 0.0;
  constexpr double kGammaHi = 50.0;
  const double s_lo = score(kGammaLo);
  const double s_hi = score(kGammaHi);
  if (!(s_lo > 0.0)) {
    throw FitError("mle_exponent: likelihood maximum at non-positive exponent");
  }
  if (s_hi > 0.0) {
    throw FitError("mle_exponent: exponent exceeds " + std::to_string(kGammaHi));
  }

  std::uintmax_t max_iter = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      score, kGammaLo, kGammaHi, s_lo, s_hi,
      boost::math::tools::eps_tolerance<double>(50), max_iter);
  if (max_iter >= 200) {
    throw FitError("mle_exponent: root refinement did not converge");
  }

  PowerLawFit fit;
  fit.method = FitMethod::mle;
  fit.r_min = r_min;
  fit.r_max = r_max;
  fit.gamma = 0.5 * (lo + hi);

  double h = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    h += std::exp(-fit.gamma * log_rank[i]);
    mass += rf.freq(r_min + i);
  }
  fit.c = mass / h;
  loglog_quality(rf, r_min, r_max, fit.c, fit.gamma, fit.ss_err, fit.r_squared);
  return fit;
}

PowerLawFit nls_fit(const RankFrequency& rf, std::size_t r_min,
                    std::size_t r_max) {
  check_window(rf, r_min, r_max, 2, "nls_fit");
  const PowerLawFit start = loglog_linfit(rf, r_min, r_max);

  const std::size_t m = r_max - r_min + 1;
  std::vector<double> log_rank(m);
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) {
    log_rank[i] = std::log(static_cast<double>(r_min + i));
    f[i] = rf.freq(r_min + i);
  }
  auto cost = [&](double c, double gamma) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = c * std::exp(-gamma * log_rank[i]) - f[i];
      s += e * e;
    }
    return s;
  };

  double c = start.c;
  double gamma = start.gamma;
  double current = cost(c, gamma);
  double lambda = 1e-3;
  constexpr double kStepTol = 1e-9;
  constexpr int kMaxIter = 500;

  // Levenberg-Marquardt with Marquardt's diagonal scaling; two parameters so
  // the damped normal equations are solved in closed form.
  bool converged = false;
  for (int iter = 0; iter < kMaxIter && !converged; ++iter) {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double p = std::exp(-gamma * log_rank[i]);
      const double e = c * p - f[i];
      const double j1 = p;
      const double j2 = -c * p * log_rank[i];
      a11 += j1 * j1;
      a12 += j1 * j2;
      a22 += j2 * j2;
      g1 += j1 * e;
      g2 += j2 * e;
    }
    while (true) {
      const double d11 = a11 * (1.0 + lambda);
      const double d22 = a22 * (1.0 + lambda);
      const double det = d11 * d22 - a12 * a12;
      const double dc = (-g1 * d22 + g2 * a12) / det;
      const double dg = (-g2 * d11 + g1 * a12) / det;
      const bool tiny = std::abs(dc) <= kStepTol * std::abs(c) &&
                        std::abs(dg) <= kStepTol;
      const double c_new = c + dc;
      const double g_new = gamma + dg;
      const double trial = c_new > 0.0 ? cost(c_new, g_new) : HUGE_VAL;
      if (trial <= current) {
        c = c_new;
        gamma = g_new;
        current = trial;
        lambda = std::max(lambda * 0.1, 1e-12);
        converged = tiny;
        break;
      }
      if (tiny || !std::isfinite(det)) {
        converged = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e20) {
        converged = true;  // no descent direction left: stationary point
        break;
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("nls_fit: no convergence after " +
                               std::to_string(kMaxIter) + " iterations",
                           c, gamma);
  }

  PowerLawFit fit;
  fit.method = FitMethod::nls;
  fit.r_min = r_min;
  fit.r_max = r_max;
  fit.c = c;
  fit.gamma = gamma;
  loglog_quality(rf, r_min, r_max, c, gamma, fit.ss_err, fit.r_squared);
  return fit;
}

ExpFit fit_exponential(const RankFrequency& rf, std::size_t lo, std::size_t hi) {
  check_window(rf, lo, hi, 2, "fit_exponential");
  const auto m = static_cast<double>(hi - lo + 1);
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t r = lo; r <= hi; ++r) {
    mean_x += static_cast<double>(r);
    mean_y += std::log(rf.freq(r));
  }
  mean_x /= m;
  mean_y /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t r = lo; r <= hi; ++r) {
    const double dx = static_cast<double>(r) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(rf.freq(r)) - mean_y);
  }
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) {
    throw FitError("fit_exponential: frequencies do not decay on [" +
                   std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  ExpFit fit;
  fit.lo = lo;
  fit.hi = hi;
  fit.b = -slope;
  fit.a = std::exp(mean_y - slope * mean_x);
  return fit;
}

double zipf_deviation(const RankFrequency& rf, const PowerLawFit& fit) {
  check_window(rf, fit.r_min, fit.r_max, 0, "zipf_deviation");
  double d = 0.0;
  for (std::size_t k = fit.r_min; k <= fit.r_max; ++k) {
    d += fit.c * std::pow(static_cast<double>(k), -fit.gamma) - rf.freq(k);
  }
  return d;
}

nlohmann::json to_json(const PowerLawFit& fit) {
  return {{"method", std::string(to_string(fit.method))},
          {"c", fit.c},
          {"gamma", fit.gamma},
          {"r_min", fit.r_min},
          {"r_max", fit.r_max},
          {"ss_err", fit.ss_err},
          {"r_squared", fit.r_squared}};
}

nlohmann::json to_json(const ExpFit& fit) {
  return {{"a", fit.a}, {"b", fit.b}, {"lo", fit.lo}, {"hi", fit.hi}};
}

}  // namespace rankfreq
