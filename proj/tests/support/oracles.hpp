#pragma once

// Reference implementations used only by tests. They deliberately take a
// different numerical route from the library (long double, brute force,
// closed forms, dense grids) so agreement is evidence rather than echo.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/special_functions/expint.hpp>

#include "rankfreq/corpus.hpp"

namespace oracle {

// 1 - 2 sum (-1)^{k-1} e^{-2 k^2 x^2}, long double, fixed 200 terms.
inline long double kolmogorov_series(long double x) {
  long double sum = 0.0L;
  for (int k = 200; k >= 1; --k) {  // smallest terms first
    const long double term = std::exp(-2.0L * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
  }
  return 1.0L - 2.0L * sum;
}

struct LogLogFit {
  long double c = 0, gamma = 0, ss_err = 0, r_squared = 0;
};

// Two-pass long double least squares on ln f vs ln r over [lo, hi].
inline LogLogFit loglog_fit(const std::vector<double>& f, std::size_t lo,
                            std::size_t hi) {
  const long double m = static_cast<long double>(hi - lo + 1);
  long double mx = 0, my = 0;
  for (std::size_t r = lo; r <= hi; ++r) {
    mx += std::log(static_cast<long double>(r));
    my += std::log(static_cast<long double>(f[r - 1]));
  }
  mx /= m;
  my /= m;
  long double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t r = lo; r <= hi; ++r) {
    const long double dx = std::log(static_cast<long double>(r)) - mx;
    const long double dy = std::log(static_cast<long double>(f[r - 1])) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LogLogFit out;
  const long double slope = sxy / sxx;
  out.gamma = -slope;
  out.c = std::exp(my - slope * mx);
  long double ss = 0;
  for (std::size_t r = lo; r <= hi; ++r) {
    const long double e = std::log(static_cast<long double>(f[r - 1])) -
                          (my + slope * (std::log(static_cast<long double>(r)) - mx));
    ss += e * e;
  }
  out.ss_err = ss;
  out.r_squared = syy > 0 ? 1.0L - ss / syy : 0.0L;
  return out;
}

struct Window {
  bool found = false;
  std::size_t lo = 0, hi = 0;
  LogLogFit fit;
};

// Every window refit from scratch; widest qualifying wins, ties to smaller lo.
inline Window brute_force_zipf_window(const std::vector<double>& f, double ss_max,
                                      double r2_min, std::size_t min_width) {
  Window best;
  const std::size_t n = f.size();
  for (std::size_t lo = 1; lo + min_width <= n; ++lo) {
    for (std::size_t hi = lo + min_width; hi <= n; ++hi) {
      const std::size_t w = hi - lo;
      if (best.found && w < best.hi - best.lo) continue;
      if (best.found && w == best.hi - best.lo && lo >= best.lo) continue;
      const LogLogFit fit = loglog_fit(f, lo, hi);
      if (fit.gamma > 0 && fit.ss_err < ss_max && fit.r_squared > r2_min) {
        best = {true, lo, hi, fit};
      }
    }
  }
  return best;
}

// beta = 2 prior integrals in closed form (exponential integral E1).
struct Beta2 {
  double c;
  double mu;
  double g(double a) const {  // e^{a} E1(a)
    return std::exp(a) * boost::math::expint(1, a);
  }
  double z() const { return 1.0 / c - mu * g(mu * c); }
  double m() const { return g(mu * c) - c * z(); }
  // int_t^inf e^{-mu s} (c + s)^{-2} ds
  double tail(double t) const {
    return std::exp(-mu * t) * (1.0 / (c + t) - mu * g(mu * (c + t)));
  }
};

// Dense-grid CDF of w(t) = e^{-mu t} (c + t)^{-beta} in s = ln(1 + t/c),
// composite Simpson per cell, inverted by linear interpolation.
class GridQuantile {
 public:
  GridQuantile(double c, double beta, double mu, std::size_t cells = 400000)
      : c_(c) {
    // Upper limit where the integrand in s is below 1e-30 of its peak.
    double s_max = 1.0;
    auto integrand = [&](double s) {
      return std::exp((1.0 - beta) * s - mu * c * std::expm1(s));
    };
    while (integrand(s_max) > 1e-30) s_max += 1.0;
    const double ds = s_max / static_cast<double>(cells);
    s_.resize(cells + 1);
    cum_.resize(cells + 1);
    cum_[0] = 0.0;
    for (std::size_t i = 0; i <= cells; ++i) s_[i] = ds * static_cast<double>(i);
    for (std::size_t i = 0; i < cells; ++i) {
      const double a = s_[i];
      const double b = s_[i + 1];
      cum_[i + 1] = cum_[i] + ds / 6.0 *
                                  (integrand(a) + 4.0 * integrand(0.5 * (a + b)) +
                                   integrand(b));
    }
    total_ = cum_.back();
  }

  // Scaled t with upper-tail fraction equal to q.
  double t_for_tail(double q) const {
    const double target = (1.0 - q) * total_;
    std::size_t lo = 0, hi = cum_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (cum_[mid] < target ? lo : hi) = mid;
    }
    const double frac = (target - cum_[lo]) / (cum_[hi] - cum_[lo]);
    const double s = s_[lo] + frac * (s_[hi] - s_[lo]);
    return c_ * std::expm1(s);
  }

 private:
  double c_;
  double total_ = 0.0;
  std::vector<double> s_;
  std::vector<double> cum_;
};

// Token counts drawn multinomially from probabilities proportional to w.
inline rankfreq::TokenCounts multinomial_corpus(const std::vector<double>& w,
                                                std::uint64_t N,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  std::vector<std::uint64_t> counts(w.size(), 0);
  for (std::uint64_t i = 0; i < N; ++i) ++counts[pick(rng)];
  rankfreq::TokenCounts tc(rankfreq::Mode::word);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (counts[i] > 0) tc.add("w" + std::to_string(100000 + i), counts[i]);
  }
  return tc;
}

inline std::vector<double> zipf_weights(std::size_t n, double gamma) {
  std::vector<double> w(n);
  for (std::size_t r = 1; r <= n; ++r) w[r - 1] = std::pow(double(r), -gamma);
  return w;
}

}  // namespace oracle
