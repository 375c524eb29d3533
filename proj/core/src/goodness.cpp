#include "rankfreq/goodness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rankfreq/error.hpp"

namespace rankfreq {
namespace {

constexpr double kTermTol = 1e-14;
constexpr int kMaxTerms = 1000;

// Below this the alternating series loses everything to cancellation; the
// Jacobi-transformed series converges fastest there.
constexpr double kThetaSwitch = 0.4;

std::vector<double> normalized_cumsum(const std::vector<double>& values) {
  std::vector<double> cdf(values.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc += values[i];
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) throw DomainError("window carries no mass");
  for (double& v : cdf) v /= acc;
  cdf.back() = 1.0;
  return cdf;
}

void check_fit_window(const RankFrequency& rf, const PowerLawFit& fit) {
  if (fit.r_min < 1 || fit.r_max > rf.size() || fit.r_min > fit.r_max) {
    throw DomainError("KS window [" + std::to_string(fit.r_min) + ", " +
                      std::to_string(fit.r_max) + "] outside ranks [1, " +
                      std::to_string(rf.size()) + "]");
  }
}

}  // namespace

double kolmogorov_cdf(double x) {
  if (std::isnan(x) || x < 0.0) {
    throw DomainError("kolmogorov_cdf: argument must be >= 0");
  }
  if (x == 0.0) return 0.0;

  if (x < kThetaSwitch) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int k = 1; k <= kMaxTerms; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * pi2 / (8.0 * x * x));
      sum += term;
      if (term < kTermTol * sum || term == 0.0) break;
    }
    return std::clamp(std::sqrt(2.0 * std::numbers::pi) / x * sum, 0.0, 1.0);
  }

  double sum = 0.0;
  for (int k = 1; k <= kMaxTerms; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < kTermTol) break;
  }
  return std::clamp(1.0 - 2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> empirical_cdf,
                 std::span<const double> model_cdf, std::size_t n_eff) {
  if (empirical_cdf.empty() || empirical_cdf.size() != model_cdf.size()) {
    throw DomainError("ks_test: CDFs must be non-empty and on the same grid");
  }
  if (n_eff == 0) throw DomainError("ks_test: n_eff must be positive");
  constexpr double kNormTol = 1e-9;
  if (std::abs(empirical_cdf.back() - 1.0) > kNormTol ||
      std::abs(model_cdf.back() - 1.0) > kNormTol) {
    throw DomainError("ks_test: CDFs must end at 1");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < empirical_cdf.size(); ++i) {
    d = std::max(d, std::abs(empirical_cdf[i] - model_cdf[i]));
  }
  KsResult out;
  out.d = std::min(d, 1.0);
  out.n_eff = n_eff;
  out.p_value = std::clamp(
      1.0 - kolmogorov_cdf(std::sqrt(static_cast<double>(n_eff)) * out.d), 0.0,
      1.0);
  return out;
}

KsResult ks_test_zipf(const RankFrequency& rf, const PowerLawFit& fit) {
  check_fit_window(rf, fit);
  const std::size_t m = fit.r_max - fit.r_min + 1;
  std::vector<double> emp(m);
  std::vector<double> model(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = fit.r_min + i;
    emp[i] = rf.freq(r);
    model[i] = fit.c * std::pow(static_cast<double>(r), -fit.gamma);
  }
  return ks_test(normalized_cumsum(emp), normalized_cumsum(model), m);
}

KsResult ks_test_zipf_log(const RankFrequency& rf, const PowerLawFit& fit) {
  check_fit_window(rf, fit);
  const std::size_t m = fit.r_max - fit.r_min + 1;
  const double ln_c = std::log(fit.c);
  std::vector<double> emp(m);
  std::vector<double> model(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = fit.r_min + i;
    emp[i] = -std::log(rf.freq(r));
    model[i] = -(ln_c - fit.gamma * std::log(static_cast<double>(r)));
  }
  return ks_test(normalized_cumsum(emp), normalized_cumsum(model), m);
}

nlohmann::json to_json(const KsResult& ks) {
  return {{"d", ks.d}, {"n_eff", ks.n_eff}, {"p_value", ks.p_value}};
}

}  // namespace rankfreq
