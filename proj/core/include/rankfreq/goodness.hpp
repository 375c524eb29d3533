#pragma once

#include <cstddef>
#include <span>

#include <nlohmann/json.hpp>

#include "rankfreq/corpus.hpp"
#include "rankfreq/fitting.hpp"

namespace rankfreq {

struct KsResult {
  double d = 0.0;
  std::size_t n_eff = 0;
  double p_value = 1.0;
};

// Limiting distribution of sqrt(n) D_n, P(sqrt(n) D_n <= x).
double kolmogorov_cdf(double x);

// Both arguments are CDF values on the same rank grid; each must end at 1.
// The grid is discrete, so comparing at the grid points covers both sides of
// every step.
KsResult ks_test(std::span<const double> empirical_cdf,
                 std::span<const double> model_cdf, std::size_t n_eff);

// Empiric in-window distribution against c r^-gamma renormalized over
// [fit.r_min, fit.r_max]; n_eff is the number of ranks in the window.
KsResult ks_test_zipf(const RankFrequency& rf, const PowerLawFit& fit);

// Same comparison in logarithmic coordinates: cumulative -ln f_r against
// cumulative -(ln c - gamma ln r), each normalized over the window.
KsResult ks_test_zipf_log(const RankFrequency& rf, const PowerLawFit& fit);

nlohmann::json to_json(const KsResult& ks);

}  // namespace rankfreq
