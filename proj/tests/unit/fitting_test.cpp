#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "rankfreq/error.hpp"
#include "rankfreq/fitting.hpp"

using namespace rankfreq;

namespace {

std::vector<double> power_law(std::size_t n, double c, double gamma) {
  std::vector<double> f(n);
  for (std::size_t r = 1; r <= n; ++r) f[r - 1] = c * std::pow(double(r), -gamma);
  return f;
}

// Flat head, power-law body, noisy sorted tail: a window scan has work to do.
std::vector<double> three_regime_table(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> f(n);
  const std::size_t head = 3 + seed % 7;
  const std::size_t body_end = n / 2 + seed % (n / 4);
  const double gamma = 0.7 + 0.6 * u(rng);
  for (std::size_t r = 1; r <= n; ++r) {
    double v;
    if (r <= head) {
      v = std::pow(double(head), -gamma) * (1.0 + 0.2 * double(head - r));
    } else if (r <= body_end) {
      v = std::pow(double(r), -gamma) * std::exp(0.02 * (u(rng) - 0.5));
    } else {
      v = std::pow(double(body_end), -gamma) * std::exp(-0.05 * double(r - body_end)) *
          (0.8 + 0.4 * u(rng));
    }
    f[r - 1] = v;
  }
  std::sort(f.begin(), f.end(), std::greater<>());
  return f;
}

}  // namespace

TEST(LogLogFit, ExactPowerLaw) {
  const auto rf = RankFrequency::from_frequencies(power_law(500, 0.2, 1.0));
  const PowerLawFit fit = loglog_linfit(rf, 1, 500);
  EXPECT_NEAR(fit.c, 0.2, 1e-12);
  EXPECT_NEAR(fit.gamma, 1.0, 1e-12);
  EXPECT_LT(fit.ss_err, 1e-20);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_EQ(fit.method, FitMethod::lls);
}

TEST(LogLogFit, MatchesLongDoubleOracleOnSubwindow) {
  const auto f = three_regime_table(200, 3);
  const auto rf = RankFrequency::from_frequencies(f);
  const PowerLawFit fit = loglog_linfit(rf, 17, 140);
  const auto ref = oracle::loglog_fit(f, 17, 140);
  EXPECT_NEAR(fit.gamma, double(ref.gamma), 1e-10);
  EXPECT_NEAR(fit.c / double(ref.c), 1.0, 1e-10);
  EXPECT_NEAR(fit.ss_err, double(ref.ss_err), 1e-10);
  EXPECT_NEAR(fit.r_squared, double(ref.r_squared), 1e-10);
}

TEST(LogLogFit, RejectsBadWindows) {
  const auto rf = RankFrequency::from_frequencies(power_law(20, 0.2, 1.0));
  EXPECT_THROW(loglog_linfit(rf, 0, 10), DomainError);
  EXPECT_THROW(loglog_linfit(rf, 5, 21), DomainError);
  EXPECT_THROW(loglog_linfit(rf, 5, 5), FitError);
}

TEST(DetectZipfRange, FullRangeOnExactLaw) {
  const auto rf = RankFrequency::from_frequencies(power_law(500, 0.2, 1.0));
  const PowerLawFit fit = detect_zipf_range(rf);
  EXPECT_EQ(fit.r_min, 1u);
  EXPECT_EQ(fit.r_max, 500u);
  EXPECT_NEAR(fit.gamma, 1.0, 1e-9);
  EXPECT_NEAR(zipf_deviation(rf, fit), 0.0, 1e-12);
}

TEST(DetectZipfRange, AgreesWithBruteForce) {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto f = three_regime_table(60 + seed % 50, seed);
    const auto rf = RankFrequency::from_frequencies(f);
    const auto ref = oracle::brute_force_zipf_window(f, 0.05, 0.995, 10);
    if (!ref.found) {
      EXPECT_THROW(detect_zipf_range(rf), FitError) << "seed " << seed;
      continue;
    }
    const PowerLawFit fit = detect_zipf_range(rf);
    EXPECT_EQ(fit.r_min, ref.lo) << "seed " << seed;
    EXPECT_EQ(fit.r_max, ref.hi) << "seed " << seed;
    EXPECT_NEAR(fit.gamma, double(ref.fit.gamma), 1e-10);
  }
}

TEST(DetectZipfRange, ThreadCountDoesNotChangeResult) {
  const auto rf = RankFrequency::from_frequencies(three_regime_table(280, 42));
  ZipfSearchOptions one;
  one.threads = 1;
  ZipfSearchOptions many;
  many.threads = 7;
  const PowerLawFit a = detect_zipf_range(rf, one);
  const PowerLawFit b = detect_zipf_range(rf, many);
  EXPECT_EQ(a.r_min, b.r_min);
  EXPECT_EQ(a.r_max, b.r_max);
  EXPECT_EQ(a.gamma, b.gamma);
  EXPECT_EQ(a.c, b.c);
}

TEST(DetectZipfRange, NoQualifyingWindow) {
  EXPECT_THROW(detect_zipf_range(RankFrequency::from_frequencies(power_law(8, 0.3, 1.0))),
               FitError);
  // Uniform frequencies have zero slope everywhere.
  EXPECT_THROW(detect_zipf_range(RankFrequency::from_frequencies(std::vector<double>(50, 0.02))),
               FitError);
}

TEST(DetectZipfRange, ThresholdsAreHonoured) {
  const auto rf = RankFrequency::from_frequencies(three_regime_table(150, 9));
  const PowerLawFit fit = detect_zipf_range(rf);
  EXPECT_LT(fit.ss_err, 0.05);
  EXPECT_GT(fit.r_squared, 0.995);
  EXPECT_GE(fit.r_max - fit.r_min, 10u);
}

TEST(NlsFit, ExactLaw) {
  const auto rf = RankFrequency::from_frequencies(power_law(500, 0.2, 1.0));
  const PowerLawFit fit = nls_fit(rf, 1, 500);
  EXPECT_NEAR(fit.c, 0.2, 1e-9);
  EXPECT_NEAR(fit.gamma, 1.0, 1e-9);
  EXPECT_EQ(fit.method, FitMethod::nls);
}

TEST(NlsFit, OtherExponents) {
  const auto rf = RankFrequency::from_frequencies(power_law(300, 0.05, 1.3));
  const PowerLawFit fit = nls_fit(rf, 20, 250);
  EXPECT_NEAR(fit.c, 0.05, 1e-8);
  EXPECT_NEAR(fit.gamma, 1.3, 1e-8);
}

TEST(MleExponent, ExactLaw) {
  const auto rf = RankFrequency::from_frequencies(power_law(500, 0.2, 1.0));
  const PowerLawFit fit = mle_exponent(rf, 1, 500);
  EXPECT_NEAR(fit.gamma, 1.0, 1e-9);
  EXPECT_NEAR(fit.c, 0.2, 1e-9);
  EXPECT_EQ(fit.method, FitMethod::mle);
}

TEST(MleExponent, ScoreEquationHoldsAtOptimum) {
  // Independent check of the truncated discrete power law score:
  // E_gamma[ln r] equals the empirical mean of ln r under the weights.
  const auto f = three_regime_table(120, 5);
  const auto rf = RankFrequency::from_frequencies(f);
  const PowerLawFit fit = mle_exponent(rf, 10, 90);
  long double wsum = 0, wlog = 0, zsum = 0, zlog = 0;
  for (std::size_t r = 10; r <= 90; ++r) {
    const long double lr = std::log(static_cast<long double>(r));
    wsum += f[r - 1];
    wlog += f[r - 1] * lr;
    const long double p = std::pow(static_cast<long double>(r), -(long double)fit.gamma);
    zsum += p;
    zlog += p * lr;
  }
  EXPECT_NEAR(double(zlog / zsum), double(wlog / wsum), 1e-10);
}

TEST(FitExponential, RecoversRate) {
  std::vector<double> f(60);
  for (std::size_t r = 1; r <= 60; ++r) f[r - 1] = 0.3 * std::exp(-0.07 * double(r));
  const auto rf = RankFrequency::from_frequencies(f);
  const ExpFit fit = fit_exponential(rf, 10, 50);
  EXPECT_NEAR(fit.b, 0.07, 1e-12);
  EXPECT_NEAR(fit.a, 0.3, 1e-12);
  EXPECT_THROW(fit_exponential(RankFrequency::from_frequencies(std::vector<double>(20, 0.05)), 1, 20),
               FitError);
}

TEST(ZipfDeviation, SignedSum) {
  const auto rf = RankFrequency::from_frequencies({0.4, 0.2, 0.1});
  PowerLawFit fit;
  fit.c = 0.5;
  fit.gamma = 1.0;
  fit.r_min = 1;
  fit.r_max = 3;
  EXPECT_NEAR(zipf_deviation(rf, fit), (0.5 - 0.4) + (0.25 - 0.2) + (0.5 / 3 - 0.1), 1e-15);
}

TEST(RunningLogLogFit, MatchesTwoPass) {
  const auto f = three_regime_table(90, 11);
  detail::RunningLogLogFit acc;
  for (std::size_t r = 30; r <= 80; ++r) acc.push(std::log(double(r)), std::log(f[r - 1]));
  const auto ref = oracle::loglog_fit(f, 30, 80);
  EXPECT_NEAR(-acc.slope(), double(ref.gamma), 1e-11);
  EXPECT_NEAR(acc.ss_err(), double(ref.ss_err), 1e-11);
  EXPECT_NEAR(acc.r_squared(), double(ref.r_squared), 1e-11);
}
