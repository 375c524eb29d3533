#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rankfreq/corpus.hpp"
#include "rankfreq/model.hpp"

namespace rankfreq {

inline constexpr std::size_t kDefaultHapaxDepth = 10;

// [k/(N c) + 1/n]^{-1}; equals n at k = 0.
double predict_gz(double k, std::uint64_t N, std::size_t n, double c);

// Rank where the model curve equals k/N (real-valued). The model carries N.
double predict_gz_beta(double k, const ModelCurve& curve);

// 1/(k(k-1)): shape of r_{k-1} - r_k far in the hapax tail.
double lotka_counts(std::uint64_t k);

/// P(k) = A e^{-b k} k^{-gamma} on 1 <= k <= k_max.
struct RgfParams {
  double A = 0.0;
  double b = 0.0;
  double gamma = 0.0;
  std::uint64_t k_max = 0;

  double p(std::uint64_t k) const;
};

// Normalizes a given (b, gamma, k_max) triple.
RgfParams rgf_params(double b, double gamma, std::uint64_t k_max);

// Solves sum k P(k) = mean_count and n_types sum_{k >= k_max} P(k) = 1 for
// (b, gamma) inside b in (0, 1], gamma in (0, 4]. The second sum runs over the
// same law continued past k_max: one type is expected at or above the
// largest observed count.
RgfParams rgf_solve(double mean_count, double n_types, std::uint64_t k_max);

// k_max = round(f1 N), mean N/n.
RgfParams rgf_fit(std::uint64_t N, std::size_t n, double f1);

// n [1 - sum_{k<=l} P(k)] for an explicit spectrum p[k - 1] = P(k).
double rank_from_spectrum(std::span<const double> p, std::size_t n,
                          std::uint64_t l);

// rank_from_spectrum over the RGF law.
double predict_rgf(const RgfParams& params, std::size_t n, std::uint64_t l);

/// Waring-Herdan spectrum P(k+1) = P(k) (a + k - 1)/(x + k), P(1) = n1/n.
struct WaringParams {
  double a = 0.0;
  double x = 0.0;
  double p1 = 0.0;
  std::size_t n1 = 0;
  std::size_t n = 0;
};

WaringParams waring_fit(const RankFrequency& rf);

// n [1 - sum_{k<=l} P(k)], accumulated in expected type counts so that
// l = 1 gives n - n1 exactly.
double predict_waring(const WaringParams& params, std::uint64_t l);

struct HapaxRow {
  std::size_t k = 0;
  std::size_t r_k = 0;
  std::optional<double> gz, gz_err;
  std::optional<double> gz_beta, gz_beta_err;
  std::optional<double> rgf, rgf_err;
  std::optional<double> wh, wh_err;
  std::string winner;  // predictor with the smallest error in this row
};

struct HapaxTable {
  std::vector<HapaxRow> rows;
  std::vector<std::string> warnings;

  // Mean relative error of one column ("gz", "gz_beta", "rgf", "wh") over
  // the rows where it is present; nullopt if it is absent everywhere.
  std::optional<double> mean_error(const std::string& column) const;
};

struct HapaxPredictors {
  std::optional<double> zipf_c;       // enables gz
  std::optional<ModelCurve> model;    // enables gz_beta
  std::optional<RgfParams> rgf;       // enables rgf
  std::optional<WaringParams> waring; // enables wh
  std::size_t depth = kDefaultHapaxDepth;
};

HapaxTable compare_predictors(const RankFrequency& rf,
                              const HapaxPredictors& predictors);

void write_csv(std::ostream& os, const HapaxTable& table);

nlohmann::json to_json(const RgfParams& params);
nlohmann::json to_json(const WaringParams& params);
nlohmann::json to_json(const HapaxTable& table);

}  // namespace rankfreq
