#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <nlohmann/json.hpp>

#include "rankfreq/corpus.hpp"

namespace rankfreq {

// The constant the closed-form mu estimate is stated with. It is not the
// Euler-Mascheroni value (0.5772...); pass that explicitly to compare.
inline constexpr double kSeedGammaE = 0.55117;

/// Solved latent-probability model. Probabilities are handled in the scaled
/// variable t = n * theta with prior density e^{-mu t} (c_beta + t)^{-beta};
/// mu enforces that the mean of t is one.
struct ModelParams {
  double c_beta = 0.0;
  double beta = 2.0;
  std::size_t n = 0;
  std::uint64_t N = 0;  // 0 when no token count is attached
  double mu = 0.0;
  std::optional<double> gamma_e_used;  // set when the beta = 2 seed was used
};

// mu ~ c^-1 exp(-gamma_E - (1 + c)/c), valid for beta = 2 and small c.
double small_c_mu_seed(double c, double gamma_e = kSeedGammaE);

ModelParams solve_mu(double c_beta, double beta, std::size_t n,
                     std::uint64_t N = 0, double gamma_e = kSeedGammaE);

// |M - Z| / Z of the mean constraint at the stored mu, where
// Z = int w dt and M = int t w dt.
double mean_constraint_residual(const ModelParams& params);

/// Rank -> effective probability phi_r, obtained from
/// r/n = int_{n phi_r}^inf w dt / int_0^inf w dt.
class ModelCurve {
 public:
  explicit ModelCurve(ModelParams params);

  const ModelParams& params() const noexcept { return params_; }

  // Scaled quantile t_r for a real rank in [1, n]; phi_r = t_r / n.
  double t_at(double r) const;
  double phi(double r) const { return t_at(r) / static_cast<double>(params_.n); }

  // Fraction of prior mass above t, equal to r/n at t = t_r.
  double tail_fraction(double t) const;
  // Prior CDF in t.
  double cdf(double t) const { return 1.0 - tail_fraction(t); }
  // t with cdf(t) = u, u in [0, 1).
  double quantile(double u) const;
  // Real-valued rank at which the curve equals phi (inverse of phi()).
  double rank_at(double phi) const;

 private:
  double solve_tail(double target) const;

  ModelParams params_;
  double z_ = 0.0;
};

ModelCurve curve(const ModelParams& params);

// c (1/r - 1/n).
double generalized_zipf(double c, std::size_t n, double r);

// Binomial pmf evaluated in log space.
double binomial_pmf(std::uint64_t trials, double p, std::uint64_t k);

// Probability that the type at rank r occurs nu times among params.N tokens.
double occurrence_pmf(const ModelCurve& curve, std::size_t r, std::uint64_t nu);

// Draws n probabilities i.i.d. from the prior, normalizes them and samples
// N tokens multinomially. Types named t00001, t00002, ...; word mode.
TokenCounts generate_corpus(const ModelParams& params, std::uint64_t N,
                            std::uint64_t seed);

nlohmann::json to_json(const ModelParams& params);

}  // namespace rankfreq
