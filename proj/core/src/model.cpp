#include "rankfreq/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "rankfreq/error.hpp"

namespace rankfreq {
namespace {

constexpr double kQuadTol = 1e-14;
constexpr double kMuLo = 1e-12;
constexpr double kMuHi = 1e3;

// integrate() is not const in every Boost release, so each thread keeps its
// own instance.
boost::math::quadrature::exp_sinh<double>& integrator() {
  thread_local boost::math::quadrature::exp_sinh<double> es;
  return es;
}

// Integrals of w(t) = e^{-mu t} (c + t)^{-beta} over [t0, inf).
struct Prior {
  double c;
  double beta;
  double mu;

  double integrate_from(double t0, bool first_moment) const {
    // Shift to s = t - t0 and pull e^{-mu t0} out so deep tails don't underflow
    // inside the integrand.
    auto f = [&](double s) {
      const double t = t0 + s;
      const double w = std::exp(-mu * s - beta * std::log(c + t));
      return first_moment ? t * w : w;
    };
    double err = 0.0;
    const double v = integrator().integrate(f, kQuadTol, &err);
    return std::exp(-mu * t0) * v;
  }
  double z() const { return integrate_from(0.0, false); }
  double m() const { return integrate_from(0.0, true); }
  double tail(double t) const { return integrate_from(t, false); }
};

void check_model_args(double c_beta, double beta, std::size_t n) {
  if (!(c_beta > 0.0) || !std::isfinite(c_beta)) {
    throw DomainError("model: c_beta must be positive");
  }
  if (!(beta > 1.0 && beta <= 2.0)) {
    throw DomainError("model: beta must lie in (1, 2]");
  }
  if (n == 0) throw DomainError("model: n must be positive");
}

}  // namespace

double small_c_mu_seed(double c, double gamma_e) {
  if (!(c > 0.0)) throw DomainError("small_c_mu_seed: c must be positive");
  return std::exp(-gamma_e - (1.0 + c) / c) / c;
}

ModelParams solve_mu(double c_beta, double beta, std::size_t n, std::uint64_t N,
                     double gamma_e) {
  check_model_args(c_beta, beta, n);

  // log M/Z is strictly decreasing in mu; solving in log mu keeps the
  // bracket scale-free across twelve decades.
  auto residual = [&](double log_mu) {
    const Prior p{c_beta, beta, std::exp(log_mu)};
    return std::log(p.m() / p.z());
  };

  ModelParams out;
  out.c_beta = c_beta;
  out.beta = beta;
  out.n = n;
  out.N = N;

  double lo = std::log(kMuLo);
  double hi = std::log(kMuHi);
  double f_lo = 0.0;
  double f_hi = 0.0;
  bool bracketed = false;
  if (beta == 2.0) {
    out.gamma_e_used = gamma_e;
    const double seed = std::log(small_c_mu_seed(c_beta, gamma_e));
    const double s_lo = std::max(seed - std::log(4.0), lo);
    const double s_hi = std::min(seed + std::log(4.0), hi);
    if (s_lo < s_hi) {
      f_lo = residual(s_lo);
      f_hi = residual(s_hi);
      if (f_lo > 0.0 && f_hi < 0.0) {
        lo = s_lo;
        hi = s_hi;
        bracketed = true;
      }
    }
  }
  if (!bracketed) {
    f_lo = residual(lo);
    f_hi = residual(hi);
    if (!(f_lo > 0.0 && f_hi < 0.0)) {
      throw SolverError("solve_mu: mean constraint not bracketed in mu in [" +
                            std::to_string(kMuLo) + ", " + std::to_string(kMuHi) +
                            "]",
                        f_lo, f_hi);
    }
  }

  std::uintmax_t iters = 100;
  const auto root = boost::math::tools::toms748_solve(
      residual, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52),
      iters);
  out.mu = std::exp(0.5 * (root.first + root.second));

  const double res = mean_constraint_residual(out);
  if (!(res < 1e-10)) {
    throw SolverError("solve_mu: residual " + std::to_string(res) +
                          " after root refinement",
                      res, res);
  }
  return out;
}

double mean_constraint_residual(const ModelParams& params) {
  const Prior p{params.c_beta, params.beta, params.mu};
  const double z = p.z();
  return std::abs(p.m() - z) / z;
}

ModelCurve::ModelCurve(ModelParams params) : params_(std::move(params)) {
  check_model_args(params_.c_beta, params_.beta, params_.n);
  if (!(params_.mu > 0.0)) throw DomainError("ModelCurve: mu is not solved");
  z_ = Prior{params_.c_beta, params_.beta, params_.mu}.z();
}

double ModelCurve::tail_fraction(double t) const {
  if (!(t >= 0.0)) throw DomainError("tail_fraction: t must be >= 0");
  if (t == 0.0) return 1.0;
  return Prior{params_.c_beta, params_.beta, params_.mu}.tail(t) / z_;
}

double ModelCurve::solve_tail(double target) const {
  if (target >= 1.0) return 0.0;
  auto h = [&](double t) { return tail_fraction(t) - target; };
  double hi = 1.0;
  double f_hi = h(hi);
  while (f_hi > 0.0) {
    hi *= 2.0;
    f_hi = h(hi);
    if (hi > 1e300) throw SolverError("quantile: no upper bracket", target, f_hi);
  }
  if (f_hi == 0.0) return hi;
  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(
      h, 0.0, hi, 1.0 - target, f_hi,
      boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (root.first + root.second);
}

double ModelCurve::t_at(double r) const {
  const auto n = static_cast<double>(params_.n);
  if (!(r >= 1.0 && r <= n)) {
    throw DomainError("curve: rank " + std::to_string(r) + " outside [1, " +
                      std::to_string(params_.n) + "]");
  }
  return solve_tail(r / n);
}

double ModelCurve::quantile(double u) const {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("quantile: u must lie in [0, 1)");
  return solve_tail(1.0 - u);
}

double ModelCurve::rank_at(double phi) const {
  if (!(phi >= 0.0)) throw DomainError("rank_at: phi must be >= 0");
  const auto n = static_cast<double>(params_.n);
  return n * tail_fraction(n * phi);
}

ModelCurve curve(const ModelParams& params) { return ModelCurve(params); }

double generalized_zipf(double c, std::size_t n, double r) {
  return c * (1.0 / r - 1.0 / static_cast<double>(n));
}

double binomial_pmf(std::uint64_t trials, double p, std::uint64_t k) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial_pmf: p outside [0, 1]");
  if (k > trials) return 0.0;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == trials ? 1.0 : 0.0;
  const auto nn = static_cast<double>(trials);
  const auto kk = static_cast<double>(k);
  const double log_choose =
      std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0);
  return std::exp(log_choose + kk * std::log(p) + (nn - kk) * std::log1p(-p));
}

double occurrence_pmf(const ModelCurve& curve, std::size_t r, std::uint64_t nu) {
  const auto N = curve.params().N;
  if (N == 0) throw DomainError("occurrence_pmf: model has no token count N");
  if (nu > N) throw DomainError("occurrence_pmf: nu exceeds N");
  return binomial_pmf(N, curve.phi(static_cast<double>(r)), nu);
}

TokenCounts generate_corpus(const ModelParams& params, std::uint64_t N,
                            std::uint64_t seed) {
  if (N == 0) throw DomainError("generate_corpus: N must be positive");
  const ModelCurve model(params);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<double> weight(params.n);
  double total = 0.0;
  for (double& w : weight) {
    w = model.quantile(uniform(rng));
    total += w;
  }

  const std::size_t digits = std::max<std::size_t>(5, std::to_string(params.n).size());
  TokenCounts out(Mode::word);
  // Multinomial draw as a chain of conditional binomials.
  std::uint64_t remaining = N;
  double remaining_mass = total;
  for (std::size_t i = 0; i < params.n && remaining > 0; ++i) {
    std::uint64_t k = remaining;
    if (i + 1 < params.n) {
      const double p = remaining_mass > weight[i]
                           ? weight[i] / remaining_mass
                           : 1.0;
      std::binomial_distribution<std::uint64_t> binom(remaining, p);
      k = binom(rng);
    }
    remaining_mass -= weight[i];
    remaining -= k;
    if (k > 0) {
      std::string id = std::to_string(i + 1);
      out.add("t" + std::string(digits - id.size(), '0') + id, k);
    }
  }
  return out;
}

nlohmann::json to_json(const ModelParams& params) {
  nlohmann::json j = {{"c_beta", params.c_beta}, {"beta", params.beta},
                      {"n", params.n},           {"N", params.N},
                      {"mu", params.mu},         {"gamma_E_used", nullptr}};
  if (params.gamma_e_used) j["gamma_E_used"] = *params.gamma_e_used;
  return j;
}

}  // namespace rankfreq
