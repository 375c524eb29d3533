#pragma once

#include <cstddef>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rankfreq/corpus.hpp"

namespace rankfreq {

enum class FitMethod { lls, nls, mle };
std::string_view to_string(FitMethod method);  // "LLS", "NLS", "MLE"

/// One fitted Zipfian regime f_r = c * r^-gamma on [r_min, r_max].
/// ss_err and r_squared are measured in (ln r, ln f) coordinates for every
/// method so the three estimators can be compared on the same footing.
struct PowerLawFit {
  double c = 0.0;
  double gamma = 0.0;
  std::size_t r_min = 0;
  std::size_t r_max = 0;
  double ss_err = 0.0;
  double r_squared = 0.0;
  FitMethod method = FitMethod::lls;
};

/// f_r = a * exp(-b r) on [lo, hi].
struct ExpFit {
  double a = 0.0;
  double b = 0.0;
  std::size_t lo = 0;
  std::size_t hi = 0;
};

struct ZipfSearchOptions {
  double ss_max = 0.05;
  double r2_min = 0.995;
  std::size_t min_width = 10;  // r_max - r_min
  unsigned threads = 0;        // 0: hardware concurrency
};

// Closed-form least squares of ln f_r = ln c - gamma ln r over the window.
PowerLawFit loglog_linfit(const RankFrequency& rf, std::size_t r_min,
                          std::size_t r_max);

// Widest window with ss_err < ss_max and r_squared > r2_min; ties go to the
// smaller r_min. Throws FitError when no window of min_width qualifies.
PowerLawFit detect_zipf_range(const RankFrequency& rf,
                              const ZipfSearchOptions& options = {});

PowerLawFit mle_exponent(const RankFrequency& rf, std::size_t r_min,
                         std::size_t r_max);

PowerLawFit nls_fit(const RankFrequency& rf, std::size_t r_min,
                    std::size_t r_max);

ExpFit fit_exponential(const RankFrequency& rf, std::size_t lo, std::size_t hi);

// d = sum_{k=r_min}^{r_max} (c k^-gamma - f_k), signed.
double zipf_deviation(const RankFrequency& rf, const PowerLawFit& fit);

nlohmann::json to_json(const PowerLawFit& fit);
nlohmann::json to_json(const ExpFit& fit);

namespace detail {

/// Running (ln r, ln f) moments for a window growing one rank at a time.
/// Mean/co-moment updates keep every window O(1) without the cancellation
/// that raw prefix sums of x^2 suffer in narrow windows at high rank.
class RunningLogLogFit {
 public:
  void push(double x, double y) noexcept {
    ++count_;
    const double dx = x - mean_x_;
    const double dy = y - mean_y_;
    const double inv = 1.0 / static_cast<double>(count_);
    mean_x_ += dx * inv;
    mean_y_ += dy * inv;
    sxx_ += dx * (x - mean_x_);
    syy_ += dy * (y - mean_y_);
    sxy_ += dx * (y - mean_y_);
  }
  std::size_t count() const noexcept { return count_; }
  double slope() const noexcept { return sxy_ / sxx_; }
  double intercept() const noexcept { return mean_y_ - slope() * mean_x_; }
  double ss_err() const noexcept {
    const double v = syy_ - sxy_ * sxy_ / sxx_;
    return v > 0.0 ? v : 0.0;
  }
  double r_squared() const noexcept {
    if (!(syy_ > 0.0) || !(sxx_ > 0.0)) return 0.0;
    const double v = (sxy_ * sxy_) / (sxx_ * syy_);
    return v > 1.0 ? 1.0 : v;
  }

 private:
  std::size_t count_ = 0;
  double mean_x_ = 0.0;
  double mean_y_ = 0.0;
  double sxx_ = 0.0;
  double syy_ = 0.0;
  double sxy_ = 0.0;
};

}  // namespace detail
}  // namespace rankfreq
