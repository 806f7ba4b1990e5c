#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace logmeasure {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// log⁺(1/s) = max(ln(1/s), 0). Throws NonpositiveDistance for s <= 0.
double logplus_kernel(double s);

/// Same kernel with the convention k(0) = +inf; used where coincident
/// points are a legitimate (divergent) configuration.
inline double logplus_or_inf(double s) {
  if (s <= 0.0) return kInf;
  return s >= 1.0 ? 0.0 : -std::log(s);
}

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (!std::isfinite(t)) {  // compensation is meaningless once the sum is infinite
      sum_ = t;
      return;
    }
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return std::isfinite(sum_) ? sum_ + comp_ : sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> values);

/// Sum of terms sorted by decreasing magnitude, compensated.
double ordered_sum(std::vector<double> values);

/// ln(Σ exp(v)) without overflow; -inf for an empty span.
double log_sum_exp(std::span<const double> log_values);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Ordinary least squares y ≈ intercept + slope·x. Needs at least two points.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Ratio test on a series of nonnegative terms given by their logarithms:
/// the series is judged divergent when the fitted slope of ln(term) over the
/// last `window` indices is not negative (terms fail to decay geometrically).
/// Returns false with fewer than three terms.
bool series_diverges(std::span<const double> log_terms, std::size_t window = 10);

}  // namespace logmeasure
