#pragma once

// Cantor-type singular measures: standard middle-(K-2)/K sets and the
// generalized construction with level widths d_n = exp(-2^{n/β}).

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "logmeasure/defaults.hpp"
#include "logmeasure/measures.hpp"

namespace logmeasure {

enum class CantorFamily { StandardK, GeneralRatio };

/// Ratio-sequence description of a Cantor construction. Level n keeps 2^n
/// intervals of width d_n = c_1···c_n; all widths are held as logarithms.
class CantorSpec {
 public:
  /// Remove the middle (K-2)/K of every interval; K = 3 is the classical set.
  static CantorSpec standard(double K, std::size_t depth = defaults::kCantorEvalDepth);
  /// c_n = d_n / d_{n-1} with ln d_n = -2^{n/β}.
  static CantorSpec general(double beta, std::size_t depth = defaults::kCantorEvalDepth);

  CantorFamily family() const { return family_; }
  double K() const { return K_; }
  double beta() const { return beta_; }
  std::size_t depth() const { return ratio_logs_.size(); }
  /// ln c_n for n = 1..depth (index n-1).
  const std::vector<double>& ratio_logs() const { return ratio_logs_; }
  /// ln d_n, exact from the defining formula; ln d_0 = 0.
  double width_log(std::size_t n) const;
  double ratio(std::size_t n) const;  // c_n, 0 when it underflows

  /// Same construction truncated at a different depth.
  CantorSpec with_depth(std::size_t depth) const;

 private:
  CantorSpec(CantorFamily family, double K, double beta, std::size_t depth);

  CantorFamily family_;
  double K_ = 3.0;
  double beta_ = 2.0;
  std::vector<double> ratio_logs_;
};

/// Level-n iterate γ_n(x), extended by 0 left of 0 and 1 right of 1.
double gamma_level(const CantorSpec& spec, double x, std::size_t n);

/// Γ approximated by γ_depth; uniform error at most 2^{-depth}.
MonotoneCDF cantor_cdf(const CantorSpec& spec);

struct IntervalList {
  struct Interval {
    double lo = 0.0;
    double width_log = 0.0;
  };
  std::size_t level = 0;
  std::vector<Interval> intervals;
};

/// The 2^n level-n intervals, ordered left to right.
IntervalList cantor_intervals(const CantorSpec& spec, std::size_t n,
                              std::size_t budget_level = defaults::kIntervalBudgetLevel);

void write_intervals_csv(std::ostream& out, const IntervalList& list);

struct LogModulusReport {
  bool holds = false;
  double worst_ratio = 0.0;
  std::size_t pairs_checked = 0;
};

/// Samples |Γ(x+y) - Γ(x)|·|ln y|^β over a deterministic grid with
/// y <= exp(-(β+1)). Only for the GeneralRatio family with the same β.
LogModulusReport log_modulus_certificate(const CantorSpec& spec, double beta, std::size_t samples);

struct DimensionEstimate {
  std::vector<double> scales_log;  // ln(1/d_n)
  std::vector<double> counts_log;  // ln N_n = n ln 2
  std::vector<double> pointwise;   // counts_log / scales_log per level
  double slope = 0.0;
  double residual = 0.0;
};

/// Box-counting fit over the exact covers N_n = 2^n at scale d_n, n in [n_min, n_max].
DimensionEstimate box_counting_dimension(const CantorSpec& spec, std::size_t n_min, std::size_t n_max);

}  // namespace logmeasure
