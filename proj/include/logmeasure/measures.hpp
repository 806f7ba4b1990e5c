#pragma once

// Nonnegative measures on the line, represented by cumulative distribution
// functions F(x) = η((-∞, x]) and by step densities built from blocks.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace logmeasure {

enum class CdfKind { PiecewiseLinear, PowerLaw, CantorIterate, StepIntegral, ArcsinProfile, TableSampled };

std::string_view to_string(CdfKind kind);

/// A point mass carried by a CDF (a jump of height `mass` at `x`).
struct Atom {
  double x = 0.0;
  double mass = 0.0;
};

/// Immutable nondecreasing function F with F = 0 left of the support and
/// F = total_mass from support_hi on. Copies share the evaluator.
class MonotoneCDF {
 public:
  /// Raw evaluator, only called for x in [support_lo, support_hi).
  using Evaluator = std::function<double(double)>;

  struct Traits {
    CdfKind kind = CdfKind::PiecewiseLinear;
    double support_lo = 0.0;
    double support_hi = 1.0;
    double total_mass = 1.0;
    bool continuous = true;
    // Set when F is strictly increasing on its support and `inverse` is exact.
    bool strictly_increasing = false;
    std::function<double(double)> inverse;  // optional closed-form inf{x : F(x) >= m}
    std::vector<Atom> atoms;
    nlohmann::ordered_json source;  // JSON description, null when not serializable
  };

  MonotoneCDF(Traits traits, Evaluator evaluator);

  static MonotoneCDF uniform(double lo = 0.0, double hi = 1.0, double mass = 1.0);
  /// F(r) = c·r^alpha on [0, R], c·R^alpha beyond.
  static MonotoneCDF power_law(double c, double alpha, double R);
  /// Linear interpolation through sorted (x, F) pairs. A repeated x with a
  /// larger F, or a first F > 0, is a jump (atom).
  static MonotoneCDF table(std::vector<std::pair<double, double>> points);
  /// F = mass·1_{[x, ∞)}.
  static MonotoneCDF point_mass(double x, double mass = 1.0);
  /// (2/π)·arcsin(r/2) on [0, 2]: radial CDF of the uniform circle about a point on it.
  static MonotoneCDF arcsin_profile();

  double operator()(double x) const;

  CdfKind kind() const { return traits_->kind; }
  double support_lo() const { return traits_->support_lo; }
  double support_hi() const { return traits_->support_hi; }
  double total_mass() const { return traits_->total_mass; }
  bool continuous() const { return traits_->continuous; }
  const std::vector<Atom>& atoms() const { return traits_->atoms; }
  const nlohmann::ordered_json& source() const { return traits_->source; }
  const Traits& traits() const { return *traits_; }

  /// c·F for c > 0.
  MonotoneCDF scaled(double c) const;
  /// F(· - t).
  MonotoneCDF shifted(double t) const;

 private:
  std::shared_ptr<const Traits> traits_;
  std::shared_ptr<const Evaluator> eval_;
};

double eval_cdf(const MonotoneCDF& F, double x);

/// F(hi) - F(lo). Throws MalformedInterval if lo > hi.
double interval_mass(const MonotoneCDF& F, double lo, double hi);

/// Absolute x-tolerance used by the inverse for this CDF.
double inverse_tolerance(const MonotoneCDF& F);

/// inf{x : F(x) >= m}, by bisection. Throws OutOfRange outside [0, total_mass].
double generalized_inverse(const MonotoneCDF& F, double m);

/// sup{x : F(x) <= m}: the right edge of the level set at m.
double upper_inverse(const MonotoneCDF& F, double m);

struct MassInterval {
  double lo = 0.0;
  double hi = 0.0;
  double mass = 0.0;
  double width_log = 0.0;  // ln(hi - lo), -inf for a degenerate cell
};

/// n abutting cells of equal dF-mass covering the support.
std::vector<MassInterval> mass_uniform_partition(const MonotoneCDF& F, std::size_t n);

/// One block h·1_{[a, a+d]} with d and h·d kept as logarithms. The mass log
/// ln(h·d) is primary so that quantities such as h²d² stay exact when d
/// underflows; ln h is derived.
struct Block {
  double a = 0.0;
  double d_log = 0.0;
  double mass_log = 0.0;

  double h_log() const { return mass_log - d_log; }
  double width() const;  // exp(d_log), 0 on underflow
  double mass() const;
};

struct StepDensity {
  std::vector<Block> blocks;

  std::size_t n_max() const { return blocks.size(); }

  /// Block from (a, ln d, ln h).
  static Block block_from_h(double a, double d_log, double h_log) { return Block{a, d_log, h_log + d_log}; }

  /// d_n = exp(-2^{2n}), h_n = 1/(2^n d_n), a_n = 1 - 2^{1-n}: the standard
  /// example of an L¹ density with infinite energy, truncated at n_max.
  static StepDensity l1_counterexample(std::size_t n_max);
};

/// Throws OverlapError / BadParams if the density is malformed.
void validate(const StepDensity& f);

MonotoneCDF cdf_from_step_density(const StepDensity& f);

enum class DiagonalMode { BracketRefine, OneSidedFallback };

struct QuadratureConfig {
  std::vector<std::size_t> depth_schedule;  // partition counts, powers of two
  double divergence_budget;
  double agreement_tol;
  DiagonalMode diagonal_mode = DiagonalMode::BracketRefine;

  QuadratureConfig();
  /// Schedule 2^min_exp .. 2^max_exp.
  static QuadratureConfig with_schedule(std::size_t min_exp, std::size_t max_exp, double tol);
  void validate() const;
};

}  // namespace logmeasure
