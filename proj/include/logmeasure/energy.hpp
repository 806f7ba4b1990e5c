#pragma once

// Positive logarithmic energy H⁺(μ) = ∫∫ log⁺(1/|x-y|) dμ(x) dμ(y) of line
// measures, with certified brackets and explicit divergence verdicts.

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "logmeasure/measures.hpp"
#include "logmeasure/numeric.hpp"

namespace logmeasure {

enum class Verdict { FiniteConverged, Divergent, Inconclusive };

std::string_view to_string(Verdict v);

struct TraceRow {
  std::size_t n = 0;
  double lower = 0.0;
  double upper = 0.0;
};

struct EnergyEstimate {
  double value = 0.0;  // natural-log units
  double lower = 0.0;
  double upper = kInf;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<TraceRow> trace;
};

void write_trace_csv(std::ostream& out, const EnergyEstimate& est);

/// Bracketing Lebesgue–Stieltjes sums over mass-uniform partitions.
///
/// Cells are organised as a binary tree in mass. Separated cell pairs are
/// bounded below by Jensen's inequality at the (bounded) centroid distance
/// and above by the chord of the convex kernel over the pair's distance
/// range; pairs are refined while that gap is large relative to their mass
/// product. Diagonal and touching pairs are refined down to the scheduled
/// level and then closed with a flat-cell surcharge (BracketRefine) or a
/// modulus-of-continuity bound from a Hölder fit (OneSidedFallback).
/// A CDF with atoms is certified Divergent without quadrature.
EnergyEstimate energy_double_stieltjes(const MonotoneCDF& F, const QuadratureConfig& cfg = {});

/// ∫ (∫₀¹ (F(x+y) - F(x-y))/y dy) dF(x) with a midpoint outer rule on
/// mass-uniform cells and a geometric inner grid down to y = 2^-52.
/// Requires a continuous F.
EnergyEstimate energy_one_sided(const MonotoneCDF& F, const QuadratureConfig& cfg = {});

/// Exact block-pair decomposition of ∫∫ log⁺(1/|x-y|) f(x) f(y) dx dy.
EnergyEstimate energy_density(const StepDensity& f, const QuadratureConfig& cfg = {});

struct SeriesReport {
  std::vector<double> terms;
  double partial_sum = 0.0;
  bool diverging = false;
};

/// Diagonal-block lower bound Σ h_n² d_n² ln(1/d_n).
SeriesReport step_lower_bound(const StepDensity& f);

/// 2·(K/alpha)·mass.
double holder_energy_bound(double K, double alpha, double mass);

}  // namespace logmeasure
