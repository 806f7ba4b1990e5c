#pragma once

// Regularity diagnostics for CDFs and step densities, and a membership
// classifier built on the sufficient conditions for finite energy.

#include <cstddef>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "logmeasure/defaults.hpp"
#include "logmeasure/measures.hpp"

namespace logmeasure {

/// sup over a fixed x-grid of F(x+y) - F(x). The grid is 2^12 uniform points
/// on [lo - 1, hi + 1] plus the edges of the mass-uniform cells, where the
/// largest increments of singular CDFs sit.
double modulus_of_continuity(const MonotoneCDF& F, double y);

struct HolderFit {
  double alpha = 1.0;
  double K = 0.0;
  std::vector<double> scales;  // the dyadic y actually used
  double residual = 0.0;
};

/// ln ω(2^-j) against -j ln 2 over j in [j_min, j_max]; K is then inflated
/// so that ω(y) <= K y^alpha on every sampled scale.
HolderFit fit_holder(const MonotoneCDF& F, std::size_t j_min = defaults::kHolderJMin,
                     std::size_t j_max = defaults::kHolderJMax);

struct LogModulusCheck {
  bool holds = false;
  double eps_used = 0.0;
  double worst_ratio = 0.0;
};

/// ω(y)·|ln y|^beta <= 1 for dyadic y <= exp(-(beta + 1)).
LogModulusCheck check_log_modulus(const MonotoneCDF& F, double beta);

/// A finite value or the +∞ sentinel from the growth test.
struct SeriesValue {
  double value = 0.0;
  bool infinite = false;
};

SeriesValue lp_norm(const StepDensity& f, double p);
SeriesValue l_log_l_gamma(const StepDensity& f, double gamma);

enum class MembershipTag { MemberCertified, DivergenceCertified, Unknown };
enum class Rule { Lipschitz, LpDensity, Holder, LogModulus, EnergyDirect, LowerBoundSeries, None };

std::string_view to_string(MembershipTag t);
std::string_view to_string(Rule r);

struct MembershipVerdict {
  MembershipTag verdict = MembershipTag::Unknown;
  Rule rule = Rule::None;
  nlohmann::ordered_json witness = nlohmann::ordered_json::object();
};

nlohmann::ordered_json to_json(const MembershipVerdict& v);

MembershipVerdict classify_membership(const MonotoneCDF& F, const QuadratureConfig& cfg = {});
MembershipVerdict classify_membership(const StepDensity& f, const QuadratureConfig& cfg = {});

}  // namespace logmeasure
