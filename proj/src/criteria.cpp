#include "logmeasure/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "logmeasure/energy.hpp"
#include "logmeasure/error.hpp"
#include "logmeasure/numeric.hpp"
#include "logmeasure/parallel.hpp"

namespace logmeasure {

namespace {

// Fixed x-grid for one CDF. Increments of singular CDFs peak at the left
// edges of their growth sets and just before right edges, so mass-uniform
// cell edges join the uniform grid.
class ModulusSampler {
 public:
  explicit ModulusSampler(const MonotoneCDF& F) : F_(F) {
    const std::size_t n = defaults::kModulusGridPoints;
    const double lo = F.support_lo() - 1.0, hi = F.support_hi() + 1.0;
    uniform_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      uniform_[i] = lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(n - 1));
    const double M = F.total_mass();
    if (!(M > 0.0)) return;
    lefts_.resize(n);
    rights_.resize(n);
    parallel_for(n, [&](std::size_t k) {
      lefts_[k] = upper_inverse(F, M * (static_cast<double>(k) / static_cast<double>(n)));
      rights_[k] = generalized_inverse(F, M * (static_cast<double>(k + 1) / static_cast<double>(n)));
    });
  }

  double operator()(double y) const {
    double best = 0.0;
    auto probe = [&](double x) { best = std::max(best, F_(x + y) - F_(x)); };
    for (double x : uniform_) probe(x);
    for (double x : lefts_) probe(x);
    for (double x : rights_) probe(x - y);
    return best;
  }

 private:
  const MonotoneCDF& F_;
  std::vector<double> uniform_, lefts_, rights_;
};

double jump_of(const MonotoneCDF& F) {
  double jump = 0.0;
  for (const Atom& a : F.atoms()) jump = std::max(jump, a.mass);
  return jump;
}

}  // namespace

double modulus_of_continuity(const MonotoneCDF& F, double y) {
  if (!(y > 0.0)) throw Error(ErrorCode::BadParams, "modulus scale must be positive");
  return ModulusSampler(F)(y);
}

HolderFit fit_holder(const MonotoneCDF& F, std::size_t j_min, std::size_t j_max) {
  if (!(j_min < j_max)) throw Error(ErrorCode::BadParams, "fit_holder needs j_min < j_max");
  const ModulusSampler omega(F);
  std::vector<double> ly, lw, ys, ws;
  for (std::size_t j = j_min; j <= j_max; ++j) {
    const double y = std::ldexp(1.0, -static_cast<int>(j));
    const double w = std::max(omega(y), jump_of(F));
    if (!(w > 0.0)) continue;
    ys.push_back(y);
    ws.push_back(w);
    ly.push_back(std::log(y));
    lw.push_back(std::log(w));
  }
  if (ys.empty()) throw Error(ErrorCode::DegenerateModulus, "modulus vanishes at every scale");
  HolderFit fit;
  fit.scales = ys;
  LineFit line;
  if (ys.size() >= 2) {
    line = fit_line(ly, lw);
  } else {
    line.slope = 1.0;
    line.intercept = lw[0] - ly[0];
  }
  fit.alpha = std::clamp(line.slope, 1e-6, 1.0);
  fit.residual = ys.size() >= 2 ? line.max_residual : 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) fit.K = std::max(fit.K, ws[i] / std::pow(ys[i], fit.alpha));
  return fit;
}

LogModulusCheck check_log_modulus(const MonotoneCDF& F, double beta) {
  if (!(beta > 1.0)) throw Error(ErrorCode::BadBeta, "log-modulus test needs beta > 1");
  LogModulusCheck rep;
  rep.eps_used = std::exp(-(beta + 1.0));
  const ModulusSampler omega(F);
  const int j0 = static_cast<int>(std::ceil((beta + 1.0) / std::numbers::ln2));
  for (int j = j0; j <= defaults::kLogModulusJMax; ++j) {
    const double y = std::ldexp(1.0, -j);
    const double w = std::max(omega(y), jump_of(F));
    rep.worst_ratio = std::max(rep.worst_ratio, w * std::pow(-std::log(y), beta));
  }
  rep.holds = rep.worst_ratio <= 1.0;
  return rep;
}

namespace {

SeriesValue from_logs(const std::vector<double>& logs, double root) {
  SeriesValue v;
  v.infinite = series_diverges(logs, defaults::kGrowthWindow);
  v.value = v.infinite ? kInf : std::exp(log_sum_exp(logs) / root);
  return v;
}

// ln ln(1 + h) from ln h.
double log_log1p(double h_log) {
  const double l = h_log > 0.0 ? h_log + std::log1p(std::exp(-h_log)) : std::log1p(std::exp(h_log));
  return std::log(l);
}

}  // namespace

SeriesValue lp_norm(const StepDensity& f, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::BadExponent, "lp_norm needs p >= 1");
  validate(f);
  std::vector<double> logs;
  // p ln h + ln d written without the huge cancelling terms when p = 1
  for (const Block& b : f.blocks) logs.push_back(p * b.mass_log + (1.0 - p) * b.d_log);
  return from_logs(logs, p);
}

SeriesValue l_log_l_gamma(const StepDensity& f, double gamma) {
  if (!(gamma >= 0.0)) throw Error(ErrorCode::BadExponent, "l_log_l_gamma needs gamma >= 0");
  validate(f);
  std::vector<double> logs;
  for (const Block& b : f.blocks) logs.push_back(b.mass_log + (gamma == 0.0 ? 0.0 : gamma * log_log1p(b.h_log())));
  return from_logs(logs, 1.0);
}

std::string_view to_string(MembershipTag t) {
  switch (t) {
    case MembershipTag::MemberCertified: return "MemberCertified";
    case MembershipTag::DivergenceCertified: return "DivergenceCertified";
    case MembershipTag::Unknown: return "Unknown";
  }
  return "?";
}

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::Lipschitz: return "Lipschitz";
    case Rule::LpDensity: return "LpDensity";
    case Rule::Holder: return "Holder";
    case Rule::LogModulus: return "LogModulus";
    case Rule::EnergyDirect: return "EnergyDirect";
    case Rule::LowerBoundSeries: return "LowerBoundSeries";
    case Rule::None: return "None";
  }
  return "?";
}

nlohmann::ordered_json to_json(const MembershipVerdict& v) {
  return {{"verdict", to_string(v.verdict)}, {"rule", to_string(v.rule)}, {"witness", v.witness}};
}

namespace {

MembershipVerdict verdict(MembershipTag tag, Rule rule, nlohmann::ordered_json witness) {
  return {tag, rule, std::move(witness)};
}

nlohmann::ordered_json energy_witness(const EnergyEstimate& e) {
  auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isinf(v)) return "+inf";
    return v;
  };
  return {{"value", num(e.value)}, {"lower", num(e.lower)}, {"upper", num(e.upper)},
          {"verdict", to_string(e.verdict)}};
}

}  // namespace

MembershipVerdict classify_membership(const MonotoneCDF& F, const QuadratureConfig& cfg) {
  if (!(F.total_mass() > 0.0))
    return verdict(MembershipTag::MemberCertified, Rule::EnergyDirect, {{"value", 0.0}});
  const bool continuous = F.continuous() && F.atoms().empty();
  if (continuous) {
    const HolderFit fit = fit_holder(F);
    nlohmann::ordered_json w = {{"alpha", fit.alpha}, {"K", fit.K}, {"residual", fit.residual}};
    if (fit.alpha >= 1.0 - defaults::kLipschitzAlphaTol)
      return verdict(MembershipTag::MemberCertified, Rule::Lipschitz, w);
    if (fit.alpha > defaults::kHolderAlphaMin && fit.residual <= defaults::kHolderResidualMax) {
      w["bound"] = holder_energy_bound(fit.K, fit.alpha, F.total_mass());
      return verdict(MembershipTag::MemberCertified, Rule::Holder, w);
    }
    for (double beta : {1.5, 2.0, 3.0}) {
      const LogModulusCheck c = check_log_modulus(F, beta);
      if (c.holds)
        return verdict(MembershipTag::MemberCertified, Rule::LogModulus,
                       {{"beta", beta}, {"eps", c.eps_used}, {"worst_ratio", c.worst_ratio}});
    }
  }
  const EnergyEstimate e = energy_double_stieltjes(F, cfg);
  if (e.verdict == Verdict::FiniteConverged)
    return verdict(MembershipTag::MemberCertified, Rule::EnergyDirect, energy_witness(e));
  if (e.verdict == Verdict::Divergent)
    return verdict(MembershipTag::DivergenceCertified, Rule::EnergyDirect, energy_witness(e));
  return verdict(MembershipTag::Unknown, Rule::None, energy_witness(e));
}

MembershipVerdict classify_membership(const StepDensity& f, const QuadratureConfig& cfg) {
  validate(f);
  // Bounded density: h does not grow along the block sequence.
  double h_max = -kInf;
  for (const Block& b : f.blocks) h_max = std::max(h_max, b.h_log());
  bool bounded = f.blocks.size() < 3;
  if (!bounded) {
    const std::size_t n = f.blocks.size();
    const std::size_t start = n > defaults::kGrowthWindow ? n - defaults::kGrowthWindow : 0;
    std::vector<double> xs, ys;
    for (std::size_t i = start; i < n; ++i) {
      xs.push_back(static_cast<double>(i));
      ys.push_back(f.blocks[i].h_log());
    }
    bounded = fit_line(xs, ys).slope <= 1e-9 * std::max(1.0, std::fabs(h_max));
  }
  if (bounded)
    return verdict(MembershipTag::MemberCertified, Rule::Lipschitz, {{"sup_h", std::exp(h_max)}});
  for (double p : {2.0, 1.5, 1.25}) {
    const SeriesValue v = lp_norm(f, p);
    if (!v.infinite) return verdict(MembershipTag::MemberCertified, Rule::LpDensity, {{"p", p}, {"norm", v.value}});
  }
  const EnergyEstimate e = energy_density(f, cfg);
  if (e.verdict == Verdict::FiniteConverged)
    return verdict(MembershipTag::MemberCertified, Rule::EnergyDirect, energy_witness(e));
  if (e.verdict == Verdict::Divergent && e.lower > cfg.divergence_budget)
    return verdict(MembershipTag::DivergenceCertified, Rule::EnergyDirect, energy_witness(e));
  const SeriesReport s = step_lower_bound(f);
  if (s.diverging)
    return verdict(MembershipTag::DivergenceCertified, Rule::LowerBoundSeries,
                   {{"partial_sum", s.partial_sum}, {"terms", s.terms.size()}});
  return verdict(MembershipTag::Unknown, Rule::None, energy_witness(e));
}

}  // namespace logmeasure
