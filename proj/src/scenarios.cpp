#include "logmeasure/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>

#include "logmeasure/criteria.hpp"
#include "logmeasure/defaults.hpp"
#include "logmeasure/energy.hpp"
#include "logmeasure/error.hpp"
#include "logmeasure/fractal.hpp"
#include "logmeasure/io.hpp"
#include "logmeasure/planar.hpp"

namespace logmeasure {

namespace d = defaults;

bool ScenarioReport::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

nlohmann::ordered_json ScenarioReport::to_json() const {
  nlohmann::ordered_json cs = nlohmann::ordered_json::array();
  for (const auto& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"scenario", name}, {"claim", claim},   {"passed", passed()},
          {"seconds", seconds}, {"checks", cs}, {"data", data}};
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

[[gnu::format(printf, 4, 5)]] void check(ScenarioReport& r, std::string name, bool pass, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  r.checks.push_back({std::move(name), pass, buf});
}

struct Sink {
  std::optional<std::filesystem::path> dir;
  std::optional<std::ofstream> open(const std::string& file) const {
    if (!dir) return std::nullopt;
    std::filesystem::create_directories(*dir);
    return std::ofstream(*dir / file);
  }
};

void uniform_energy(ScenarioReport& r, const Sink& sink) {
  r.claim = "The uniform probability on [0,1] has positive logarithmic energy 3/2.";
  const auto F = MonotoneCDF::uniform();
  auto t0 = Clock::now();
  const EnergyEstimate a = energy_double_stieltjes(F);
  const double ta = since(t0);
  t0 = Clock::now();
  const EnergyEstimate b = energy_one_sided(F);
  const double tb = since(t0);
  check(r, "double-stieltjes value", std::fabs(a.value - d::kUniformEnergy) <= d::kUniformEnergyTol,
        "%.9f (%s, n=%zu)", a.value, to_string(a.verdict).data(), a.trace.back().n);
  check(r, "one-sided value", std::fabs(b.value - d::kUniformEnergy) <= d::kUniformEnergyTol, "%.9f (%s, n=%zu)", b.value,
        to_string(b.verdict).data(), b.trace.back().n);
  check(r, "engine agreement", std::fabs(a.value - b.value) <= d::kEngineAgreementTol, "|diff| = %.3g",
        std::fabs(a.value - b.value));
  check(r, "runtime", ta <= 10.0 && tb <= 10.0, "double %.2fs, one-sided %.2fs", ta, tb);
  r.data["double"] = to_json(a);
  r.data["one_sided"] = to_json(b);
  if (auto out = sink.open("uniform_double_trace.csv")) write_trace_csv(*out, a);
  if (auto out = sink.open("uniform_one_sided_trace.csv")) write_trace_csv(*out, b);
}

void counterexample(ScenarioReport& r, const Sink& sink) {
  r.claim = "An L1 step density with blocks d_n = exp(-4^n), h_n = 1/(2^n d_n) has infinite energy.";
  const auto t0 = Clock::now();
  const StepDensity f = StepDensity::l1_counterexample(50);
  const SeriesReport s = step_lower_bound(f);
  double worst = 0.0;
  for (double t : s.terms) worst = std::max(worst, std::fabs(t - 1.0));
  check(r, "lower-bound terms", worst <= d::kSeriesTermTol && s.terms.size() == 50, "max |term - 1| = %.3g over %zu",
        worst, s.terms.size());
  const SeriesValue l1 = lp_norm(f, 1.0);
  const double l1_expect = 1.0 - std::ldexp(1.0, -50);
  check(r, "L1 norm", !l1.infinite && std::fabs(l1.value - l1_expect) <= d::kSeriesTermTol, "%.17g (expect 1 - 2^-50)",
        l1.value);
  const EnergyEstimate e = energy_density(f);
  check(r, "energy verdict", e.verdict == Verdict::Divergent, "%s, partial energy %.6f", to_string(e.verdict).data(),
        e.lower);
  const double secs = since(t0);
  check(r, "runtime", secs <= 1.0, "%.3fs", secs);
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < 20; ++n) terms.push_back(s.terms[n]);
  r.data["first_terms"] = terms;
  r.data["partial_sum"] = s.partial_sum;
  r.data["energy"] = to_json(e);
  if (auto out = sink.open("counterexample_terms.csv")) {
    *out << "n,term\n";
    char buf[64];
    for (std::size_t n = 0; n < s.terms.size(); ++n) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g\n", n + 1, s.terms[n]);
      *out << buf;
    }
  }
}

void llogl(ScenarioReport& r, const Sink&) {
  r.claim = "The same density lies in L(log L)^g for g < 1/2 but not for g > 1/2.";
  const auto t0 = Clock::now();
  const StepDensity f = StepDensity::l1_counterexample(50);
  const SeriesValue a = l_log_l_gamma(f, 0.4), b = l_log_l_gamma(f, 0.6);
  check(r, "gamma = 0.4 finite", !a.infinite, "value %.9f", a.value);
  check(r, "gamma = 0.6 infinite", b.infinite, "%s", b.infinite ? "+inf sentinel" : "finite");
  const double secs = since(t0);
  check(r, "runtime", secs <= 1.0, "%.3fs", secs);
  r.data["gamma_0.4"] = number_json(a.value);
  r.data["gamma_0.6"] = b.infinite ? Json("+inf") : Json(b.value);
}

void cantor_standard(ScenarioReport& r, const Sink& sink) {
  r.claim = "The middle-thirds Cantor measure is Hoelder with exponent ln2/ln3 and has finite energy.";
  const auto t0 = Clock::now();
  const MonotoneCDF F = cantor_cdf(CantorSpec::standard(3.0));
  const HolderFit fit = fit_holder(F);
  check(r, "Hoelder exponent", fit.alpha >= d::kCantorAlphaLo && fit.alpha <= d::kCantorAlphaHi,
        "alpha %.5f (ln2/ln3 = %.5f), K %.5f", fit.alpha, std::numbers::ln2 / std::log(3.0), fit.K);
  const double bound = holder_energy_bound(fit.K, fit.alpha, 1.0);
  const EnergyEstimate a = energy_double_stieltjes(F);
  const EnergyEstimate b = energy_one_sided(F);
  check(r, "double-stieltjes", a.verdict == Verdict::FiniteConverged && a.value <= bound, "%.6f [%s] <= bound %.4f",
        a.value, to_string(a.verdict).data(), bound);
  check(r, "one-sided", b.verdict == Verdict::FiniteConverged && b.value <= bound, "%.6f [%s] <= bound %.4f", b.value,
        to_string(b.verdict).data(), bound);
  const MembershipVerdict v = classify_membership(F);
  check(r, "membership", v.verdict == MembershipTag::MemberCertified, "%s via %s", to_string(v.verdict).data(),
        to_string(v.rule).data());
  const double secs = since(t0);
  check(r, "runtime", secs <= 30.0, "%.2fs", secs);
  r.data["fit"] = {{"alpha", fit.alpha}, {"K", fit.K}, {"residual", fit.residual}};
  r.data["double"] = to_json(a);
  r.data["one_sided"] = to_json(b);
  r.data["membership"] = to_json(v);
  if (auto out = sink.open("cantor_double_trace.csv")) write_trace_csv(*out, a);
}

void cantor_smallest(ScenarioReport& r, const Sink& sink) {
  r.claim = "A Cantor set with widths exp(-2^(n/b)), b > 1, has dimension 0 yet carries a finite-energy measure.";
  const CantorSpec spec = CantorSpec::general(2.0, 40);
  const DimensionEstimate dim = box_counting_dimension(spec, 1, 40);
  const double at36 = dim.pointwise[35];
  check(r, "pointwise dimension at n = 36", at36 <= d::kZeroDimensionBound, "%.3g", at36);
  const LogModulusReport cert = log_modulus_certificate(spec, 2.0, 1000);
  check(r, "log-modulus certificate", cert.holds, "worst ratio %.6f over %zu pairs", cert.worst_ratio, cert.pairs_checked);
  const MonotoneCDF F = cantor_cdf(CantorSpec::general(2.0));
  const MembershipVerdict v = classify_membership(F);
  check(r, "membership", v.verdict == MembershipTag::MemberCertified, "%s via %s", to_string(v.verdict).data(),
        to_string(v.rule).data());
  const EnergyEstimate e = energy_double_stieltjes(F);
  check(r, "energy not divergent", e.verdict != Verdict::Divergent, "lower %.6f upper %.6f (%s)", e.lower, e.upper,
        to_string(e.verdict).data());
  r.data["membership"] = to_json(v);
  r.data["energy"] = to_json(e);
  if (auto out = sink.open("cantor_smallest_intervals_level8.csv")) write_intervals_csv(*out, cantor_intervals(spec, 8));
}

void radial_circle(ScenarioReport& r, const Sink& sink) {
  r.claim = "About a point of the unit circle its radial CDF is (2/pi) arcsin(r/2); about the centre it is a unit step.";
  const auto t0 = Clock::now();
  const Point2 on{1.0, 0.0}, centre{0.0, 0.0};
  bool exact_all = true;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  bool radial_divergent = true;
  for (std::size_t n : {64u, 256u, 1024u}) {
    const PlanarMeasure P = circle_measure(n);
    const RadialProfile G = radial_cdf(P, on);
    double sup = 0.0;
    for (const Atom& a : G.G.atoms()) {
      const double exact = (2.0 / std::numbers::pi) * std::asin(std::min(a.x / 2.0, 1.0));
      sup = std::max({sup, std::fabs(G.G(a.x) - exact), std::fabs(G.G(std::nextafter(a.x, -kInf)) - exact)});
    }
    check(r, "arcsin profile n=" + std::to_string(n), sup <= 2.0 / static_cast<double>(n), "sup error %.3g (bound %.3g)",
          sup, 2.0 / static_cast<double>(n));
    const RadialInequalityReport a = radial_inequality_check(P, on);
    const RadialInequalityReport b = radial_inequality_check(P, centre);
    exact_all = exact_all && a.holds_pointwise && a.lhs_le_rhs && b.holds_pointwise && b.lhs_le_rhs;
    radial_divergent = radial_divergent && b.rhs_lower > d::kDivergenceBudget;
    rows.push_back({{"n", n}, {"sup_error", sup}, {"lhs_lower", a.lhs_lower}, {"rhs_lower_on_circle", number_json(a.rhs_lower)},
                    {"rhs_lower_centre", number_json(b.rhs_lower)}});
  }
  check(r, "radial inequality exact", exact_all, "pointwise domination and lhs <= rhs at both centres, every n");
  check(r, "centred radial family divergent", radial_divergent, "projection collapses all atoms onto r = 1");
  std::vector<PlanarMeasure> family;
  for (std::size_t n = 64; n <= 4096; n *= 2) family.push_back(circle_measure(n));
  const EnergyEstimate planar = energy_planar_family(family);
  check(r, "planar family converges", planar.verdict == Verdict::FiniteConverged, "last lower %.6f (%s)", planar.lower,
        to_string(planar.verdict).data());
  const EnergyEstimate cont = energy_double_stieltjes(continuum_surrogate(radial_cdf(circle_measure(1024), on)));
  check(r, "continuum radial energy finite", cont.verdict == Verdict::FiniteConverged, "%.6f (%s)", cont.value,
        to_string(cont.verdict).data());
  const double secs = since(t0);
  check(r, "runtime", secs <= 30.0, "%.2fs", secs);
  r.data["rows"] = rows;
  r.data["planar_family"] = to_json(planar);
  r.data["continuum_radial"] = to_json(cont);
  if (auto out = sink.open("circle_planar_family.csv")) write_trace_csv(*out, planar);
}

void power_law(ScenarioReport& r, const Sink&) {
  r.claim = "Radial profiles G(r) = c r^a are Hoelder, so the measures have finite energy.";
  const auto t0 = Clock::now();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (double alpha : {0.25, 0.5, 1.0}) {
    const RadialProfile p = power_law_profile(1.0, alpha, 1.0);
    const MembershipVerdict v = classify_membership(p.G);
    char label[32];
    std::snprintf(label, sizeof label, "alpha=%.2f", alpha);
    check(r, std::string("membership ") + label, v.verdict == MembershipTag::MemberCertified, "%s via %s",
          to_string(v.verdict).data(), to_string(v.rule).data());
    rows.push_back({{"alpha", alpha}, {"membership", to_json(v)}});
  }
  const double secs = since(t0);
  check(r, "runtime", secs <= 10.0, "%.2fs", secs);
  r.data["rows"] = rows;
}

void blob_holder(ScenarioReport& r, const Sink&) {
  r.claim = "Blob approximations of a Hoelder radial profile stay uniformly Hoelder as the blob radius shrinks.";
  const RadialProfile parent = power_law_profile(1.0, 0.5, 1.0);
  const HolderFit pf = fit_holder(parent.G, d::kBlobFitJMin, d::kBlobFitJMax);
  double alpha_min = kInf, ratio_max = 0.0;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int j = 4; j <= 8; ++j) {
    const PlanarMeasure B = blob_approximation(parent, 1000, std::ldexp(1.0, -j));
    const HolderFit f = fit_holder(radial_cdf(B, parent.center).G, d::kBlobFitJMin, d::kBlobFitJMax);
    alpha_min = std::min(alpha_min, f.alpha);
    ratio_max = std::max(ratio_max, f.K / pf.K);
    rows.push_back({{"j", j}, {"alpha", f.alpha}, {"K", f.K}});
  }
  check(r, "uniform exponent", alpha_min >= d::kBlobAlphaMin, "min alpha %.4f (calibrated floor %.2f; 0.48 %s)", alpha_min,
        d::kBlobAlphaMin, alpha_min >= 0.48 ? "met" : "not met");
  check(r, "uniform constant", ratio_max <= d::kBlobKRatioMax, "max K/K_parent %.4f", ratio_max);
  const PlanarMeasure dirac = blob_approximation({{0.0, 0.0}, MonotoneCDF::point_mass(0.0, 1.0)}, 100, 0.1);
  const double jump = modulus_of_continuity(radial_cdf(dirac, {0.0, 0.0}).G, 1e-3);
  check(r, "Dirac parent keeps its jump", jump >= 0.99, "modulus at 1e-3 = %.6f", jump);
  r.data["parent"] = {{"alpha", pf.alpha}, {"K", pf.K}};
  r.data["rows"] = rows;
}

void dimension_table(ScenarioReport& r, const Sink& sink) {
  r.claim = "Standard Cantor sets have box dimension ln2/lnK; the b = 2 construction has dimension 0.";
  const auto t0 = Clock::now();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (double K : {3.0, 4.0, 9.0}) {
    const DimensionEstimate e = box_counting_dimension(CantorSpec::standard(K), 1, 20);
    const double expect = std::numbers::ln2 / std::log(K);
    char label[32];
    std::snprintf(label, sizeof label, "K=%g", K);
    check(r, std::string("slope ") + label, std::fabs(e.slope - expect) <= d::kDimensionTol, "%.12f vs %.12f", e.slope,
          expect);
    rows.push_back({{"K", K}, {"slope", e.slope}, {"expected", expect}});
  }
  const CantorSpec g = CantorSpec::general(2.0, 40);
  const DimensionEstimate ge = box_counting_dimension(g, 1, 40);
  check(r, "beta=2 pointwise at n=36", ge.pointwise[35] <= d::kZeroDimensionBound, "%.3g", ge.pointwise[35]);
  const LogModulusReport cert = log_modulus_certificate(g, 2.0, 1000);
  check(r, "log-modulus certificate", cert.holds, "worst %.6f over %zu pairs", cert.worst_ratio, cert.pairs_checked);
  const double secs = since(t0);
  check(r, "runtime", secs <= 10.0, "%.2fs", secs);
  r.data["standard"] = rows;
  nlohmann::ordered_json seq = nlohmann::ordered_json::array();
  for (double v : ge.pointwise) seq.push_back(v);
  r.data["beta2_pointwise"] = seq;
  if (auto out = sink.open("dimension_beta2.csv")) {
    *out << "n,pointwise\n";
    char buf[64];
    for (std::size_t i = 0; i < ge.pointwise.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i + 1, ge.pointwise[i]);
      *out << buf;
    }
  }
}

void velocity(ScenarioReport& r, const Sink& sink) {
  r.claim = "A point vortex has locally infinite kinetic energy growing like ln(1/eps)/(2 pi); a blob does not.";
  const auto t0 = Clock::now();
  const PlanarMeasure pv = dirac_measure({0.0, 0.0});
  const GridSpec grid{-1.2, -1.2, 2.4 / 1200.0, 1200, 1200};
  const VelocityField u = biot_savart(pv, grid);
  const double annulus = local_kinetic_energy(u, {{0.0, 0.0}, 0.1, 1.0});
  const double expect = std::log(10.0) / (2.0 * std::numbers::pi);
  check(r, "annulus energy", std::fabs(annulus - expect) <= d::kKineticEnergyRelTol * expect, "%.6f vs %.6f", annulus,
        expect);
  std::vector<double> xs, ys;
  for (double eps : {0.1, 0.05, 0.025, 0.0125}) {
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(local_kinetic_energy(u, {{0.0, 0.0}, eps, 1.0}));
  }
  const double slope = fit_line(xs, ys).slope;
  const double slope_expect = 1.0 / (2.0 * std::numbers::pi);
  check(r, "growth slope", std::fabs(slope - slope_expect) <= d::kKineticSlopeRelTol * slope_expect, "%.6f vs %.6f",
        slope, slope_expect);
  const PlanarMeasure blob = blob_approximation({{0.0, 0.0}, MonotoneCDF::point_mass(0.0, 1.0)}, 1, 0.1);
  std::vector<double> es;
  for (std::size_t n : {100u, 200u, 400u})
    es.push_back(local_kinetic_energy(biot_savart(blob, {-1.2, -1.2, 2.4 / static_cast<double>(n), n, n}),
                                      {{0.0, 0.0}, 0.0, 1.0}));
  double worst = 0.0;
  for (std::size_t i = 1; i < es.size(); ++i) worst = std::max(worst, std::fabs(es[i] - es[i - 1]) / es[i]);
  check(r, "blob refinement stable", worst < d::kBlobRefinementRelTol, "energies %.6f %.6f %.6f, max rel diff %.3g", es[0],
        es[1], es[2], worst);
  const double secs = since(t0);
  check(r, "runtime", secs <= 60.0, "%.2fs", secs);
  r.data["annulus"] = annulus;
  r.data["slope"] = slope;
  if (auto out = sink.open("point_vortex_velocity_coarse.csv"))
    write_velocity_csv(*out, biot_savart(pv, {-1.2, -1.2, 0.1, 24, 24}));
}

const std::map<std::string, std::function<void(ScenarioReport&, const Sink&)>>& table() {
  static const std::map<std::string, std::function<void(ScenarioReport&, const Sink&)>> t = {
      {"uniform-energy", uniform_energy}, {"counterexample-L1", counterexample}, {"llogl-threshold", llogl},
      {"cantor-standard", cantor_standard}, {"cantor-smallest", cantor_smallest}, {"radial-circle", radial_circle},
      {"power-law", power_law},           {"blob-holder", blob_holder},         {"dimension-table", dimension_table},
      {"velocity", velocity}};
  return t;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"uniform-energy", "counterexample-L1", "llogl-threshold",
                                                 "cantor-standard", "cantor-smallest",   "radial-circle",
                                                 "power-law",       "blob-holder",       "dimension-table",
                                                 "velocity"};
  return names;
}

ScenarioReport run_scenario(const std::string& name, const std::optional<std::string>& out_dir) {
  const auto it = table().find(name);
  if (it == table().end()) throw Error(ErrorCode::BadParams, "unknown scenario '" + name + "'");
  ScenarioReport r;
  r.name = name;
  Sink sink;
  if (out_dir) sink.dir = *out_dir;
  const auto t0 = Clock::now();
  it->second(r, sink);
  r.seconds = since(t0);
  if (sink.dir) write_json_file((*sink.dir / (name + ".json")).string(), r.to_json());
  return r;
}

}  // namespace logmeasure
