#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "logmeasure/defaults.hpp"
#include "logmeasure/fractal.hpp"
#include "logmeasure/numeric.hpp"

namespace lmtest {

double Gen::log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

MonotoneCDF affine(const MonotoneCDF& F, double s, double t) {
  MonotoneCDF::Traits tr = F.traits();
  tr.support_lo = s * tr.support_lo + t;
  tr.support_hi = s * tr.support_hi + t;
  if (tr.inverse) tr.inverse = [inv = tr.inverse, s, t](double m) { return s * inv(m) + t; };
  for (auto& a : tr.atoms) a.x = s * a.x + t;
  tr.source = nullptr;
  return MonotoneCDF(std::move(tr), [F, s, t](double x) { return F((x - t) / s); });
}

MonotoneCDF canonical(int which) {
  switch (which % 3) {
    case 0: return MonotoneCDF::uniform();
    case 1: return MonotoneCDF::power_law(1.0, 0.5, 1.0);
    default: return cantor_cdf(CantorSpec::standard(3.0));
  }
}

namespace {

MonotoneCDF random_table(Gen& g, bool with_jumps) {
  const std::size_t k = 2 + g.index(6);
  std::vector<std::pair<double, double>> pts;
  double x = g.uniform(-1.0, 1.0), m = 0.0;
  pts.emplace_back(x, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (with_jumps && g.coin()) {
      m += g.uniform(0.05, 0.5);
      pts.emplace_back(x, m);
    }
    x += g.uniform(0.05, 0.8);
    m += g.uniform(0.05, 0.5);
    pts.emplace_back(x, m);
  }
  return MonotoneCDF::table(std::move(pts));
}

MonotoneCDF random_base(Gen& g) {
  switch (g.index(5)) {
    case 0: {
      const double lo = g.uniform(-1.0, 1.0);
      return MonotoneCDF::uniform(lo, lo + g.uniform(0.1, 2.0));
    }
    case 1: return MonotoneCDF::power_law(1.0, g.uniform(0.2, 1.0), g.uniform(0.3, 2.0));
    case 2: return cantor_cdf(CantorSpec::standard(g.uniform(2.5, 9.0)));
    case 3: return random_table(g, false);
    default: return MonotoneCDF::arcsin_profile();
  }
}

MonotoneCDF randomize(Gen& g, const MonotoneCDF& F) {
  const double c = g.log_uniform(0.2, 5.0);
  const double s = g.log_uniform(0.2, 3.0);
  const double t = g.uniform(-5.0, 5.0);
  return affine(F.scaled(c), s, t);
}

}  // namespace

MonotoneCDF random_continuous_cdf(Gen& g) { return randomize(g, random_base(g)); }

MonotoneCDF random_cdf(Gen& g) {
  switch (g.index(6)) {
    case 0: return randomize(g, random_table(g, true));
    case 1: return MonotoneCDF::point_mass(g.uniform(-3.0, 3.0), g.uniform(0.1, 3.0));
    default: return random_continuous_cdf(g);
  }
}

PlanarMeasure random_cloud(Gen& g, std::size_t max_atoms) {
  const std::size_t n = 2 + g.index(max_atoms - 1);
  PlanarMeasure P;
  auto push = [&](double x, double y) { P.atoms.push_back({{x, y}, g.uniform(0.1, 2.0), 0.0}); };
  switch (g.index(5)) {
    case 0:  // generic
      for (std::size_t i = 0; i < n; ++i) push(g.uniform(-2.0, 2.0), g.uniform(-2.0, 2.0));
      break;
    case 1: {  // collinear
      const double ox = g.uniform(-1.0, 1.0), oy = g.uniform(-1.0, 1.0), th = g.uniform(0.0, std::numbers::pi);
      for (std::size_t i = 0; i < n; ++i) {
        const double s = g.uniform(-2.0, 2.0);
        push(ox + s * std::cos(th), oy + s * std::sin(th));
      }
      break;
    }
    case 2:  // concentric rings about the origin, many radial ties
      for (std::size_t i = 0; i < n; ++i) {
        const double r = 0.25 * static_cast<double>(1 + g.index(4)), th = g.uniform(0.0, 2.0 * std::numbers::pi);
        push(r * std::cos(th), r * std::sin(th));
      }
      break;
    case 3: {  // lattice
      const double h = g.uniform(0.05, 0.7);
      for (std::size_t i = 0; i < n; ++i)
        push(h * static_cast<double>(g.index(7)) - 3 * h, h * static_cast<double>(g.index(7)) - 3 * h);
      break;
    }
    default: {
      P = circle_measure(3 + g.index(max_atoms));
      for (auto& a : P.atoms) a.cell_diam = 0.0;
      return P;
    }
  }
  P.provenance.n = P.atoms.size();
  return P;
}

Point2 random_center(Gen& g, const PlanarMeasure& P) {
  switch (g.index(4)) {
    case 0: return {0.0, 0.0};
    case 1: return P.atoms[g.index(P.atoms.size())].p;
    case 2: {  // on the line through two atoms
      const Point2 a = P.atoms.front().p, b = P.atoms.back().p;
      const double s = g.uniform(-1.0, 2.0);
      return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
    }
    default: return {g.uniform(-2.0, 2.0), g.uniform(-2.0, 2.0)};
  }
}

QuadratureConfig cheap_config() { return QuadratureConfig::with_schedule(4, 10, 1e-2); }

// ---- oracles ----

double uniform_energy_oracle(double L, double mass) {
  // E = m^2 ∫_0^{min(1,L)} -ln(s) 2(L - s)/L^2 ds, with s = e^{-τ}.
  const double tau0 = L < 1.0 ? -std::log(L) : 0.0, tau1 = 60.0;
  const std::size_t n = 400000;
  const double h = (tau1 - tau0) / static_cast<double>(n);
  CompensatedSum acc;
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = tau0 + (static_cast<double>(k) + 0.5) * h;
    const double s = std::exp(-tau);
    acc.add(tau * 2.0 * (L - s) / (L * L) * s * h);
  }
  return mass * mass * acc.value();
}

double sqrt_law_energy_oracle() {
  // pushforward of Lebesgue on [0,1] by u -> u^2, and |u^2 - v^2| = |u - v|(u + v) <= 1
  const std::size_t n = 2000;
  const double h = 1.0 / static_cast<double>(n);
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      acc.add(std::log((static_cast<double>(i + j) + 1.0) * h) * h * h);
  return uniform_energy_oracle(1.0) - acc.value();
}

double cantor_energy_oracle(int level) {
  std::vector<double> c{0.0};
  double w = 1.0;
  for (int k = 0; k < level; ++k) {
    w /= 3.0;
    std::vector<double> next;
    next.reserve(2 * c.size());
    for (double x : c) {
      next.push_back(x);
      next.push_back(x + 2.0 * w);
    }
    c.swap(next);
  }
  for (double& x : c) x += 0.5 * w;
  CompensatedSum acc;
  for (double x : c) {
    double row = 0.0;
    for (double y : c) row += std::log(2.0 + y - x);
    acc.add(row);
  }
  const double C = acc.value() / (static_cast<double>(c.size()) * static_cast<double>(c.size()));
  return 2.0 * std::log(3.0) - C;
}

double circle_energy_oracle() {
  // (1/π) ∫_0^{π/3} -ln(2 sin(θ/2)) dθ, splitting off the -ln θ singularity
  const double a = std::numbers::pi / 3.0;
  const std::size_t n = 200000;
  const double h = a / static_cast<double>(n);
  CompensatedSum acc;
  acc.add(a * (1.0 - std::log(a)));
  for (std::size_t k = 0; k < n; ++k) {
    const double th = (static_cast<double>(k) + 0.5) * h;
    acc.add(-std::log(2.0 * std::sin(0.5 * th) / th) * h);
  }
  return acc.value() / std::numbers::pi;
}

// ---- property suites ----

namespace {

using Clock = std::chrono::steady_clock;

template <class Case>
SuiteResult run_suite(const std::string& name, std::uint64_t seed, std::size_t cases, Case body) {
  SuiteResult r;
  r.name = name;
  const auto t0 = Clock::now();
  Gen g(seed);
  for (std::size_t k = 0; k < cases; ++k) {
    std::string why;
    bool ok = false;
    try {
      ok = body(g, k, why);
    } catch (const std::exception& e) {
      why = std::string("threw ") + e.what();
    }
    ++r.cases;
    if (!ok) {
      ++r.failures;
      if (r.example.empty()) r.example = "case " + std::to_string(k) + ": " + why;
    }
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

bool close_rel(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

}  // namespace

SuiteResult suite_cdf_monotonicity(std::uint64_t seed, std::size_t cases) {
  return run_suite("CDF monotonicity", seed, cases, [](Gen& g, std::size_t, std::string& why) {
    const MonotoneCDF F = random_cdf(g);
    const double lo = F.support_lo() - 1.0, hi = F.support_hi() + 1.0;
    for (int k = 0; k < 32; ++k) {
      double a = g.uniform(lo, hi), b = k % 8 == 0 ? a : g.uniform(lo, hi);
      if (b < a) std::swap(a, b);
      const double fa = eval_cdf(F, a), fb = eval_cdf(F, b);
      if (!(fa <= fb) || fa < 0.0 || fb > F.total_mass()) {
        why = fmt("F(x1) = %.17g > F(x2) = %.17g", fa, fb);
        return false;
      }
    }
    return true;
  });
}

SuiteResult suite_energy_nonnegativity(std::uint64_t seed, std::size_t cases) {
  const QuadratureConfig cfg = cheap_config();
  return run_suite("energy nonnegativity", seed, cases, [cfg](Gen& g, std::size_t k, std::string& why) {
    const MonotoneCDF F = random_cdf(g);
    const EnergyEstimate e = k % 16 == 0 && F.continuous() ? energy_one_sided(F, cfg) : energy_double_stieltjes(F, cfg);
    const bool ok = e.lower >= 0.0 && e.value >= 0.0 && e.upper >= e.lower;
    if (!ok) why = fmt("lower %.17g upper %.17g", e.lower, e.upper);
    return ok;
  });
}

SuiteResult suite_mass_scaling(std::uint64_t seed, std::size_t cases) {
  const QuadratureConfig cfg = cheap_config();
  return run_suite("c^2 mass scaling", seed, cases, [cfg](Gen& g, std::size_t k, std::string& why) {
    const MonotoneCDF F = random_continuous_cdf(g);
    const double c = k % 2 == 0 ? 0.5 : 2.0;
    const double e1 = energy_double_stieltjes(F, cfg).value;
    const double ec = energy_double_stieltjes(F.scaled(c), cfg).value;
    const bool ok = close_rel(ec, c * c * e1, 2.0 * cfg.agreement_tol);
    if (!ok) why = fmt("E(cF) = %.17g vs c^2 E(F) = %.17g", ec, c * c * e1);
    return ok;
  });
}

SuiteResult suite_translation(std::uint64_t seed, std::size_t cases) {
  const QuadratureConfig cfg = cheap_config();
  return run_suite("translation invariance", seed, cases, [cfg](Gen& g, std::size_t k, std::string& why) {
    const MonotoneCDF F = random_continuous_cdf(g);
    const double t = k % 2 == 0 ? -3.0 : 7.0;
    const double e0 = energy_double_stieltjes(F, cfg).value;
    const double et = energy_double_stieltjes(F.shifted(t), cfg).value;
    const bool ok = close_rel(et, e0, 2.0 * cfg.agreement_tol);
    if (!ok) why = fmt("E(F(. - t)) = %.17g vs E(F) = %.17g", et, e0);
    return ok;
  });
}

SuiteResult suite_engine_agreement(std::uint64_t seed, std::size_t cases) {
  const QuadratureConfig cfg = cheap_config();
  return run_suite("engine agreement", seed, cases, [cfg](Gen& g, std::size_t k, std::string& why) {
    const MonotoneCDF F =
        affine(canonical(static_cast<int>(k % 3)).scaled(g.log_uniform(0.2, 5.0)), g.log_uniform(0.25, 4.0), g.uniform(-5.0, 5.0));
    const double a = energy_double_stieltjes(F, cfg).value;
    const double b = energy_one_sided(F, cfg).value;
    const bool ok = close_rel(b, a, 2.0 * cfg.agreement_tol);
    if (!ok) why = fmt("double %.17g vs one-sided %.17g", a, b);
    return ok;
  });
}

SuiteResult suite_kernel_domination(std::uint64_t seed, std::size_t cases) {
  return run_suite("kernel domination (10 pairs per case)", seed, cases, [](Gen& g, std::size_t, std::string& why) {
    for (int k = 0; k < 10; ++k) {
      const Point2 x{g.uniform(-1.5, 1.5), g.uniform(-1.5, 1.5)};
      Point2 y{g.uniform(-1.5, 1.5), g.uniform(-1.5, 1.5)};
      Point2 c{g.uniform(-1.5, 1.5), g.uniform(-1.5, 1.5)};
      if (k % 3 == 1) {  // centre on the line through x and y
        const double s = g.uniform(-2.0, 2.0);
        c = {x.x + s * (y.x - x.x), x.y + s * (y.y - x.y)};
      } else if (k % 3 == 2) {  // y close to x
        y = {x.x + g.uniform(-1e-3, 1e-3), x.y + g.uniform(-1e-3, 1e-3)};
      }
      const double d = std::hypot(x.x - y.x, x.y - y.y);
      const double rho = std::fabs(std::hypot(x.x - c.x, x.y - c.y) - std::hypot(y.x - c.x, y.y - c.y));
      const double r_sum = std::hypot(x.x - c.x, x.y - c.y) + std::hypot(y.x - c.x, y.y - c.y);
      const bool rounding = rho > d && rho - d <= defaults::kRadialRoundingSlack * (r_sum + d);
      if (!(logplus_or_inf(d) <= logplus_or_inf(rho)) && !rounding) {
        why = fmt("k(|x-y|) %.17g > k(radial) %.17g", logplus_or_inf(d), logplus_or_inf(rho));
        return false;
      }
      // The library's check on the same pair.
      PlanarMeasure P;
      P.atoms = {{x, 1.0, 0.0}, {y, 1.0, 0.0}};
      const RadialInequalityReport rep = radial_inequality_check(P, c);
      if (!rep.holds_pointwise || !rep.lhs_le_rhs) {
        why = fmt("radial check failed: lhs %.17g rhs %.17g", rep.lhs_lower, rep.rhs_lower);
        return false;
      }
    }
    return true;
  });
}

SuiteResult suite_radial_ordering(std::uint64_t seed, std::size_t cases) {
  return run_suite("radial lhs <= rhs", seed, cases, [](Gen& g, std::size_t, std::string& why) {
    const PlanarMeasure P = random_cloud(g);
    const RadialInequalityReport rep = radial_inequality_check(P, random_center(g, P));
    if (!rep.holds_pointwise || !rep.lhs_le_rhs) why = fmt("lhs %.17g rhs %.17g", rep.lhs_lower, rep.rhs_lower);
    return rep.holds_pointwise && rep.lhs_le_rhs;
  });
}

SuiteResult suite_pushforward(std::uint64_t seed, std::size_t cases) {
  return run_suite("pushforward identity", seed, cases, [](Gen& g, std::size_t, std::string& why) {
    const PlanarMeasure P = random_cloud(g);
    const Point2 c = random_center(g, P);
    for (auto h : {TestFunction::RSquared, TestFunction::MinROne, TestFunction::One}) {
      const PushforwardReport rep = radial_pushforward_check(P, c, h);
      if (!(rep.gap <= 1e-12)) {
        why = fmt("lhs %.17g rhs %.17g", rep.lhs, rep.rhs);
        return false;
      }
    }
    return true;
  });
}

std::vector<SuiteResult> acceptance_suites(std::uint64_t seed, std::size_t cases) {
  return {suite_cdf_monotonicity(seed, cases),     suite_energy_nonnegativity(seed + 1, cases),
          suite_mass_scaling(seed + 2, cases),     suite_translation(seed + 3, cases),
          suite_engine_agreement(seed + 4, cases), suite_kernel_domination(seed + 5, cases),
          suite_radial_ordering(seed + 6, cases),  suite_pushforward(seed + 7, cases)};
}

}  // namespace lmtest
