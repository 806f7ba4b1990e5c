#include "logmeasure/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>

#include "logmeasure/criteria.hpp"
#include "logmeasure/defaults.hpp"
#include "logmeasure/error.hpp"
#include "logmeasure/parallel.hpp"

namespace logmeasure {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::FiniteConverged: return "FiniteConverged";
    case Verdict::Divergent: return "Divergent";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

void write_trace_csv(std::ostream& out, const EnergyEstimate& est) {
  out << "n,lower,upper\n";
  char buf[128];
  for (const auto& row : est.trace) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", row.n, row.lower, row.upper);
    out << buf;
  }
}

namespace {

bool converged(double lower, double upper, double tol) {
  return upper - lower <= tol * std::max(1.0, lower);
}

std::size_t log2_exact(std::size_t n) {
  std::size_t L = 0;
  while ((std::size_t{1} << L) < n) ++L;
  return L;
}

// ---------------------------------------------------------------------------
// Double-Stieltjes engine

struct Level {
  double mass = 0.0;
  std::vector<double> lo, hi, cmin, cmax;
};

// Hull edges of the finest mass cells, kept between schedule steps so that
// only the new boundaries need an inverse.
struct Boundaries {
  std::size_t L = 0;
  std::vector<double> left;   // sup{F <= kM/N}
  std::vector<double> right;  // inf{F >= (k+1)M/N}
};

void refine_boundaries(const MonotoneCDF& F, Boundaries& b, std::size_t L) {
  const double M = F.total_mass();
  const std::size_t N = std::size_t{1} << L;
  const std::size_t stride = b.left.empty() ? 0 : std::size_t{1} << (L - b.L);
  std::vector<double> left(N), right(N);
  parallel_for(N, [&](std::size_t k) {
    if (stride && k % stride == 0)
      left[k] = b.left[k / stride];
    else
      left[k] = upper_inverse(F, M * (static_cast<double>(k) / static_cast<double>(N)));
    if (stride && (k + 1) % stride == 0)
      right[k] = b.right[(k + 1) / stride - 1];
    else
      right[k] = k + 1 == N ? generalized_inverse(F, M)
                            : generalized_inverse(F, M * (static_cast<double>(k + 1) / static_cast<double>(N)));
  });
  b.L = L;
  b.left = std::move(left);
  b.right = std::move(right);
}

std::vector<Level> build_pyramid(const MonotoneCDF& F, const Boundaries& b) {
  const std::size_t L = b.L;
  const std::size_t N = std::size_t{1} << L;
  const double M = F.total_mass();
  const int q = defaults::kCentroidSamples;
  std::vector<Level> levels(L + 1);
  Level& fine = levels[L];
  fine.mass = M / static_cast<double>(N);
  fine.lo = b.left;
  fine.hi = b.right;
  fine.cmin.resize(N);
  fine.cmax.resize(N);
  parallel_for(N, [&](std::size_t k) {
    const double a = M * (static_cast<double>(k) / static_cast<double>(N));
    const double top = k + 1 == N ? M : M * (static_cast<double>(k + 1) / static_cast<double>(N));
    const double m = top - a;
    const double lo = fine.lo[k], hi = std::max(fine.hi[k], fine.lo[k]);
    const double dx = (hi - lo) / q;
    // G(x) = mass of the cell in [lo, x]; centroid = hi - ∫G/m.
    double below = 0.0, above = 0.0, prev = 0.0;
    for (int i = 1; i <= q; ++i) {
      const double g = i == q ? m : std::clamp(F(lo + i * dx), a, top) - a;
      below += prev * dx;
      above += g * dx;
      prev = g;
    }
    if (m > 0.0) {
      fine.cmin[k] = std::clamp(hi - above / m, lo, hi);
      fine.cmax[k] = std::clamp(hi - below / m, lo, hi);
    } else {
      fine.cmin[k] = lo;
      fine.cmax[k] = hi;
    }
  });
  for (std::size_t l = L; l-- > 0;) {
    const Level& c = levels[l + 1];
    Level& p = levels[l];
    const std::size_t n = std::size_t{1} << l;
    p.mass = M / static_cast<double>(n);
    p.lo.resize(n);
    p.hi.resize(n);
    p.cmin.resize(n);
    p.cmax.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      p.lo[k] = c.lo[2 * k];
      p.hi[k] = std::max(c.hi[2 * k + 1], c.hi[2 * k]);
      p.cmin[k] = 0.5 * (c.cmin[2 * k] + c.cmin[2 * k + 1]);
      p.cmax[k] = 0.5 * (c.cmax[2 * k] + c.cmax[2 * k + 1]);
    }
  }
  return levels;
}

struct PairTask {
  std::uint32_t level;
  std::uint32_t i;
  std::uint32_t j;
};

// Upper bound for ∫ log⁺(1/|x-y|) dμ_J(y) given μ_J <= m and μ(B(x,r)) <= K(2r)^α.
double holder_inner_bound(double m, double K, double alpha) {
  const double A = K * std::pow(2.0, alpha);
  if (m >= A) return A / alpha;
  return m * (std::log(A / m) + 1.0) / alpha;
}

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
};

Bracket bracket_at_level(const std::vector<Level>& levels, double eta, DiagonalMode mode,
                         const HolderFit* fit) {
  const std::uint32_t L = static_cast<std::uint32_t>(levels.size() - 1);
  CompensatedSum lower, upper;
  std::vector<PairTask> stack{{0, 0, 0}};
  auto singular_upper = [&](double m, double mult, double span) {
    if (mode == DiagonalMode::OneSidedFallback && fit)
      return mult * m * holder_inner_bound(m, fit->K, fit->alpha);
    return mult * m * m * (logplus_or_inf(span) + 1.5);
  };
  while (!stack.empty()) {
    const PairTask t = stack.back();
    stack.pop_back();
    const Level& lv = levels[t.level];
    const double m = lv.mass;
    const bool leaf_level = t.level == L;
    if (t.i == t.j) {
      if (!leaf_level) {
        const std::uint32_t c = 2 * t.i;
        stack.push_back({t.level + 1, c, c});
        stack.push_back({t.level + 1, c, c + 1});
        stack.push_back({t.level + 1, c + 1, c + 1});
        continue;
      }
      const double w = lv.hi[t.i] - lv.lo[t.i];
      const double lo_term = m * m * logplus_or_inf(w);
      lower.add(lo_term);
      upper.add(std::max(lo_term, singular_upper(m, 1.0, w)));
      continue;
    }
    const double a = lv.lo[t.j] - lv.hi[t.i];
    if (a >= 1.0) continue;
    const double b = lv.hi[t.j] - lv.lo[t.i];
    const double amin = std::max(a, 0.0);
    const double d_lo = std::clamp(lv.cmin[t.j] - lv.cmax[t.i], amin, b);
    const double d_hi = std::clamp(lv.cmax[t.j] - lv.cmin[t.i], amin, b);
    const double mm2 = 2.0 * m * m;
    auto push_children = [&] {
      const std::uint32_t ci = 2 * t.i, cj = 2 * t.j;
      stack.push_back({t.level + 1, ci, cj});
      stack.push_back({t.level + 1, ci, cj + 1});
      stack.push_back({t.level + 1, ci + 1, cj});
      stack.push_back({t.level + 1, ci + 1, cj + 1});
    };
    if (!(a > 0.0)) {
      if (!leaf_level) {
        push_children();
        continue;
      }
      const double lo_term = mm2 * logplus_or_inf(a < 0.0 ? b : d_hi);
      lower.add(lo_term);
      upper.add(std::max(lo_term, singular_upper(m, 2.0, b)));
      continue;
    }
    const double ga = logplus_or_inf(a), gb = logplus_or_inf(b);
    auto chord = [&](double x) { return b > a ? ga + (gb - ga) * (x - a) / (b - a) : ga; };
    const double d_mid = 0.5 * (d_lo + d_hi);
    if (!leaf_level && chord(d_mid) - logplus_or_inf(d_mid) > eta) {
      push_children();
      continue;
    }
    lower.add(mm2 * logplus_or_inf(d_hi));
    upper.add(mm2 * chord(d_lo));
  }
  return {lower.value(), upper.value()};
}

EnergyEstimate atom_divergence() {
  EnergyEstimate est;
  est.value = est.lower = est.upper = kInf;
  est.verdict = Verdict::Divergent;
  est.trace.push_back({1, kInf, kInf});
  return est;
}

}  // namespace

EnergyEstimate energy_double_stieltjes(const MonotoneCDF& F, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(F.total_mass() > 0.0)) throw Error(ErrorCode::ZeroMass, "energy of a zero measure");
  // A jump of size m contributes at least m²·log⁺(1/0) = +∞.
  if (!F.atoms().empty()) return atom_divergence();

  std::optional<HolderFit> fit;
  if (cfg.diagonal_mode == DiagonalMode::OneSidedFallback) fit = fit_holder(F);

  const double eta = defaults::kPairTolFraction * cfg.agreement_tol;
  EnergyEstimate est;
  Boundaries bounds;
  double prev_lower = -kInf, min_upper = kInf;
  for (std::size_t n : cfg.depth_schedule) {
    refine_boundaries(F, bounds, log2_exact(n));
    const auto levels = build_pyramid(F, bounds);
    const Bracket br = bracket_at_level(levels, eta, cfg.diagonal_mode, fit ? &*fit : nullptr);
    est.trace.push_back({n, br.lower, br.upper});
    est.lower = br.lower;
    est.upper = br.upper;
    if (br.lower > cfg.divergence_budget) {
      est.verdict = Verdict::Divergent;
      break;
    }
    // The diagonal closure is only an upper bound for cells that look flat
    // at the finest level. A lower sum above an earlier upper bound, or one
    // still moving by more than the tolerance, means it did not hold.
    const bool consistent = br.lower <= min_upper;
    const bool settled = br.lower - prev_lower <= cfg.agreement_tol * std::max(1.0, br.lower);
    if (consistent && settled && converged(br.lower, br.upper, cfg.agreement_tol)) {
      est.verdict = Verdict::FiniteConverged;
      break;
    }
    prev_lower = br.lower;
    min_upper = std::min(min_upper, br.upper);
  }
  est.value = std::isfinite(est.upper) ? 0.5 * (est.lower + est.upper) : est.lower;
  return est;
}

// ---------------------------------------------------------------------------
// One-sided engine

namespace {

struct InnerResult {
  double value = 0.0;
  double coarse = 0.0;  // same rule at twice the step
};

InnerResult inner_integral(const MonotoneCDF& F, double x, int per_octave, int octaves) {
  const int S = per_octave * octaves;
  const double h = std::log(2.0) / per_octave;
  // t = ln(1/y); the integrand F(x+y) - F(x-y) is nonincreasing in t.
  CompensatedSum fine, coarse;
  const double v0 = F(x + 1.0) - F(x - 1.0);
  double prev = v0, prev_even = v0;
  for (int i = 1; i <= S; ++i) {
    const double y = std::exp2(-static_cast<double>(i) / per_octave);
    const double v = F(x + y) - F(x - y);
    fine.add(0.5 * (prev + v) * h);
    if (i % 2 == 0) {
      coarse.add((prev_even + v) * h);
      prev_even = v;
    }
    prev = v;
  }
  return {fine.value(), coarse.value()};
}

}  // namespace

EnergyEstimate energy_one_sided(const MonotoneCDF& F, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!F.continuous()) throw Error(ErrorCode::DiscontinuousInput, "one-sided engine needs a continuous CDF");
  const double M = F.total_mass();
  if (!(M > 0.0)) throw Error(ErrorCode::ZeroMass, "energy of a zero measure");

  int per_octave = defaults::kOneSidedStepsPerOctave;
  const int octaves = defaults::kOneSidedOctaves;
  // ∫₀^{y_min} (F(x+y) - F(x-y))/y dy <= K(2 y_min)^α / α.
  const HolderFit fit = fit_holder(F);
  const double y_min = std::ldexp(1.0, -octaves);
  const double tail = M * fit.K * std::pow(2.0 * y_min, fit.alpha) / fit.alpha;

  EnergyEstimate est;
  double prev_value = kInf;
  double run_lo = 0.0, run_hi = kInf;
  for (std::size_t n : cfg.depth_schedule) {
    std::vector<double> vals(n), diffs(n);
    const double w = M / static_cast<double>(n);
    parallel_for(n, [&](std::size_t k) {
      const double x = generalized_inverse(F, M * ((static_cast<double>(k) + 0.5) / static_cast<double>(n)));
      const InnerResult r = inner_integral(F, x, per_octave, octaves);
      vals[k] = w * r.value;
      diffs[k] = w * (r.value - r.coarse);
    });
    const double value = compensated_sum(vals);
    // Step-halving difference of the whole double sum, not per point.
    const double inner_err = std::fabs(compensated_sum(diffs)) + tail;
    const double outer_err = std::isfinite(prev_value) ? std::fabs(value - prev_value) : kInf;
    prev_value = value;
    const double err = inner_err + outer_err;
    run_lo = std::max(run_lo, value - err);
    run_hi = std::min(run_hi, value + err);
    const double lo = std::max(0.0, std::min(run_lo, value));
    const double hi = std::max(run_hi, value);
    est.trace.push_back({n, lo, hi});
    est.lower = lo;
    est.upper = hi;
    est.value = value;
    if (lo > cfg.divergence_budget) {
      est.verdict = Verdict::Divergent;
      break;
    }
    if (std::isfinite(hi) && converged(lo, hi, cfg.agreement_tol)) {
      est.verdict = Verdict::FiniteConverged;
      break;
    }
    // Inner rule dominating: refine it rather than the outer partition.
    if (inner_err > outer_err && per_octave < 8 * defaults::kOneSidedStepsPerOctave) per_octave *= 2;
  }
  if (std::isfinite(est.upper)) est.value = 0.5 * (est.lower + est.upper);
  return est;
}

// ---------------------------------------------------------------------------
// Density engine

namespace {

// Ψ'' = log⁺(1/u), Ψ(0) = Ψ'(0) = 0.
double psi(double u) {
  if (u <= 0.0) return 0.0;
  if (u <= 1.0) return -0.5 * u * u * std::log(u) + 0.75 * u * u;
  return 0.75 + (u - 1.0);
}

// Mean of log⁺(1/(y-x)) over x in [p, p+dp], y in [r, r+dr], r >= p+dp.
double cross_mean(double p, double dp, double r, double dr) {
  const double q = p + dp, s = r + dr;
  const double gap = r - q;
  if (gap >= 1.0) return 0.0;
  const double D = (r + 0.5 * dr) - (p + 0.5 * dp);
  if (std::max(dp, dr) <= 1e-3 * gap || dp == 0.0 || dr == 0.0) {
    // Taylor average about the centre distance; the kink at 1 is ignored
    // when the whole distance range is that narrow.
    if (D >= 1.0) return 0.0;
    return -std::log(D) + (dp * dp + dr * dr) / (24.0 * D * D);
  }
  const double v = psi(s - p) - psi(r - p) - psi(s - q) + psi(r - q);
  return std::max(0.0, v / (dp * dr));
}

}  // namespace

SeriesReport step_lower_bound(const StepDensity& f) {
  validate(f);
  SeriesReport rep;
  std::vector<double> logs;
  rep.terms.reserve(f.blocks.size());
  CompensatedSum sum;
  for (const Block& b : f.blocks) {
    const double ln_inv_d = -b.d_log;
    const double l = ln_inv_d > 0.0 ? 2.0 * b.mass_log + std::log(ln_inv_d) : -kInf;
    const double term = std::exp(l);
    rep.terms.push_back(term);
    logs.push_back(l);
    sum.add(term);
  }
  rep.partial_sum = sum.value();
  rep.diverging = series_diverges(logs, defaults::kGrowthWindow);
  return rep;
}

EnergyEstimate energy_density(const StepDensity& f, const QuadratureConfig& cfg) {
  cfg.validate();
  validate(f);
  std::vector<std::size_t> order(f.blocks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return f.blocks[x].a < f.blocks[y].a; });

  std::vector<double> terms;
  EnergyEstimate est;
  CompensatedSum running;
  // Trace in construction order: row n holds the energy of the first n blocks.
  for (std::size_t n = 0; n < f.blocks.size(); ++n) {
    const Block& bn = f.blocks[n];
    double row = std::exp(2.0 * bn.mass_log) * (1.5 - bn.d_log);
    terms.push_back(row);
    for (std::size_t m = 0; m < n; ++m) {
      const Block* lo = &f.blocks[m];
      const Block* hi = &bn;
      if (hi->a < lo->a) std::swap(lo, hi);
      const double mean = cross_mean(lo->a, lo->width(), hi->a, hi->width());
      if (mean == 0.0) continue;
      const double t = 2.0 * std::exp(lo->mass_log + hi->mass_log) * mean;
      terms.push_back(t);
      row += t;
    }
    running.add(row);
    est.trace.push_back({n + 1, running.value(), running.value()});
  }
  est.value = ordered_sum(std::move(terms));
  est.lower = est.upper = est.value;
  const SeriesReport series = step_lower_bound(f);
  if (est.lower > cfg.divergence_budget || series.diverging) {
    est.verdict = Verdict::Divergent;
    est.upper = kInf;
  } else {
    est.verdict = Verdict::FiniteConverged;
  }
  return est;
}

double holder_energy_bound(double K, double alpha, double mass) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::BadExponent, "Hölder exponent must lie in (0, 1]");
  if (!(K > 0.0)) throw Error(ErrorCode::BadParams, "Hölder constant must be positive");
  if (!(mass >= 0.0)) throw Error(ErrorCode::BadParams, "mass must be nonnegative");
  return 2.0 * (K / alpha) * mass;
}

}  // namespace logmeasure
