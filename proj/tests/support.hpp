#pragma once

// Shared test code: random generators, independent oracles and the
// randomized property suites (used by the unit tests and the acceptance run).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "logmeasure/energy.hpp"
#include "logmeasure/measures.hpp"
#include "logmeasure/planar.hpp"

namespace lmtest {

using namespace logmeasure;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  // log-uniform on [a, b], a > 0
  double log_uniform(double a, double b);
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return index(2) == 1; }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Pushforward of F under x -> s x + t (s > 0).
MonotoneCDF affine(const MonotoneCDF& F, double s, double t);

/// 0: uniform, 1: power law 1/2, 2: standard Cantor K = 3.
MonotoneCDF canonical(int which);

/// Random continuous CDF from several families, with random mass and affine map.
MonotoneCDF random_continuous_cdf(Gen& g);
/// As above, sometimes with atoms (tables with jumps, point masses).
MonotoneCDF random_cdf(Gen& g);

/// Random planar cloud: generic, collinear, concentric or on a lattice.
PlanarMeasure random_cloud(Gen& g, std::size_t max_atoms = 24);
Point2 random_center(Gen& g, const PlanarMeasure& P);

/// Fast schedule 2^4..2^10 at relative tolerance 1e-2.
QuadratureConfig cheap_config();

// ---- oracles (independent of the library's quadrature) ----

/// Energy of `mass` spread uniformly on an interval of length L, by dense
/// midpoint quadrature over the distance distribution in t = -ln s.
double uniform_energy_oracle(double L, double mass = 1.0);
/// F(x) = sqrt(x) on [0,1]: 3/2 minus a dense midpoint value of the double
/// integral of ln(u + v) over the unit square.
double sqrt_law_energy_oracle();
/// Middle-thirds Cantor measure via self-similarity: 2 ln 3 - C with C the
/// (smooth) mean of ln(2 + y - x), from 2^level interval centres.
double cantor_energy_oracle(int level = 11);
/// Uniform probability on the unit circle, by dense midpoint quadrature in
/// the angle.
double circle_energy_oracle();

// ---- property suites ----

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string example;  // first failing case
  double seconds = 0.0;
  bool passed() const { return cases > 0 && failures == 0; }
};

SuiteResult suite_cdf_monotonicity(std::uint64_t seed, std::size_t cases);
SuiteResult suite_energy_nonnegativity(std::uint64_t seed, std::size_t cases);
SuiteResult suite_mass_scaling(std::uint64_t seed, std::size_t cases);
SuiteResult suite_translation(std::uint64_t seed, std::size_t cases);
SuiteResult suite_engine_agreement(std::uint64_t seed, std::size_t cases);
SuiteResult suite_kernel_domination(std::uint64_t seed, std::size_t cases);
SuiteResult suite_radial_ordering(std::uint64_t seed, std::size_t cases);
SuiteResult suite_pushforward(std::uint64_t seed, std::size_t cases);

/// Everything in the acceptance list, each with `cases` random cases.
std::vector<SuiteResult> acceptance_suites(std::uint64_t seed, std::size_t cases);

}  // namespace lmtest
