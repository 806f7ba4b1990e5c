#include <doctest.h>

#include <cmath>

#include "logmeasure/error.hpp"
#include "logmeasure/fractal.hpp"
#include "logmeasure/measures.hpp"
#include "logmeasure/numeric.hpp"
#include "support.hpp"

using namespace logmeasure;
using doctest::Approx;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::MalformedInput;
}

const MonotoneCDF& cantor3() {
  static const MonotoneCDF F = cantor_cdf(CantorSpec::standard(3.0));
  return F;
}

}  // namespace

TEST_CASE("eval_cdf on uniform and Cantor") {
  const auto U = MonotoneCDF::uniform();
  CHECK(eval_cdf(U, 0.5) == 0.5);
  CHECK(eval_cdf(U, -1.0) == 0.0);
  CHECK(eval_cdf(U, 3.0) == 1.0);
  CHECK(eval_cdf(cantor3(), 1.0 / 3.0) == Approx(0.5).epsilon(1e-9));
  CHECK(eval_cdf(cantor3(), 0.5) == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("interval_mass") {
  const auto U = MonotoneCDF::uniform();
  CHECK(interval_mass(U, 0.25, 0.75) == 0.5);
  CHECK(interval_mass(U, -5.0, -4.0) == 0.0);
  CHECK(interval_mass(cantor3(), 1.0 / 3.0, 2.0 / 3.0) == Approx(0.0).epsilon(1e-9));
  CHECK(code_of([&] { interval_mass(U, 1.0, 0.0); }) == ErrorCode::MalformedInterval);
}

TEST_CASE("generalized_inverse") {
  const auto U = MonotoneCDF::uniform();
  CHECK(generalized_inverse(U, 0.5) == Approx(0.5));
  CHECK(generalized_inverse(U, 0.0) == 0.0);
  // infimum of the plateau at level 1/2
  CHECK(generalized_inverse(cantor3(), 0.5) == Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(upper_inverse(cantor3(), 0.5) == Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(code_of([&] { generalized_inverse(U, -0.1); }) == ErrorCode::OutOfRange);
  CHECK(code_of([&] { generalized_inverse(U, 1.1); }) == ErrorCode::OutOfRange);
}

TEST_CASE("mass_uniform_partition examples") {
  const auto U = MonotoneCDF::uniform();
  const auto P4 = mass_uniform_partition(U, 4);
  REQUIRE(P4.size() == 4);
  for (const auto& c : P4) {
    CHECK(c.hi - c.lo == Approx(0.25));
    CHECK(c.mass == Approx(0.25));
  }
  const auto P1 = mass_uniform_partition(U, 1);
  REQUIRE(P1.size() == 1);
  CHECK(P1[0].lo == 0.0);
  CHECK(P1[0].hi == 1.0);
  CHECK(P1[0].mass == 1.0);
  const auto C2 = mass_uniform_partition(cantor3(), 2);
  REQUIRE(C2.size() == 2);
  CHECK(C2[0].lo == Approx(0.0));
  CHECK(C2[0].hi == Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(C2[1].hi == Approx(1.0));
  CHECK(C2[0].mass == Approx(0.5).epsilon(1e-9));
  CHECK(C2[1].mass == Approx(0.5).epsilon(1e-9));
  CHECK(code_of([] { mass_uniform_partition(MonotoneCDF::uniform(0.0, 1.0, 0.0), 4); }) == ErrorCode::ZeroMass);
}

TEST_CASE("step densities") {
  StepDensity one;
  one.blocks.push_back(StepDensity::block_from_h(0.0, 0.0, std::log(2.0)));
  const auto F = cdf_from_step_density(one);
  CHECK(eval_cdf(F, 1.0) == Approx(2.0));
  CHECK(eval_cdf(F, 0.5) == Approx(1.0));

  const auto P = cdf_from_step_density(StepDensity::l1_counterexample(20));
  CHECK(P.total_mass() == Approx(1.0 - std::ldexp(1.0, -20)).epsilon(1e-14));

  const auto Z = cdf_from_step_density(StepDensity{});
  CHECK(Z.total_mass() == 0.0);

  StepDensity bad;
  bad.blocks.push_back(StepDensity::block_from_h(0.0, std::log(0.5), 1.0));
  bad.blocks.push_back(StepDensity::block_from_h(0.25, std::log(0.5), 1.0));
  CHECK(code_of([&] { cdf_from_step_density(bad); }) == ErrorCode::OverlapError);
}

TEST_CASE("step density slope matches h") {
  StepDensity f;
  double a = 0.0;
  for (int n = 1; n <= 5; ++n) {
    const double d = 0.1 / n, h = 1.5 * n;
    f.blocks.push_back(StepDensity::block_from_h(a, std::log(d), std::log(h)));
    a += d + 0.05;
  }
  const auto F = cdf_from_step_density(f);
  for (const auto& b : f.blocks) {
    const double w = b.width(), x1 = b.a + 0.25 * w, x2 = b.a + 0.75 * w;
    const double slope = (eval_cdf(F, x2) - eval_cdf(F, x1)) / (x2 - x1);
    CHECK(slope == Approx(std::exp(b.h_log())).epsilon(1e-8));
  }
}

TEST_CASE("partition and inverse consistency on random CDFs") {
  lmtest::Gen g(7);
  for (int k = 0; k < 200; ++k) {
    const MonotoneCDF F = lmtest::random_cdf(g);
    const double M = F.total_mass();
    const auto P = mass_uniform_partition(F, 1 + g.index(64));
    CompensatedSum s;
    for (std::size_t i = 0; i < P.size(); ++i) {
      s.add(P[i].mass);
      CHECK(P[i].lo <= P[i].hi);
      if (i > 0) CHECK(P[i - 1].hi <= P[i].lo);
    }
    CHECK(std::fabs(s.value() - M) <= 1e-10 * M);
    for (int j = 0; j <= 64; ++j) {
      const double m = M * j / 64.0;
      CHECK(eval_cdf(F, generalized_inverse(F, m)) >= m - 1e-10 * M);
    }
  }
}

TEST_CASE("affine transforms keep mass") {
  const auto F = MonotoneCDF::power_law(1.0, 0.5, 1.0);
  CHECK(F.scaled(3.0).total_mass() == Approx(3.0));
  CHECK(F.shifted(2.0).support_lo() == 2.0);
  CHECK(eval_cdf(F.shifted(2.0), 2.25) == Approx(0.5));
  CHECK(code_of([&] { F.scaled(0.0); }) == ErrorCode::BadParams);
}
