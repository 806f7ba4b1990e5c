#include <doctest.h>

#include <cmath>

#include "logmeasure/error.hpp"
#include "logmeasure/fractal.hpp"
#include "logmeasure/io.hpp"
#include "support.hpp"

using namespace logmeasure;
using doctest::Approx;

namespace {

Json random_document(lmtest::Gen& g) {
  Json doc;
  switch (g.index(6)) {
    case 0: {
      const double lo = g.uniform(-2.0, 2.0);
      doc = {{"kind", "uniform"}, {"params", {{"lo", lo}, {"hi", lo + g.uniform(0.1, 3.0)}, {"mass", g.uniform(0.1, 4.0)}}}};
      break;
    }
    case 1:
      doc = {{"kind", "power_law"}, {"params", {{"c", g.uniform(0.1, 3.0)}, {"alpha", g.uniform(0.1, 1.0)}, {"R", g.uniform(0.2, 3.0)}}}};
      break;
    case 2:
      doc = {{"kind", "cantor"}, {"params", {{"family", "standardK"}, {"K", g.uniform(2.5, 9.0)}, {"depth", 30}}}};
      break;
    case 3:
      doc = {{"kind", "cantor"}, {"params", {{"family", "general"}, {"beta", g.uniform(1.2, 4.0)}, {"depth", 20}}}};
      break;
    case 4: {
      Json pts = Json::array();
      double x = g.uniform(-1.0, 1.0), m = 0.0;
      pts.push_back({x, 0.0});
      for (std::size_t k = 0; k < 2 + g.index(6); ++k) {
        x += g.uniform(0.01, 0.5);
        m += g.uniform(0.01, 0.5);
        pts.push_back({x, m});
      }
      doc = {{"kind", "table"}, {"params", {{"points", pts}}}};
      break;
    }
    default: doc = {{"kind", "arcsin"}}; break;
  }
  if (g.coin()) doc["scale"] = g.uniform(0.2, 5.0);
  if (g.coin()) doc["shift"] = g.uniform(-5.0, 5.0);
  return doc;
}

}  // namespace

TEST_CASE("measure JSON round trip preserves eval_cdf") {
  lmtest::Gen g(17);
  for (int k = 0; k < 1000; ++k) {
    const Json doc = random_document(g);
    const MonotoneCDF F = cdf_from_json(doc);
    const MonotoneCDF G = cdf_from_json(Json::parse(to_json(F).dump()));
    for (int j = 0; j < 16; ++j) {
      const double x = g.uniform(F.support_lo() - 0.5, F.support_hi() + 0.5);
      REQUIRE(std::fabs(F(x) - G(x)) <= 1e-12);
    }
  }
}

TEST_CASE("step density and planar round trips") {
  const auto f = StepDensity::l1_counterexample(40);
  const auto f2 = step_density_from_json(Json::parse(to_json(f).dump()));
  REQUIRE(f2.blocks.size() == f.blocks.size());
  for (std::size_t i = 0; i < f.blocks.size(); ++i) {
    CHECK(f2.blocks[i].a == f.blocks[i].a);
    CHECK(f2.blocks[i].d_log == f.blocks[i].d_log);
    CHECK(f2.blocks[i].mass_log == f.blocks[i].mass_log);
  }
  const auto P = circle_measure(16);
  const auto Q = planar_from_json(Json::parse(to_json(P).dump()));
  REQUIRE(Q.atoms.size() == 16);
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(Q.atoms[i].p.x == P.atoms[i].p.x);
    CHECK(Q.atoms[i].w == P.atoms[i].w);
    CHECK(Q.atoms[i].cell_diam == P.atoms[i].cell_diam);
  }
  CHECK(Q.provenance.kind == ProvenanceKind::CircleUniform);
}

TEST_CASE("estimates serialize infinities as strings") {
  const auto e = energy_double_stieltjes(MonotoneCDF::point_mass(0.0));
  const Json j = to_json(e);
  CHECK(j.at("verdict") == "Divergent");
  CHECK(j.at("upper") == "+inf");
  CHECK(std::isinf(number_from_json(j.at("lower"))));
  CHECK(to_json(e).dump() == j.dump());  // deterministic
}

TEST_CASE("malformed documents") {
  auto code = [](const Json& doc) {
    try {
      measure_from_json(doc);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::OutOfRange;
  };
  CHECK(code(Json::object()) == ErrorCode::MalformedInput);
  CHECK(code({{"kind", "nope"}}) == ErrorCode::MalformedInput);
  CHECK(code({{"kind", "power_law"}, {"params", Json::object()}}) == ErrorCode::MalformedInput);
  CHECK(code({{"kind", "table"}, {"params", {{"points", {{0.0, 1.0, 2.0}}}}}}) == ErrorCode::MalformedInput);
  CHECK(code({{"points", {{0.0, 0.0}}}}) == ErrorCode::MalformedInput);
  CHECK(code({{"kind", "step_density"}, {"params", {{"preset", "l1_counterexample"}}}, {"shift", 1.0}}) ==
        ErrorCode::MalformedInput);
  CHECK_THROWS_AS(read_json_file("/nonexistent/x.json"), Error);
}
