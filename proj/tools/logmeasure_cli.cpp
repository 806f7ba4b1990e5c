// logmeasure: command-line front end for the energy, criteria, fractal and
// planar computations.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "logmeasure/criteria.hpp"
#include "logmeasure/energy.hpp"
#include "logmeasure/error.hpp"
#include "logmeasure/fractal.hpp"
#include "logmeasure/io.hpp"
#include "logmeasure/planar.hpp"
#include "logmeasure/scenarios.hpp"

namespace fs = std::filesystem;
using namespace logmeasure;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMalformed = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitAcceptance = 3;

struct Common {
  std::string measure;
  std::string config;
  std::string out_dir;
  std::optional<std::size_t> depth;
  std::optional<double> tol;
};

QuadratureConfig make_config(const Common& c) {
  QuadratureConfig cfg;
  if (!c.config.empty()) {
    const Json doc = read_json_file(c.config);
    try {
      if (doc.contains("depth_schedule")) cfg.depth_schedule = doc.at("depth_schedule").get<std::vector<std::size_t>>();
      if (doc.contains("divergence_budget")) cfg.divergence_budget = number_from_json(doc.at("divergence_budget"));
      if (doc.contains("agreement_tol")) cfg.agreement_tol = number_from_json(doc.at("agreement_tol"));
      if (doc.contains("diagonal_mode")) {
        const auto m = doc.at("diagonal_mode").get<std::string>();
        if (m == "BracketRefine")
          cfg.diagonal_mode = DiagonalMode::BracketRefine;
        else if (m == "OneSidedFallback")
          cfg.diagonal_mode = DiagonalMode::OneSidedFallback;
        else
          throw Error(ErrorCode::MalformedInput, "unknown diagonal_mode '" + m + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedInput, std::string("config: ") + e.what());
    }
  }
  if (c.tol) cfg.agreement_tol = *c.tol;
  if (c.depth) {
    cfg.depth_schedule.clear();
    for (std::size_t e = std::min<std::size_t>(defaults::kScheduleMinExp, *c.depth); e <= *c.depth; ++e)
      cfg.depth_schedule.push_back(std::size_t{1} << e);
  }
  cfg.validate();
  return cfg;
}

void emit(const Json& doc, const std::string& out_dir, const std::string& file) {
  std::cout << doc.dump(2) << '\n';
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_json_file((fs::path(out_dir) / file).string(), doc);
  }
}

int run_energy(const Common& c, const std::string& engine) {
  const QuadratureConfig cfg = make_config(c);
  const LoadedMeasure m = load_measure_file(c.measure);
  std::string eng = engine;
  if (eng.empty()) eng = m.planar ? "planar" : m.density ? "density" : "double";
  EnergyEstimate est;
  if (eng == "planar") {
    if (!m.planar) throw Error(ErrorCode::MalformedInput, "planar engine needs a point cloud");
    est = energy_planar(*m.planar, cfg);
  } else if (eng == "density") {
    if (!m.density) throw Error(ErrorCode::MalformedInput, "density engine needs a step_density");
    est = energy_density(*m.density, cfg);
  } else {
    if (!m.cdf) throw Error(ErrorCode::MalformedInput, "line engines need a line measure");
    est = eng == "one-sided" ? energy_one_sided(*m.cdf, cfg) : energy_double_stieltjes(*m.cdf, cfg);
  }
  emit(to_json(est), c.out_dir, "energy.json");
  if (!c.out_dir.empty()) {
    std::ofstream out(fs::path(c.out_dir) / "trace.csv");
    write_trace_csv(out, est);
  }
  return est.verdict == Verdict::Inconclusive ? kExitInconclusive : kExitOk;
}

int run_classify(const Common& c) {
  const QuadratureConfig cfg = make_config(c);
  const LoadedMeasure m = load_measure_file(c.measure);
  MembershipVerdict v;
  if (m.density)
    v = classify_membership(*m.density, cfg);
  else if (m.cdf)
    v = classify_membership(*m.cdf, cfg);
  else
    throw Error(ErrorCode::MalformedInput, "classify needs a line measure or step density");
  emit(to_json(v), c.out_dir, "membership.json");
  return v.verdict == MembershipTag::Unknown ? kExitInconclusive : kExitOk;
}

CantorSpec cantor_spec(std::optional<double> K, std::optional<double> beta, std::size_t depth) {
  if (K && beta) throw Error(ErrorCode::BadParams, "give either --K or --beta");
  return beta ? CantorSpec::general(*beta, depth) : CantorSpec::standard(K.value_or(3.0), depth);
}

int run_cantor(const Common& c, std::optional<double> K, std::optional<double> beta, std::size_t level) {
  const CantorSpec spec = cantor_spec(K, beta, std::max<std::size_t>(defaults::kCantorEvalDepth, level));
  const IntervalList list = cantor_intervals(spec, level);
  Json summary = {{"family", spec.family() == CantorFamily::StandardK ? "standardK" : "general"},
                  {"level", level},
                  {"intervals", list.intervals.size()},
                  {"width_log", spec.width_log(level)}};
  if (!c.out_dir.empty()) {
    fs::create_directories(c.out_dir);
    std::ofstream out(fs::path(c.out_dir) / "intervals.csv");
    write_intervals_csv(out, list);
    std::cout << summary.dump(2) << '\n';
  } else {
    write_intervals_csv(std::cout, list);
  }
  return kExitOk;
}

int run_dimension(const Common& c, std::optional<double> K, std::optional<double> beta, std::size_t n_min,
                  std::size_t n_max) {
  const CantorSpec spec = cantor_spec(K, beta, std::max<std::size_t>(defaults::kCantorEvalDepth, n_max));
  const DimensionEstimate e = box_counting_dimension(spec, n_min, n_max);
  Json pointwise = Json::array();
  for (double v : e.pointwise) pointwise.push_back(v);
  emit({{"slope", e.slope}, {"residual", e.residual}, {"pointwise", pointwise}}, c.out_dir, "dimension.json");
  return kExitOk;
}

Point2 parse_point(const std::vector<double>& v) {
  if (v.size() != 2) throw Error(ErrorCode::BadParams, "a point needs two coordinates");
  return {v[0], v[1]};
}

int run_radial(const Common& c, const std::vector<double>& centre) {
  const LoadedMeasure m = load_measure_file(c.measure);
  if (!m.planar) throw Error(ErrorCode::MalformedInput, "radial needs a point cloud");
  const Point2 x0 = parse_point(centre);
  const RadialProfile G = radial_cdf(*m.planar, x0);
  const RadialInequalityReport ineq = radial_inequality_check(*m.planar, x0);
  Json push = Json::object();
  for (auto [name, h] : {std::pair{"r2", TestFunction::RSquared}, {"min_r_1", TestFunction::MinROne}, {"one", TestFunction::One}}) {
    const PushforwardReport p = radial_pushforward_check(*m.planar, x0, h);
    push[name] = {{"lhs", p.lhs}, {"rhs", p.rhs}, {"gap", p.gap}};
  }
  Json doc = {{"center", {x0.x, x0.y}},
              {"jumps", G.G.atoms().size()},
              {"pushforward", push},
              {"inequality",
               {{"lhs_lower", number_json(ineq.lhs_lower)},
                {"rhs_lower", number_json(ineq.rhs_lower)},
                {"holds_pointwise", ineq.holds_pointwise},
                {"lhs_le_rhs", ineq.lhs_le_rhs}}}};
  emit(doc, c.out_dir, "radial.json");
  if (!c.out_dir.empty()) {
    std::ofstream out(fs::path(c.out_dir) / "radial_cdf.csv");
    out << "r,G\n";
    char buf[96];
    for (const Atom& a : G.G.atoms()) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", a.x, G.G(a.x));
      out << buf;
    }
  }
  return kExitOk;
}

int run_velocity(const Common& c, double extent, std::size_t cells, double radius) {
  const LoadedMeasure m = load_measure_file(c.measure);
  if (!m.planar) throw Error(ErrorCode::MalformedInput, "velocity needs a point cloud");
  if (!(extent > 0.0) || cells == 0) throw Error(ErrorCode::BadParams, "grid needs --extent > 0 and --cells > 0");
  const GridSpec grid{-extent, -extent, 2.0 * extent / static_cast<double>(cells), cells, cells};
  const VelocityField u = biot_savart(*m.planar, grid);
  const double e = local_kinetic_energy(u, {{0.0, 0.0}, 0.0, radius});
  emit({{"grid", {{"extent", extent}, {"cells", cells}, {"h", grid.h}}}, {"kinetic_energy_disk", e}, {"radius", radius}},
       c.out_dir, "velocity.json");
  if (!c.out_dir.empty()) {
    std::ofstream out(fs::path(c.out_dir) / "velocity.csv");
    write_velocity_csv(out, u);
  }
  return kExitOk;
}

int run_repro(const Common& c, const std::string& name) {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::cerr << "unknown scenario '" << name << "'\n";
    return kExitMalformed;
  }
  const ScenarioReport r =
      run_scenario(name, c.out_dir.empty() ? std::nullopt : std::optional<std::string>(c.out_dir));
  std::cout << "# " << r.name << ": " << r.claim << '\n';
  for (const auto& ch : r.checks) std::cout << (ch.pass ? "PASS " : "FAIL ") << ch.name << ": " << ch.detail << '\n';
  std::cout << (r.passed() ? "PASS" : "FAIL") << " (" << r.seconds << " s)\n";
  return r.passed() ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive logarithmic energy of line and planar measures"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, bool need_measure) {
    auto* opt = sub->add_option("--measure", common.measure, "measure JSON document");
    if (need_measure) opt->required();
    sub->add_option("--config", common.config, "quadrature config JSON");
    sub->add_option("--out-dir", common.out_dir, "directory for JSON/CSV outputs");
    sub->add_option("--depth", common.depth, "largest partition exponent (schedule 2^4 .. 2^depth)");
    sub->add_option("--tol", common.tol, "relative bracket tolerance");
  };

  std::string engine;
  auto* energy = app.add_subcommand("energy", "energy estimate with bracket and verdict");
  add_common(energy, true);
  energy->add_option("--engine", engine, "double | one-sided | density | planar")
      ->check(CLI::IsMember({"double", "one-sided", "density", "planar"}));

  auto* classify = app.add_subcommand("classify", "membership verdict");
  add_common(classify, true);

  std::optional<double> K, beta;
  std::size_t level = 8, n_min = 1, n_max = 20;
  auto* cantor = app.add_subcommand("cantor", "Cantor intervals at a level");
  add_common(cantor, false);
  cantor->add_option("--K", K, "standard family parameter (K > 2)");
  cantor->add_option("--beta", beta, "general family parameter (beta > 1)");
  cantor->add_option("--level", level, "construction level");

  auto* dimension = app.add_subcommand("dimension", "box-counting dimension of a Cantor construction");
  add_common(dimension, false);
  dimension->add_option("--K", K, "standard family parameter (K > 2)");
  dimension->add_option("--beta", beta, "general family parameter (beta > 1)");
  dimension->add_option("--n-min", n_min, "first level");
  dimension->add_option("--n-max", n_max, "last level");

  std::vector<double> centre{0.0, 0.0};
  auto* radial = app.add_subcommand("radial", "radial CDF and reduction checks of a point cloud");
  add_common(radial, true);
  radial->add_option("--center", centre, "x y")->expected(2);

  double extent = 1.2, disk = 1.0;
  std::size_t cells = 240;
  auto* velocity = app.add_subcommand("velocity", "Biot-Savart velocity on a square grid");
  add_common(velocity, true);
  velocity->add_option("--extent", extent, "grid covers [-extent, extent]^2");
  velocity->add_option("--cells", cells, "cells per side");
  velocity->add_option("--radius", disk, "disk radius for the kinetic energy");

  std::string scenario;
  auto* repro = app.add_subcommand("repro", "run a canned reproduction scenario");
  add_common(repro, false);
  repro->add_option("scenario", scenario, "scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitMalformed;
  }

  try {
    if (*energy) return run_energy(common, engine);
    if (*classify) return run_classify(common);
    if (*cantor) return run_cantor(common, K, beta, level);
    if (*dimension) return run_dimension(common, K, beta, n_min, n_max);
    if (*radial) return run_radial(common, centre);
    if (*velocity) return run_velocity(common, extent, cells, disk);
    if (*repro) return run_repro(common, scenario);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return kExitMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMalformed;
  }
  return kExitMalformed;
}
