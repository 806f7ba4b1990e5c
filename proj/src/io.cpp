#include "logmeasure/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "logmeasure/error.hpp"
#include "logmeasure/fractal.hpp"

namespace logmeasure {

Json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

double number_from_json(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "+inf" || s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw Error(ErrorCode::MalformedInput, "expected a number");
}

namespace {

double num(const Json& obj, const char* key, std::optional<double> fallback = std::nullopt) {
  if (obj.contains(key)) return number_from_json(obj.at(key));
  if (fallback) return *fallback;
  throw Error(ErrorCode::MalformedInput, std::string("missing field '") + key + "'");
}

const Json& params_of(const Json& doc) {
  static const Json empty = Json::object();
  if (!doc.contains("params")) return empty;
  const Json& p = doc.at("params");
  if (!p.is_object()) throw Error(ErrorCode::MalformedInput, "'params' must be an object");
  return p;
}

template <class Fn>
auto guarded(Fn fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, e.what());
  }
}

MonotoneCDF apply_transforms(const Json& doc, MonotoneCDF F) {
  if (doc.contains("scale")) {
    const double c = num(doc, "scale");
    if (c != 1.0) F = F.scaled(c);
  }
  if (doc.contains("shift")) {
    const double t = num(doc, "shift");
    if (t != 0.0) F = F.shifted(t);
  }
  return F;
}

Block block_from_json(const Json& b) {
  if (!b.is_object()) throw Error(ErrorCode::MalformedInput, "block must be an object");
  const double a = num(b, "a");
  const double d_log = b.contains("log_d") ? num(b, "log_d") : std::log(num(b, "d"));
  if (b.contains("log_mass")) return Block{a, d_log, num(b, "log_mass")};
  const double h_log = b.contains("log_h") ? num(b, "log_h") : std::log(num(b, "h"));
  return StepDensity::block_from_h(a, d_log, h_log);
}

}  // namespace

MonotoneCDF cdf_from_json(const Json& doc) {
  return guarded([&] {
    if (!doc.is_object() || !doc.contains("kind")) throw Error(ErrorCode::MalformedInput, "measure needs a 'kind'");
    const std::string kind = doc.at("kind").get<std::string>();
    const Json& p = params_of(doc);
    if (kind == "uniform")
      return apply_transforms(doc, MonotoneCDF::uniform(num(p, "lo", 0.0), num(p, "hi", 1.0), num(p, "mass", 1.0)));
    if (kind == "power_law")
      return apply_transforms(doc, MonotoneCDF::power_law(num(p, "c", 1.0), num(p, "alpha"), num(p, "R", 1.0)));
    if (kind == "arcsin") return apply_transforms(doc, MonotoneCDF::arcsin_profile());
    if (kind == "table") {
      std::vector<std::pair<double, double>> pts;
      for (const auto& e : p.at("points")) {
        if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::MalformedInput, "table points are [x, F] pairs");
        pts.emplace_back(number_from_json(e[0]), number_from_json(e[1]));
      }
      return apply_transforms(doc, MonotoneCDF::table(std::move(pts)));
    }
    if (kind == "cantor") {
      const std::string family = p.value("family", std::string("standardK"));
      const auto depth = p.value("depth", defaults::kCantorEvalDepth);
      if (family == "standardK") return apply_transforms(doc, cantor_cdf(CantorSpec::standard(num(p, "K", 3.0), depth)));
      if (family == "general") return apply_transforms(doc, cantor_cdf(CantorSpec::general(num(p, "beta"), depth)));
      throw Error(ErrorCode::MalformedInput, "unknown Cantor family '" + family + "'");
    }
    if (kind == "step_density") return apply_transforms(doc, cdf_from_step_density(step_density_from_json(doc)));
    throw Error(ErrorCode::MalformedInput, "unknown measure kind '" + kind + "'");
  });
}

Json to_json(const MonotoneCDF& F) {
  if (F.source().is_null()) throw Error(ErrorCode::MalformedInput, "this CDF has no JSON description");
  return F.source();
}

StepDensity step_density_from_json(const Json& doc) {
  return guarded([&] {
    const Json& p = params_of(doc);
    StepDensity f;
    if (p.contains("preset")) {
      const std::string preset = p.at("preset").get<std::string>();
      if (preset != "l1_counterexample") throw Error(ErrorCode::MalformedInput, "unknown preset '" + preset + "'");
      f = StepDensity::l1_counterexample(p.value("n_max", std::size_t{50}));
    } else {
      for (const auto& b : p.at("blocks")) f.blocks.push_back(block_from_json(b));
    }
    validate(f);
    return f;
  });
}

Json to_json(const StepDensity& f) {
  Json blocks = Json::array();
  for (const Block& b : f.blocks) blocks.push_back({{"a", b.a}, {"log_d", b.d_log}, {"log_mass", b.mass_log}});
  return {{"kind", "step_density"}, {"params", {{"blocks", blocks}}}};
}

namespace {

ProvenanceKind provenance_kind(const std::string& s) {
  for (auto k : {ProvenanceKind::CircleUniform, ProvenanceKind::DiracAt, ProvenanceKind::LineCDF,
                 ProvenanceKind::PowerLawRadial, ProvenanceKind::BlobMollified, ProvenanceKind::Custom})
    if (to_string(k) == s) return k;
  throw Error(ErrorCode::MalformedInput, "unknown provenance '" + s + "'");
}

}  // namespace

PlanarMeasure planar_from_json(const Json& doc) {
  return guarded([&] {
    PlanarMeasure P;
    const Json& pts = doc.at("points");
    const Json* diam = doc.contains("cell_diam") ? &doc.at("cell_diam") : nullptr;
    if (diam && diam->size() != pts.size()) throw Error(ErrorCode::MalformedInput, "cell_diam length mismatch");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Json& e = pts[i];
      if (!e.is_array() || e.size() != 3) throw Error(ErrorCode::MalformedInput, "points are [x, y, w] triples");
      PlanarAtom a;
      a.p = {number_from_json(e[0]), number_from_json(e[1])};
      a.w = number_from_json(e[2]);
      a.cell_diam = diam ? number_from_json((*diam)[i]) : 0.0;
      P.atoms.push_back(a);
    }
    if (doc.contains("provenance")) {
      const Json& pr = doc.at("provenance");
      P.provenance.kind = provenance_kind(pr.value("kind", std::string("Custom")));
      P.provenance.n = pr.value("n", P.atoms.size());
      if (pr.contains("params")) P.provenance.params = pr.at("params");
    }
    P.validate();
    return P;
  });
}

Json to_json(const PlanarMeasure& P) {
  Json pts = Json::array(), diam = Json::array();
  for (const auto& a : P.atoms) {
    pts.push_back({a.p.x, a.p.y, a.w});
    diam.push_back(number_json(a.cell_diam));
  }
  return {{"points", pts},
          {"cell_diam", diam},
          {"provenance",
           {{"kind", to_string(P.provenance.kind)}, {"n", P.provenance.n}, {"params", P.provenance.params}}}};
}

Json to_json(const EnergyEstimate& e) {
  Json trace = Json::array();
  for (const auto& r : e.trace) trace.push_back({{"n", r.n}, {"lower", number_json(r.lower)}, {"upper", number_json(r.upper)}});
  return {{"value", number_json(e.value)},
          {"lower", number_json(e.lower)},
          {"upper", number_json(e.upper)},
          {"verdict", to_string(e.verdict)},
          {"trace", trace}};
}

LoadedMeasure measure_from_json(const Json& doc) {
  LoadedMeasure m;
  if (doc.is_object() && doc.contains("points")) {
    m.planar = planar_from_json(doc);
    return m;
  }
  if (doc.is_object() && doc.value("kind", std::string()) == "step_density") {
    if (doc.contains("scale") || doc.contains("shift"))
      throw Error(ErrorCode::MalformedInput, "scale/shift are not supported on step densities");
    m.density = step_density_from_json(doc);
    m.cdf = cdf_from_step_density(*m.density);
    return m;
  }
  m.cdf = cdf_from_json(doc);
  return m;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, "'" + path + "': " + e.what());
  }
}

LoadedMeasure load_measure_file(const std::string& path) { return measure_from_json(read_json_file(path)); }

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::MalformedInput, "cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

}  // namespace logmeasure
