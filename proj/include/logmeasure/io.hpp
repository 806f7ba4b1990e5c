#pragma once

// JSON documents for measures, planar clouds and reports.
//
// Measure documents look like {"kind": ..., "params": {...}} with optional
// top-level "scale" and "shift". Infinite numbers are written as "+inf".

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "logmeasure/energy.hpp"
#include "logmeasure/measures.hpp"
#include "logmeasure/planar.hpp"

namespace logmeasure {

using Json = nlohmann::ordered_json;

/// Any document the CLI accepts. Exactly one member is set, except that a
/// step density also carries its CDF.
struct LoadedMeasure {
  std::optional<MonotoneCDF> cdf;
  std::optional<StepDensity> density;
  std::optional<PlanarMeasure> planar;
};

/// Throws MalformedInput on unknown kinds or missing fields.
LoadedMeasure measure_from_json(const Json& doc);
LoadedMeasure load_measure_file(const std::string& path);

MonotoneCDF cdf_from_json(const Json& doc);
Json to_json(const MonotoneCDF& F);

StepDensity step_density_from_json(const Json& doc);
Json to_json(const StepDensity& f);

PlanarMeasure planar_from_json(const Json& doc);
Json to_json(const PlanarMeasure& P);

Json to_json(const EnergyEstimate& e);

/// Number or "+inf"/"-inf" string.
Json number_json(double v);
double number_from_json(const Json& v);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);

}  // namespace logmeasure
