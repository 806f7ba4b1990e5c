#pragma once

// Planar measures as weighted point clouds: direct energies, radial
// profiles about a centre, Biot–Savart velocities and blob mollification.

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "logmeasure/energy.hpp"
#include "logmeasure/measures.hpp"

namespace logmeasure {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class ProvenanceKind { CircleUniform, DiracAt, LineCDF, PowerLawRadial, BlobMollified, Custom };

std::string_view to_string(ProvenanceKind k);

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::Custom;
  std::size_t n = 0;                                                   // discretization parameter
  nlohmann::ordered_json params = nlohmann::ordered_json::object();  // parent measure, radius, ...
};

struct PlanarAtom {
  Point2 p;
  double w = 0.0;
  double cell_diam = 0.0;  // diameter of the continuum cell this atom stands for
};

struct PlanarMeasure {
  std::vector<PlanarAtom> atoms;
  Provenance provenance;

  double total_mass() const;
  /// Throws BadParams on nonpositive weights or non-finite coordinates.
  void validate() const;
};

/// n equally spaced atoms of weight 1/n on the unit circle.
PlanarMeasure circle_measure(std::size_t n);

/// n coincident atoms of weight mass/n at `at`: atomizations of a Dirac mass.
PlanarMeasure dirac_measure(Point2 at, std::size_t n = 1, double mass = 1.0);

/// Mass-uniform atomization of a line measure placed on the x₁ axis.
PlanarMeasure line_measure(const MonotoneCDF& F, std::size_t n);

/// Lower bracket: Σ_{i≠j} wᵢwⱼ log⁺(1/|xᵢ-xⱼ|), +∞ for coincident atoms.
/// Upper bracket adds wᵢ²·log⁺(1/δᵢ) with δᵢ the cell diameter. A single
/// cloud is never FiniteConverged; see energy_planar_family.
EnergyEstimate energy_planar(const PlanarMeasure& P, const QuadratureConfig& cfg = {});

/// Verdict over a refinement family ordered by increasing n.
EnergyEstimate energy_planar_family(const std::vector<PlanarMeasure>& family, const QuadratureConfig& cfg = {});

struct RadialProfile {
  Point2 center;
  MonotoneCDF G;
};

/// G(r) = ω(closed ball B(x₀, r)). Radii equal up to the tie tolerance are
/// merged into one jump.
RadialProfile radial_cdf(const PlanarMeasure& P, Point2 x0);

enum class TestFunction { RSquared, MinROne, One };

struct PushforwardReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // relative
};

PushforwardReport radial_pushforward_check(const PlanarMeasure& P, Point2 x0, TestFunction h);

struct RadialInequalityReport {
  double lhs_lower = 0.0;        // i≠j planar sum
  double rhs_lower = 0.0;        // i≠j sum of the radial projection, +∞ on coincident radii
  bool holds_pointwise = false;  // kernel domination on every pair
  bool lhs_le_rhs = false;
};

RadialInequalityReport radial_inequality_check(const PlanarMeasure& P, Point2 x0);

/// Continuous surrogate of an atomized radial profile: piecewise linear
/// through the mid-jump values, starting at 0 on the first radius and
/// reaching the full mass on the last. A profile with a single radius stays
/// a point mass.
MonotoneCDF continuum_surrogate(const RadialProfile& profile);

/// G(r) = c r^alpha on [0, R] about the origin.
RadialProfile power_law_profile(double c, double alpha, double R);

/// Cell-centred lattice: sample (i, j) sits at (x0 + (i+½)h, y0 + (j+½)h).
struct GridSpec {
  double x0 = -1.0;
  double y0 = -1.0;
  double h = 0.01;
  std::size_t nx = 200;
  std::size_t ny = 200;

  Point2 at(std::size_t i, std::size_t j) const;
};

struct VelocityField {
  GridSpec grid;
  std::vector<double> ux, uy;  // row-major, index j * nx + i
};

/// u(g) = Σ wᵢ (g - xᵢ)⊥ / (2π|g - xᵢ|²). Blob-mollified measures use the
/// regularized kernel with |·|² + δ², δ the blob radius.
VelocityField biot_savart(const PlanarMeasure& P, const GridSpec& grid);

void write_velocity_csv(std::ostream& out, const VelocityField& u);

/// Annulus r_inner <= |x - center| <= r_outer; r_inner = 0 is a disk.
struct Region {
  Point2 center;
  double r_inner = 0.0;
  double r_outer = 1.0;
};

/// Midpoint sum of |u|² h² over the cells whose centres lie in the region.
double local_kinetic_energy(const VelocityField& u, const Region& region);

/// Radial atoms spread over ⌈√n⌉ angles, each replaced by an 8-point ring
/// of radius `blob_radius`.
PlanarMeasure blob_approximation(const RadialProfile& profile, std::size_t n, double blob_radius);

}  // namespace logmeasure
