#pragma once

// Tunable defaults and acceptance tolerances. Bump kDefaultsVersion whenever
// a value here changes so stored reports can be matched to their settings.

#include <cstddef>

namespace logmeasure::defaults {

inline constexpr int kDefaultsVersion = 1;

// Quadrature
inline constexpr std::size_t kScheduleMinExp = 4;
inline constexpr std::size_t kScheduleMaxExp = 16;
inline constexpr double kDivergenceBudget = 1e3;
inline constexpr double kAgreementTol = 1e-3;
// Fraction of the tolerance granted to each far-field cell pair.
inline constexpr double kPairTolFraction = 0.25;
// Monotone samples per finest cell used to bound its centroid.
inline constexpr int kCentroidSamples = 8;
inline constexpr double kInverseTolFloor = 1e-14;

// One-sided engine
inline constexpr int kOneSidedStepsPerOctave = 24;
inline constexpr int kOneSidedOctaves = 52;

// Series growth test
inline constexpr std::size_t kGrowthWindow = 10;

// Regularity diagnostics
inline constexpr std::size_t kModulusGridPoints = 4096;
inline constexpr int kHolderJMin = 4;
inline constexpr int kHolderJMax = 16;
inline constexpr double kLipschitzAlphaTol = 1e-3;
inline constexpr double kHolderAlphaMin = 0.01;
inline constexpr double kHolderResidualMax = 0.5;
inline constexpr int kLogModulusJMax = 40;

// Fractal
inline constexpr std::size_t kCantorEvalDepth = 30;
inline constexpr std::size_t kCantorIntervalDepth = 20;
inline constexpr std::size_t kIntervalBudgetLevel = 24;

// Planar
inline constexpr double kPlanarFamilyTol = 1e-2;
// Radii within this relative distance are one closed-ball jump (a few ulps
// of hypot rounding).
inline constexpr double kRadialTieRelTol = 8.0 * 2.220446049250313e-16;
// Rounding allowance for | |x-x0| - |y-x0| | <= |x-y|, relative to r_x + r_y + |x-y|
inline constexpr double kRadialRoundingSlack = 16.0 * 2.220446049250313e-16;
inline constexpr int kBlobRingPoints = 8;

// Blob Hölder-tracking experiment (calibrated, see README)
inline constexpr int kBlobFitJMin = 3;
inline constexpr int kBlobFitJMax = 10;
inline constexpr double kBlobAlphaMin = 0.42;  // 0.48 untenable at n = 10^3, see README
inline constexpr double kBlobKRatioMax = 1.2;

// Acceptance tolerances
inline constexpr double kUniformEnergy = 1.5;
inline constexpr double kUniformEnergyTol = 1e-3;
inline constexpr double kEngineAgreementTol = 2e-3;
inline constexpr double kSeriesTermTol = 1e-12;
inline constexpr double kCantorAlphaLo = 0.61;
inline constexpr double kCantorAlphaHi = 0.65;
inline constexpr double kDimensionTol = 1e-6;
inline constexpr double kZeroDimensionBound = 1e-4;
inline constexpr double kKineticEnergyRelTol = 0.05;
inline constexpr double kKineticSlopeRelTol = 0.10;
inline constexpr double kBlobRefinementRelTol = 0.02;
inline constexpr double kPushforwardRelTol = 1e-12;

}  // namespace logmeasure::defaults
