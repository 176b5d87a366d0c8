#pragma once

// Finite-n pass thresholds for the verification suites. Every value here is a
// calibration choice, not a mathematical constant; the pilot runs that
// produced them are noted next to each one. Bump kVersion on any change.

namespace gwleaf::thresholds {

inline constexpr const char* kVersion = "1";

// Goodness of fit.
inline constexpr double kChi2Alpha = 1e-3;
inline constexpr double kKsAlpha = 1e-3;
// Pilot (1e5 draws): size n=3 gave 0.0015, leaves n=2 gave 0.0080; cells with
// few expected counts sit above this from sampling noise alone.
inline constexpr double kTvMax = 0.01;
inline constexpr double kMinExpectedCount = 5.0;
// Shape cells of the exactness suite: trees up to this size, plus one
// overflow cell for everything larger.
inline constexpr long kShapeCellMaxSize = 12;
// Conditional mass that enumeration up to size 18 must cover.
inline constexpr double kEnumerationCoverage = 1.0 - 1e-4;

// Local limit ratios (exact / predicted).
// Pilot leaf ratios 1.0056, 1.0028, 1.0014 at n = 50, 100, 200.
inline constexpr double kLeafRatioBand = 0.15;
// Pilot size ratios 1.0038, 1.0019, 1.0009 at n = 100, 200, 400.
inline constexpr double kSizeRatioBand = 0.10;

// Concentration suite.
// Exact window rates in pilots: 1.6e-5, 2.3e-7, 9.1e-10 at n = 50, 100, 200.
// Rates are scaled by sqrt(100 / n) per size.
inline constexpr double kWindowRate = 0.05;
inline constexpr double kProfileEta = 0.2;
inline constexpr double kProfileDelta = 1.0;
inline constexpr double kProfileRate = 0.05;
inline constexpr long kSmallNExempt = 10;

// Maximum degree.
// Pilot coverage 0.992 (dissection, 2000 trees).
inline constexpr double kCoverage = 0.9;
inline constexpr double kCoverageEps = 0.4;
inline constexpr double kLogWindowC = 3.0;
// Pilot relative median change 0.0025 (zeta 1.5, n = 2000 vs 4000).
inline constexpr double kMedianStability = 0.15;

// Scaling-limit trend: relative change of the mean rescaled contour maximum.
// Used by the unit-level trend check only (geometric, n = 150 vs 300).
inline constexpr double kContourMeanStability = 0.10;

}  // namespace gwleaf::thresholds
