#pragma once

namespace mlc {

inline constexpr const char* kVersion = "0.1.0";

// Global comparison tolerance used wherever floating-point values are
// compared against exact thresholds ("= 0" conditions, metric axiom checks
// on float-derived tables, unitarity residuals).
inline constexpr double kFloatTolerance = 1e-9;

} // namespace mlc
