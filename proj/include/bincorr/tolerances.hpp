#pragma once

#include <cstddef>

namespace bincorr {

// Numerical constants shared by the library, the CLI and the test suites.
struct Tolerances {
  // Structural checks: symmetry, Toeplitz structure, normalization, closed
  // form vs enumeration.
  static constexpr double structural = 1e-12;
  // Entry-wise bound for empirical covariance at 10^6 samples.
  static constexpr double monte_carlo_covariance = 3e-3;
  // Region membership slack per constraint.
  static constexpr double region_slack = 1e-12;
};

// Largest number of source bits enumerated exactly (2^20 outcomes).
inline constexpr std::size_t kDefaultEnumerationCap = 20;

// Largest source count for the full 2^N - 1 constraint sweep of the
// achievable region.
inline constexpr std::size_t kDefaultRegionCap = 16;

// Marginal uniformity of linear models is checked at construction up to this
// many sources.
inline constexpr std::size_t kMarginalCheckCap = 12;

}  // namespace bincorr
