#pragma once

// Exact and structured offline optima for unit covering/clustering under
// L-infinity. Offline the two problems coincide, so one oracle serves both.
// The oracle is exact or it refuses; it never approximates silently.

#include "ucl/geometry.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ucl {

struct CoverSolution {
  std::vector<Box> cubes;                  // closed unit cubes
  std::vector<std::size_t> assignment;     // point index -> cube index
};

struct OracleLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimum-cardinality set of closed unit cubes covering all points.
// Candidates have every lower-corner coordinate equal to some input point
// coordinate (an optimal cover can slide each cube until each lower face
// touches a point); dominated candidates are removed, then branch and bound
// with a greedy upper bound and an independent-point lower bound.
// Throws OracleLimitError when the instance exceeds max_points distinct
// points (hard ceiling 64) or the candidate pool is unmanageable.
CoverSolution exact_opt(const std::vector<Point>& points, std::size_t max_points = 64);

// Clusters points by membership in the odd-corner unit-cube tiling
// translated by tau; nullopt when some point is uncovered.
std::optional<CoverSolution> grid_shift_solution(const std::vector<Point>& points,
                                                 const std::vector<int>& tau);

// min over all 2^d shift vectors of the covering grid_shift_solution sizes;
// nullopt when no shift covers.
std::optional<std::uint64_t> opt_upper_via_shifts(const std::vector<Point>& points);

enum class InstanceKind { kS1, kBarycentric, kDiagonalPairs, kCoveringGame };

// Closed-form optimum for the named generators: S1 -> K^d / 2^d (K even),
// barycentric -> (K/4+1)^d + (K/4)^d, diagonal pairs -> 2, covering game -> 1.
std::uint64_t structured_opt(InstanceKind kind, std::size_t d, std::uint64_t k_or_n);

}  // namespace ucl
