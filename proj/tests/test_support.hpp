#pragma once

// Test-only helpers: an independent brute-force covering optimum (plain
// increasing-k subset search, no dominance pruning, no bounds) and random
// instance generators with seeded streams. The brute force shares nothing
// with the branch-and-bound path it cross-checks except the canonical-corner
// lemma itself.

#include "ucl/algorithms.hpp"
#include "ucl/geometry.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

namespace ucl::testing {

inline std::vector<std::uint64_t> brute_candidate_masks(const std::vector<Point>& pts) {
  const std::size_t d = pts[0].size();
  std::set<std::vector<Rational>> corners;
  for (const auto& p : pts) {
    std::vector<std::vector<Rational>> slots(d);
    for (std::size_t j = 0; j < d; ++j)
      for (const auto& q : pts)
        if (q[j] <= p[j] && p[j] - q[j] <= 1) slots[j].push_back(q[j]);
    std::vector<std::size_t> idx(d, 0);
    while (true) {
      std::vector<Rational> c(d);
      for (std::size_t j = 0; j < d; ++j) c[j] = slots[j][idx[j]];
      corners.insert(std::move(c));
      std::size_t j = 0;
      while (j < d && ++idx[j] == slots[j].size()) idx[j++] = 0;
      if (j == d) break;
    }
  }
  std::set<std::uint64_t> masks;  // collapse identical coverage
  for (const auto& c : corners) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      bool in = true;
      for (std::size_t j = 0; j < c.size() && in; ++j)
        in = c[j] <= pts[i][j] && pts[i][j] - c[j] <= 1;
      if (in) mask |= std::uint64_t{1} << i;
    }
    if (mask) masks.insert(mask);
  }
  return {masks.begin(), masks.end()};
}

inline bool brute_coverable(const std::vector<std::uint64_t>& masks, std::uint64_t covered,
                            std::uint64_t full, std::size_t cubes_left) {
  if (covered == full) return true;
  if (cubes_left == 0) return false;
  const int i = std::countr_zero(~covered & full);
  for (std::uint64_t m : masks)
    if (m >> i & 1)
      if (brute_coverable(masks, covered | m, full, cubes_left - 1)) return true;
  return false;
}

// Minimum cover size by exhausting k = 1, 2, ... subsets of candidate cubes.
inline std::size_t brute_force_opt(const std::vector<Point>& points) {
  std::set<Point> dedup(points.begin(), points.end());
  const std::vector<Point> pts(dedup.begin(), dedup.end());
  const std::uint64_t full = pts.size() == 64 ? ~std::uint64_t{0}
                                              : (std::uint64_t{1} << pts.size()) - 1;
  const auto masks = brute_candidate_masks(pts);
  for (std::size_t k = 1;; ++k)
    if (brute_coverable(masks, 0, full, k)) return k;
}

inline std::vector<Point> random_quarter_points(RngStream& rng, std::size_t d, std::size_t n,
                                                std::int64_t quarter_range) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) {
    Point p;
    for (std::size_t j = 0; j < d; ++j)
      p.emplace_back(Int(rng.uniform_below(static_cast<std::uint64_t>(quarter_range))),
                     Int(4));
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<LatticePoint> random_lattice_points(RngStream& rng, std::size_t d,
                                                       std::size_t n, std::int64_t range) {
  std::vector<LatticePoint> out;
  for (std::size_t i = 0; i < n; ++i) {
    LatticePoint p(d);
    for (std::size_t j = 0; j < d; ++j)
      p[j] = static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(range)));
    out.push_back(std::move(p));
  }
  return out;
}

// Random lattice points in groups anchored on (3Z)^d: every group fits in a
// unit cube and groups are pairwise more than 1 apart, so the exact offline
// optimum equals the number of distinct anchors.
struct SeparatedInstance {
  std::vector<LatticePoint> points;
  std::size_t opt = 0;
};

inline SeparatedInstance separated_groups_instance(RngStream& rng, std::size_t d,
                                                   std::size_t groups, std::size_t n,
                                                   std::int64_t anchors_per_dim) {
  std::set<LatticePoint> anchor_set;
  while (anchor_set.size() < groups) {
    LatticePoint a(d);
    for (std::size_t j = 0; j < d; ++j)
      a[j] = 3 * static_cast<std::int64_t>(
                     rng.uniform_below(static_cast<std::uint64_t>(anchors_per_dim)));
    anchor_set.insert(std::move(a));
  }
  const std::vector<LatticePoint> anchors(anchor_set.begin(), anchor_set.end());
  SeparatedInstance inst;
  std::set<std::size_t> used;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t g = i < anchors.size()
                              ? i  // every anchor receives at least one point
                              : static_cast<std::size_t>(rng.uniform_below(anchors.size()));
    used.insert(g);
    LatticePoint p = anchors[g];
    for (std::size_t j = 0; j < d; ++j) p[j] += static_cast<std::int64_t>(rng.uniform_below(2));
    inst.points.push_back(std::move(p));
  }
  inst.opt = used.size();
  return inst;
}

}  // namespace ucl::testing
