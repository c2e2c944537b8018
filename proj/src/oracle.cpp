#include "ucl/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace ucl {

namespace {

constexpr std::size_t kHardPointCeiling = 64;
constexpr std::size_t kCandidateCeiling = 200000;

struct Candidate {
  std::vector<Rational> corner;
  std::uint64_t coverage = 0;
};

std::vector<Point> dedup(const std::vector<Point>& points) {
  std::set<Point> s(points.begin(), points.end());
  return {s.begin(), s.end()};
}

// All canonical lower corners covering at least one point, collapsed by
// coverage: per dimension, each coordinate value gets a bitmask of the
// points its unit slab [x, x+1] covers; a corner's coverage is the AND of
// its per-dimension masks. The depth-first product prunes empty coverage
// and keeps the lexicographically smallest corner per distinct coverage.
std::vector<Candidate> canonical_candidates(const std::vector<Point>& pts) {
  const std::size_t d = pts[0].size();
  std::vector<std::vector<Rational>> coords(d);
  std::vector<std::vector<std::uint64_t>> slab(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::set<Rational> col;
    for (const auto& p : pts) col.insert(p[j]);
    coords[j].assign(col.begin(), col.end());
    slab[j].reserve(coords[j].size());
    for (const auto& x : coords[j]) {
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (x <= pts[i][j] && pts[i][j] - x <= 1) mask |= std::uint64_t{1} << i;
      slab[j].push_back(mask);
    }
  }

  // Depth-first product over per-dimension values in ascending order, so the
  // first corner reaching a coverage is the lexicographically smallest one.
  std::map<std::uint64_t, std::vector<std::size_t>> by_coverage;
  std::vector<std::size_t> choice(d, 0);
  std::vector<std::uint64_t> partial(d + 1, ~std::uint64_t{0});
  std::size_t visited = 0;
  std::size_t level = 0;
  while (true) {
    if (choice[level] == coords[level].size()) {
      if (level == 0) break;
      choice[level] = 0;
      ++choice[--level];
      continue;
    }
    const std::uint64_t mask = partial[level] & slab[level][choice[level]];
    if (mask == 0) {
      ++choice[level];
      continue;
    }
    if (level + 1 < d) {
      partial[level + 1] = mask;
      ++level;
      continue;
    }
    if (++visited > kCandidateCeiling)
      throw OracleLimitError("oracle limit: candidate pool too large");
    by_coverage.try_emplace(mask, choice);
    ++choice[level];
  }

  std::vector<Candidate> out;
  out.reserve(by_coverage.size());
  for (const auto& [mask, idx] : by_coverage) {
    std::vector<Rational> corner(d);
    for (std::size_t j = 0; j < d; ++j) corner[j] = coords[j][idx[j]];
    out.push_back(Candidate{std::move(corner), mask});
  }
  return out;
}

void prune_dominated(std::vector<Candidate>& cands) {
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    const int pa = std::popcount(a.coverage), pb = std::popcount(b.coverage);
    if (pa != pb) return pa > pb;
    return a.corner < b.corner;
  });
  std::vector<Candidate> kept;
  for (auto& c : cands) {
    bool dominated = false;
    for (const auto& k : kept) {
      if ((c.coverage & ~k.coverage) == 0) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(std::move(c));
  }
  cands = std::move(kept);
}

struct SetCoverSearch {
  const std::vector<Candidate>& cands;
  std::uint64_t full;
  std::vector<std::vector<std::size_t>> coverable_by;  // point -> candidate ids
  std::vector<std::uint64_t> within_one;               // point -> points one cube away
  std::vector<std::size_t> best;

  SetCoverSearch(const std::vector<Candidate>& c, const std::vector<Point>& pts)
      : cands(c), full(pts.size() == 64 ? ~std::uint64_t{0}
                                        : (std::uint64_t{1} << pts.size()) - 1) {
    coverable_by.resize(pts.size());
    for (std::size_t ci = 0; ci < cands.size(); ++ci)
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (cands[ci].coverage >> i & 1) coverable_by[i].push_back(ci);
    within_one.assign(pts.size(), 0);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t k = 0; k < pts.size(); ++k)
        if (linf_dist(pts[i], pts[k]) <= 1) within_one[i] |= std::uint64_t{1} << k;
  }

  // Points pairwise more than one apart need one cube each.
  std::size_t independent_lower_bound(std::uint64_t uncovered) const {
    std::size_t count = 0;
    std::uint64_t blocked = 0;
    for (std::uint64_t rest = uncovered; rest;) {
      const int i = std::countr_zero(rest);
      if (!(blocked >> i & 1)) {
        ++count;
        blocked |= within_one[static_cast<std::size_t>(i)];
      }
      rest &= rest - 1;
    }
    return count;
  }

  std::vector<std::size_t> greedy_cover() const {
    std::vector<std::size_t> chosen;
    std::uint64_t covered = 0;
    while (covered != full) {
      std::size_t pick = cands.size();
      int gain = -1;
      for (std::size_t ci = 0; ci < cands.size(); ++ci) {
        const int g = std::popcount(cands[ci].coverage & ~covered);
        if (g > gain) {
          gain = g;
          pick = ci;
        }
      }
      chosen.push_back(pick);
      covered |= cands[pick].coverage;
    }
    return chosen;
  }

  void dfs(std::uint64_t covered, std::vector<std::size_t>& chosen) {
    if (covered == full) {
      if (chosen.size() < best.size()) best = chosen;
      return;
    }
    if (chosen.size() + independent_lower_bound(~covered & full) >= best.size()) return;
    const int i = std::countr_zero(~covered & full);
    std::vector<std::size_t> branches = coverable_by[static_cast<std::size_t>(i)];
    std::stable_sort(branches.begin(), branches.end(),
                     [&](std::size_t a, std::size_t b) {
                       return std::popcount(cands[a].coverage & ~covered) >
                              std::popcount(cands[b].coverage & ~covered);
                     });
    for (std::size_t ci : branches) {
      chosen.push_back(ci);
      dfs(covered | cands[ci].coverage, chosen);
      chosen.pop_back();
    }
  }
};

}  // namespace

CoverSolution exact_opt(const std::vector<Point>& points, std::size_t max_points) {
  if (points.empty()) return {};
  const std::size_t limit = std::min(max_points, kHardPointCeiling);
  std::vector<Point> pts = dedup(points);
  if (pts.size() > limit)
    throw OracleLimitError("oracle limit: " + std::to_string(pts.size()) +
                           " distinct points exceed " + std::to_string(limit));

  std::vector<Candidate> cands = canonical_candidates(pts);
  prune_dominated(cands);

  SetCoverSearch search(cands, pts);
  search.best = search.greedy_cover();
  std::vector<std::size_t> chosen;
  search.dfs(0, chosen);

  std::sort(search.best.begin(), search.best.end());
  CoverSolution sol;
  for (std::size_t ci : search.best) sol.cubes.push_back(unit_cube_at(cands[ci].corner));
  sol.assignment.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t c = 0; c < sol.cubes.size(); ++c) {
      if (box_contains(sol.cubes[c], points[i])) {
        sol.assignment[i] = c;
        break;
      }
    }
  }
  return sol;
}

std::optional<CoverSolution> grid_shift_solution(const std::vector<Point>& points,
                                                 const std::vector<int>& tau) {
  if (points.empty()) return CoverSolution{};
  const std::size_t d = points[0].size();
  if (tau.size() != d) throw std::invalid_argument("grid_shift_solution: dimension mismatch");

  std::map<std::vector<Int>, std::size_t> cube_of_corner;
  CoverSolution sol;
  sol.assignment.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<Int> corner(d);  // odd corner a, before the tau shift
    for (std::size_t j = 0; j < d; ++j) {
      const Rational y = points[i][j] - tau[j];
      Int a;
      if (is_integer(y)) {
        a = rat_num(y);
        if (a % 2 == 0) a -= 1;  // the odd one of {y-1, y}
      } else {
        a = rat_floor(y);
        if (a % 2 == 0) return std::nullopt;  // even gap: uncovered
      }
      corner[j] = a;
    }
    auto [it, fresh] = cube_of_corner.try_emplace(corner, sol.cubes.size());
    if (fresh) {
      Point lower(d);
      for (std::size_t j = 0; j < d; ++j) lower[j] = Rational(corner[j] + tau[j]);
      sol.cubes.push_back(unit_cube_at(lower));
    }
    sol.assignment[i] = it->second;
  }
  return sol;
}

std::optional<std::uint64_t> opt_upper_via_shifts(const std::vector<Point>& points) {
  if (points.empty()) return 0;
  const std::size_t d = points[0].size();
  std::optional<std::uint64_t> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    std::vector<int> tau(d);
    for (std::size_t j = 0; j < d; ++j) tau[j] = static_cast<int>(mask >> j & 1);
    if (auto sol = grid_shift_solution(points, tau)) {
      const auto count = static_cast<std::uint64_t>(sol->cubes.size());
      if (!best || count < *best) best = count;
    }
  }
  return best;
}

namespace {
std::uint64_t ipow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}
}  // namespace

std::uint64_t structured_opt(InstanceKind kind, std::size_t d, std::uint64_t k_or_n) {
  switch (kind) {
    case InstanceKind::kS1:
      if (k_or_n % 2 != 0) throw std::invalid_argument("structured_opt: S1 needs K even");
      return ipow(k_or_n / 2, d);
    case InstanceKind::kBarycentric:
      if (k_or_n % 4 != 0)
        throw std::invalid_argument("structured_opt: barycentric needs K divisible by 4");
      return ipow(k_or_n / 4 + 1, d) + ipow(k_or_n / 4, d);
    case InstanceKind::kDiagonalPairs:
      // n = 1 degenerates: the two points are exactly one apart and share a cube.
      if (k_or_n < 2)
        throw std::invalid_argument("structured_opt: diagonal pairs needs n >= 2");
      return 2;
    case InstanceKind::kCoveringGame:
      return 1;
  }
  throw std::invalid_argument("structured_opt: unknown instance kind");
}

}  // namespace ucl
