#include "ucl/algorithms.hpp"

#include <algorithm>
#include <stdexcept>

namespace ucl {

std::uint64_t RngStream::next() {
  ++counter;
  std::uint64_t z = seed + counter * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = n * (UINT64_MAX / n);  // multiple of n
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

std::uint64_t RngStream::derive(std::uint64_t master, std::uint64_t index) {
  RngStream s(master);
  s.counter = index;
  return s.next();
}

namespace {
void require_dim(std::size_t want, std::size_t got, const char* who) {
  if (want != got) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}
}  // namespace

InsertResult GridClusterer::insert(const Point& p) {
  require_dim(d_, p.size(), "grid");
  std::vector<Int> key;
  key.reserve(d_);
  for (const auto& c : p) key.push_back(rat_floor(c));
  auto [it, fresh] = cells_.try_emplace(std::move(key), clusters_.size());
  if (fresh) {
    clusters_.push_back(Cluster{it->second, {p}, box_of_point(p)});
    return {it->second, true};
  }
  Cluster& c = clusters_[it->second];
  c.members.push_back(p);
  c.bbox = box_extend(c.bbox, p);
  return {it->second, false};
}

bool GreedyClusterer::fits(const Cluster& c, const Point& p) const {
  for (std::size_t j = 0; j < d_; ++j) {
    const Rational& lo = p[j] < c.bbox.lo[j] ? p[j] : c.bbox.lo[j];
    const Rational& hi = p[j] > c.bbox.hi[j] ? p[j] : c.bbox.hi[j];
    if (hi - lo > 1) return false;
  }
  return true;
}

InsertResult GreedyClusterer::insert(const Point& p) {
  require_dim(d_, p.size(), "greedy");
  ClusterId target = clusters_.size();
  if (tie_break_ == TieBreak::kOldest) {
    for (const Cluster& c : clusters_) {
      if (fits(c, p)) {
        target = c.id;
        break;
      }
    }
  } else {
    std::vector<ClusterId> fitting;
    for (const Cluster& c : clusters_)
      if (fits(c, p)) fitting.push_back(c.id);
    if (!fitting.empty()) target = fitting[rng_.uniform_below(fitting.size())];
  }
  if (target == clusters_.size()) {
    clusters_.push_back(Cluster{target, {p}, box_of_point(p)});
    return {target, true};
  }
  Cluster& c = clusters_[target];
  c.members.push_back(p);
  c.bbox = box_extend(c.bbox, p);
  return {target, false};
}

Box CenteredCoverer::place(const Point& p) const {
  Box b{p, p};
  const Rational half(1, 2);
  for (std::size_t j = 0; j < d_; ++j) {
    b.lo[j] -= half;
    b.hi[j] += half;
  }
  return b;
}

Box FirstFitCoverer::place(const Point& p) const { return unit_cube_at(p); }

Box GridCoverer::place(const Point& p) const {
  Point lower;
  lower.reserve(d_);
  for (const auto& c : p) lower.emplace_back(rat_floor(c));
  return unit_cube_at(lower);
}

InsertResult CenteredCoverer::insert(const Point& p) {
  require_dim(d_, p.size(), "coverer");
  for (const CoverCube& c : cubes_)
    if (box_contains(c.cube, p)) return {c.id, false};
  ClusterId id = cubes_.size();
  cubes_.push_back(CoverCube{id, place(p)});
  return {id, true};
}

int WeightMap::exponent(const LatticePoint& corner) const {
  auto it = entries_.find(corner);
  return it == entries_.end() ? 0 : it->second;
}

Rational WeightMap::weight(const LatticePoint& corner) const {
  const int e = exponent(corner);
  const int shift = static_cast<int>(d_) + 1 - e;
  return shift >= 0 ? pow2_inv(static_cast<unsigned>(shift))
                    : Rational(pow2(static_cast<unsigned>(-shift)));
}

void WeightMap::double_weight(const LatticePoint& corner) {
  int& e = entries_[corner];
  ++e;
  if (e > static_cast<int>(d_) + 2)
    throw std::logic_error("WeightMap: exponent exceeded d+2 (implementation bug)");
}

int WeightMap::max_exponent() const {
  int m = 0;
  for (const auto& [corner, e] : entries_) m = std::max(m, e);
  return m;
}

std::vector<LatticePoint> cubes_containing(const LatticePoint& p) {
  const std::size_t d = p.size();
  std::vector<LatticePoint> out;
  out.reserve(std::size_t{1} << d);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    LatticePoint corner(d);
    for (std::size_t j = 0; j < d; ++j)
      corner[j] = p[j] - (mask >> j & 1 ? 0 : 1);
    out.push_back(std::move(corner));
  }
  std::sort(out.begin(), out.end());  // lexicographic corner order
  return out;
}

LatticePoint sample_cube(const std::vector<LatticePoint>& corners,
                         const WeightMap& weights, RngStream& rng) {
  const int d = static_cast<int>(weights.dim());
  std::uint64_t total = 0;
  std::vector<std::uint64_t> scaled;
  scaled.reserve(corners.size());
  for (const auto& c : corners) {
    const int e = weights.exponent(c);
    if (e > d + 2) throw std::logic_error("sample_cube: exponent above cap");
    const std::uint64_t w = std::uint64_t{1} << e;  // weight * 2^(d+1)
    scaled.push_back(w);
    total += w;
  }
  if (total == 0) throw std::invalid_argument("sample_cube: zero total weight");
  std::uint64_t u = rng.uniform_below(total);
  for (std::size_t i = 0; i < corners.size(); ++i) {
    if (u < scaled[i]) return corners[i];
    u -= scaled[i];
  }
  throw std::logic_error("sample_cube: cumulative selection fell through");
}

std::optional<LatticePoint> ReweighCoverer::covering_cube_in(
    const std::set<LatticePoint>& cubes, const LatticePoint& p) const {
  // Cubes containing p are exactly Q(p); scan in lexicographic order so the
  // returned corner is the smallest qualifying one.
  for (const auto& corner : cubes_containing(p))
    if (cubes.count(corner)) return corner;
  return std::nullopt;
}

ClusterId ReweighCoverer::choose(const LatticePoint& corner, bool into_c1) {
  (into_c1 ? c1_ : c2_).insert(corner);
  auto it = chosen_id_.find(corner);
  if (it != chosen_id_.end()) return it->second;
  ClusterId id = chosen_.size();
  chosen_.push_back(corner);
  chosen_id_.emplace(corner, id);
  return id;
}

Rational ReweighCoverer::weight_sum(const LatticePoint& p) const {
  require_dim(d_, p.size(), "reweigh");
  Rational total = 0;
  for (const auto& corner : cubes_containing(p)) total += weights_.weight(corner);
  return total;
}

ReweighResult ReweighCoverer::insert(const LatticePoint& p) {
  require_dim(d_, p.size(), "reweigh");
  points_.insert(p);

  const std::vector<LatticePoint> neighborhood = cubes_containing(p);

  // 1: p is already covered by a chosen cube.
  for (const auto& corner : neighborhood)
    if (c1_.count(corner) || c2_.count(corner))
      return {corner, ReweighBranch::kAlreadyCovered, false, chosen_id_.at(corner)};

  // 2: p is covered by a bookkeeping cube; promote it.
  if (auto hit = covering_cube_in(b_, p)) {
    ClusterId id = choose(*hit, true);
    return {*hit, ReweighBranch::kPromoteFromB, true, id};
  }

  // 3: the neighborhood is heavy; pick a cube outright.
  if (weight_sum(p) >= 1) {
    const LatticePoint& corner = neighborhood.front();
    ClusterId id = choose(corner, false);
    return {corner, ReweighBranch::kHeavyNeighborhood, true, id};
  }

  // 4: sample 2d cubes from the weight distribution, keep them in B, promote
  // the first draw, then double every weight in the neighborhood.
  ++step4_count_;
  LatticePoint first;
  for (std::size_t t = 0; t < 2 * d_; ++t) {
    LatticePoint drawn = sample_cube(neighborhood, weights_, rng_);
    ++samples_drawn_;
    if (t == 0) first = drawn;
    b_.insert(std::move(drawn));
  }
  ClusterId id = choose(first, true);
  for (const auto& corner : neighborhood) weights_.double_weight(corner);
  return {first, ReweighBranch::kSampleAndReweigh, true, id};
}

}  // namespace ucl
