#pragma once

// The online algorithms. Clustering algorithms maintain growable clusters
// whose bounding box never exceeds extent 1 per dimension; covering
// algorithms place immutable unit cubes. All tie-breaking is deterministic
// (oldest cluster first) so transcripts are reproducible.

#include "ucl/geometry.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace ucl {

using ClusterId = std::size_t;

struct InsertResult {
  ClusterId id = 0;
  bool opened = false;
};

// Deterministic counter-based generator (splitmix64 over seed+counter).
// Same seed implies the same draw sequence; uniform_below is unbiased.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  explicit RngStream(std::uint64_t s = 0) : seed(s) {}

  std::uint64_t next();
  std::uint64_t uniform_below(std::uint64_t n);  // uniform in [0, n), n >= 1

  // Derive an independent stream (per-trial seeds from a master seed).
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index);
};

struct Cluster {
  ClusterId id = 0;
  std::vector<Point> members;
  Box bbox;
};

struct CoverCube {
  ClusterId id = 0;
  Box cube;  // extent exactly 1 in every dimension, fixed once placed
};

class ClusteringAlgorithm {
 public:
  virtual ~ClusteringAlgorithm() = default;
  virtual InsertResult insert(const Point& p) = 0;
  virtual std::size_t cluster_count() const = 0;
  virtual const Cluster& cluster(ClusterId id) const = 0;
  virtual std::string name() const = 0;
};

class CoveringAlgorithm {
 public:
  virtual ~CoveringAlgorithm() = default;
  virtual InsertResult insert(const Point& p) = 0;
  virtual std::size_t cube_count() const = 0;
  virtual const CoverCube& cube(ClusterId id) const = 0;
  virtual std::string name() const = 0;
};

// Uniform grid of half-open cells prod_j [i_j, i_j+1); one cluster per
// nonempty cell.
class GridClusterer : public ClusteringAlgorithm {
 public:
  explicit GridClusterer(std::size_t d) : d_(d) {}
  InsertResult insert(const Point& p) override;
  std::size_t cluster_count() const override { return clusters_.size(); }
  const Cluster& cluster(ClusterId id) const override { return clusters_.at(id); }
  std::string name() const override { return "grid"; }

 private:
  std::size_t d_;
  std::map<std::vector<Int>, ClusterId> cells_;
  std::vector<Cluster> clusters_;
};

enum class TieBreak { kOldest, kRandom };

// Joins the first (or a random) existing cluster whose bounding box stays
// within extent 1 per dimension after adding p; otherwise opens a singleton.
class GreedyClusterer : public ClusteringAlgorithm {
 public:
  explicit GreedyClusterer(std::size_t d, TieBreak tb = TieBreak::kOldest,
                           std::uint64_t seed = 0)
      : d_(d), tie_break_(tb), rng_(seed) {}
  InsertResult insert(const Point& p) override;
  std::size_t cluster_count() const override { return clusters_.size(); }
  const Cluster& cluster(ClusterId id) const override { return clusters_.at(id); }
  std::string name() const override { return "greedy"; }

 private:
  bool fits(const Cluster& c, const Point& p) const;

  std::size_t d_;
  TieBreak tie_break_;
  RngStream rng_;
  std::vector<Cluster> clusters_;
};

// Covering: new cube centered at the point, [p - 1/2, p + 1/2]^d.
class CenteredCoverer : public CoveringAlgorithm {
 public:
  explicit CenteredCoverer(std::size_t d) : d_(d) {}
  InsertResult insert(const Point& p) override;
  std::size_t cube_count() const override { return cubes_.size(); }
  const CoverCube& cube(ClusterId id) const override { return cubes_.at(id); }
  std::string name() const override { return "centered"; }

 protected:
  virtual Box place(const Point& p) const;

  std::size_t d_;
  std::vector<CoverCube> cubes_;
};

// Covering: new cube anchored at the point, [p, p + 1]^d.
class FirstFitCoverer : public CenteredCoverer {
 public:
  explicit FirstFitCoverer(std::size_t d) : CenteredCoverer(d) {}
  std::string name() const override { return "firstfit"; }

 protected:
  Box place(const Point& p) const override;
};

// Covering: new cube is the closed grid cell [floor(p), floor(p) + 1]^d.
class GridCoverer : public CenteredCoverer {
 public:
  explicit GridCoverer(std::size_t d) : CenteredCoverer(d) {}
  std::string name() const override { return "grid"; }

 protected:
  Box place(const Point& p) const override;
};

// Sparse weights over integer unit cubes, keyed by lower corner. A cube's
// weight is 2^(e - (d+1)); a missing key means exponent 0. Exponents never
// exceed d+2 (doubling past the cap is an implementation bug, not an input
// error).
class WeightMap {
 public:
  explicit WeightMap(std::size_t d) : d_(d) {}

  int exponent(const LatticePoint& corner) const;
  Rational weight(const LatticePoint& corner) const;
  void double_weight(const LatticePoint& corner);
  int max_exponent() const;
  std::size_t dim() const { return d_; }

 private:
  std::size_t d_;
  std::map<LatticePoint, int> entries_;
};

// The 2^d lower corners p - beta, beta in {0,1}^d, in lexicographic order.
std::vector<LatticePoint> cubes_containing(const LatticePoint& p);

// Exact weighted draw over the cubes of Q(p): weights scaled to integers
// over the common denominator 2^(d+1), one uniform integer below the total,
// cumulative selection in lexicographic corner order.
LatticePoint sample_cube(const std::vector<LatticePoint>& corners,
                         const WeightMap& weights, RngStream& rng);

enum class ReweighBranch : int {
  kAlreadyCovered = 1,
  kPromoteFromB = 2,
  kHeavyNeighborhood = 3,
  kSampleAndReweigh = 4,
};

struct ReweighResult {
  LatticePoint assigned;  // lower corner of the cube covering p
  ReweighBranch branch = ReweighBranch::kAlreadyCovered;
  bool opened = false;    // a cube entered C1 or C2 on this insert
  ClusterId id = 0;       // index of the assigned cube in chosen order
};

// Iterative reweighing for unit covering over the integer lattice. Keeps
// chosen cubes in C1 and C2, bookkeeping samples in B (C1 is a subset of B),
// and a weight on every integer unit cube.
class ReweighCoverer {
 public:
  ReweighCoverer(std::size_t d, std::uint64_t seed)
      : d_(d), weights_(d), rng_(seed) {}

  ReweighResult insert(const LatticePoint& p);

  Rational weight_sum(const LatticePoint& p) const;

  std::size_t dim() const { return d_; }
  std::size_t chosen_count() const { return chosen_.size(); }
  const std::vector<LatticePoint>& chosen() const { return chosen_; }
  const std::set<LatticePoint>& c1() const { return c1_; }
  const std::set<LatticePoint>& c2() const { return c2_; }
  const std::set<LatticePoint>& bookkeeping() const { return b_; }
  const std::set<LatticePoint>& points() const { return points_; }
  const WeightMap& weights() const { return weights_; }

  std::size_t step4_count() const { return step4_count_; }
  std::size_t samples_drawn() const { return samples_drawn_; }

 private:
  std::optional<LatticePoint> covering_cube_in(const std::set<LatticePoint>& cubes,
                                               const LatticePoint& p) const;
  ClusterId choose(const LatticePoint& corner, bool into_c1);

  std::size_t d_;
  std::set<LatticePoint> points_;
  std::set<LatticePoint> c1_, c2_, b_;
  std::vector<LatticePoint> chosen_;           // C1 union C2 in choice order
  std::map<LatticePoint, ClusterId> chosen_id_;
  WeightMap weights_;
  RngStream rng_;
  std::size_t step4_count_ = 0;
  std::size_t samples_drawn_ = 0;
};

}  // namespace ucl
