#pragma once

// Executable adversaries and hard-instance generators: the signature-driven
// clustering game, the vertex-chasing cube game for covering, diagonal
// pairs, and the barycentric lattice instance for the greedy algorithm.

#include "ucl/algorithms.hpp"
#include "ucl/geometry.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ucl {

// An opponent broke the online rules (assignment changed, cluster grew past
// extent 1, cube moved, point left uncovered). Maps to exit code 2.
struct GameViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Entries in {-1, 0, +1}; round i leaves exactly d-i+1 zeros.
using Signature = std::vector<int>;
// Entries in {0, 1}, indexing the translated odd-corner tilings.
using ShiftVector = std::vector<int>;

// All K^d points with coordinates in {1..K}, lexicographic. K must be even
// (the closed-form first-round optimum needs it).
std::vector<LatticePoint> gen_S1(std::size_t d, std::int64_t K);

// Per coordinate: sigma_j = 0 keeps p_j; sigma_j = -1 sends odd p_j to
// p_j + eps and even p_j to p_j - eps; sigma_j = +1 does the opposite.
Point perturb_point(const LatticePoint& p, const Signature& sigma, const Rational& eps);

// Whether the tau-shifted odd-corner tiling covers a perturbation with the
// given signature: every j has sigma_j = 0, or (-1 with tau_j = 0), or
// (+1 with tau_j = 1).
bool observation1_check(const Signature& sigma, const ShiftVector& tau);

// A cluster whose j-th extent is exactly [m, m+1] cannot receive any point
// of later rounds once dimension j is perturbed with sign s, provided the
// sign pushes both future coordinate values out: s = +1 for odd m, s = -1
// for even m.
bool certified_expiry(const Box& bbox, std::size_t j, int s);

// x_i = 1 - 2^(1-2i); strictly increasing toward 1.
Rational x_sequence(std::size_t i);

// Inside U at boundary distance strictly greater than (1 - x_i) / 2.
bool deeply_covered(const Point& v, const Box& u, std::size_t i);

// ---------------------------------------------------------------------------
// Clustering game (adaptive deterministic / oblivious randomized adversary)
// ---------------------------------------------------------------------------

enum class AdversaryMode { kDeterministic, kOblivious };

struct ClusterGameConfig {
  std::size_t d = 2;
  std::int64_t K = 4;
  Rational rho = 2;              // assumed competitive ratio of the opponent
  Rational eps = Rational(1, 4);
  AdversaryMode mode = AdversaryMode::kDeterministic;
  std::uint64_t seed = 0;
};

struct ClusterClassification {
  bool excluded = false;  // no point of the current round
  bool big = false;
  std::size_t projection_size = 0;
  int s_count = 0;  // unperturbed dimensions with extent exactly 1 (big only)
};

// What the adversary sees of one opponent cluster: the bounding box over all
// members ever assigned, and the lattice origins of this round's members.
struct ClusterSnapshot {
  Box bbox;
  std::vector<LatticePoint> round_members;
};

// Round-i classification: project this round's members onto the unperturbed
// coordinates; small iff the projection holds at most 2^(d-i)/rho points.
// Big clusters also get s(C), the number of unperturbed dimensions whose
// total extent is exactly 1. Clusters without round members are excluded.
std::vector<ClusterClassification> classify_clusters(
    const std::vector<ClusterSnapshot>& clusters, const Signature& sigma,
    std::size_t round, const Rational& rho);

struct PerturbationChoice {
  std::size_t j = 0;
  int s = -1;
  std::vector<ClusterId> certified;  // big clusters certified to expire
  Rational mean_bound = 0;           // sum over big C of s(C) / (2(d+1-i))
};

// One adversary step: pick the coordinate and sign to perturb next.
// Deterministic mode maximizes the number of certified big-cluster expiries
// (ties: smallest j, then s = -1); oblivious mode draws uniformly from the
// zero coordinates and signs, ignoring the clusters.
PerturbationChoice choose_perturbation(const std::vector<ClusterSnapshot>& clusters,
                                       const std::vector<ClusterClassification>& classes,
                                       const Signature& sigma, std::size_t round,
                                       AdversaryMode mode, RngStream& rng);

struct ClusterRoundStats {
  std::size_t round = 0;
  std::size_t points_presented = 0;
  std::size_t clusters_after = 0;
  std::size_t new_clusters = 0;
  std::size_t small_count = 0;
  std::size_t big_count = 0;
  std::size_t excluded_count = 0;
  // Set for rounds that pick a perturbation (all but the last).
  std::optional<std::size_t> chosen_j;
  int chosen_s = 0;
  std::size_t certified_count = 0;
  Rational certified_mean_bound = 0;  // sum over big C of s(C) / (2(d+1-i))
  std::vector<ClusterId> certified_ids;
  std::size_t true_expired = 0;  // filled after the run
};

struct ClusterGameReport {
  ClusterGameConfig config;
  std::vector<Signature> signatures;  // sigma(1) .. sigma(rounds)
  std::vector<ClusterRoundStats> rounds;
  std::vector<std::vector<std::size_t>> cluster_rounds;  // id -> rounds received
  std::size_t alg_clusters = 0;
  std::size_t total_true_expired = 0;
  bool certified_all_expired = false;  // every certified cluster got no later point
  bool some_tau_covers_final = false;
  std::uint64_t opt_lower = 0;                 // exact optimum of the first round
  std::optional<std::uint64_t> opt_upper;      // best shift solution on the union
  std::vector<Point> points;                   // full presentation order
};

struct DuelLogRecord {
  std::size_t round_or_step = 0;
  Point point;
  ClusterId cluster = 0;
  bool opened = false;
};
using DuelLogFn = std::function<void(const DuelLogRecord&)>;

// Plays floor(d/2) rounds of K^d perturbed lattice points against a
// clustering algorithm, verifying the online rules per insert and the
// expiry certificates post hoc. Throws GameViolation on rule breaches.
ClusterGameReport clustering_game_run(const ClusterGameConfig& config,
                                      ClusteringAlgorithm& opponent,
                                      const DuelLogFn& log = {});

// ---------------------------------------------------------------------------
// Cube game (covering lower bound)
// ---------------------------------------------------------------------------

struct CubeGameStep {
  std::size_t step = 0;
  Point presented;
  Box placed;
  std::size_t uncovered_before = 0;
  std::size_t deep_count = 0;       // deeply covered, previously uncovered
  std::optional<Point> deep_anchor;
  Point anchor;                     // vertex the next cube grows away from
};

struct CubeGameReport {
  std::size_t d = 0;
  std::size_t alg_cubes = 0;
  std::vector<CubeGameStep> steps;
  std::vector<Point> points;
  Box final_cube;  // side < 1, contains every presented point
};

// Alice's state for the cube game; exposed so test opponents may inspect the
// current cube and its uncovered vertices.
class CubeGame {
 public:
  explicit CubeGame(std::size_t d);

  bool done() const { return step_ > total_steps_; }
  std::size_t step_index() const { return step_; }
  const Box& current_cube() const { return q_; }
  std::vector<Point> uncovered_vertices() const;

  // Lexicographically smallest uncovered vertex; checks invariant (II).
  const Point& choose_point();
  // Verifies the cover, scans deep coverage, grows the cube.
  void record_cover(const Box& placed, bool opened);

  const std::vector<CubeGameStep>& log() const { return log_; }
  const std::vector<Point>& points() const { return points_; }

 private:
  std::vector<Point> vertices() const;

  std::size_t d_;
  std::size_t total_steps_;
  std::size_t step_ = 1;
  Box q_;
  std::vector<Point> points_;
  std::vector<Box> cubes_;
  std::vector<Point> pending_uncovered_;
  std::vector<CubeGameStep> log_;
};

// Plays 2^d steps against a covering algorithm, verifying cube immutability
// and coverage per step. Lemma and invariant failures throw std::logic_error;
// opponent misbehavior throws GameViolation.
CubeGameReport covering_game_run(std::size_t d, CoveringAlgorithm& bob,
                                 const DuelLogFn& log = {});

// A covering opponent that tries to break the deep-coverage lemma: it wraps
// Alice's current cube and pushes one randomly chosen uncovered vertex
// strictly deeper than (1 - x_i) / 2 whenever it can.
class DeepSeekingCoverer : public CoveringAlgorithm {
 public:
  DeepSeekingCoverer(std::size_t d, const CubeGame& game, std::uint64_t seed)
      : d_(d), game_(&game), rng_(seed) {}

  InsertResult insert(const Point& p) override;
  std::size_t cube_count() const override { return cubes_.size(); }
  const CoverCube& cube(ClusterId id) const override { return cubes_.at(id); }
  std::string name() const override { return "deepseek"; }

 private:
  std::size_t d_;
  const CubeGame* game_;
  RngStream rng_;
  std::vector<CoverCube> cubes_;
};

// ---------------------------------------------------------------------------
// Hard instances for the greedy algorithm
// ---------------------------------------------------------------------------

// 2n planar points in pairs (1 + i/n, i/n), (i/n, 1 + i/n), i ascending.
std::vector<Point> diagonal_pairs_instance(std::int64_t n);

struct BarycentricInstance {
  std::size_t d = 0;
  std::int64_t K = 0;
  std::vector<LatticePoint> a, b, c, dd;  // A, B = A + {0,1}^d, C, D = C + {0,1}^d
  // One pair per element of D: (u in B, v in D) with linf distance exactly 1.
  std::vector<std::pair<LatticePoint, LatticePoint>> matching;
  std::vector<LatticePoint> leftovers;     // B-points not matched
  std::vector<LatticePoint> presentation;  // pairs (u before v), then leftovers
};

// K must be a positive multiple of 4.
BarycentricInstance barycentric_instance(std::size_t d, std::int64_t K);

}  // namespace ucl
