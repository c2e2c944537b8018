#include "ucl/adversaries.hpp"

#include "ucl/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ucl {

std::vector<LatticePoint> gen_S1(std::size_t d, std::int64_t K) {
  if (K < 2 || K % 2 != 0)
    throw std::invalid_argument("gen_S1: K must be even and at least 2");
  std::vector<LatticePoint> out;
  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= static_cast<std::size_t>(K);
  out.reserve(total);
  LatticePoint p(d, 1);
  while (true) {
    out.push_back(p);
    std::size_t j = d;
    while (j > 0 && p[j - 1] == K) p[--j] = 1;
    if (j == 0) break;
    ++p[j - 1];
  }
  return out;
}

Point perturb_point(const LatticePoint& p, const Signature& sigma, const Rational& eps) {
  if (p.size() != sigma.size())
    throw std::invalid_argument("perturb_point: dimension mismatch");
  if (!(eps > 0 && eps < Rational(1, 2)))
    throw std::invalid_argument("perturb_point: eps must lie in (0, 1/2)");
  Point out;
  out.reserve(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    Rational c(p[j]);
    const bool odd = p[j] % 2 != 0;
    if (sigma[j] == -1)
      c += odd ? eps : -eps;
    else if (sigma[j] == 1)
      c += odd ? -eps : eps;
    out.push_back(std::move(c));
  }
  return out;
}

bool observation1_check(const Signature& sigma, const ShiftVector& tau) {
  if (sigma.size() != tau.size())
    throw std::invalid_argument("observation1_check: dimension mismatch");
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    if (sigma[j] == 0) continue;
    if (sigma[j] == -1 && tau[j] == 0) continue;
    if (sigma[j] == 1 && tau[j] == 1) continue;
    return false;
  }
  return true;
}

bool certified_expiry(const Box& bbox, std::size_t j, int s) {
  if (!is_integer(bbox.lo[j]) || bbox.extent(j) != 1) return false;
  const bool odd = rat_num(bbox.lo[j]) % 2 != 0;
  return odd ? s == 1 : s == -1;
}

Rational x_sequence(std::size_t i) {
  if (i < 1) throw std::invalid_argument("x_sequence: i must be at least 1");
  return Rational(1) - pow2_inv(static_cast<unsigned>(2 * i - 1));
}

bool deeply_covered(const Point& v, const Box& u, std::size_t i) {
  if (!is_unit_cube(u)) throw std::invalid_argument("deeply_covered: cube must be unit");
  if (!box_contains(u, v)) return false;
  return dist_to_boundary(u, v) > (Rational(1) - x_sequence(i)) / 2;
}

// ---------------------------------------------------------------------------
// Clustering game
// ---------------------------------------------------------------------------

std::vector<ClusterClassification> classify_clusters(
    const std::vector<ClusterSnapshot>& clusters, const Signature& sigma,
    std::size_t round, const Rational& rho) {
  const std::size_t d = sigma.size();
  if (round < 1 || round > d / 2)
    throw std::invalid_argument("classify_clusters: round out of range");
  if (!(rho > 0)) throw std::invalid_argument("classify_clusters: rho must be positive");
  std::vector<std::size_t> zero_dims;
  for (std::size_t j = 0; j < d; ++j)
    if (sigma[j] == 0) zero_dims.push_back(j);

  const Int threshold_rhs = pow2(static_cast<unsigned>(d - round));
  std::vector<ClusterClassification> out;
  out.reserve(clusters.size());
  for (const ClusterSnapshot& c : clusters) {
    ClusterClassification cls;
    if (c.round_members.empty()) {
      cls.excluded = true;
      out.push_back(cls);
      continue;
    }
    std::set<std::vector<std::int64_t>> projection;
    for (const LatticePoint& m : c.round_members) {
      std::vector<std::int64_t> proj;
      proj.reserve(zero_dims.size());
      for (std::size_t j : zero_dims) proj.push_back(m[j]);
      projection.insert(std::move(proj));
    }
    cls.projection_size = projection.size();
    // small iff |projection| <= 2^(d-i) / rho
    cls.big = Rational(Int(cls.projection_size)) * rho > Rational(threshold_rhs);
    if (cls.big) {
      for (std::size_t j : zero_dims)
        if (c.bbox.extent(j) == 1) ++cls.s_count;
    }
    out.push_back(cls);
  }
  return out;
}

PerturbationChoice choose_perturbation(const std::vector<ClusterSnapshot>& clusters,
                                       const std::vector<ClusterClassification>& classes,
                                       const Signature& sigma, std::size_t round,
                                       AdversaryMode mode, RngStream& rng) {
  const std::size_t d = sigma.size();
  std::vector<std::size_t> zero_dims;
  for (std::size_t j = 0; j < d; ++j)
    if (sigma[j] == 0) zero_dims.push_back(j);
  if (zero_dims.empty())
    throw std::logic_error("choose_perturbation: no zero coordinate left");

  auto certified_count = [&](std::size_t j, int s) {
    std::size_t count = 0;
    for (std::size_t ci = 0; ci < clusters.size(); ++ci)
      if (!classes[ci].excluded && classes[ci].big &&
          certified_expiry(clusters[ci].bbox, j, s))
        ++count;
    return count;
  };

  PerturbationChoice choice;
  if (mode == AdversaryMode::kDeterministic) {
    bool have = false;
    std::size_t best_count = 0;
    for (std::size_t j : zero_dims) {
      for (int s : {-1, +1}) {
        const std::size_t count = certified_count(j, s);
        if (!have || count > best_count) {
          have = true;
          choice.j = j;
          choice.s = s;
          best_count = count;
        }
      }
    }
  } else {
    choice.j = zero_dims[rng.uniform_below(zero_dims.size())];
    choice.s = rng.uniform_below(2) == 0 ? -1 : 1;
  }

  const Rational denom = Rational(2) * Rational(Int(d + 1 - round));
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    if (classes[ci].excluded || !classes[ci].big) continue;
    choice.mean_bound += Rational(Int(classes[ci].s_count)) / denom;
    if (certified_expiry(clusters[ci].bbox, choice.j, choice.s))
      choice.certified.push_back(ci);
  }
  return choice;
}

namespace {

struct ShadowCluster {
  ClusterSnapshot snap;
  bool seeded = false;
  std::vector<std::size_t> rounds;  // distinct rounds, ascending
};

void shadow_add(ShadowCluster& c, const Point& p, const LatticePoint& lattice,
                std::size_t round, std::size_t d) {
  if (!c.seeded) {
    c.snap.bbox = box_of_point(p);
    c.seeded = true;
  } else {
    c.snap.bbox = box_extend(c.snap.bbox, p);
  }
  for (std::size_t j = 0; j < d; ++j)
    if (c.snap.bbox.extent(j) > 1)
      throw GameViolation("clustering opponent grew a cluster past extent 1");
  if (c.rounds.empty() || c.rounds.back() != round) c.rounds.push_back(round);
  c.snap.round_members.push_back(lattice);
}

}  // namespace

ClusterGameReport clustering_game_run(const ClusterGameConfig& config,
                                      ClusteringAlgorithm& opponent, const DuelLogFn& log) {
  const std::size_t d = config.d;
  if (d < 2) throw std::invalid_argument("clustering game: d must be at least 2");
  if (config.K < 4 || config.K % 2 != 0)
    throw std::invalid_argument("clustering game: K must be even and at least 4");
  if (!(config.rho > 0)) throw std::invalid_argument("clustering game: rho must be positive");

  const std::size_t rounds = d / 2;
  const std::vector<LatticePoint> lattice = gen_S1(d, config.K);
  RngStream rng(config.seed);

  ClusterGameReport report;
  report.config = config;
  Signature sigma(d, 0);
  report.signatures.push_back(sigma);

  std::vector<ShadowCluster> shadows;
  for (std::size_t i = 1; i <= rounds; ++i) {
    for (ShadowCluster& c : shadows) c.snap.round_members.clear();

    ClusterRoundStats stats;
    stats.round = i;
    const std::size_t clusters_before = shadows.size();

    for (const LatticePoint& lp : lattice) {
      Point p = perturb_point(lp, sigma, config.eps);
      InsertResult res = opponent.insert(p);
      if (res.opened) {
        if (res.id != shadows.size())
          throw GameViolation("clustering opponent opened a cluster with a stale id");
        shadows.emplace_back();
      } else if (res.id >= shadows.size()) {
        throw GameViolation("clustering opponent assigned to an unknown cluster");
      }
      shadow_add(shadows[res.id], p, lp, i, d);
      report.points.push_back(p);
      if (log) log(DuelLogRecord{i, std::move(p), res.id, res.opened});
      ++stats.points_presented;
    }
    if (opponent.cluster_count() != shadows.size())
      throw GameViolation("clustering opponent cluster count disagrees with referee");

    stats.clusters_after = shadows.size();
    stats.new_clusters = shadows.size() - clusters_before;

    std::vector<ClusterSnapshot> snapshots;
    snapshots.reserve(shadows.size());
    for (const ShadowCluster& c : shadows) snapshots.push_back(c.snap);
    const auto classes = classify_clusters(snapshots, sigma, i, config.rho);
    for (const auto& cls : classes) {
      if (cls.excluded)
        ++stats.excluded_count;
      else if (cls.big)
        ++stats.big_count;
      else
        ++stats.small_count;
    }

    if (i < rounds) {
      const PerturbationChoice choice =
          choose_perturbation(snapshots, classes, sigma, i, config.mode, rng);
      stats.chosen_j = choice.j;
      stats.chosen_s = choice.s;
      stats.certified_ids = choice.certified;
      stats.certified_count = choice.certified.size();
      stats.certified_mean_bound = choice.mean_bound;

      sigma[choice.j] = choice.s;
      std::size_t nonzeros = 0;
      for (int v : sigma) nonzeros += v != 0;
      if (nonzeros != i)
        throw std::logic_error("clustering game: signature nonzero count drifted");
      report.signatures.push_back(sigma);
    }

    report.rounds.push_back(std::move(stats));
  }

  report.alg_clusters = shadows.size();
  report.cluster_rounds.reserve(shadows.size());
  for (const ShadowCluster& c : shadows) report.cluster_rounds.push_back(c.rounds);

  // True expiry: a cluster expires in the last round it received points.
  std::vector<std::size_t> expired_per_round(rounds + 1, 0);
  for (const ShadowCluster& c : shadows) ++expired_per_round[c.rounds.back()];
  for (auto& stats : report.rounds) {
    stats.true_expired = expired_per_round[stats.round];
    report.total_true_expired += stats.true_expired;
  }

  report.certified_all_expired = true;
  for (const auto& stats : report.rounds)
    for (ClusterId id : stats.certified_ids)
      if (shadows[id].rounds.back() != stats.round) report.certified_all_expired = false;

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d) && !report.some_tau_covers_final;
       ++mask) {
    ShiftVector tau(d);
    for (std::size_t j = 0; j < d; ++j) tau[j] = static_cast<int>(mask >> j & 1);
    if (grid_shift_solution(report.points, tau)) report.some_tau_covers_final = true;
  }

  report.opt_lower = structured_opt(InstanceKind::kS1, d, static_cast<std::uint64_t>(config.K));
  report.opt_upper = opt_upper_via_shifts(report.points);
  return report;
}

// ---------------------------------------------------------------------------
// Cube game
// ---------------------------------------------------------------------------

CubeGame::CubeGame(std::size_t d) : d_(d), total_steps_(std::size_t{1} << d) {
  if (d < 1) throw std::invalid_argument("cube game: d must be at least 1");
  const Rational x1 = x_sequence(1);
  q_.lo.assign(d, Rational(0));
  q_.hi.assign(d, x1);
}

std::vector<Point> CubeGame::vertices() const {
  std::vector<Point> out;
  out.reserve(total_steps_);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d_); ++mask) {
    Point v(d_);
    for (std::size_t j = 0; j < d_; ++j) v[j] = (mask >> j & 1) ? q_.hi[j] : q_.lo[j];
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Point> CubeGame::uncovered_vertices() const {
  std::vector<Point> out;
  for (const Point& v : vertices()) {
    bool covered = false;
    for (const Box& u : cubes_)
      if (box_contains(u, v)) {
        covered = true;
        break;
      }
    if (!covered) out.push_back(v);
  }
  return out;
}

const Point& CubeGame::choose_point() {
  if (done()) throw std::logic_error("cube game: all steps already played");
  pending_uncovered_ = uncovered_vertices();
  if (pending_uncovered_.size() < total_steps_ - step_ + 1)
    throw std::logic_error("cube game: invariant (II) failed, too few uncovered vertices");
  points_.push_back(pending_uncovered_.front());
  return points_.back();
}

void CubeGame::record_cover(const Box& placed, bool opened) {
  const Point& p = points_.back();
  if (!opened)
    throw GameViolation("covering opponent reused a cube for an uncovered point");
  if (!is_unit_cube(placed))
    throw GameViolation("covering opponent placed a non-unit cube");
  if (!box_contains(placed, p))
    throw GameViolation("covering opponent left the presented point uncovered");

  CubeGameStep entry;
  entry.step = step_;
  entry.presented = p;
  entry.placed = placed;
  entry.uncovered_before = pending_uncovered_.size();
  for (const Point& v : pending_uncovered_) {
    if (deeply_covered(v, placed, step_)) {
      ++entry.deep_count;
      entry.deep_anchor = v;
    }
  }
  if (entry.deep_count > 1)
    throw std::logic_error("cube game: more than one uncovered vertex deeply covered");

  cubes_.push_back(placed);

  if (step_ < total_steps_) {
    // Anchor at the vertex holding the larger margin inside the placed cube
    // in every dimension. Any other vertex the cube covers then sits within
    // (1 - x_i)/2 of an outward face in each dimension where it moves, and
    // the growth of x_{i+1} - x_i > (1 - x_i)/2 pushes it back out. When a
    // deeply covered vertex exists it owns all the large margins, so this
    // anchor is that vertex.
    Point anchor(d_);
    for (std::size_t j = 0; j < d_; ++j) {
      const bool lo_in = placed.lo[j] <= q_.lo[j] && q_.lo[j] <= placed.hi[j];
      const bool hi_in = placed.lo[j] <= q_.hi[j] && q_.hi[j] <= placed.hi[j];
      if (lo_in && hi_in) {
        const Rational lo_margin = q_.lo[j] - placed.lo[j];
        const Rational hi_margin = placed.hi[j] - q_.hi[j];
        if (lo_margin > hi_margin)
          anchor[j] = q_.lo[j];
        else if (hi_margin > lo_margin)
          anchor[j] = q_.hi[j];
        else
          anchor[j] = p[j];
      } else {
        anchor[j] = lo_in ? q_.lo[j] : q_.hi[j];
      }
    }
    if (entry.deep_anchor && anchor != *entry.deep_anchor)
      throw std::logic_error("cube game: anchor disagrees with the deeply covered vertex");
    entry.anchor = anchor;

    const Rational side = x_sequence(step_ + 1);
    Box next = q_;
    for (std::size_t j = 0; j < d_; ++j) {
      if (anchor[j] == q_.lo[j]) {
        next.hi[j] = next.lo[j] + side;
      } else if (anchor[j] == q_.hi[j]) {
        next.lo[j] = next.hi[j] - side;
      } else {
        throw std::logic_error("cube game: anchor is not a vertex of the current cube");
      }
    }
    for (const Point& q : points_)
      if (!box_contains(next, q))
        throw std::logic_error("cube game: invariant (I) failed, a point left the cube");
    q_ = next;
  }

  log_.push_back(std::move(entry));
  ++step_;
}

CubeGameReport covering_game_run(std::size_t d, CoveringAlgorithm& bob, const DuelLogFn& log) {
  CubeGame game(d);
  std::vector<Box> seen;  // immutability snapshots
  while (!game.done()) {
    const std::size_t step = game.step_index();
    const Point p = game.choose_point();
    InsertResult res = bob.insert(p);
    if (res.id >= bob.cube_count())
      throw GameViolation("covering opponent returned an unknown cube id");
    if (res.opened && res.id != seen.size())
      throw GameViolation("covering opponent opened a cube with a stale id");
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!(bob.cube(i).cube == seen[i]))
        throw GameViolation("covering opponent moved an already placed cube");
    const Box placed = bob.cube(res.id).cube;
    if (res.opened) seen.push_back(placed);
    game.record_cover(placed, res.opened);
    if (log) log(DuelLogRecord{step, p, res.id, res.opened});
  }

  CubeGameReport report;
  report.d = d;
  report.alg_cubes = bob.cube_count();
  report.steps = game.log();
  report.points = game.points();
  report.final_cube = game.current_cube();
  return report;
}

InsertResult DeepSeekingCoverer::insert(const Point& p) {
  for (const CoverCube& c : cubes_)
    if (box_contains(c.cube, p)) return {c.id, false};

  const Box& q = game_->current_cube();
  const Rational slack = Rational(1) - x_sequence(game_->step_index());
  const Rational quarter = slack / 4;

  Box u{q.lo, q.hi};
  if (rng_.uniform_below(2) == 0) {
    // Wrap the cube with balanced margins: every vertex sits at distance
    // exactly slack/2, never deep.
    for (std::size_t j = 0; j < d_; ++j) {
      u.lo[j] -= 2 * quarter;
      u.hi[j] += 2 * quarter;
    }
  } else {
    // Push one uncovered vertex deep: 3/4 of the slack on its side.
    const auto uncovered = game_->uncovered_vertices();
    const Point& v = uncovered[rng_.uniform_below(uncovered.size())];
    for (std::size_t j = 0; j < d_; ++j) {
      if (v[j] == q.lo[j]) {
        u.lo[j] -= 3 * quarter;
        u.hi[j] += quarter;
      } else {
        u.lo[j] -= quarter;
        u.hi[j] += 3 * quarter;
      }
    }
  }
  ClusterId id = cubes_.size();
  cubes_.push_back(CoverCube{id, std::move(u)});
  return {id, true};
}

// ---------------------------------------------------------------------------
// Hard instances for the greedy algorithm
// ---------------------------------------------------------------------------

std::vector<Point> diagonal_pairs_instance(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("diagonal_pairs_instance: n must be at least 1");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(2 * n));
  for (std::int64_t i = 0; i < n; ++i) {
    out.push_back(Point{Rational(n + i, n), Rational(i, n)});
    out.push_back(Point{Rational(i, n), Rational(n + i, n)});
  }
  return out;
}

namespace {

// All points base + {0,1}^d for each base, lexicographic overall.
std::vector<LatticePoint> offset_expand(const std::vector<LatticePoint>& bases, std::size_t d) {
  std::set<LatticePoint> out;
  for (const LatticePoint& base : bases) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
      LatticePoint p = base;
      for (std::size_t j = 0; j < d; ++j) p[j] += static_cast<std::int64_t>(mask >> j & 1);
      out.insert(std::move(p));
    }
  }
  return {out.begin(), out.end()};
}

std::vector<LatticePoint> residue_grid(std::size_t d, std::int64_t K, std::int64_t residue) {
  std::vector<std::int64_t> axis;
  for (std::int64_t x = residue; x <= K; x += 4) axis.push_back(x);
  std::vector<LatticePoint> out;
  LatticePoint p(d);
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    for (std::size_t j = 0; j < d; ++j) p[j] = axis[idx[j]];
    out.push_back(p);
    std::size_t j = d;
    while (j > 0 && ++idx[j - 1] == axis.size()) idx[--j] = 0;
    if (j == 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BarycentricInstance barycentric_instance(std::size_t d, std::int64_t K) {
  if (K < 4 || K % 4 != 0)
    throw std::invalid_argument("barycentric_instance: K must be a positive multiple of 4");

  BarycentricInstance inst;
  inst.d = d;
  inst.K = K;
  inst.a = residue_grid(d, K, 0);
  inst.c = residue_grid(d, K, 2);
  inst.b = offset_expand(inst.a, d);
  inst.dd = offset_expand(inst.c, d);

  std::set<LatticePoint> matched;
  for (const LatticePoint& v : inst.dd) {
    LatticePoint u(d);
    for (std::size_t j = 0; j < d; ++j) {
      // v_j = c_j + beta_j with c_j = 2 (mod 4); the unique B-coordinate
      // within distance 1 is c_j + 2 when beta_j = 1, else c_j - 1.
      const bool beta = ((v[j] % 4) + 4) % 4 == 3;
      u[j] = beta ? v[j] + 1 : v[j] - 1;
    }
    matched.insert(u);
    inst.matching.emplace_back(std::move(u), v);
  }
  for (const LatticePoint& u : inst.b)
    if (!matched.count(u)) inst.leftovers.push_back(u);

  for (const auto& [u, v] : inst.matching) {
    inst.presentation.push_back(u);
    inst.presentation.push_back(v);
  }
  inst.presentation.insert(inst.presentation.end(), inst.leftovers.begin(),
                           inst.leftovers.end());
  return inst;
}

}  // namespace ucl
