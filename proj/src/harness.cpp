#include "ucl/harness.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace ucl {

std::vector<Point> Instance::points() const {
  std::vector<Point> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    Point p;
    p.reserve(d);
    for (const Int& v : row) p.emplace_back(v, den);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<LatticePoint> Instance::lattice_points() const {
  if (den != 1)
    throw std::invalid_argument("instance is not a lattice instance (den != 1)");
  std::vector<LatticePoint> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    LatticePoint p;
    p.reserve(d);
    for (const Int& v : row) {
      if (v < std::numeric_limits<std::int64_t>::min() ||
          v > std::numeric_limits<std::int64_t>::max())
        throw std::invalid_argument("lattice coordinate out of 64-bit range");
      p.push_back(static_cast<std::int64_t>(v));
    }
    out.push_back(std::move(p));
  }
  return out;
}

Instance parse_instance(std::istream& in) {
  Instance inst;
  long long d = 0, n = 0;
  std::string den_str;
  if (!(in >> d >> n >> den_str))
    throw std::invalid_argument("instance parse error: missing `d n den` header");
  Int den;
  try {
    den = Int(den_str);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("instance parse error: bad denominator");
  }
  if (d < 1 || n < 1 || den < 1)
    throw std::invalid_argument("instance parse error: d, n, den must be positive");
  inst.d = static_cast<std::size_t>(d);
  inst.den = den;
  inst.rows.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    std::vector<Int> row;
    row.reserve(inst.d);
    for (long long j = 0; j < d; ++j) {
      std::string tok;
      if (!(in >> tok))
        throw std::invalid_argument("instance parse error: truncated point list");
      try {
        row.emplace_back(tok);
      } catch (const std::runtime_error&) {
        throw std::invalid_argument("instance parse error: bad integer '" + tok + "'");
      }
    }
    inst.rows.push_back(std::move(row));
  }
  std::string extra;
  if (in >> extra)
    throw std::invalid_argument("instance parse error: trailing tokens after point list");
  return inst;
}

Instance parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  return parse_instance(in);
}

void write_instance(const Instance& inst, std::ostream& out) {
  out << inst.d << ' ' << inst.rows.size() << ' ' << inst.den << '\n';
  for (const auto& row : inst.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
    out << '\n';
  }
}

void write_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  write_instance(inst, out);
}

Instance instance_from_points(const std::vector<Point>& pts) {
  if (pts.empty()) throw std::invalid_argument("instance_from_points: empty point set");
  Instance inst;
  inst.d = pts[0].size();
  Int den = 1;
  for (const auto& p : pts)
    for (const auto& c : p) den = boost::multiprecision::lcm(den, rat_den(c));
  inst.den = den;
  for (const auto& p : pts) {
    std::vector<Int> row;
    row.reserve(inst.d);
    for (const auto& c : p) row.push_back(rat_num(c) * (den / rat_den(c)));
    inst.rows.push_back(std::move(row));
  }
  return inst;
}

Instance instance_from_lattice(const std::vector<LatticePoint>& pts) {
  if (pts.empty()) throw std::invalid_argument("instance_from_lattice: empty point set");
  Instance inst;
  inst.d = pts[0].size();
  inst.den = 1;
  for (const auto& p : pts) inst.rows.emplace_back(p.begin(), p.end());
  return inst;
}

Instance gen_instance_s1(std::size_t d, std::int64_t K) {
  return instance_from_lattice(gen_S1(d, K));
}

Instance gen_instance_barycentric(std::size_t d, std::int64_t K) {
  return instance_from_lattice(barycentric_instance(d, K).presentation);
}

Instance gen_instance_diagonal(std::int64_t n) {
  return instance_from_points(diagonal_pairs_instance(n));
}

std::string csv_header() {
  return "family,d,K_or_n,alg,seed,alg_count,opt,ratio_num,ratio_den";
}

std::string csv_row(const RunReport& r) {
  std::ostringstream os;
  os << r.family << ',' << r.d << ',' << r.k_or_n << ',' << r.alg << ',' << r.seed << ','
     << r.alg_count << ',' << r.opt << ',' << rat_num(r.ratio) << ',' << rat_den(r.ratio);
  return os.str();
}

std::string render_report(const RunReport& r) {
  std::ostringstream os;
  os << "family=" << r.family << " d=" << r.d << " K_or_n=" << r.k_or_n << " alg=" << r.alg
     << " seed=" << r.seed << '\n'
     << "ALG=" << r.alg_count << " OPT=" << r.opt << " (" << r.opt_source << ")"
     << " ratio=" << rat_str(r.ratio) << " ~ " << rat_decimal(r.ratio) << '\n';
  for (const auto& [name, ok] : r.checks)
    os << "  check " << name << ": " << (ok ? "pass" : "FAIL") << '\n';
  if (!r.details.empty()) os << r.details;
  return os.str();
}

namespace {

std::string corner_str(const std::vector<Rational>& coords) {
  std::string out;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (j) out += ' ';
    out += rat_str(coords[j]);
  }
  return out;
}

std::uint64_t checked_count(std::size_t n) { return static_cast<std::uint64_t>(n); }

struct OptResult {
  std::uint64_t value = 0;
  std::string source;
};

OptResult resolve_opt(const std::vector<Point>& pts, const std::optional<FormulaSpec>& formula,
                      std::size_t d) {
  if (formula) {
    return {structured_opt(formula->kind, d, formula->param), "formula"};
  }
  return {checked_count(exact_opt(pts).cubes.size()), "oracle"};
}

}  // namespace

SimulateOutcome simulate(const std::string& alg, const Instance& inst, std::uint64_t seed,
                         const std::optional<FormulaSpec>& formula) {
  const std::vector<Point> pts = inst.points();
  const std::size_t d = inst.d;

  SimulateOutcome out;
  RunReport& rep = out.report;
  rep.alg = alg;
  rep.seed = seed;
  rep.d = d;
  if (formula) {
    rep.family = formula->family;
    rep.k_or_n = formula->param;
  } else {
    rep.k_or_n = pts.size();
  }

  std::ostringstream transcript;
  bool rules_ok = true;
  bool shape_ok = true;

  if (alg == "reweigh") {
    ReweighCoverer algo(d, seed);
    const std::vector<LatticePoint> lattice = inst.lattice_points();
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      ReweighResult res = algo.insert(lattice[i]);
      rules_ok &= res.id < algo.chosen_count();
      transcript << (i + 1) << ' ' << static_cast<int>(res.branch) << ' ' << res.id << ' '
                 << res.opened << ' ' << corner_str(to_point(res.assigned)) << '\n';
    }
    rep.alg_count = checked_count(algo.chosen_count());
  } else if (alg == "grid" || alg == "greedy") {
    std::unique_ptr<ClusteringAlgorithm> algo;
    if (alg == "grid")
      algo = std::make_unique<GridClusterer>(d);
    else
      algo = std::make_unique<GreedyClusterer>(d);
    std::size_t before = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      InsertResult res = algo->insert(pts[i]);
      rules_ok &= res.opened ? (res.id == before && algo->cluster_count() == before + 1)
                             : (res.id < before && algo->cluster_count() == before);
      before = algo->cluster_count();
      const Box& bbox = algo->cluster(res.id).bbox;
      for (std::size_t j = 0; j < d; ++j) shape_ok &= bbox.extent(j) <= 1;
      transcript << (i + 1) << ' ' << alg << ' ' << res.id << ' ' << res.opened << ' '
                 << corner_str(bbox.lo) << '\n';
    }
    rep.alg_count = checked_count(algo->cluster_count());
  } else if (alg == "centered" || alg == "firstfit") {
    std::unique_ptr<CoveringAlgorithm> algo;
    if (alg == "centered")
      algo = std::make_unique<CenteredCoverer>(d);
    else
      algo = std::make_unique<FirstFitCoverer>(d);
    std::vector<Box> seen;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      InsertResult res = algo->insert(pts[i]);
      rules_ok &= res.opened ? res.id == seen.size() : res.id < seen.size();
      if (res.opened) seen.push_back(algo->cube(res.id).cube);
      const CoverCube& cc = algo->cube(res.id);
      shape_ok &= is_unit_cube(cc.cube) && box_contains(cc.cube, pts[i]) &&
                  cc.cube == seen[res.id];
      transcript << (i + 1) << ' ' << alg << ' ' << res.id << ' ' << res.opened << ' '
                 << corner_str(cc.cube.lo) << '\n';
    }
    rep.alg_count = checked_count(algo->cube_count());
  } else {
    throw std::invalid_argument("simulate: unknown algorithm '" + alg + "'");
  }

  const OptResult opt = resolve_opt(pts, formula, d);
  rep.opt = opt.value;
  rep.opt_source = opt.source;
  rep.ratio = Rational(Int(rep.alg_count), Int(rep.opt));
  rep.checks.emplace_back("online_rules", rules_ok);
  rep.checks.emplace_back(alg == "grid" || alg == "greedy" ? "bbox_extent_le_1"
                                                           : "cubes_unit_and_covering",
                          shape_ok);
  rep.checks.emplace_back("alg_ge_opt", rep.alg_count >= rep.opt);
  out.transcript = transcript.str();
  return out;
}

namespace {

std::unique_ptr<ClusteringAlgorithm> make_clustering(const std::string& alg, std::size_t d) {
  if (alg == "grid") return std::make_unique<GridClusterer>(d);
  if (alg == "greedy") return std::make_unique<GreedyClusterer>(d);
  throw std::invalid_argument("clustering duel: unsupported algorithm '" + alg + "'");
}

std::unique_ptr<CoveringAlgorithm> make_covering(const std::string& alg, std::size_t d) {
  if (alg == "grid") return std::make_unique<GridCoverer>(d);
  if (alg == "centered") return std::make_unique<CenteredCoverer>(d);
  if (alg == "firstfit") return std::make_unique<FirstFitCoverer>(d);
  throw std::invalid_argument("covering duel: unsupported algorithm '" + alg + "'");
}

DuelLogFn jsonl_logger(std::ostream* sink) {
  if (!sink) return {};
  return [sink](const DuelLogRecord& rec) {
    nlohmann::json j;
    j["round_or_step"] = rec.round_or_step;
    std::vector<std::string> coords;
    coords.reserve(rec.point.size());
    for (const auto& c : rec.point) coords.push_back(rat_str(c));
    j["point"] = coords;
    j["cluster"] = rec.cluster;
    j["opened"] = rec.opened;
    *sink << j.dump() << '\n';
  };
}

RunReport clustering_trial(const DuelParams& params, std::uint64_t trial_seed,
                           std::ostream* jsonl) {
  ClusterGameConfig config;
  config.d = params.d;
  config.K = params.K;
  config.rho = params.rho;
  config.eps = params.eps;
  config.mode = params.mode;
  config.seed = trial_seed;

  auto opponent = make_clustering(params.alg, params.d);
  ClusterGameReport game = clustering_game_run(config, *opponent, jsonl_logger(jsonl));

  RunReport rep;
  rep.family = "clustering-game";
  rep.d = params.d;
  rep.k_or_n = static_cast<std::uint64_t>(params.K);
  rep.alg = params.alg;
  rep.seed = trial_seed;
  rep.alg_count = static_cast<std::uint64_t>(game.alg_clusters);
  rep.opt = game.opt_lower;
  rep.opt_source = "lower-bound";
  rep.ratio = Rational(Int(rep.alg_count), Int(rep.opt));

  bool signature_ok = true;
  for (std::size_t i = 0; i < game.signatures.size(); ++i) {
    std::size_t nz = 0;
    for (int v : game.signatures[i]) nz += v != 0;
    signature_ok &= nz == i;
  }
  rep.checks.emplace_back("signature_nonzeros", signature_ok);
  rep.checks.emplace_back("certified_expired_confirmed", game.certified_all_expired);
  rep.checks.emplace_back("some_tau_covers_final", game.some_tau_covers_final);
  rep.checks.emplace_back("created_ge_expired",
                          game.alg_clusters >= game.total_true_expired);
  rep.checks.emplace_back("alg_ge_opt_lower", rep.alg_count >= rep.opt);

  std::ostringstream os;
  os << "  rounds=" << game.rounds.size() << " opt_lower=" << game.opt_lower;
  if (game.opt_upper) os << " opt_upper_via_shifts=" << *game.opt_upper;
  os << '\n';
  for (const auto& r : game.rounds) {
    os << "  round " << r.round << ": points=" << r.points_presented
       << " clusters=" << r.clusters_after << " new=" << r.new_clusters
       << " small=" << r.small_count << " big=" << r.big_count
       << " excluded=" << r.excluded_count;
    if (r.chosen_j)
      os << " chose(j=" << *r.chosen_j << ",s=" << (r.chosen_s > 0 ? "+1" : "-1")
         << ") certified=" << r.certified_count
         << " mean_bound=" << rat_decimal(r.certified_mean_bound, 2);
    os << " expired=" << r.true_expired << '\n';
  }
  rep.details = os.str();
  return rep;
}

RunReport covering_trial(const DuelParams& params, std::uint64_t trial_seed,
                         std::ostream* jsonl) {
  auto bob = make_covering(params.alg, params.d);
  CubeGameReport game = covering_game_run(params.d, *bob, jsonl_logger(jsonl));

  RunReport rep;
  rep.family = "covering-game";
  rep.d = params.d;
  rep.k_or_n = static_cast<std::uint64_t>(game.points.size());
  rep.alg = params.alg;
  rep.seed = trial_seed;
  rep.alg_count = static_cast<std::uint64_t>(game.alg_cubes);

  const CoverSolution opt_sol = exact_opt(game.points);
  rep.opt = static_cast<std::uint64_t>(opt_sol.cubes.size());
  rep.opt_source = "oracle";
  rep.ratio = Rational(Int(rep.alg_count), Int(rep.opt));

  bool deep_ok = true, monotone_ok = true;
  for (const auto& s : game.steps) {
    deep_ok &= s.deep_count <= 1;
    monotone_ok &= s.uncovered_before >= (std::size_t{1} << params.d) - s.step + 1;
  }
  rep.checks.emplace_back("deep_lemma_at_most_one", deep_ok);
  rep.checks.emplace_back("uncovered_invariant", monotone_ok);
  rep.checks.emplace_back("alg_equals_2^d",
                          rep.alg_count == (std::uint64_t{1} << params.d));
  rep.checks.emplace_back("opt_is_1", rep.opt == 1);

  std::ostringstream os;
  for (const auto& s : game.steps)
    os << "  step " << s.step << ": uncovered_before=" << s.uncovered_before
       << " deep=" << s.deep_count << '\n';
  rep.details = os.str();
  return rep;
}

}  // namespace

DuelOutcome duel(const DuelParams& params, std::ostream* jsonl_log) {
  if (params.adversary != "clustering" && params.adversary != "covering")
    throw std::invalid_argument("duel: adversary must be clustering or covering");
  if (params.trials < 1) throw std::invalid_argument("duel: trials must be at least 1");

  DuelOutcome out;
  for (std::size_t t = 0; t < params.trials; ++t) {
    const std::uint64_t trial_seed = RngStream::derive(params.seed, t);
    RunReport rep = params.adversary == "clustering"
                        ? clustering_trial(params, trial_seed, jsonl_log)
                        : covering_trial(params, trial_seed, jsonl_log);
    for (const auto& [name, ok] : rep.checks)
      if (!ok) ++out.check_failures[name];
    if (t == 0) {
      out.min_ratio = out.max_ratio = rep.ratio;
    } else {
      out.min_ratio = std::min(out.min_ratio, rep.ratio);
      out.max_ratio = std::max(out.max_ratio, rep.ratio);
    }
    out.mean_ratio += rep.ratio;
    out.trials.push_back(std::move(rep));
  }
  out.mean_ratio /= Int(params.trials);

  std::ostringstream os;
  os << "trials=" << params.trials << " mean=" << rat_str(out.mean_ratio) << " ~ "
     << rat_decimal(out.mean_ratio) << " min=" << rat_str(out.min_ratio)
     << " max=" << rat_str(out.max_ratio) << '\n';
  for (const auto& [name, count] : out.check_failures)
    os << "  FAILED check " << name << " in " << count << " trial(s)\n";
  out.details = os.str();
  return out;
}

std::string summarize_csv(const std::vector<std::string>& csv_texts) {
  struct Key {
    std::string alg, family;
    std::size_t d;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, std::vector<Rational>> groups;
  std::vector<std::string> bad_lines;

  for (const auto& text : csv_texts) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line == csv_header()) continue;
      std::vector<std::string> fields;
      std::istringstream ls(line);
      std::string f;
      while (std::getline(ls, f, ',')) fields.push_back(f);
      if (fields.size() != 9) {
        bad_lines.push_back(line);
        continue;
      }
      try {
        Key key{fields[3], fields[0], static_cast<std::size_t>(std::stoull(fields[1]))};
        const Int ratio_num{fields[7]}, ratio_den{fields[8]};
        const Rational ratio{ratio_num, ratio_den};
        const std::uint64_t alg_count = std::stoull(fields[5]);
        const std::uint64_t opt = std::stoull(fields[6]);
        if (opt == 0 || alg_count < opt) {
          bad_lines.push_back(line);
          continue;
        }
        groups[key].push_back(ratio);
      } catch (const std::exception&) {
        bad_lines.push_back(line);
      }
    }
  }
  if (!bad_lines.empty()) {
    std::string msg = "malformed CSV rows:";
    for (const auto& l : bad_lines) msg += "\n  " + l;
    throw std::invalid_argument(msg);
  }

  std::ostringstream os;
  os << std::left << std::setw(10) << "alg" << std::setw(18) << "family" << std::setw(4)
     << "d" << std::setw(7) << "runs" << std::setw(16) << "worst" << "mean\n";
  for (const auto& [key, ratios] : groups) {
    Rational worst = ratios.front(), sum = 0;
    for (const auto& r : ratios) {
      worst = std::max(worst, r);
      sum += r;
    }
    const Rational mean = sum / Int(ratios.size());
    os << std::left << std::setw(10) << key.alg << std::setw(18) << key.family
       << std::setw(4) << key.d << std::setw(7) << ratios.size() << std::setw(16)
       << rat_decimal(worst) << rat_decimal(mean) << '\n';
  }

  // Ratio-vs-d series per (alg, family) observed in at least two dimensions.
  std::map<std::pair<std::string, std::string>, std::map<std::size_t, std::vector<Rational>>>
      series;
  for (const auto& [key, ratios] : groups)
    series[{key.alg, key.family}][key.d] = ratios;
  for (const auto& [ident, per_d] : series) {
    if (per_d.size() < 2) continue;
    os << "ratio vs d for " << ident.first << " on " << ident.second << ":";
    for (const auto& [d, ratios] : per_d) {
      Rational sum = 0;
      for (const auto& r : ratios) sum += r;
      os << " d=" << d << ":" << rat_decimal(sum / Int(ratios.size()));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace ucl
