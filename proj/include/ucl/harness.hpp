#pragma once

// Orchestration: instance text IO, simulation and duel runners, CSV rows and
// the summary report. Everything here is deterministic given (instance,
// algorithm, seed).

#include "ucl/adversaries.hpp"
#include "ucl/algorithms.hpp"
#include "ucl/oracle.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ucl {

// Text format: line 1 holds `d n den`, then n lines of d integers each;
// coordinate value = integer / den.
struct Instance {
  std::size_t d = 0;
  Int den = 1;
  std::vector<std::vector<Int>> rows;

  std::vector<Point> points() const;
  // Requires den == 1 and 64-bit coordinates.
  std::vector<LatticePoint> lattice_points() const;
};

Instance parse_instance(std::istream& in);
Instance parse_instance_file(const std::string& path);
void write_instance(const Instance& inst, std::ostream& out);
void write_instance_file(const Instance& inst, const std::string& path);

Instance instance_from_points(const std::vector<Point>& pts);
Instance instance_from_lattice(const std::vector<LatticePoint>& pts);

// Generator families exposed by `gen`.
Instance gen_instance_s1(std::size_t d, std::int64_t K);
Instance gen_instance_barycentric(std::size_t d, std::int64_t K);
Instance gen_instance_diagonal(std::int64_t n);

struct FormulaSpec {
  InstanceKind kind;
  std::uint64_t param = 0;   // K or n
  std::string family;
};

struct RunReport {
  std::string family = "file";
  std::size_t d = 0;
  std::uint64_t k_or_n = 0;
  std::string alg;
  std::uint64_t seed = 0;
  std::uint64_t alg_count = 0;
  std::uint64_t opt = 0;
  Rational ratio = 0;
  std::string opt_source;  // formula | oracle | lower-bound
  std::vector<std::pair<std::string, bool>> checks;
  std::string details;     // per-round / per-step statistics, preformatted
};

std::string csv_header();
std::string csv_row(const RunReport& r);
std::string render_report(const RunReport& r);

struct SimulateOutcome {
  RunReport report;
  std::string transcript;  // one line per insert: i alg_or_branch id opened lo...
};

// alg in {grid, greedy, centered, reweigh}; reweigh needs a lattice instance.
SimulateOutcome simulate(const std::string& alg, const Instance& inst, std::uint64_t seed,
                         const std::optional<FormulaSpec>& formula = std::nullopt);

struct DuelOutcome {
  std::vector<RunReport> trials;
  Rational mean_ratio = 0, min_ratio = 0, max_ratio = 0;
  std::map<std::string, std::size_t> check_failures;
  std::string details;
};

struct DuelParams {
  std::string adversary;  // clustering | covering
  std::string alg;        // clustering: grid|greedy; covering: grid|centered|firstfit
  std::size_t d = 2;
  std::int64_t K = 4;
  Rational rho = 2;
  Rational eps = Rational(1, 4);
  AdversaryMode mode = AdversaryMode::kDeterministic;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
};

DuelOutcome duel(const DuelParams& params, std::ostream* jsonl_log = nullptr);

// CSV aggregation for `report`: per (alg, family, d) worst and mean ratios,
// plus a ratio-vs-d series per (alg, family) seen at two or more dimensions.
// Throws std::invalid_argument listing malformed lines.
std::string summarize_csv(const std::vector<std::string>& csv_texts);

}  // namespace ucl
