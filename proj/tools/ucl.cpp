// Command-line front end: instance generation, simulations, adversary duels,
// exact optima and CSV report aggregation.
//
// Exit codes: 0 success, 1 usage or input error, 2 protocol or invariant
// violation, 3 oracle limit.

#include "ucl/harness.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int run_gen(const std::string& family, std::size_t d, std::int64_t K, std::int64_t n,
            const std::string& out_path) {
  ucl::Instance inst;
  if (family == "s1") {
    inst = ucl::gen_instance_s1(d, K);
  } else if (family == "barycentric") {
    inst = ucl::gen_instance_barycentric(d, K);
  } else if (family == "diagonal") {
    inst = ucl::gen_instance_diagonal(n);
  } else {
    throw std::invalid_argument("gen: unknown family '" + family + "'");
  }
  ucl::write_instance_file(inst, out_path);
  std::cout << "wrote " << inst.rows.size() << " points (d=" << inst.d
            << ", den=" << inst.den << ") to " << out_path << "\n";
  return 0;
}

int run_simulate(const std::string& alg, const std::string& instance_path, std::uint64_t seed,
                 bool opt_formula, const std::string& family, std::int64_t K, std::int64_t n,
                 const std::string& transcript_path, const std::string& csv_path) {
  const ucl::Instance inst = ucl::parse_instance_file(instance_path);

  std::optional<ucl::FormulaSpec> formula;
  if (opt_formula) {
    if (family == "s1")
      formula = ucl::FormulaSpec{ucl::InstanceKind::kS1, static_cast<std::uint64_t>(K), family};
    else if (family == "barycentric")
      formula = ucl::FormulaSpec{ucl::InstanceKind::kBarycentric,
                                 static_cast<std::uint64_t>(K), family};
    else if (family == "diagonal")
      formula = ucl::FormulaSpec{ucl::InstanceKind::kDiagonalPairs,
                                 static_cast<std::uint64_t>(n), family};
    else
      throw std::invalid_argument("--opt-formula requires --family s1|barycentric|diagonal");
  } else if (!family.empty()) {
    formula.reset();  // family is metadata only without --opt-formula
  }

  ucl::SimulateOutcome outcome = ucl::simulate(alg, inst, seed, formula);
  if (!opt_formula && !family.empty()) {
    outcome.report.family = family;
    outcome.report.k_or_n = static_cast<std::uint64_t>(family == "diagonal" ? n : K);
  }

  std::cout << ucl::render_report(outcome.report);
  std::cout << ucl::csv_header() << "\n" << ucl::csv_row(outcome.report) << "\n";

  if (!transcript_path.empty()) {
    std::ofstream out(transcript_path);
    if (!out) throw std::invalid_argument("cannot open " + transcript_path);
    out << outcome.transcript;
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::app);
    if (!out) throw std::invalid_argument("cannot open " + csv_path);
    out << ucl::csv_row(outcome.report) << "\n";
  }
  for (const auto& [name, ok] : outcome.report.checks)
    if (!ok) return 2;
  return 0;
}

int run_duel(const ucl::DuelParams& params, const std::string& csv_path,
             const std::string& log_path) {
  std::ofstream log_file;
  std::ostream* log = nullptr;
  if (!log_path.empty()) {
    log_file.open(log_path);
    if (!log_file) throw std::invalid_argument("cannot open " + log_path);
    log = &log_file;
  }

  const ucl::DuelOutcome outcome = ucl::duel(params, log);
  std::cout << "duel adversary=" << params.adversary << " alg=" << params.alg
            << " d=" << params.d << " mode="
            << (params.mode == ucl::AdversaryMode::kDeterministic ? "det" : "oblivious")
            << "\n"
            << outcome.details;
  for (const auto& rep : outcome.trials) std::cout << ucl::render_report(rep);

  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::app);
    if (!out) throw std::invalid_argument("cannot open " + csv_path);
    for (const auto& rep : outcome.trials) out << ucl::csv_row(rep) << "\n";
  }
  return outcome.check_failures.empty() ? 0 : 2;
}

int run_opt(const std::string& instance_path, bool corners) {
  const ucl::Instance inst = ucl::parse_instance_file(instance_path);
  const ucl::CoverSolution sol = ucl::exact_opt(inst.points());
  std::cout << "OPT=" << sol.cubes.size() << "\n";
  if (corners)
    for (const auto& cube : sol.cubes) {
      for (std::size_t j = 0; j < cube.lo.size(); ++j)
        std::cout << (j ? " " : "") << ucl::rat_str(cube.lo[j]);
      std::cout << "\n";
    }
  return 0;
}

int run_report(const std::vector<std::string>& paths) {
  std::vector<std::string> texts;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    texts.push_back(buf.str());
  }
  std::cout << ucl::summarize_csv(texts);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online unit clustering / unit covering laboratory"};
  app.require_subcommand(1);

  std::string family, instance_path, out_path, alg, transcript_path, csv_path, log_path;
  std::size_t d = 2;
  std::int64_t K = 4, n = 1;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::string rho_str = "2", eps_str = "1/4", mode_str = "det", adversary;
  bool opt_formula = false, corners = false;
  std::vector<std::string> report_files;

  auto* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("--family", family)->required()->check(CLI::IsMember({"s1", "barycentric", "diagonal"}));
  gen->add_option("--d", d);
  gen->add_option("--K", K);
  gen->add_option("--n", n);
  gen->add_option("--out", out_path)->required();

  auto* sim = app.add_subcommand("simulate", "run an algorithm over an instance file");
  sim->add_option("--alg", alg)->required()->check(CLI::IsMember({"grid", "greedy", "centered", "reweigh"}));
  sim->add_option("--instance", instance_path)->required();
  sim->add_option("--seed", seed);
  sim->add_flag("--opt-formula", opt_formula, "use the structured optimum (needs --family)");
  sim->add_option("--family", family);
  sim->add_option("--K", K);
  sim->add_option("--n", n);
  sim->add_option("--transcript", transcript_path);
  sim->add_option("--csv", csv_path, "append the CSV row to this file");

  auto* du = app.add_subcommand("duel", "play an adversary game against an algorithm");
  du->add_option("--adversary", adversary)->required()->check(CLI::IsMember({"clustering", "covering"}));
  du->add_option("--alg", alg)->required();
  du->add_option("--d", d)->required();
  du->add_option("--K", K);
  du->add_option("--rho", rho_str);
  du->add_option("--eps", eps_str);
  du->add_option("--mode", mode_str)->check(CLI::IsMember({"det", "oblivious"}));
  du->add_option("--seed", seed);
  du->add_option("--trials", trials);
  du->add_option("--csv", csv_path);
  du->add_option("--log", log_path, "JSON-lines game log");

  auto* opt = app.add_subcommand("opt", "exact offline optimum of an instance file");
  opt->add_option("--instance", instance_path)->required();
  opt->add_flag("--corners", corners, "also print cube lower corners");

  auto* rep = app.add_subcommand("report", "summarize CSV rows from simulate/duel");
  rep->add_option("files", report_files);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return run_gen(family, d, K, n, out_path);
    if (sim->parsed())
      return run_simulate(alg, instance_path, seed, opt_formula, family, K, n,
                          transcript_path, csv_path);
    if (du->parsed()) {
      ucl::DuelParams params;
      params.adversary = adversary;
      params.alg = alg;
      params.d = d;
      params.K = K;
      params.rho = ucl::rat_parse(rho_str);
      params.eps = ucl::rat_parse(eps_str);
      params.mode = mode_str == "det" ? ucl::AdversaryMode::kDeterministic
                                      : ucl::AdversaryMode::kOblivious;
      params.seed = seed;
      params.trials = trials;
      return run_duel(params, csv_path, log_path);
    }
    if (opt->parsed()) return run_opt(instance_path, corners);
    if (rep->parsed()) return run_report(report_files);
  } catch (const ucl::OracleLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ucl::GameViolation& e) {
    std::cerr << "violation: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
