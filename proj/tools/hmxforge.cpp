#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hmx/harness.hpp"
#include "hmx/mutation.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_generate(const std::string& path, const std::string& op_name,
                 uint64_t seed, int64_t budget_evals, double budget_secs,
                 int population, int max_len, const std::string& out_path) {
  std::string unit;
  hmx::Corpus corpus = hmx::load_subject(path, &unit);
  hmx::CorpusInfo info = hmx::typecheck(corpus);

  hmx::SearchConfig cfg;
  cfg.operator_kind = hmx::operator_of(op_name);
  cfg.seed = seed;
  cfg.population_size = population;
  cfg.max_test_length = max_len;
  if (budget_secs > 0) {
    cfg.budget_evaluations = 0;
    cfg.budget_seconds = budget_secs;
  } else {
    cfg.budget_evaluations = budget_evals;
  }

  hmx::SearchResult res = hmx::evolve(unit, corpus, info, cfg);
  std::string dest = out_path.empty()
                         ? fs::path(path).stem().string() + ".tests"
                         : out_path;
  std::ofstream out(dest, std::ios::binary);
  out << hmx::render_suite(res.suite, unit, seed, info);

  std::cout << "subject: " << unit << "\n"
            << "operator: " << op_name << "\n"
            << "seed: " << seed << "\n"
            << "tests: " << res.suite.size() << "\n"
            << "branch coverage: " << res.covered_branches << "\n"
            << "line coverage: " << res.covered_lines << "\n"
            << "evaluations: " << res.evaluations_used << "\n"
            << "suite written to " << dest << "\n";
  return 0;
}

int cmd_experiment(const std::string& path, int threads, bool paper_scale) {
  hmx::ExperimentPlan plan = hmx::load_config(path);
  if (threads > 0) plan.threads = threads;
  if (paper_scale) {
    plan.seeds.clear();
    for (uint64_t s = 0; s < 100; ++s) plan.seeds.push_back(s);
  }
  std::vector<hmx::RunRecord> records = hmx::run_plan(plan);
  std::cout << records.size() << " runs written to " << plan.output_dir
            << "\n";
  return 0;
}

int cmd_mutants(const std::string& path) {
  std::string unit;
  hmx::Corpus corpus = hmx::load_subject(path, &unit);
  std::vector<hmx::Mutant> mutants =
      hmx::generate_mutants(corpus.units.at(unit));
  for (const hmx::Mutant& m : mutants)
    std::cout << m.id << "\t" << m.op << "\t" << m.description << "\n";
  std::cout << mutants.size() << " mutants\n";
  return 0;
}

int cmd_stats(const std::string& path, const std::string& out_dir) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hmx::ConfigError("cannot open " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::vector<hmx::RunRecord> records = hmx::parse_runs_csv(ss.str());
  bool compare = false, spx = false, hmxop = false;
  for (const auto& r : records) {
    if (r.op == "spx") spx = true;
    if (r.op == "hmx") hmxop = true;
  }
  compare = spx && hmxop;
  hmx::StatReport report = hmx::make_stat_report(records, compare);
  std::cout << hmx::stats_markdown(report);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / "stats.csv", std::ios::binary)
        << hmx::stats_csv(report);
    std::ofstream(fs::path(out_dir) / "summary.md", std::ios::binary)
        << hmx::stats_markdown(report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"search-based test generation for subject files"};
  app.require_subcommand(1);

  std::string subject_path, op_name = "spx", out_path;
  uint64_t seed = 0;
  int64_t budget_evals = 5000;
  double budget_secs = 0;
  int population = 50, max_len = 40;
  auto* gen = app.add_subcommand("generate", "generate a test suite");
  gen->add_option("subject", subject_path, "subject .subj file")->required();
  gen->add_option("--operator", op_name, "crossover operator: spx or hmx")
      ->check(CLI::IsMember({"spx", "hmx"}));
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--budget-evals", budget_evals, "evaluation budget");
  gen->add_option("--budget-secs", budget_secs, "wall-clock budget (seconds)");
  gen->add_option("--population", population, "population size");
  gen->add_option("--max-test-length", max_len, "max statements per test");
  gen->add_option("--out", out_path, "output .tests path");

  std::string plan_path;
  int threads = 0;
  bool paper_scale = false;
  auto* exp = app.add_subcommand("experiment", "run an experiment plan");
  exp->add_option("plan", plan_path, "plan .cfg file")->required();
  exp->add_option("--threads", threads, "worker pool size");
  exp->add_flag("--paper-scale", paper_scale, "use 100 seeds instead of 20");

  std::string mut_path;
  auto* mut = app.add_subcommand("mutants", "list mutants of a subject");
  mut->add_option("subject", mut_path, "subject .subj file")->required();

  std::string csv_path, stats_out;
  auto* st = app.add_subcommand("stats", "recompute reports from runs.csv");
  st->add_option("runs", csv_path, "runs.csv file")->required();
  st->add_option("--out-dir", stats_out, "directory for stats.csv/summary.md");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed())
      return cmd_generate(subject_path, op_name, seed, budget_evals,
                          budget_secs, population, max_len, out_path);
    if (exp->parsed()) return cmd_experiment(plan_path, threads, paper_scale);
    if (mut->parsed()) return cmd_mutants(mut_path);
    if (st->parsed()) return cmd_stats(csv_path, stats_out);
  } catch (const hmx::SubjectLoadError& e) {
    std::cerr << "subject load error: " << e.what() << "\n";
    return 2;
  } catch (const hmx::ConfigError& e) {
    std::cerr << "config error";
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
