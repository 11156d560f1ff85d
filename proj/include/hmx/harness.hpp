#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hmx/search.hpp"

namespace hmx {

struct ConfigError : std::runtime_error {
  int line;
  ConfigError(std::string msg, int l)
      : std::runtime_error(std::move(msg)), line(l) {}
};

struct SubjectLoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentPlan {
  std::vector<std::string> subjects;
  std::vector<CrossoverKind> operators{CrossoverKind::Spx, CrossoverKind::Hmx};
  std::vector<uint64_t> seeds;  // default 0..19
  SearchConfig search;          // operator_kind overridden per run
  std::string output_dir = "out";
  int threads = 0;  // 0 = hardware concurrency; HMXFORGE_THREADS overrides

  ExperimentPlan();
};

// key=value configuration with comments (#) and blank lines. Unknown keys
// and malformed values are rejected with the offending line number.
ExperimentPlan load_config(const std::string& path);

struct RunRecord {
  std::string subject;
  std::string op;  // "spx" | "hmx"
  uint64_t seed = 0;
  double branch_cov = 0.0;
  double line_cov = 0.0;
  double weak_score = 0.0;
  double strong_score = 0.0;
  int64_t evaluations = 0;
  int64_t wall_ms = 0;  // reported in JSON records only, never in runs.csv
};

struct SubjectStat {
  std::string metric;
  std::string subject;
  double median_spx = 0.0;
  double median_hmx = 0.0;
  double p_value = 1.0;
  double a12 = 0.5;  // hmx vs spx
  std::string effect;
};

struct StatReport {
  std::vector<SubjectStat> rows;
  // Aggregate per metric: wins by effect class, losses, no-diffs. A win is
  // p < 0.05 with a12 > 0.5 in hmx's favor; a loss the reverse.
  struct Aggregate {
    std::string metric;
    int win_large = 0, win_medium = 0, win_small = 0, win_negligible = 0;
    int lose = 0, no_diff = 0;
  };
  std::vector<Aggregate> aggregates;
};

const char* operator_name(CrossoverKind k);
CrossoverKind operator_of(const std::string& name);  // throws ConfigError(.,0)

// Loads a single-subject .subj file; throws SubjectLoadError with the file
// name and diagnostic on parse/typecheck failure or unit-count mismatch.
Corpus load_subject(const std::string& path, std::string* unit_name);

// Suite serialization: header (subject, seed) plus the statement-render form
// of each test.
std::string render_suite(const std::vector<TestCase>& suite,
                         const std::string& subject, uint64_t seed,
                         const CorpusInfo& info);
std::vector<TestCase> parse_suite(const std::string& text,
                                  const Corpus& corpus, const CorpusInfo& info,
                                  std::string* subject, uint64_t* seed);

std::string runs_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_runs_csv(const std::string& text);

StatReport make_stat_report(const std::vector<RunRecord>& records,
                            bool compare);
std::string stats_csv(const StatReport& report);
std::string stats_markdown(const StatReport& report);

// Executes the full subject x operator x seed matrix on a worker pool and
// writes runs.csv, per-run JSON + .tests files, stats.csv, and summary.md
// under plan.output_dir. Returns the records in matrix order.
std::vector<RunRecord> run_plan(const ExperimentPlan& plan);

}  // namespace hmx
