#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "hmx/harness.hpp"
#include "hmx/parser.hpp"

using namespace hmx;
namespace fs = std::filesystem;

namespace {

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& contents) {
    path = fs::temp_directory_path() /
           ("hmx_cfg_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++) + ".cfg");
    std::ofstream(path, std::ios::binary) << contents;
  }
  ~TempFile() { fs::remove(path); }
  static int counter;
};
int TempFile::counter = 0;

}  // namespace

TEST_CASE("empty config yields all defaults") {
  TempFile f("");
  ExperimentPlan p = load_config(f.path.string());
  CHECK(p.search.population_size == 50);
  CHECK(p.search.operator_config.crossover_rate == 0.75);
  CHECK(p.search.operator_config.eta_c == 2.5);
  CHECK(p.search.operator_config.data_crossover_rate == 1.0);
  CHECK(p.search.max_test_length == 40);
  CHECK(p.seeds.size() == 20);
  CHECK(p.seeds.front() == 0);
  CHECK(p.seeds.back() == 19);
  CHECK(p.operators.size() == 2);
}

TEST_CASE("crossover key selects the operator") {
  TempFile f("crossover = hmx\n");
  ExperimentPlan p = load_config(f.path.string());
  REQUIRE(p.operators.size() == 1);
  CHECK(p.operators[0] == CrossoverKind::Hmx);
}

TEST_CASE("unknown keys and bad values are rejected with line numbers") {
  TempFile f1("population = 10\nbogus_key = 1\n");
  try {
    load_config(f1.path.string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line == 2);
  }
  TempFile f2("eta_c = banana\n");
  try {
    load_config(f2.path.string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line == 1);
    CHECK(std::string(e.what()).find("banana") != std::string::npos);
  }
}

TEST_CASE("seed lists and ranges") {
  TempFile f1("seeds = 3, 5, 8\n");
  CHECK(load_config(f1.path.string()).seeds ==
        std::vector<uint64_t>{3, 5, 8});
  TempFile f2("seeds = 4..7\n");
  CHECK(load_config(f2.path.string()).seeds ==
        std::vector<uint64_t>{4, 5, 6, 7});
}

TEST_CASE("comments and blank lines are ignored") {
  TempFile f("# a comment\n\npopulation = 33\n");
  CHECK(load_config(f.path.string()).search.population_size == 33);
}

TEST_CASE("subject loading reports failures by file") {
  CHECK_THROWS_AS(load_subject("/nonexistent/sub.subj", nullptr),
                  SubjectLoadError);
  TempFile bad("subject X { field int }");
  try {
    load_subject(bad.path.string(), nullptr);
    FAIL("expected SubjectLoadError");
  } catch (const SubjectLoadError& e) {
    CHECK(std::string(e.what()).find(bad.path.string()) != std::string::npos);
  }
}

TEST_CASE("runs.csv round trips") {
  std::vector<RunRecord> recs(2);
  recs[0] = {"Stemmer", "spx", 3, 0.85, 0.9, 0.5, 0.25, 1000, 1234};
  recs[1] = {"Stemmer", "hmx", 3, 0.95, 0.96, 0.6, 0.3, 1000, 999};
  std::string csv = runs_csv(recs);
  // wall_ms deliberately excluded so reruns are byte-identical.
  CHECK(csv.find("1234") == std::string::npos);
  std::vector<RunRecord> back = parse_runs_csv(csv);
  REQUIRE(back.size() == 2);
  CHECK(back[0].subject == "Stemmer");
  CHECK(back[0].op == "spx");
  CHECK(back[0].branch_cov == doctest::Approx(0.85));
  CHECK(back[1].strong_score == doctest::Approx(0.3));
  CHECK(back[1].evaluations == 1000);
}

TEST_CASE("stat report medians, comparison, and aggregate counts") {
  std::vector<RunRecord> recs;
  for (int s = 0; s < 6; ++s) {
    RunRecord spx{"A", "spx", (uint64_t)s, 0.5 + 0.01 * s, 0.5, 0.4, 0.2, 100,
                  0};
    RunRecord hmx{"A", "hmx", (uint64_t)s, 0.8 + 0.01 * s, 0.5, 0.4, 0.2, 100,
                  0};
    recs.push_back(spx);
    recs.push_back(hmx);
  }
  StatReport r = make_stat_report(recs, true);
  REQUIRE(!r.rows.empty());
  const SubjectStat& branch = r.rows[0];
  CHECK(branch.metric == "branch_cov");
  CHECK(branch.median_spx == doctest::Approx(0.525));
  CHECK(branch.median_hmx == doctest::Approx(0.825));
  CHECK(branch.a12 == doctest::Approx(1.0));
  CHECK(branch.p_value < 0.05);
  CHECK(branch.effect == "large");
  // Aggregates: branch metric wins large once; tied metrics record no-diff.
  REQUIRE(r.aggregates.size() == 4);
  CHECK(r.aggregates[0].metric == "branch_cov");
  CHECK(r.aggregates[0].win_large == 1);
  CHECK(r.aggregates[0].lose == 0);
  CHECK(r.aggregates[1].no_diff == 1);
}

TEST_CASE("markdown summary has the expected table shape") {
  std::vector<RunRecord> recs;
  for (int s = 0; s < 4; ++s) {
    recs.push_back({"A", "spx", (uint64_t)s, 0.5, 0.5, 0.4, 0.2, 100, 0});
    recs.push_back({"A", "hmx", (uint64_t)s, 0.9, 0.5, 0.4, 0.2, 100, 0});
  }
  std::string md = stats_markdown(make_stat_report(recs, true));
  CHECK(md.find("| Subject | SPX median | HMX median | p-value | A12 | "
                "Effect |") != std::string::npos);
  CHECK(md.find("| Metric | #Win Large | Medium | Small | Negl. | #Lose | "
                "#No diff. |") != std::string::npos);
  CHECK(md.find("## branch_cov") != std::string::npos);
  CHECK(md.find("## strong_score") != std::string::npos);
}

TEST_CASE("suite serialization round trips") {
  std::string name;
  Corpus corpus = load_subject(CORPUS_DIR "/fraction.subj", &name);
  CorpusInfo info = typecheck(corpus);
  Rng rng(8);
  std::vector<TestCase> suite;
  for (int i = 0; i < 5; ++i)
    suite.push_back(random_test(name, info, rng, 6));
  std::string text = render_suite(suite, name, 8, info);
  std::string subject;
  uint64_t seed = 0;
  std::vector<TestCase> back = parse_suite(text, corpus, info, &subject, &seed);
  CHECK(subject == "Fraction");
  CHECK(seed == 8);
  REQUIRE(back.size() == suite.size());
  for (size_t i = 0; i < suite.size(); ++i) CHECK(back[i] == suite[i]);
}

TEST_CASE("mini plan produces the full artifact set reproducibly") {
  fs::path out = fs::temp_directory_path() / "hmx_plan_out";
  fs::remove_all(out);
  ExperimentPlan plan;
  plan.subjects = {CORPUS_DIR "/interval.subj"};
  plan.seeds = {0, 1, 2};
  plan.search.budget_evaluations = 300;
  plan.search.population_size = 20;
  plan.output_dir = out.string();
  plan.threads = 2;

  std::vector<RunRecord> recs = run_plan(plan);
  CHECK(recs.size() == 6);  // 1 subject x 2 operators x 3 seeds
  CHECK(fs::exists(out / "runs.csv"));
  CHECK(fs::exists(out / "stats.csv"));
  CHECK(fs::exists(out / "summary.md"));
  CHECK(fs::exists(out / "runs" / "Interval_spx_seed0.tests"));
  CHECK(fs::exists(out / "runs" / "Interval_hmx_seed2.json"));

  std::ifstream c1(out / "runs.csv", std::ios::binary);
  std::stringstream s1;
  s1 << c1.rdbuf();
  std::vector<RunRecord> again = run_plan(plan);
  std::ifstream c2(out / "runs.csv", std::ios::binary);
  std::stringstream s2;
  s2 << c2.rdbuf();
  CHECK(s1.str() == s2.str());
  fs::remove_all(out);
}
