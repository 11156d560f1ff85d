#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hmx/parser.hpp"
#include "hmx/search.hpp"

using namespace hmx;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Fixture {
  Corpus corpus;
  CorpusInfo info;

  explicit Fixture(const std::string& src) {
    corpus = parse_corpus(src);
    info = typecheck(corpus);
  }
};

// Reference dominance check for the sorting oracle.
bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strict = false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

}  // namespace

TEST_CASE("archive keeps the shortest covering test") {
  Archive a;
  CoverageTarget t = CoverageTarget::branch(0, 0, true);
  TestCase longer;
  longer.stmts.resize(5);
  TestCase shorter;
  shorter.stmts.resize(3);
  TestCase equal;
  equal.stmts.resize(3);
  equal.stmts[0].sig = "marker";

  a.update(t, longer);
  CHECK(a.entries.at(t).size() == 5);
  a.update(t, shorter);
  CHECK(a.entries.at(t).size() == 3);
  a.update(t, longer);
  CHECK(a.entries.at(t).size() == 3);
  a.update(t, equal);  // equal length: no replacement
  CHECK(a.entries.at(t).stmts[0].sig.empty());
}

TEST_CASE("preference front holds the per-objective best") {
  std::vector<std::vector<double>> fit = {
      {0.0, 5.0},  // best on objective 0
      {3.0, 0.1},  // best on objective 1
      {1.0, 1.0},
      {4.0, 4.0},  // dominated by everything above
  };
  std::vector<int> lens = {4, 4, 4, 4};
  auto fronts = preference_sort(fit, lens);
  REQUIRE(!fronts.empty());
  std::set<int> front0;
  for (const RankedIndividual& ri : fronts[0]) front0.insert(ri.index);
  CHECK(front0 == std::set<int>{0, 1});
  // Remaining fronts respect dominance: nothing in an earlier front is
  // dominated by anything in the same or a later front.
  std::vector<int> rank(fit.size());
  for (const auto& f : fronts)
    for (const RankedIndividual& ri : f) rank[ri.index] = ri.rank;
  CHECK(rank[2] < rank[3]);
}

TEST_CASE("preference ties break by shorter test") {
  std::vector<std::vector<double>> fit = {{1.0}, {1.0}};
  std::vector<int> lens = {7, 2};
  auto fronts = preference_sort(fit, lens);
  REQUIRE(fronts[0].size() == 1);
  CHECK(fronts[0][0].index == 1);
}

TEST_CASE("non-dominated ranking agrees with a brute-force oracle") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> fit(12, std::vector<double>(3));
    std::vector<int> lens(12, 1);
    for (auto& row : fit)
      for (double& v : row) v = rng.uniform_int(0, 4);
    auto fronts = preference_sort(fit, lens);
    std::vector<int> rank(fit.size(), -1);
    size_t seen = 0;
    for (const auto& f : fronts)
      for (const RankedIndividual& ri : f) {
        rank[ri.index] = ri.rank;
        ++seen;
      }
    REQUIRE(seen == fit.size());
    // Oracle: i dominated by j implies strictly worse rank than j, for
    // individuals outside the preference front.
    for (size_t i = 0; i < fit.size(); ++i)
      for (size_t j = 0; j < fit.size(); ++j) {
        if (rank[i] == 0 || rank[j] == 0) continue;
        if (dominates(fit[j], fit[i])) {
          CAPTURE(i);
          CAPTURE(j);
          CHECK(rank[i] > rank[j]);
        }
      }
  }
}

TEST_CASE("active targets grow along control dependencies") {
  Fixture f(R"(subject N {
    ctor() {}
    method m(int a, int b) {
      if (a == 1) {
        if (b == 2) {
          b = 3;
        }
      }
    }
  })");
  const UnitInfo& u = f.info.units.at("N");
  std::set<CoverageTarget> covered;
  std::set<CoverageTarget> active = active_targets(covered, u, u.targets);
  // Inner branch (id 1) is controlled by outer-true; not active yet.
  CHECK(active.count(CoverageTarget::branch(1, 0, true)) == 1);
  CHECK(active.count(CoverageTarget::branch(1, 0, false)) == 1);
  CHECK(active.count(CoverageTarget::branch(1, 1, true)) == 0);
  covered.insert(CoverageTarget::branch(1, 0, true));
  active = active_targets(covered, u, u.targets);
  CHECK(active.count(CoverageTarget::branch(1, 1, true)) == 1);
  CHECK(active.count(CoverageTarget::branch(1, 0, true)) == 0);  // covered
}

TEST_CASE("straight-line subject is fully covered in generation zero") {
  Fixture f(R"(subject Line {
    field int x;
    ctor(int v) {
      x = v * 2;
    }
    method get() : int {
      return x;
    }
  })");
  SearchConfig cfg;
  cfg.population_size = 20;
  cfg.budget_evaluations = 500;
  cfg.seed = 1;
  SearchResult res = evolve("Line", f.corpus, f.info, cfg);
  CHECK(res.covered_branches == 1.0);
  CHECK(res.covered_lines == 1.0);
  CHECK(res.generations == 0);
}

TEST_CASE("search is deterministic for a fixed seed") {
  Fixture f1(slurp(CORPUS_DIR "/fraction.subj"));
  Fixture f2(slurp(CORPUS_DIR "/fraction.subj"));
  SearchConfig cfg;
  cfg.population_size = 20;
  cfg.budget_evaluations = 1500;
  cfg.seed = 9;
  cfg.operator_kind = CrossoverKind::Hmx;
  SearchResult a = evolve("Fraction", f1.corpus, f1.info, cfg);
  SearchResult b = evolve("Fraction", f2.corpus, f2.info, cfg);
  CHECK(a.suite == b.suite);
  CHECK(a.covered_branches == b.covered_branches);
  CHECK(a.covered_lines == b.covered_lines);
  CHECK(a.evaluations_used == b.evaluations_used);
  CHECK(a.branch_series == b.branch_series);
}

TEST_CASE("archive coverage never decreases and suite re-covers targets") {
  Fixture f(slurp(CORPUS_DIR "/interval.subj"));
  SearchConfig cfg;
  cfg.population_size = 20;
  cfg.budget_evaluations = 2000;
  cfg.seed = 4;
  SearchResult res = evolve("Interval", f.corpus, f.info, cfg);
  for (size_t i = 1; i < res.branch_series.size(); ++i)
    CHECK(res.branch_series[i] >= res.branch_series[i - 1]);
  // Self-consistency: every archived test still covers its target.
  for (const auto& [target, test] : res.archive.entries) {
    ExecutionTrace tr = execute_test(test, f.corpus, f.info, cfg.limits);
    CAPTURE(target_name(target));
    if (target.kind == CoverageTarget::Kind::Branch)
      CHECK(tr.branch_covered(target.id, target.outcome));
    else
      CHECK(tr.covered_lines.count(target.id) == 1);
  }
}

TEST_CASE("evaluation budget is respected") {
  Fixture f(slurp(CORPUS_DIR "/stemmer.subj"));
  SearchConfig cfg;
  cfg.population_size = 30;
  cfg.budget_evaluations = 777;
  cfg.seed = 2;
  SearchResult res = evolve("Stemmer", f.corpus, f.info, cfg);
  CHECK(res.evaluations_used <= 777);
}
