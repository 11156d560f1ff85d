#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "hmx/mutation.hpp"
#include "hmx/parser.hpp"
#include "hmx/rng.hpp"
#include "hmx/stats.hpp"

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
  SandboxLimits limits;

  explicit Fixture(const std::string& src) {
    corpus = parse_corpus(src);
    info = typecheck(corpus);
  }
};

// Brute-force two-sided rank-sum p-value over all C(n+m, n) splits.
double exact_p_oracle(std::vector<double> x, std::vector<double> y) {
  size_t n = x.size(), N = n + y.size();
  std::vector<double> pooled = x;
  pooled.insert(pooled.end(), y.begin(), y.end());
  std::sort(pooled.begin(), pooled.end());
  // Midranks.
  std::vector<double> ranks(N);
  for (size_t i = 0; i < N;) {
    size_t j = i;
    while (j + 1 < N && pooled[j + 1] == pooled[i]) ++j;
    for (size_t k = i; k <= j; ++k) ranks[k] = (i + j) / 2.0 + 1.0;
    i = j + 1;
  }
  double w_obs = 0;
  for (double v : x) {
    // Rank of v = midrank at its position in pooled.
    for (size_t i = 0; i < N; ++i)
      if (pooled[i] == v) {
        w_obs += ranks[i];
        break;
      }
  }
  // Enumerate all n-subsets of positions.
  std::vector<int> idx(N);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> pick(n);
  long long total = 0, lo = 0, hi = 0;
  std::function<void(size_t, size_t, double)> rec = [&](size_t start,
                                                        size_t chosen,
                                                        double sum) {
    if (chosen == n) {
      ++total;
      if (sum <= w_obs + 1e-9) ++lo;
      if (sum >= w_obs - 1e-9) ++hi;
      return;
    }
    for (size_t i = start; i + (n - chosen) <= N; ++i)
      rec(i + 1, chosen + 1, sum + ranks[i]);
  };
  rec(0, 0, 0.0);
  double tail = static_cast<double>(std::min(lo, hi)) / total;
  return std::min(1.0, 2.0 * tail);
}

double a12_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  double wins = 0;
  for (double a : x)
    for (double b : y) wins += a > b ? 1.0 : a == b ? 0.5 : 0.0;
  return wins / (x.size() * y.size());
}

}  // namespace

TEST_CASE("documented wilcoxon examples") {
  WilcoxonResult r = wilcoxon_rank_sum({1, 2, 3}, {4, 5, 6});
  CHECK(r.exact);
  CHECK(r.p == doctest::Approx(0.1));
  r = wilcoxon_rank_sum({1, 2, 3, 4, 5}, {6, 7, 8, 9, 10});
  CHECK(r.exact);
  CHECK(r.p == doctest::Approx(2.0 / 252.0));
  r = wilcoxon_rank_sum({1, 2, 3}, {1, 2, 3});
  CHECK(r.p == doctest::Approx(1.0));
}

TEST_CASE("exact test matches brute-force enumeration") {
  Rng rng(13);
  int exact_checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    size_t n = rng.uniform_int(2, 6), m = rng.uniform_int(2, 6);
    std::vector<double> x, y;
    for (size_t i = 0; i < n; ++i) x.push_back(rng.uniform_int(0, 50));
    for (size_t i = 0; i < m; ++i) y.push_back(rng.uniform_int(0, 50));
    WilcoxonResult r = wilcoxon_rank_sum(x, y);
    if (!r.exact) continue;  // ties fall back to the approximation
    ++exact_checked;
    CHECK(r.p == doctest::Approx(exact_p_oracle(x, y)).epsilon(1e-9));
  }
  CHECK(exact_checked > 200);
}

TEST_CASE("normal approximation is close to exact at n=m=10") {
  Rng rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) {
      x.push_back(rng.uniform_real() * 100);
      y.push_back(rng.uniform_real() * 100 + trial % 3 * 15);
    }
    // Force the approximation path with a duplicated value across groups.
    std::vector<double> xt = x, yt = y;
    yt[0] = xt[0];
    WilcoxonResult approx = wilcoxon_rank_sum(xt, yt);
    CHECK(!approx.exact);
    double exact = exact_p_oracle(xt, yt);
    CHECK(approx.p == doctest::Approx(exact).epsilon(1.0).scale(0.0));
    CHECK(std::fabs(approx.p - exact) < 0.02);
  }
}

TEST_CASE("rank statistics are scale invariant") {
  std::vector<double> x = {3, 9, 27}, y = {1, 5, 40};
  std::vector<double> xs = x, ys = y;
  for (double& v : xs) v *= 7.5;
  for (double& v : ys) v *= 7.5;
  CHECK(wilcoxon_rank_sum(x, y).p == wilcoxon_rank_sum(xs, ys).p);
  CHECK(a12(x, y) == a12(xs, ys));
}

TEST_CASE("a12 examples and complement identity") {
  CHECK(a12({1, 2, 3}, {1, 2, 3}) == doctest::Approx(0.5));
  CHECK(a12({4, 5}, {1, 2}) == doctest::Approx(1.0));
  CHECK(a12({1, 2}, {1, 3}) == doctest::Approx(0.375));
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 6; ++i) {
      x.push_back(rng.uniform_int(0, 8));
      y.push_back(rng.uniform_int(0, 8));
    }
    CHECK(a12(x, y) == doctest::Approx(a12_oracle(x, y)));
    CHECK(a12(x, y) + a12(y, x) == doctest::Approx(1.0));
  }
}

TEST_CASE("effect classes from the documented thresholds") {
  CHECK(classify_effect(0.5) == "negligible");
  CHECK(classify_effect(0.555) == "negligible");
  CHECK(classify_effect(0.64) == "small");
  CHECK(classify_effect(0.36) == "small");
  CHECK(classify_effect(0.7) == "medium");
  CHECK(classify_effect(0.72) == "large");
  CHECK(classify_effect(1.0) == "large");
  CHECK(classify_effect(0.0) == "large");
}

TEST_CASE("mutant counts follow the operator rules") {
  Fixture f(R"(subject M {
    ctor() {}
    method sum(int a, int b) : int {
      return a + b;
    }
  })");
  std::vector<Mutant> ms = generate_mutants(f.corpus.units.at("M"));
  // a + b: the four other arithmetic operators, nothing else to mutate.
  CHECK(ms.size() == 4);
  for (const Mutant& m : ms) CHECK(m.op == "AOR");

  Fixture g(R"(subject M {
    ctor() {}
    method lt(int a, int b) : boolean {
      return a < b;
    }
  })");
  ms = generate_mutants(g.corpus.units.at("M"));
  CHECK(ms.size() == 5);  // the five other relational operators
  for (const Mutant& m : ms) CHECK(m.op == "ROR");

  Fixture h(R"(subject M {
    ctor() {}
    method m(int a) {
      if (a < 2) {
        a = 0;
      }
    }
  })");
  ms = generate_mutants(h.corpus.units.at("M"));
  int ror = 0, nc = 0, cr = 0;
  for (const Mutant& m : ms) {
    if (m.op == "ROR") ++ror;
    if (m.op == "NC") ++nc;
    if (m.op == "CR") ++cr;
  }
  CHECK(ror == 5);
  CHECK(nc == 1);
  // literal 2 -> {0, 1, -1, 3} (2-1=1 deduplicates); literal 0 -> {1, -1}.
  CHECK(cr == 6);
}

TEST_CASE("every mutant still typechecks") {
  for (const char* name : {"fraction", "stemmer", "roman"}) {
    CAPTURE(name);
    Fixture f(slurp(std::string(CORPUS_DIR "/") + name + ".subj"));
    const SubjectUnit& unit = f.corpus.units.begin()->second;
    for (const Mutant& m : generate_mutants(unit)) {
      CAPTURE(m.description);
      CHECK(!structurally_equal(m.unit, unit));
      Corpus c;
      c.units.emplace(unit.name, m.unit.clone());
      CHECK_NOTHROW(typecheck(c));
    }
  }
}

TEST_CASE("empty suite kills nothing") {
  Fixture f(slurp(CORPUS_DIR "/fraction.subj"));
  MutationResult r = score_suite({}, "Fraction", f.corpus, f.info, f.limits);
  CHECK(r.total > 0);
  CHECK(r.weak_killed.empty());
  CHECK(r.strong_killed.empty());
  CHECK(r.weak_score() == 0.0);
  CHECK(r.strong_score() == 0.0);
}

TEST_CASE("unexecuted mutants survive") {
  Fixture f(R"(subject M {
    ctor() {}
    method used() : int {
      return 1 + 1;
    }
    method unused() : int {
      return 2 + 2;
    }
  })");
  TestCase t;
  Statement c;
  c.kind = Statement::Kind::ConstructorCall;
  c.sig = "M|<init>()M";
  t.stmts.push_back(c);
  Statement call;
  call.kind = Statement::Kind::MethodCall;
  call.sig = "M|used()int";
  call.receiver = 0;
  t.stmts.push_back(call);
  MutationResult r = score_suite({t}, "M", f.corpus, f.info, f.limits);
  std::vector<Mutant> ms = generate_mutants(f.corpus.units.at("M"));
  for (const Mutant& m : ms) {
    if (m.description.find("@ line 7") != std::string::npos) {
      // Mutants inside the uncalled method survive both criteria.
      CHECK(r.weak_killed.count(m.id) == 0);
      CHECK(r.strong_killed.count(m.id) == 0);
    }
  }
}

TEST_CASE("strong kills are a subset of weak kills") {
  Fixture f(slurp(CORPUS_DIR "/interval.subj"));
  Rng rng(3);
  std::vector<TestCase> suite;
  for (int i = 0; i < 15; ++i)
    suite.push_back(random_test("Interval", f.info, rng, 6));
  MutationResult r = score_suite(suite, "Interval", f.corpus, f.info, f.limits);
  for (int id : r.strong_killed) CHECK(r.weak_killed.count(id) == 1);
  CHECK(r.weak_score() >= r.strong_score());
}

TEST_CASE("strong score matches an observation-diff oracle on fraction") {
  Fixture f(slurp(CORPUS_DIR "/fraction.subj"));
  // Hand-written covering suite: both ctor outcomes, add with sign and
  // reduction cases, divideBy both outcomes, pow across its branches.
  const char* suite_src[] = {
      "Fraction v0 = new Fraction(1, 0);",
      "Fraction v0 = new Fraction(2, 4);\n"
      "Fraction v1 = new Fraction(-1, 3);\n"
      "v0.add(v1);\n"
      "int v3 = v0.getNum();\n"
      "int v4 = v0.getDen();",
      "Fraction v0 = new Fraction(-2, -3);\n"
      "Fraction v1 = new Fraction(0, 5);\n"
      "v0.add(v1);\n"
      "v0.divideBy(v1);",
      "Fraction v0 = new Fraction(3, 2);\n"
      "Fraction v1 = new Fraction(5, 7);\n"
      "v0.divideBy(v1);\n"
      "int v3 = v0.getNum();\n"
      "int v4 = v0.getDen();",
      "Fraction v0 = new Fraction(2, 1);\n"
      "double v1 = v0.pow(3.0);\n"
      "double v2 = v0.pow(-2.0);\n"
      "double v3 = v0.pow(0.5);",
      "Fraction v0 = new Fraction(0, 3);\n"
      "double v1 = v0.pow(-1.0);",
  };
  std::vector<TestCase> suite;
  for (const char* src : suite_src)
    suite.push_back(parse_rendered(src, f.info));

  MutationResult r = score_suite(suite, "Fraction", f.corpus, f.info, f.limits);

  // Independent oracle: re-run every mutant and diff the full rendered
  // observation streams, with no shared kill logic.
  std::vector<Mutant> ms = generate_mutants(f.corpus.units.at("Fraction"));
  std::set<int> oracle;
  for (const Mutant& m : ms) {
    Corpus mutated;
    mutated.units.emplace("Fraction", m.unit.clone());
    for (const TestCase& t : suite) {
      ExecutionTrace base = execute_test(t, f.corpus, f.info, f.limits);
      ExecutionTrace mut = execute_test(t, mutated, f.info, f.limits);
      bool diff = base.observations.size() != mut.observations.size();
      for (size_t i = 0; !diff && i < base.observations.size(); ++i)
        diff = base.observations[i] != mut.observations[i];
      if (diff) {
        oracle.insert(m.id);
        break;
      }
    }
  }
  CHECK(r.strong_killed == oracle);
  CHECK(r.strong_score() ==
        doctest::Approx(static_cast<double>(oracle.size()) / ms.size()));
}
