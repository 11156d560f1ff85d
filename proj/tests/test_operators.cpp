#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "hmx/operators.hpp"
#include "hmx/parser.hpp"

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

Statement ctor(int n, int d) {
  Statement s;
  s.kind = Statement::Kind::ConstructorCall;
  s.sig = "Fraction|<init>(int, int)Fraction";
  s.args = {Arg::lit(Value::of_int(n)), Arg::lit(Value::of_int(d))};
  return s;
}

Statement method(const std::string& sig, int receiver, std::vector<Arg> args) {
  Statement s;
  s.kind = Statement::Kind::MethodCall;
  s.sig = sig;
  s.receiver = receiver;
  s.args = std::move(args);
  return s;
}

}  // namespace

TEST_CASE("beta follows the spread-factor equation") {
  double eta = 2.5;
  // Independent recomputation of the piecewise definition.
  for (double u : {0.05, 0.2, 0.49, 0.5, 0.51, 0.7, 0.9, 0.99}) {
    SbxDraw d = SbxDraw::make(u, false, eta);
    double expect = u < 0.5   ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                    : u > 0.5 ? std::pow(0.5 / (1.0 - u), 1.0 / (eta + 1.0))
                              : 1.0;
    CHECK(d.beta == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("sbx contracts for u<0.5 and expands for u>0.5") {
  Rng rng(17);
  for (int i = 0; i < 20000; ++i) {
    double v1 = rng.uniform_real() * 200 - 100;
    double v2 = rng.uniform_real() * 200 - 100;
    SbxDraw d = SbxDraw::sample(rng, 2.5);
    auto [c1, c2] = sbx_pair(v1, v2, d);
    double lo = std::min(v1, v2), hi = std::max(v1, v2);
    CHECK(c1 + c2 == doctest::Approx(v1 + v2).epsilon(1e-9));
    if (v1 != v2) {
      if (d.u < 0.5) {
        CHECK(c1 >= lo);
        CHECK(c1 <= hi);
        CHECK(c2 >= lo);
        CHECK(c2 <= hi);
      } else if (d.u > 0.5) {
        bool outside = (std::min(c1, c2) < lo) && (std::max(c1, c2) > hi);
        CHECK(outside);
      }
    }
  }
}

TEST_CASE("worked sbx example: u=0.9 on parents 0 and 10") {
  SbxDraw d = SbxDraw::make(0.9, false, 2.5);
  CHECK(d.beta == doctest::Approx(std::pow(5.0, 1.0 / 3.5)).epsilon(1e-12));
  auto [c1, c2] = sbx_pair(0.0, 10.0, d);
  CHECK(c1 == doctest::Approx(-2.9190980438));
  CHECK(c2 == doctest::Approx(12.9190980438));
  auto [i1, i2] = sbx_typed(Value::of_int(0), Value::of_int(10), d,
                            TypeTag::of(Prim::Int));
  CHECK(i1.as_int() == -3);
  CHECK(i2.as_int() == 13);
}

TEST_CASE("literal mode reproduces the difference-centered form") {
  SbxDraw d = SbxDraw::make(0.9, false, 2.5);
  double v1 = 2, v2 = 1;
  auto [c1, c2] = sbx_pair(v1, v2, d, true);
  double expect1 = (v1 - v2) * 0.5 + d.beta * 0.5 * std::fabs(v1 - v2);
  double expect2 = (v2 - v1) * 0.5 + d.beta * 0.5 * std::fabs(v1 - v2);
  CHECK(c1 == doctest::Approx(expect1));
  CHECK(c2 == doctest::Approx(expect2));
}

TEST_CASE("typed sbx stays inside each embedded domain") {
  Rng rng(23);
  for (int i = 0; i < 5000; ++i) {
    SbxDraw d = SbxDraw::sample(rng, 2.5);
    auto [b1, b2] =
        sbx_typed(Value::of_bool(rng.coin()), Value::of_bool(rng.coin()), d,
                  TypeTag::of(Prim::Boolean));
    CHECK(b1.prim() == Prim::Boolean);
    auto [ch1, ch2] = sbx_typed(Value::of_char('a'), Value::of_char('z'), d,
                                TypeTag::of(Prim::Char));
    uint32_t c1 = ch1.as_char(), c2 = ch2.as_char();
    CHECK(c1 <= 0x10FFFF);
    CHECK((c1 < 0xD800 || c1 > 0xDFFF));
    CHECK(c2 <= 0x10FFFF);
  }
}

TEST_CASE("string splice keeps inclusive prefixes") {
  auto [x, y] = string_splice("lorem", "ipsum", SpliceDraw{1, 3});
  CHECK(x == "lom");
  CHECK(y == "ipsurem");
}

TEST_CASE("spx splice remaps tail references") {
  Fixture f(slurp(CORPUS_DIR "/fraction.subj"));
  TestCase p1, p2;
  p1.stmts = {ctor(1, 2), ctor(3, 4),
              method("Fraction|add(Fraction)V", 0, {Arg::of_ref(1)})};
  p2.stmts = {ctor(5, 6),
              method("Fraction|divideBy(Fraction)V", 0, {Arg::of_ref(0)})};
  // Cut p1 after 1 statement, p2 after 1 statement: o1 = p1[0] + p2[1:].
  auto [o1, o2] = spx_splice(p1, p2, 1, 1);
  REQUIRE(o1.size() == 2);
  CHECK(o1.stmts[0] == p1.stmts[0]);
  CHECK(o1.stmts[1].sig == "Fraction|divideBy(Fraction)V");
  // The tail's receiver pointed at p2 statement 0; it now resolves to the
  // head position with the same offset-from-cut rule.
  CHECK(o1.stmts[1].receiver == 0);
  REQUIRE(o2.size() == 3);
  CHECK(o2.stmts[1] == p1.stmts[1]);
  CHECK(o2.stmts[2].receiver == 0);
  CHECK(o2.stmts[2].args[0].ref == 1);
}

TEST_CASE("spx offspring are always valid") {
  Fixture f(slurp(CORPUS_DIR "/fraction.subj"));
  Rng rng(31);
  for (int i = 0; i < 500; ++i) {
    TestCase p1 = random_test("Fraction", f.info, rng, 10);
    TestCase p2 = random_test("Fraction", f.info, rng, 10);
    auto [o1, o2] = spx(p1, p2, "Fraction", f.info, rng);
    CHECK(is_valid(o1, f.info));
    CHECK(is_valid(o2, f.info));
  }
}

TEST_CASE("compatible sites on the documented parent pair") {
  Fixture f(slurp(CORPUS_DIR "/fraction.subj"));
  // Parent 1: two ctors, divideBy, add. Parent 2: two ctors, add, pow.
  TestCase p1, p2;
  p1.stmts = {ctor(2, 3), ctor(2, -1),
              method("Fraction|divideBy(Fraction)V", 0, {Arg::of_ref(1)}),
              method("Fraction|add(Fraction)V", 0, {Arg::of_ref(1)})};
  p2.stmts = {ctor(3, 1), ctor(1, 3),
              method("Fraction|add(Fraction)V", 0, {Arg::of_ref(1)}),
              method("Fraction|pow(double)double", 0,
                     {Arg::lit(Value::of_double(2))})};
  auto [c1, c2] = build_compat_index(p1, p2, f.info);
  // Exactly the constructor pair and the add pair; divideBy and pow are
  // one-sided and drop out.
  REQUIRE(c1.ctor_map.size() == 1);
  CHECK(c1.ctor_map.count("Fraction|<init>(int, int)Fraction") == 1);
  REQUIRE(c1.method_map.size() == 1);
  CHECK(c1.method_map.count("Fraction|add(Fraction)V") == 1);
  CHECK(c2.ctor_map.at("Fraction|<init>(int, int)Fraction") ==
        std::vector<int>{0, 1});
  CHECK(c2.method_map.at("Fraction|add(Fraction)V") == std::vector<int>{2});

  // Pairing Fraction(2,3) with Fraction(1,3) recombines (2,1) and (3,3).
  SbxDraw d = SbxDraw::make(0.9, false, 2.5);
  auto [a1, a2] = sbx_typed(Value::of_int(2), Value::of_int(1), d,
                            TypeTag::of(Prim::Int));
  auto [b1, b2] = sbx_typed(Value::of_int(3), Value::of_int(3), d,
                            TypeTag::of(Prim::Int));
  CHECK(a1.as_int() + a2.as_int() == 3);  // mass conserved around the mean
  CHECK(b1.as_int() == 3);                // equal parents are fixed points
  CHECK(b2.as_int() == 3);
}

TEST_CASE("hmx offspring are always valid") {
  Fixture f(slurp(CORPUS_DIR "/stemmer.subj"));
  Rng rng(37);
  OperatorConfig cfg;
  for (int i = 0; i < 500; ++i) {
    TestCase p1 = random_test("Stemmer", f.info, rng, 10);
    TestCase p2 = random_test("Stemmer", f.info, rng, 10);
    auto [o1, o2] = hmx_crossover(p1, p2, "Stemmer", f.info, rng, cfg);
    CHECK(is_valid(o1, f.info));
    CHECK(is_valid(o2, f.info));
  }
}

TEST_CASE("hmx with zero data rate degenerates to spx") {
  Fixture f(slurp(CORPUS_DIR "/fraction.subj"));
  OperatorConfig cfg;
  cfg.data_crossover_rate = 0.0;
  Rng gen(41);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    TestCase p1 = random_test("Fraction", f.info, gen, 10);
    TestCase p2 = random_test("Fraction", f.info, gen, 10);
    uint64_t seed = gen.next_u64();
    Rng r1(seed), r2(seed);
    auto [s1, s2] = spx(p1, p2, "Fraction", f.info, r1);
    auto [h1, h2] = hmx_crossover(p1, p2, "Fraction", f.info, r2, cfg);
    CHECK(h1 == s1);
    CHECK(h2 == s2);
    ++checked;
  }
  CHECK(checked == 2000);
}

TEST_CASE("mutation preserves validity and usually changes something") {
  Fixture f(slurp(CORPUS_DIR "/stemmer.subj"));
  Rng rng(43);
  int changed = 0;
  for (int i = 0; i < 1000; ++i) {
    TestCase t = random_test("Stemmer", f.info, rng, 8);
    int events = 0;
    TestCase m = mutate(t, "Stemmer", f.info, rng, &events);
    CHECK(is_valid(m, f.info));
    if (!(m == t)) ++changed;
    CHECK(events >= 0);
  }
  CHECK(changed > 500);
}
