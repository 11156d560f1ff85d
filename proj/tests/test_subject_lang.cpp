#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hmx/parser.hpp"
#include "hmx/semantics.hpp"

using namespace hmx;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Corpus checked(const std::string& src, CorpusInfo* info = nullptr) {
  Corpus c = parse_corpus(src);
  CorpusInfo ci = typecheck(c);
  if (info) *info = std::move(ci);
  return c;
}

const char* kMini = R"(
subject Box {
  field int val;
  ctor(int v) {
    val = v;
  }
  method get() : int {
    return val;
  }
  method bump(int by) {
    if (by > 0) {
      val = val + by;
    }
  }
}
)";

}  // namespace

TEST_CASE("lexer tracks lines and columns") {
  auto toks = lex("subject A {\n  field int x;\n}");
  REQUIRE(toks.size() > 3);
  CHECK(toks[0].text == "subject");
  CHECK(toks[0].line == 1);
  CHECK(toks[3].text == "field");
  CHECK(toks[3].line == 2);
  CHECK(toks[3].col == 3);
}

TEST_CASE("lexer literal forms") {
  auto toks = lex(R"(42 7L 3.5 'a' "hi\n" true false)");
  CHECK(toks[0].literal.as_int() == 42);
  CHECK(toks[1].literal.as_long() == 7);
  CHECK(toks[2].literal.as_double() == 3.5);
  CHECK(toks[3].literal.as_char() == 'a');
  CHECK(toks[4].literal.as_string() == "hi\n");
  CHECK(toks[5].literal.as_bool() == true);
  CHECK(toks[6].literal.as_bool() == false);
}

TEST_CASE("parse and pretty-print round trip") {
  Corpus c = checked(kMini);
  std::string printed = pretty_print(c);
  Corpus c2 = parse_corpus(printed);
  typecheck(c2);
  CHECK(structurally_equal(c.units.at("Box"), c2.units.at("Box")));
  CHECK(pretty_print(c2) == printed);
}

TEST_CASE("whole corpus round trips") {
  for (const char* name :
       {"fraction", "complex", "interval", "quadratic", "stemmer", "csvfield",
        "roman", "template"}) {
    CAPTURE(name);
    Corpus c = checked(slurp(std::string(CORPUS_DIR "/") + name + ".subj"));
    std::string printed = pretty_print(c);
    Corpus c2 = parse_corpus(printed);
    typecheck(c2);
    CHECK(structurally_equal(c.units.begin()->second,
                             c2.units.begin()->second));
  }
}

TEST_CASE("signature keys match the documented format") {
  CorpusInfo info;
  checked(slurp(CORPUS_DIR "/fraction.subj"), &info);
  CHECK(info.signatures.count("Fraction|<init>(int, int)Fraction") == 1);
  CHECK(info.signatures.count("Fraction|add(Fraction)V") == 1);
  CHECK(info.signatures.count("Fraction|pow(double)double") == 1);
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_corpus("subject A { field int }");
    FAIL("expected CompileError");
  } catch (const CompileError& e) {
    CHECK(e.kind == "SyntaxError");
    CHECK(e.line == 1);
  }
}

TEST_CASE("duplicate names rejected") {
  CHECK_THROWS_AS(
      parse_corpus("subject A { field int x; field int x; ctor() {} }"),
      CompileError);
  CHECK_THROWS_AS(parse_corpus("subject A { ctor(int a, int a) {} }"),
                  CompileError);
}

TEST_CASE("type errors rejected") {
  // string + string is not defined; concat is the only string combinator.
  CHECK_THROWS_AS(checked(R"(subject A { ctor() {}
    method m() : string { return "a" + "b"; } })"),
                  CompileError);
  // Mod needs integral operands.
  CHECK_THROWS_AS(checked(R"(subject A { ctor() {}
    method m() : double { return 1.5 % 2.0; } })"),
                  CompileError);
  // No narrowing double -> int.
  CHECK_THROWS_AS(checked(R"(subject A { ctor() {}
    method m() : int { return 1.5; } })"),
                  CompileError);
  // Branch predicate must be boolean.
  CHECK_THROWS_AS(checked(R"(subject A { ctor() {}
    method m() { if (1) { return; } } })"),
                  CompileError);
}

TEST_CASE("widening is int -> long -> double only") {
  CHECK_NOTHROW(checked(R"(subject A { ctor() {}
    method m() : double { var long x = 3; return x + 0.5; } })"));
  CHECK_THROWS_AS(checked(R"(subject A { ctor() {}
    method m() : long { var long x = 1.5; return x; } })"),
                  CompileError);
}

TEST_CASE("missing return detected") {
  CHECK_THROWS_AS(checked(R"(subject A { ctor() {}
    method m(int x) : int { if (x > 0) { return 1; } } })"),
                  CompileError);
  CHECK_NOTHROW(checked(R"(subject A { ctor() {}
    method m(int x) : int {
      if (x > 0) { return 1; } else { return 0; }
    } })"));
}

TEST_CASE("cdg nesting and depths") {
  CorpusInfo info;
  checked(R"(subject A {
    ctor() {}
    method m(int x) {
      if (x > 0) {
        while (x > 1) {
          x = x - 1;
        }
      } else {
        if (x < -5) {
          x = 0;
        }
      }
    }
  })",
          &info);
  const UnitInfo& u = info.units.at("A");
  REQUIRE(u.branch_count == 3);
  const ControlDependencyGraph& g = u.cdg[1];  // the method, after the ctor
  REQUIRE(g.branch_ids.size() == 3);
  int outer = g.branch_ids[0], loop = g.branch_ids[1], inner = g.branch_ids[2];
  CHECK(g.parent_of.at(outer).branch == -1);
  CHECK(g.parent_of.at(loop).branch == outer);
  CHECK(g.parent_of.at(loop).outcome == true);
  CHECK(g.parent_of.at(inner).branch == outer);
  CHECK(g.parent_of.at(inner).outcome == false);
  CHECK(g.depth_of.at(outer) == 0);
  CHECK(g.depth_of.at(loop) == 1);
  CHECK(g.depth_of.at(inner) == 1);
}

TEST_CASE("target enumeration on fraction matches hand count") {
  CorpusInfo info;
  Corpus c = checked(slurp(CORPUS_DIR "/fraction.subj"), &info);
  const UnitInfo& u = info.units.at("Fraction");
  // Hand count from the source: branches — ctor d==0; add a<0, b<0,
  // while b!=0, a==0; divideBy other.num==0; pow k<0, while k>=1, e<0,
  // r==0 — 10 branches, two outcomes each.
  CHECK(u.branch_count == 10);
  int branch_targets = 0, line_targets = 0;
  for (const CoverageTarget& t : u.targets)
    (t.kind == CoverageTarget::Kind::Branch ? branch_targets : line_targets)++;
  CHECK(branch_targets == 20);
  // Hand count of statement lines: ctor 4, add 16, divideBy 4, pow 13,
  // getters 1 each.
  CHECK(line_targets == 39);
}

TEST_CASE("unknown names and types rejected") {
  CHECK_THROWS_AS(checked("subject A { ctor() { x = 1; } }"), CompileError);
  CHECK_THROWS_AS(checked("subject A { field Missing m; ctor() {} }"),
                  CompileError);
  CHECK_THROWS_AS(checked(R"(subject A { ctor() {}
    method m() { var B b = new B(); } })"),
                  CompileError);
}
