#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmx/rng.hpp"
#include "hmx/semantics.hpp"

namespace hmx {

// One actual argument of a constructor/method call statement. Primitive and
// string arguments are inline literals so the data-level crossover has a
// direct write target; object arguments reference an earlier statement.
struct Arg {
  bool is_ref = false;
  Value literal;
  int ref = -1;  // index of the producing statement

  static Arg lit(Value v) { return Arg{false, std::move(v), -1}; }
  static Arg of_ref(int idx) { return Arg{true, {}, idx}; }

  bool operator==(const Arg& o) const {
    return is_ref == o.is_ref && literal == o.literal && ref == o.ref;
  }
};

struct Statement {
  enum class Kind { PrimitiveDef, ConstructorCall, MethodCall };
  Kind kind = Kind::PrimitiveDef;
  TypeTag prim_type;   // PrimitiveDef
  Value prim_value;    // PrimitiveDef
  std::string sig;     // signature key for calls
  int receiver = -1;   // MethodCall: statement index of the receiver
  std::vector<Arg> args;

  bool operator==(const Statement& o) const {
    return kind == o.kind && prim_type == o.prim_type &&
           prim_value == o.prim_value && sig == o.sig &&
           receiver == o.receiver && args == o.args;
  }
};

struct TestCase {
  std::vector<Statement> stmts;

  size_t size() const { return stmts.size(); }
  bool operator==(const TestCase& o) const { return stmts == o.stmts; }
};

struct CompatibilityIndex {
  std::map<std::string, std::vector<int>> ctor_map;
  std::map<std::string, std::vector<int>> method_map;
};

struct RepairImpossible : std::runtime_error {
  explicit RepairImpossible(const std::string& what)
      : std::runtime_error(what) {}
};

// Type produced by statement `i`, or nullopt for void method calls.
std::optional<TypeTag> defined_type(const Statement& s, const CorpusInfo& info);

bool is_valid(const TestCase& test, const CorpusInfo& info);

// Fresh random test for the given unit; always begins with one of the unit's
// constructors. Numeric literals are drawn from [-100, 100], strings have
// geometric length with mean 8 over printable ASCII.
TestCase random_test(const std::string& unit, const CorpusInfo& info, Rng& rng,
                     int max_length);

Value random_literal(const TypeTag& t, Rng& rng);

// Fixes dangling or ill-typed references by inserting new definitions
// immediately before first use. Idempotent; throws RepairImpossible when no
// constructor chain can produce a required subject type.
TestCase repair(const TestCase& test, const std::string& unit,
                const CorpusInfo& info, Rng& rng);

std::string render(const TestCase& test, const CorpusInfo& info);

// Parses the render() format back into a TestCase (used for suite replay).
TestCase parse_rendered(const std::string& text, const CorpusInfo& info);

// Signatures present in BOTH tests, constructors and methods kept apart,
// positions in statement order.
std::pair<CompatibilityIndex, CompatibilityIndex> build_compat_index(
    const TestCase& o1, const TestCase& o2, const CorpusInfo& info);

}  // namespace hmx
