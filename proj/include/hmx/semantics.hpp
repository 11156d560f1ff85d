#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hmx/ast.hpp"
#include "hmx/parser.hpp"

namespace hmx {

// Control dependency of a branch or line: the nearest enclosing branch
// outcome, or entry (branch id -1).
struct ControlDep {
  int branch = -1;  // -1 means method entry
  bool outcome = true;
};

struct ControlDependencyGraph {
  std::vector<int> branch_ids;            // in source order
  std::map<int, ControlDep> parent_of;    // branch id -> controlling dep
  std::map<int, int> depth_of;            // branch id -> #branch ancestors

  bool contains(int branch) const { return parent_of.count(branch) != 0; }
};

struct CoverageTarget {
  enum class Kind { Branch, Line };
  Kind kind = Kind::Line;
  int callable = 0;     // callable index within the unit (ctors first)
  int id = 0;           // branch id or 1-based source line
  bool outcome = true;  // branches only

  auto key() const { return std::tie(kind, callable, id, outcome); }
  bool operator<(const CoverageTarget& o) const { return key() < o.key(); }
  bool operator==(const CoverageTarget& o) const { return key() == o.key(); }

  static CoverageTarget branch(int callable, int id, bool outcome) {
    return {Kind::Branch, callable, id, outcome};
  }
  static CoverageTarget line(int callable, int ln) {
    return {Kind::Line, callable, ln, true};
  }
};

std::string target_name(const CoverageTarget& t);

// Per-unit static analysis produced by the typechecker.
struct UnitInfo {
  std::string name;
  std::vector<ControlDependencyGraph> cdg;  // indexed by callable index
  std::vector<CoverageTarget> targets;
  std::map<int, int> branch_callable;              // branch id -> callable
  std::map<int, ControlDep> line_ctrl;             // line -> controlling dep
  std::map<int, int> line_callable;                // line -> callable
  int branch_count = 0;
  int node_count = 0;  // expression nodes, for mutant addressing

  const ControlDependencyGraph& cdg_of_branch(int branch) const {
    return cdg[branch_callable.at(branch)];
  }
};

struct CallableRef {
  std::string unit;
  std::string name;  // "<init>" for constructors
  bool is_ctor = false;
  int index = 0;  // within ctors or methods of the unit
  std::vector<TypeTag> params;
  TypeTag ret;  // constructors report the owner subject type
};

struct CorpusInfo {
  std::map<std::string, UnitInfo> units;
  std::map<std::string, CallableRef> signatures;
};

// Typechecks every unit in place (annotating expression types, resolving
// names, assigning branch and node ids) and derives CDGs and coverage
// targets. Throws CompileError on TypeMismatch / MissingReturn /
// UnresolvedType / UnresolvedName.
CorpusInfo typecheck(Corpus& corpus);

// Standalone CDG construction for an already-typechecked callable.
ControlDependencyGraph build_cdg(const Callable& callable);

// Deterministically ordered coverage targets of a typechecked unit.
std::vector<CoverageTarget> enumerate_targets(const SubjectUnit& unit);

}  // namespace hmx
