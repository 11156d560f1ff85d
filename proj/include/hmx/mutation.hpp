#pragma once

#include <set>
#include <string>
#include <vector>

#include "hmx/ast.hpp"
#include "hmx/runtime.hpp"

namespace hmx {

// A first-order mutant of one subject unit. Mutants are enumerated in a
// deterministic pre-order walk, so ids are stable across runs.
struct Mutant {
  int id = 0;
  std::string op;           // "AOR", "ROR", "CR", "NC"
  int node_id = -1;         // expression watched for weak-kill detection
  std::string description;  // human-readable, e.g. "a + b -> a - b @ line 7"
  SubjectUnit unit;
};

std::vector<Mutant> generate_mutants(const SubjectUnit& unit);

struct MutationResult {
  int total = 0;
  std::set<int> weak_killed;
  std::set<int> strong_killed;

  double weak_score() const {
    return total ? static_cast<double>(weak_killed.size()) / total : 1.0;
  }
  double strong_score() const {
    return total ? static_cast<double>(strong_killed.size()) / total : 1.0;
  }
};

// Scores a suite against all mutants of one unit. A mutant is strongly killed
// when some test's per-statement observations differ from the original; it is
// weakly killed when the value sequence at the mutated expression differs for
// some test. Strong kills imply weak kills.
MutationResult score_suite(const std::vector<TestCase>& suite,
                           const std::string& unit_name, const Corpus& corpus,
                           const CorpusInfo& info, const SandboxLimits& limits);

}  // namespace hmx
