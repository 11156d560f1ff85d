#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hmx/encoding.hpp"
#include "hmx/semantics.hpp"

namespace hmx {

struct SandboxLimits {
  int64_t max_interpreted_statements = 100000;
  int64_t max_string_length = 65536;
};

struct StmtObs {
  enum class Kind { Value, Void, Exception, Skipped };
  Kind kind = Kind::Skipped;
  std::string rendered;       // canonical value/state rendering
  std::string exception_tag;  // Exception only

  bool operator==(const StmtObs& o) const {
    return kind == o.kind && rendered == o.rendered &&
           exception_tag == o.exception_tag;
  }
  bool operator!=(const StmtObs& o) const { return !(*this == o); }
};

struct ExecutionTrace {
  std::set<int> covered_lines;
  std::map<int, std::set<bool>> branch_outcomes;
  std::map<std::pair<int, bool>, double> branch_min_distance;
  std::vector<StmtObs> observations;  // one per test statement
  int64_t statements_executed = 0;
  std::string aborted;  // empty, "statement-budget", or "string-limit"

  // Dynamic value sequence of the watched expression node, when a watch was
  // requested (weak-mutation instrumentation). Entries are canonical value
  // renderings; "!" + tag marks an exception escaping the node.
  std::vector<std::string> watched;

  bool branch_covered(int branch, bool outcome) const {
    auto it = branch_outcomes.find(branch);
    return it != branch_outcomes.end() && it->second.count(outcome) != 0;
  }
};

// Standard d/(d+1) normalization into [0, 1).
double normalize_distance(double d);

// Runs a test against the corpus. Faulting statements record exceptions and
// invalidate their variable; later statements with invalid inputs are
// recorded as skipped. Pure function of its inputs.
ExecutionTrace execute_test(const TestCase& test, const Corpus& corpus,
                            const CorpusInfo& info, const SandboxLimits& limits,
                            int watch_node = -1);

// Distance of a typechecked boolean expression from the desired outcome,
// evaluated over a plain variable environment. Zero iff the outcome holds.
double branch_distance(const Expr& predicate,
                       const std::map<std::string, Value>& env, bool desired);

// Approach level plus normalized branch distance toward the target;
// zero iff the target is covered by the trace.
double target_fitness(const CoverageTarget& target, const ExecutionTrace& trace,
                      const UnitInfo& ui);

}  // namespace hmx
