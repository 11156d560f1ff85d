#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hmx/operators.hpp"
#include "hmx/runtime.hpp"

namespace hmx {

enum class CrossoverKind { Spx, Hmx };

struct SearchConfig {
  int population_size = 50;
  int64_t budget_evaluations = 0;   // used when > 0
  double budget_seconds = 120.0;    // wall-clock fallback
  CrossoverKind operator_kind = CrossoverKind::Spx;
  OperatorConfig operator_config;
  uint64_t seed = 0;
  int max_test_length = 40;
  SandboxLimits limits;
};

struct Archive {
  // Target -> shortest known covering test.
  std::map<CoverageTarget, TestCase> entries;

  // Inserts if absent; replaces only a strictly longer incumbent.
  void update(const CoverageTarget& t, const TestCase& test);
};

struct SearchResult {
  std::vector<TestCase> suite;  // archive values, deduplicated
  double covered_branches = 0.0;
  double covered_lines = 0.0;
  int64_t evaluations_used = 0;
  int generations = 0;
  std::vector<double> branch_series;  // per-generation branch coverage
  Archive archive;
};

// Branch targets activate when their controlling branch outcome is covered;
// root targets are always active; covered targets drop out.
std::set<CoverageTarget> active_targets(
    const std::set<CoverageTarget>& covered, const UnitInfo& ui,
    const std::vector<CoverageTarget>& all_targets);

struct RankedIndividual {
  int index = 0;
  int rank = 0;
  double crowding = 0.0;
};

// MOSA preference sorting: front 0 holds, per active target, the individual
// with minimal fitness (ties broken by shorter test then lower index); the
// rest are ranked by non-dominated sorting with crowding distances.
std::vector<std::vector<RankedIndividual>> preference_sort(
    const std::vector<std::vector<double>>& fitness,
    const std::vector<int>& test_lengths);

SearchResult evolve(const std::string& unit, const Corpus& corpus,
                    const CorpusInfo& info, const SearchConfig& cfg);

}  // namespace hmx
