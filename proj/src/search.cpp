#include "hmx/search.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

namespace hmx {

void Archive::update(const CoverageTarget& t, const TestCase& test) {
  auto it = entries.find(t);
  if (it == entries.end()) {
    entries.emplace(t, test);
  } else if (test.size() < it->second.size()) {
    it->second = test;
  }
}

std::set<CoverageTarget> active_targets(
    const std::set<CoverageTarget>& covered, const UnitInfo& ui,
    const std::vector<CoverageTarget>& all_targets) {
  std::set<CoverageTarget> out;
  auto branch_is_covered = [&](int branch, bool outcome) {
    int callable = ui.branch_callable.at(branch);
    return covered.count(CoverageTarget::branch(callable, branch, outcome)) != 0;
  };
  for (const CoverageTarget& t : all_targets) {
    if (covered.count(t)) continue;
    ControlDep ctrl;
    if (t.kind == CoverageTarget::Kind::Branch)
      ctrl = ui.cdg_of_branch(t.id).parent_of.at(t.id);
    else
      ctrl = ui.line_ctrl.count(t.id) ? ui.line_ctrl.at(t.id) : ControlDep{};
    if (ctrl.branch < 0 || branch_is_covered(ctrl.branch, ctrl.outcome))
      out.insert(t);
  }
  return out;
}

namespace {

// a dominates b: no worse everywhere, strictly better somewhere.
bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strictly = false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly = true;
  }
  return strictly;
}

void crowding_distances(const std::vector<std::vector<double>>& fitness,
                        std::vector<std::vector<RankedIndividual>>& fronts) {
  if (fitness.empty()) return;
  size_t m = fitness[0].size();
  for (auto& front : fronts) {
    for (auto& ri : front) ri.crowding = 0.0;
    if (front.size() <= 2) {
      for (auto& ri : front)
        ri.crowding = std::numeric_limits<double>::infinity();
      continue;
    }
    for (size_t obj = 0; obj < m; ++obj) {
      std::vector<size_t> order(front.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        double fx = fitness[front[x].index][obj];
        double fy = fitness[front[y].index][obj];
        if (fx != fy) return fx < fy;
        return front[x].index < front[y].index;
      });
      double lo = fitness[front[order.front()].index][obj];
      double hi = fitness[front[order.back()].index][obj];
      front[order.front()].crowding = std::numeric_limits<double>::infinity();
      front[order.back()].crowding = std::numeric_limits<double>::infinity();
      if (hi <= lo) continue;
      for (size_t k = 1; k + 1 < order.size(); ++k) {
        double prev = fitness[front[order[k - 1]].index][obj];
        double next = fitness[front[order[k + 1]].index][obj];
        front[order[k]].crowding += (next - prev) / (hi - lo);
      }
    }
  }
}

}  // namespace

std::vector<std::vector<RankedIndividual>> preference_sort(
    const std::vector<std::vector<double>>& fitness,
    const std::vector<int>& test_lengths) {
  size_t n = fitness.size();
  std::vector<std::vector<RankedIndividual>> fronts;
  if (n == 0) return fronts;
  size_t m = fitness[0].size();
  std::vector<bool> in_front0(n, false);
  // Preference criterion: best individual per objective.
  for (size_t obj = 0; obj < m; ++obj) {
    int best = -1;
    for (size_t i = 0; i < n; ++i) {
      if (best < 0) {
        best = static_cast<int>(i);
        continue;
      }
      double fi = fitness[i][obj], fb = fitness[best][obj];
      if (fi < fb ||
          (fi == fb && (test_lengths[i] < test_lengths[best] ||
                        (test_lengths[i] == test_lengths[best] &&
                         static_cast<int>(i) < best))))
        best = static_cast<int>(i);
    }
    if (best >= 0) in_front0[best] = true;
  }
  std::vector<RankedIndividual> front0;
  std::vector<int> rest;
  for (size_t i = 0; i < n; ++i) {
    if (in_front0[i])
      front0.push_back({static_cast<int>(i), 0, 0.0});
    else
      rest.push_back(static_cast<int>(i));
  }
  if (m == 0) {
    // No active objectives: a single flat front.
    for (int i : rest) front0.push_back({i, 0, 0.0});
    fronts.push_back(std::move(front0));
    return fronts;
  }
  fronts.push_back(std::move(front0));
  // Non-dominated sorting of the remainder.
  std::vector<int> pool = rest;
  int rank = 1;
  while (!pool.empty()) {
    std::vector<int> front, next;
    for (int i : pool) {
      bool dominated = false;
      for (int j : pool) {
        if (i != j && dominates(fitness[j], fitness[i])) {
          dominated = true;
          break;
        }
      }
      if (dominated)
        next.push_back(i);
      else
        front.push_back(i);
    }
    std::vector<RankedIndividual> f;
    for (int i : front) f.push_back({i, rank, 0.0});
    fronts.push_back(std::move(f));
    pool = std::move(next);
    ++rank;
  }
  crowding_distances(fitness, fronts);
  return fronts;
}

namespace {

struct Evaluated {
  TestCase test;
  ExecutionTrace trace;
};

}  // namespace

SearchResult evolve(const std::string& unit, const Corpus& corpus,
                    const CorpusInfo& info, const SearchConfig& cfg) {
  const UnitInfo& ui = info.units.at(unit);
  Rng rng(cfg.seed);
  SearchResult result;
  std::set<CoverageTarget> covered;
  const std::vector<CoverageTarget>& all_targets = ui.targets;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(cfg.budget_seconds));

  auto budget_left = [&]() {
    if (cfg.budget_evaluations > 0)
      return result.evaluations_used < cfg.budget_evaluations;
    return std::chrono::steady_clock::now() < deadline;
  };

  auto covered_by = [&](const CoverageTarget& t, const ExecutionTrace& tr) {
    if (t.kind == CoverageTarget::Kind::Branch)
      return tr.branch_covered(t.id, t.outcome);
    return tr.covered_lines.count(t.id) != 0;
  };

  auto evaluate = [&](const TestCase& t) {
    Evaluated ev;
    ev.test = t;
    ev.trace = execute_test(t, corpus, info, cfg.limits);
    ++result.evaluations_used;
    for (const CoverageTarget& target : all_targets) {
      if (covered_by(target, ev.trace)) {
        covered.insert(target);
        result.archive.update(target, t);
      }
    }
    return ev;
  };

  std::vector<Evaluated> pop;
  for (int i = 0; i < cfg.population_size && budget_left(); ++i)
    pop.push_back(evaluate(
        random_test(unit, info, rng, cfg.max_test_length)));

  int total_branches = 0;
  for (const CoverageTarget& t : all_targets)
    if (t.kind == CoverageTarget::Kind::Branch) ++total_branches;
  auto archive_branch_cov = [&]() {
    if (total_branches == 0) return 1.0;
    int c = 0;
    for (const auto& [t, _] : result.archive.entries)
      if (t.kind == CoverageTarget::Kind::Branch) ++c;
    return static_cast<double>(c) / total_branches;
  };
  result.branch_series.push_back(archive_branch_cov());

  while (budget_left() && covered.size() < all_targets.size() && !pop.empty()) {
    std::set<CoverageTarget> active = active_targets(covered, ui, all_targets);
    std::vector<CoverageTarget> objectives(active.begin(), active.end());
    auto fitness_matrix = [&](const std::vector<Evaluated>& xs) {
      std::vector<std::vector<double>> f(xs.size());
      for (size_t i = 0; i < xs.size(); ++i) {
        f[i].reserve(objectives.size());
        for (const CoverageTarget& t : objectives)
          f[i].push_back(target_fitness(t, xs[i].trace, ui));
      }
      return f;
    };
    std::vector<std::vector<double>> fit = fitness_matrix(pop);
    std::vector<int> lens(pop.size());
    for (size_t i = 0; i < pop.size(); ++i)
      lens[i] = static_cast<int>(pop[i].test.size());
    auto fronts = preference_sort(fit, lens);
    std::vector<std::pair<int, double>> rank_of(pop.size());  // (rank, crowding)
    for (const auto& front : fronts)
      for (const RankedIndividual& ri : front)
        rank_of[ri.index] = {ri.rank, ri.crowding};

    auto tournament = [&]() -> const TestCase& {
      int a = static_cast<int>(rng.uniform_int(0, (int)pop.size() - 1));
      int b = static_cast<int>(rng.uniform_int(0, (int)pop.size() - 1));
      auto better = [&](int x, int y) {
        if (rank_of[x].first != rank_of[y].first)
          return rank_of[x].first < rank_of[y].first;
        if (rank_of[x].second != rank_of[y].second)
          return rank_of[x].second > rank_of[y].second;
        return x < y;
      };
      return pop[better(a, b) ? a : b].test;
    };

    std::vector<Evaluated> offspring;
    while (static_cast<int>(offspring.size()) < cfg.population_size &&
           budget_left()) {
      const TestCase& p1 = tournament();
      const TestCase& p2 = tournament();
      TestCase o1 = p1, o2 = p2;
      if (rng.bernoulli(cfg.operator_config.crossover_rate)) {
        if (cfg.operator_kind == CrossoverKind::Hmx)
          std::tie(o1, o2) =
              hmx_crossover(p1, p2, unit, info, rng, cfg.operator_config);
        else
          std::tie(o1, o2) = spx(p1, p2, unit, info, rng);
      }
      o1 = mutate(o1, unit, info, rng);
      o2 = mutate(o2, unit, info, rng);
      offspring.push_back(evaluate(o1));
      if (static_cast<int>(offspring.size()) < cfg.population_size &&
          budget_left())
        offspring.push_back(evaluate(o2));
    }

    // Environmental selection over parents + offspring.
    std::vector<Evaluated> combined = std::move(pop);
    for (auto& e : offspring) combined.push_back(std::move(e));
    active = active_targets(covered, ui, all_targets);
    objectives.assign(active.begin(), active.end());
    fit = fitness_matrix(combined);
    lens.resize(combined.size());
    for (size_t i = 0; i < combined.size(); ++i)
      lens[i] = static_cast<int>(combined[i].test.size());
    fronts = preference_sort(fit, lens);
    pop.clear();
    for (auto& front : fronts) {
      if (static_cast<int>(pop.size()) >= cfg.population_size) break;
      std::sort(front.begin(), front.end(),
                [](const RankedIndividual& a, const RankedIndividual& b) {
                  if (a.crowding != b.crowding) return a.crowding > b.crowding;
                  return a.index < b.index;
                });
      for (const RankedIndividual& ri : front) {
        if (static_cast<int>(pop.size()) >= cfg.population_size) break;
        pop.push_back(combined[ri.index]);
      }
    }
    ++result.generations;
    result.branch_series.push_back(archive_branch_cov());
  }

  // Deduplicated suite in target order.
  for (const auto& [t, test] : result.archive.entries) {
    bool seen = false;
    for (const TestCase& s : result.suite)
      if (s == test) seen = true;
    if (!seen) result.suite.push_back(test);
  }

  // Coverage metrics from re-executing the suite.
  std::set<CoverageTarget> final_covered;
  for (const TestCase& t : result.suite) {
    ExecutionTrace tr = execute_test(t, corpus, info, cfg.limits);
    for (const CoverageTarget& target : all_targets)
      if (covered_by(target, tr)) final_covered.insert(target);
  }
  int cb = 0, cl = 0, tb = 0, tl = 0;
  for (const CoverageTarget& t : all_targets) {
    bool cov = final_covered.count(t) != 0;
    if (t.kind == CoverageTarget::Kind::Branch) {
      ++tb;
      if (cov) ++cb;
    } else {
      ++tl;
      if (cov) ++cl;
    }
  }
  result.covered_branches = tb ? static_cast<double>(cb) / tb : 1.0;
  result.covered_lines = tl ? static_cast<double>(cl) / tl : 1.0;
  return result;
}

}  // namespace hmx
