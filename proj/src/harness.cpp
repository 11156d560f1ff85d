#include "hmx/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hmx/mutation.hpp"
#include "hmx/parser.hpp"
#include "hmx/stats.hpp"

namespace fs = std::filesystem;

namespace hmx {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

long long parse_int(const std::string& v, const std::string& key, int line) {
  try {
    size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad value for '" + key + "': " + v, line);
  }
}

double parse_real(const std::string& v, const std::string& key, int line) {
  try {
    size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad value for '" + key + "': " + v, line);
  }
}

bool parse_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("bad value for '" + key + "': " + v, line);
}

std::string fmt_fraction(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  size_t n = xs.size();
  if (n == 0) return 0.0;
  return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

ExperimentPlan::ExperimentPlan() {
  for (uint64_t s = 0; s < 20; ++s) seeds.push_back(s);
  search.budget_evaluations = 10000;
}

const char* operator_name(CrossoverKind k) {
  return k == CrossoverKind::Hmx ? "hmx" : "spx";
}

CrossoverKind operator_of(const std::string& name) {
  if (name == "spx") return CrossoverKind::Spx;
  if (name == "hmx") return CrossoverKind::Hmx;
  throw ConfigError("unknown operator: " + name, 0);
}

ExperimentPlan load_config(const std::string& path) {
  ExperimentPlan plan;
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what(), 0);
  }
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key=value: " + line, lineno);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "subjects") {
      plan.subjects = split_list(val);
    } else if (key == "operators") {
      plan.operators.clear();
      for (const std::string& n : split_list(val)) {
        try {
          plan.operators.push_back(operator_of(n));
        } catch (const ConfigError&) {
          throw ConfigError("bad value for 'operators': " + n, lineno);
        }
      }
      if (plan.operators.empty())
        throw ConfigError("empty operator list", lineno);
    } else if (key == "crossover") {
      try {
        plan.operators = {operator_of(val)};
      } catch (const ConfigError&) {
        throw ConfigError("bad value for 'crossover': " + val, lineno);
      }
    } else if (key == "seeds") {
      plan.seeds.clear();
      size_t dots = val.find("..");
      if (dots != std::string::npos) {
        long long a = parse_int(trim(val.substr(0, dots)), key, lineno);
        long long b = parse_int(trim(val.substr(dots + 2)), key, lineno);
        if (a > b) throw ConfigError("bad seed range: " + val, lineno);
        for (long long s = a; s <= b; ++s)
          plan.seeds.push_back(static_cast<uint64_t>(s));
      } else {
        for (const std::string& n : split_list(val))
          plan.seeds.push_back(static_cast<uint64_t>(parse_int(n, key, lineno)));
      }
      if (plan.seeds.empty()) throw ConfigError("empty seed list", lineno);
    } else if (key == "population") {
      plan.search.population_size = static_cast<int>(parse_int(val, key, lineno));
    } else if (key == "crossover_rate") {
      plan.search.operator_config.crossover_rate = parse_real(val, key, lineno);
    } else if (key == "eta_c") {
      plan.search.operator_config.eta_c = parse_real(val, key, lineno);
    } else if (key == "data_crossover_rate") {
      plan.search.operator_config.data_crossover_rate =
          parse_real(val, key, lineno);
    } else if (key == "sbx_literal_mode") {
      plan.search.operator_config.sbx_literal_mode =
          parse_bool(val, key, lineno);
    } else if (key == "budget_evals") {
      plan.search.budget_evaluations = parse_int(val, key, lineno);
    } else if (key == "budget_secs") {
      plan.search.budget_seconds = parse_real(val, key, lineno);
      plan.search.budget_evaluations = 0;
    } else if (key == "max_test_length") {
      plan.search.max_test_length = static_cast<int>(parse_int(val, key, lineno));
    } else if (key == "statement_budget") {
      plan.search.limits.max_interpreted_statements =
          parse_int(val, key, lineno);
    } else if (key == "output_dir") {
      plan.output_dir = val;
    } else if (key == "threads") {
      plan.threads = static_cast<int>(parse_int(val, key, lineno));
    } else {
      throw ConfigError("unknown key '" + key + "'", lineno);
    }
  }
  return plan;
}

Corpus load_subject(const std::string& path, std::string* unit_name) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw SubjectLoadError(e.what());
  }
  Corpus corpus;
  try {
    corpus = parse_corpus(text);
    typecheck(corpus);
  } catch (const CompileError& e) {
    throw SubjectLoadError(path + ":" + std::to_string(e.line) + ": " +
                           e.what());
  }
  if (corpus.units.size() != 1)
    throw SubjectLoadError(path + ": expected exactly one subject per file");
  if (unit_name) *unit_name = corpus.units.begin()->first;
  return corpus;
}

std::string render_suite(const std::vector<TestCase>& suite,
                         const std::string& subject, uint64_t seed,
                         const CorpusInfo& info) {
  std::ostringstream out;
  out << "subject " << subject << "\n";
  out << "seed " << seed << "\n";
  for (size_t k = 0; k < suite.size(); ++k) {
    out << "test " << k << "\n";
    out << render(suite[k], info);
  }
  return out.str();
}

std::vector<TestCase> parse_suite(const std::string& text,
                                  const Corpus& corpus, const CorpusInfo& info,
                                  std::string* subject, uint64_t* seed) {
  (void)corpus;
  std::vector<TestCase> out;
  std::istringstream in(text);
  std::string line;
  std::string block;
  bool in_test = false;
  auto flush = [&]() {
    if (in_test) out.push_back(parse_rendered(block, info));
    block.clear();
  };
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.rfind("subject ", 0) == 0) {
      if (subject) *subject = trim(t.substr(8));
    } else if (t.rfind("seed ", 0) == 0) {
      if (seed) *seed = std::stoull(trim(t.substr(5)));
    } else if (t.rfind("test ", 0) == 0 || t == "test") {
      flush();
      in_test = true;
    } else if (!t.empty()) {
      block += t + "\n";
    }
  }
  flush();
  return out;
}

std::string runs_csv(const std::vector<RunRecord>& records) {
  std::string out =
      "subject,operator,seed,branch_cov,line_cov,weak_score,strong_score,"
      "evaluations\n";
  for (const RunRecord& r : records) {
    out += r.subject + "," + r.op + "," + std::to_string(r.seed) + "," +
           fmt_fraction(r.branch_cov) + "," + fmt_fraction(r.line_cov) + "," +
           fmt_fraction(r.weak_score) + "," + fmt_fraction(r.strong_score) +
           "," + std::to_string(r.evaluations) + "\n";
  }
  return out;
}

std::vector<RunRecord> parse_runs_csv(const std::string& text) {
  std::vector<RunRecord> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cols;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cols.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    cols.push_back(cur);
    if (cols.size() != 8)
      throw ConfigError("bad runs.csv row: " + line, lineno);
    RunRecord r;
    r.subject = cols[0];
    r.op = cols[1];
    r.seed = static_cast<uint64_t>(parse_int(cols[2], "seed", lineno));
    r.branch_cov = parse_real(cols[3], "branch_cov", lineno);
    r.line_cov = parse_real(cols[4], "line_cov", lineno);
    r.weak_score = parse_real(cols[5], "weak_score", lineno);
    r.strong_score = parse_real(cols[6], "strong_score", lineno);
    r.evaluations = parse_int(cols[7], "evaluations", lineno);
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

const char* kMetrics[] = {"branch_cov", "line_cov", "weak_score",
                          "strong_score"};

double metric_of(const RunRecord& r, const std::string& metric) {
  if (metric == "branch_cov") return r.branch_cov;
  if (metric == "line_cov") return r.line_cov;
  if (metric == "weak_score") return r.weak_score;
  return r.strong_score;
}

}  // namespace

StatReport make_stat_report(const std::vector<RunRecord>& records,
                            bool compare) {
  StatReport report;
  std::vector<std::string> subjects;
  for (const RunRecord& r : records)
    if (std::find(subjects.begin(), subjects.end(), r.subject) ==
        subjects.end())
      subjects.push_back(r.subject);

  for (const char* metric : kMetrics) {
    StatReport::Aggregate agg;
    agg.metric = metric;
    for (const std::string& subject : subjects) {
      std::vector<double> spx_vals, hmx_vals;
      for (const RunRecord& r : records) {
        if (r.subject != subject) continue;
        (r.op == "hmx" ? hmx_vals : spx_vals)
            .push_back(metric_of(r, metric));
      }
      SubjectStat row;
      row.metric = metric;
      row.subject = subject;
      row.median_spx = median(spx_vals);
      row.median_hmx = median(hmx_vals);
      if (compare && !spx_vals.empty() && !hmx_vals.empty()) {
        row.p_value = wilcoxon_rank_sum(hmx_vals, spx_vals).p;
        row.a12 = a12(hmx_vals, spx_vals);
        row.effect = classify_effect(row.a12);
        if (row.p_value < 0.05 && row.a12 > 0.5) {
          if (row.effect == "large")
            ++agg.win_large;
          else if (row.effect == "medium")
            ++agg.win_medium;
          else if (row.effect == "small")
            ++agg.win_small;
          else
            ++agg.win_negligible;
        } else if (row.p_value < 0.05 && row.a12 < 0.5) {
          ++agg.lose;
        } else {
          ++agg.no_diff;
        }
      }
      report.rows.push_back(std::move(row));
    }
    if (compare) report.aggregates.push_back(agg);
  }
  return report;
}

std::string stats_csv(const StatReport& report) {
  std::string out = "metric,subject,median_spx,median_hmx,p_value,a12,effect\n";
  for (const SubjectStat& r : report.rows) {
    out += r.metric + "," + r.subject + "," + fmt_fraction(r.median_spx) +
           "," + fmt_fraction(r.median_hmx) + "," + fmt_fraction(r.p_value) +
           "," + fmt_fraction(r.a12) + "," + r.effect + "\n";
  }
  return out;
}

std::string stats_markdown(const StatReport& report) {
  std::ostringstream out;
  out << "# Operator comparison (hmx vs spx)\n";
  for (const char* metric : kMetrics) {
    out << "\n## " << metric << "\n\n";
    out << "| Subject | SPX median | HMX median | p-value | A12 | Effect |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const SubjectStat& r : report.rows) {
      if (r.metric != metric) continue;
      out << "| " << r.subject << " | " << fmt_fraction(r.median_spx) << " | "
          << fmt_fraction(r.median_hmx) << " | " << fmt_fraction(r.p_value)
          << " | " << fmt_fraction(r.a12) << " | "
          << (r.effect.empty() ? "-" : r.effect) << " |\n";
    }
  }
  if (!report.aggregates.empty()) {
    out << "\n## Aggregate\n\n";
    out << "| Metric | #Win Large | Medium | Small | Negl. | #Lose | #No "
           "diff. |\n";
    out << "|---|---|---|---|---|---|---|\n";
    for (const auto& a : report.aggregates) {
      out << "| " << a.metric << " | " << a.win_large << " | " << a.win_medium
          << " | " << a.win_small << " | " << a.win_negligible << " | "
          << a.lose << " | " << a.no_diff << " |\n";
    }
  }
  return out.str();
}

namespace {

struct PlanRun {
  std::string subject_path;
  std::string subject_name;
  CrossoverKind op;
  uint64_t seed = 0;
};

}  // namespace

std::vector<RunRecord> run_plan(const ExperimentPlan& plan) {
  if (plan.subjects.empty())
    throw ConfigError("plan has no subjects", 0);

  // Validate every subject up front; any load failure aborts the whole plan.
  std::map<std::string, Corpus> corpora;
  std::map<std::string, CorpusInfo> infos;
  std::map<std::string, std::string> names;
  for (const std::string& path : plan.subjects) {
    std::string name;
    Corpus c = load_subject(path, &name);
    infos[path] = typecheck(c);
    corpora.emplace(path, std::move(c));
    names[path] = name;
  }

  std::vector<PlanRun> matrix;
  for (const std::string& path : plan.subjects)
    for (CrossoverKind op : plan.operators)
      for (uint64_t seed : plan.seeds)
        matrix.push_back({path, names[path], op, seed});

  int threads = plan.threads;
  if (const char* env = std::getenv("HMXFORGE_THREADS")) {
    try {
      threads = std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError("bad HMXFORGE_THREADS value", 0);
    }
  }
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  threads = std::min<int>(threads, static_cast<int>(matrix.size()));

  std::vector<RunRecord> records(matrix.size());
  std::vector<SearchResult> results(matrix.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> partial{false};

  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= matrix.size()) return;
      const PlanRun& run = matrix[i];
      const Corpus& corpus = corpora.at(run.subject_path);
      const CorpusInfo& info = infos.at(run.subject_path);
      RunRecord rec;
      rec.subject = run.subject_name;
      rec.op = operator_name(run.op);
      rec.seed = run.seed;
      try {
        SearchConfig cfg = plan.search;
        cfg.operator_kind = run.op;
        cfg.seed = run.seed;
        auto t0 = std::chrono::steady_clock::now();
        SearchResult res = evolve(run.subject_name, corpus, info, cfg);
        MutationResult mut = score_suite(res.suite, run.subject_name, corpus,
                                         info, cfg.limits);
        auto t1 = std::chrono::steady_clock::now();
        rec.branch_cov = res.covered_branches;
        rec.line_cov = res.covered_lines;
        rec.weak_score = mut.weak_score();
        rec.strong_score = mut.strong_score();
        rec.evaluations = res.evaluations_used;
        rec.wall_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0)
                .count();
        results[i] = std::move(res);
      } catch (const std::exception& e) {
        partial = true;
        std::cerr << "run " << rec.subject << "/" << rec.op << "/seed"
                  << rec.seed << " failed: " << e.what() << "\n";
      }
      records[i] = std::move(rec);
    }
  };

  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  fs::create_directories(fs::path(plan.output_dir) / "runs");
  for (size_t i = 0; i < matrix.size(); ++i) {
    const PlanRun& run = matrix[i];
    const RunRecord& rec = records[i];
    std::string stem = run.subject_name + "_" + operator_name(run.op) +
                       "_seed" + std::to_string(run.seed);
    const CorpusInfo& info = infos.at(run.subject_path);

    write_file(fs::path(plan.output_dir) / "runs" / (stem + ".tests"),
               render_suite(results[i].suite, run.subject_name, run.seed,
                            info));

    nlohmann::json j;
    j["subject"] = rec.subject;
    j["operator"] = rec.op;
    j["seed"] = rec.seed;
    j["config"] = {
        {"population", plan.search.population_size},
        {"budget_evals", plan.search.budget_evaluations},
        {"budget_secs", plan.search.budget_seconds},
        {"crossover_rate", plan.search.operator_config.crossover_rate},
        {"eta_c", plan.search.operator_config.eta_c},
        {"data_crossover_rate",
         plan.search.operator_config.data_crossover_rate},
        {"max_test_length", plan.search.max_test_length},
    };
    j["metrics"] = {
        {"branch_cov", rec.branch_cov},
        {"line_cov", rec.line_cov},
        {"weak_score", rec.weak_score},
        {"strong_score", rec.strong_score},
        {"evaluations", rec.evaluations},
        {"generations", results[i].generations},
        {"wall_ms", rec.wall_ms},
    };
    j["branch_series"] = results[i].branch_series;
    write_file(fs::path(plan.output_dir) / "runs" / (stem + ".json"),
               j.dump(2) + "\n");
  }

  write_file(fs::path(plan.output_dir) / "runs.csv", runs_csv(records));
  bool compare = plan.operators.size() > 1;
  StatReport report = make_stat_report(records, compare);
  write_file(fs::path(plan.output_dir) / "stats.csv", stats_csv(report));
  write_file(fs::path(plan.output_dir) / "summary.md",
             stats_markdown(report));
  if (partial)
    std::cerr << "warning: some runs failed; results are partial\n";
  return records;
}

}  // namespace hmx
