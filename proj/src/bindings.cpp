// Python bindings for the core operations: subject loading, the crossover
// primitives, test generation, mutation analysis, and the statistics kit.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "hmx/harness.hpp"
#include "hmx/mutation.hpp"
#include "hmx/stats.hpp"

namespace py = pybind11;
using namespace hmx;

namespace {

// Loaded subject handle shared by the generation/mutation entry points.
struct Subject {
  Corpus corpus;
  CorpusInfo info;
  std::string unit;

  explicit Subject(const std::string& path) {
    corpus = load_subject(path, &unit);
    info = typecheck(corpus);
  }
};

py::dict summary(const Subject& s) {
  const UnitInfo& u = s.info.units.at(s.unit);
  int branch_targets = 0, line_targets = 0;
  for (const CoverageTarget& t : u.targets)
    (t.kind == CoverageTarget::Kind::Branch ? branch_targets : line_targets)++;
  py::list sigs;
  for (const auto& [key, ref] : s.info.signatures) sigs.append(key);
  py::dict d;
  d["unit"] = s.unit;
  d["signatures"] = sigs;
  d["branch_count"] = u.branch_count;
  d["branch_targets"] = branch_targets;
  d["line_targets"] = line_targets;
  return d;
}

py::dict generate(const Subject& s, const std::string& op, uint64_t seed,
                  int64_t budget_evals, double budget_secs, int population,
                  double crossover_rate, double data_crossover_rate,
                  double eta_c, int max_test_length) {
  SearchConfig cfg;
  cfg.operator_kind = operator_of(op);
  cfg.seed = seed;
  cfg.budget_evaluations = budget_evals;
  cfg.budget_seconds = budget_secs;
  cfg.population_size = population;
  cfg.operator_config.crossover_rate = crossover_rate;
  cfg.operator_config.data_crossover_rate = data_crossover_rate;
  cfg.operator_config.eta_c = eta_c;
  cfg.max_test_length = max_test_length;
  SearchResult r = evolve(s.unit, s.corpus, s.info, cfg);
  py::list tests;
  for (const TestCase& t : r.suite) tests.append(render(t, s.info));
  py::dict d;
  d["subject"] = s.unit;
  d["operator"] = op;
  d["seed"] = seed;
  d["branch_cov"] = r.covered_branches;
  d["line_cov"] = r.covered_lines;
  d["evaluations"] = r.evaluations_used;
  d["generations"] = r.generations;
  d["branch_series"] = r.branch_series;
  d["tests"] = tests;
  d["suite"] = render_suite(r.suite, s.unit, seed, s.info);
  return d;
}

py::list mutants(const Subject& s) {
  py::list out;
  for (const Mutant& m : generate_mutants(s.corpus.units.at(s.unit))) {
    py::dict d;
    d["id"] = m.id;
    d["op"] = m.op;
    d["description"] = m.description;
    out.append(d);
  }
  return out;
}

py::dict mutation_score(const Subject& s,
                        const std::vector<std::string>& rendered_tests) {
  std::vector<TestCase> suite;
  for (const std::string& src : rendered_tests)
    suite.push_back(parse_rendered(src, s.info));
  SandboxLimits limits;
  MutationResult r = score_suite(suite, s.unit, s.corpus, s.info, limits);
  py::dict d;
  d["total"] = r.total;
  d["weak_killed"] = r.weak_killed;
  d["strong_killed"] = r.strong_killed;
  d["weak_score"] = r.weak_score();
  d["strong_score"] = r.strong_score();
  return d;
}

}  // namespace

PYBIND11_MODULE(_hmxforge, m) {
  m.doc() = "search-based unit-test generation engine";

  py::class_<Subject>(m, "Subject")
      .def(py::init<const std::string&>(), py::arg("path"))
      .def_property_readonly("unit",
                             [](const Subject& s) { return s.unit; })
      .def("summary", &summary)
      .def("generate", &generate, py::arg("op") = "spx", py::arg("seed") = 0,
           py::arg("budget_evals") = 5000, py::arg("budget_secs") = 120.0,
           py::arg("population") = 50, py::arg("crossover_rate") = 0.75,
           py::arg("data_crossover_rate") = 1.0, py::arg("eta_c") = 2.5,
           py::arg("max_test_length") = 40)
      .def("mutants", &mutants)
      .def("mutation_score", &mutation_score, py::arg("tests"));

  m.def(
      "sbx_pair",
      [](double v1, double v2, double u, double eta_c, bool literal_mode) {
        return sbx_pair(v1, v2, SbxDraw::make(u, false, eta_c), literal_mode);
      },
      py::arg("v1"), py::arg("v2"), py::arg("u"), py::arg("eta_c") = 2.5,
      py::arg("literal_mode") = false);

  m.def(
      "string_splice",
      [](const std::string& x, const std::string& y, int x_i, int y_i) {
        return string_splice(x, y, SpliceDraw{x_i, y_i});
      },
      py::arg("x"), py::arg("y"), py::arg("x_i"), py::arg("y_i"));

  m.def(
      "wilcoxon",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        WilcoxonResult r = wilcoxon_rank_sum(x, y);
        py::dict d;
        d["p"] = r.p;
        d["rank_sum"] = r.rank_sum;
        d["exact"] = r.exact;
        return d;
      },
      py::arg("x"), py::arg("y"));

  m.def("a12", &a12, py::arg("x"), py::arg("y"));
  m.def("classify_effect", &classify_effect, py::arg("a12"));

  py::register_exception<SubjectLoadError>(m, "SubjectLoadError");
  py::register_exception<ConfigError>(m, "ConfigError");
}
