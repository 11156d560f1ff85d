#pragma once

#include <string>
#include <utility>

#include "hmx/encoding.hpp"
#include "hmx/rng.hpp"

namespace hmx {

struct OperatorConfig {
  double crossover_rate = 0.75;
  double data_crossover_rate = 1.0;
  double eta_c = 2.5;
  bool sbx_literal_mode = false;
};

// One SBX random draw: spread factor beta is a pure function of u and eta_c.
// beta < 1 contracts (children between the parents), beta > 1 expands.
struct SbxDraw {
  double u = 0.5;
  double beta = 1.0;
  bool b = false;
  double eta_c = 2.5;

  static SbxDraw make(double u, bool b, double eta_c);
  static SbxDraw sample(Rng& rng, double eta_c);
};

struct SpliceDraw {
  int x_i = 0;
  int y_i = 0;
};

// Mean-centered SBX by default; literal mode reproduces the difference-
// centered variant verbatim.
std::pair<double, double> sbx_pair(double v1, double v2, const SbxDraw& draw,
                                   bool literal_mode = false);

// SBX lifted onto a numeric-family type: embed, recombine, round/clamp back.
std::pair<Value, Value> sbx_typed(const Value& a, const Value& b,
                                  const SbxDraw& draw, const TypeTag& type,
                                  bool literal_mode = false);

// Single-point string crossover with inclusive prefixes:
// x' = x[0..=x_i] ++ y[y_i+1..], y' = y[0..=y_i] ++ x[x_i+1..].
std::pair<std::string, std::string> string_splice(const std::string& x,
                                                  const std::string& y,
                                                  const SpliceDraw& draw);

// Raw splice at fixed cut points (no repair): o1 = p1[:alpha] ++ p2[beta:].
std::pair<TestCase, TestCase> spx_splice(const TestCase& p1,
                                         const TestCase& p2, int alpha,
                                         int beta);

// Single-point test-level crossover; offspring are repaired before return.
std::pair<TestCase, TestCase> spx(const TestCase& p1, const TestCase& p2,
                                  const std::string& unit,
                                  const CorpusInfo& info, Rng& rng);

// Hybrid multi-level crossover: spx, then data-level recombination of the
// parameters of signature-compatible constructor/method pairs.
std::pair<TestCase, TestCase> hmx_crossover(const TestCase& p1,
                                            const TestCase& p2,
                                            const std::string& unit,
                                            const CorpusInfo& info, Rng& rng,
                                            const OperatorConfig& cfg);

// Per-statement mutation with probability 1/n plus one insertion attempt.
// When given, *mutated_count reports the number of per-statement mutation
// events (insertions not included).
TestCase mutate(const TestCase& test, const std::string& unit,
                const CorpusInfo& info, Rng& rng,
                int* mutated_count = nullptr);

}  // namespace hmx
