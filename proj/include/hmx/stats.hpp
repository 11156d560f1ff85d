#pragma once

#include <string>
#include <vector>

namespace hmx {

struct WilcoxonResult {
  double p = 1.0;       // two-sided
  double rank_sum = 0;  // rank sum of the first sample (midranks when tied)
  bool exact = false;   // exact enumeration vs normal approximation
};

// Two-sided Wilcoxon rank-sum test. Small untied samples (n + m <= 20, all
// values distinct) use exact tail enumeration; otherwise a tie-corrected
// normal approximation with continuity correction.
WilcoxonResult wilcoxon_rank_sum(const std::vector<double>& x,
                                 const std::vector<double>& y);

// Vargha-Delaney effect size: probability that a random draw from x exceeds
// one from y, ties counting half.
double a12(const std::vector<double>& x, const std::vector<double>& y);

// "negligible" | "small" | "medium" | "large", by |a12 - 0.5| thresholds
// 0.056 / 0.147 / 0.217.
std::string classify_effect(double a12_value);

}  // namespace hmx
