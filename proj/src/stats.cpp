#include "hmx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace hmx {

namespace {

// ways[w] = number of n-subsets of ranks {1..N} with rank sum w.
std::vector<uint64_t> rank_sum_counts(int N, int n) {
  int max_w = 0;
  for (int r = N - n + 1; r <= N; ++r) max_w += r;
  std::vector<std::vector<uint64_t>> dp(
      n + 1, std::vector<uint64_t>(max_w + 1, 0));
  dp[0][0] = 1;
  for (int r = 1; r <= N; ++r)
    for (int k = std::min(n, r); k >= 1; --k)
      for (int w = max_w; w >= r; --w) dp[k][w] += dp[k - 1][w - r];
  return dp[n];
}

std::vector<double> midranks(const std::vector<double>& pooled_sorted) {
  std::vector<double> ranks(pooled_sorted.size());
  size_t i = 0;
  while (i < pooled_sorted.size()) {
    size_t j = i;
    while (j + 1 < pooled_sorted.size() &&
           pooled_sorted[j + 1] == pooled_sorted[i])
      ++j;
    double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[k] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

WilcoxonResult wilcoxon_rank_sum(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  WilcoxonResult res;
  int n = static_cast<int>(x.size());
  int m = static_cast<int>(y.size());
  if (n == 0 || m == 0) return res;
  int N = n + m;

  std::vector<std::pair<double, int>> pooled;  // (value, group 0=x 1=y)
  for (double v : x) pooled.push_back({v, 0});
  for (double v : y) pooled.push_back({v, 1});
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> values(N);
  for (int i = 0; i < N; ++i) values[i] = pooled[i].first;
  std::vector<double> ranks = midranks(values);

  double w = 0.0;
  for (int i = 0; i < N; ++i)
    if (pooled[i].second == 0) w += ranks[i];
  res.rank_sum = w;

  bool any_tie = false;
  for (int i = 0; i + 1 < N; ++i)
    if (values[i] == values[i + 1]) any_tie = true;

  if (N <= 20 && !any_tie) {
    res.exact = true;
    std::vector<uint64_t> ways = rank_sum_counts(N, n);
    uint64_t total = 0, lo = 0, hi = 0;
    int wi = static_cast<int>(std::llround(w));
    for (int s = 0; s < static_cast<int>(ways.size()); ++s) {
      total += ways[s];
      if (s <= wi) lo += ways[s];
      if (s >= wi) hi += ways[s];
    }
    double tail = static_cast<double>(std::min(lo, hi)) /
                  static_cast<double>(total);
    res.p = std::min(1.0, 2.0 * tail);
    return res;
  }

  double mean = static_cast<double>(n) * (N + 1) / 2.0;
  double tie_term = 0.0;
  {
    std::map<double, int> counts;
    for (double v : values) ++counts[v];
    for (const auto& [v, t] : counts)
      tie_term += static_cast<double>(t) * t * t - t;
  }
  double var = static_cast<double>(n) * m / 12.0 *
               ((N + 1) - tie_term / (static_cast<double>(N) * (N - 1)));
  if (var <= 0.0) {
    res.p = 1.0;
    return res;
  }
  double diff = w - mean;
  double cc = diff > 0 ? -0.5 : (diff < 0 ? 0.5 : 0.0);
  double z = (diff + cc) / std::sqrt(var);
  res.p = std::erfc(std::fabs(z) / std::sqrt(2.0));
  return res;
}

double a12(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || y.empty()) return 0.5;
  double wins = 0.0;
  for (double a : x)
    for (double b : y) {
      if (a > b)
        wins += 1.0;
      else if (a == b)
        wins += 0.5;
    }
  return wins / (static_cast<double>(x.size()) * y.size());
}

std::string classify_effect(double a12_value) {
  double d = std::fabs(a12_value - 0.5);
  if (d < 0.056) return "negligible";
  if (d < 0.147) return "small";
  if (d < 0.217) return "medium";
  return "large";
}

}  // namespace hmx
