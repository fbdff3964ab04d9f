#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "safctl/errors.hpp"
#include "safctl/types.hpp"

namespace safctl {

// Euclidean projection of raw green times onto one junction's constraint set
//   g >= g_min componentwise,  sum(g) = cycle - lost_time.
// KKT form: g_s = max(g_min_s, raw_s + lambda).  The multiplier is found by
// sorting the breakpoints lambda_s = g_min_s - raw_s and scanning segments;
// a stage sitting exactly at its breakpoint counts as clamped.
template <typename Scalar>
Vec<Scalar> project_greens(const Vec<Scalar>& raw, const Vec<Scalar>& g_min,
                           Scalar lost_time, Scalar cycle) {
  const int n = static_cast<int>(raw.size());
  if (g_min.size() != n) throw ConfigError("dimension mismatch: minimum greens");
  const Scalar budget = cycle - lost_time;
  if (g_min.sum() > budget + Scalar(1e-9)) {
    throw ConfigError("green-time constraints infeasible: minimum greens exceed cycle");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return g_min(a) - raw(a) < g_min(b) - raw(b);
  });

  // Segment j frees the first j sorted stages: j*lambda + sum(raw_free) +
  // sum(g_min_clamped) = budget.  Accept the lambda that lands in its own
  // segment; if none does the budget equals sum(g_min) and nothing is free.
  Scalar free_raw = 0;
  Scalar clamped_min = g_min.sum();
  Vec<Scalar> out = g_min;
  for (int j = 1; j <= n; ++j) {
    const int s = order[j - 1];
    free_raw += raw(s);
    clamped_min -= g_min(s);
    const Scalar lambda = (budget - free_raw - clamped_min) / Scalar(j);
    const Scalar lo = g_min(s) - raw(s);
    const Scalar hi = j < n ? g_min(order[j]) - raw(order[j])
                            : std::numeric_limits<Scalar>::infinity();
    if (lambda > lo && lambda <= hi) {
      for (int i = 0; i < j; ++i) out(order[i]) = raw(order[i]) + lambda;
      return out;
    }
  }
  return out;
}

}  // namespace safctl
