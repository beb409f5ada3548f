#include "abcd/grid.hpp"

#include <stdexcept>
#include <string>

namespace abcd {

double grid_point(const IntervalDomain& dom, int t, int resolution) {
  if (t == 0) return dom.lb;
  if (t == resolution - 1) return dom.ub;
  return dom.lb + (static_cast<double>(t) * dom.width()) / (resolution - 1);
}

GridResult grid_search(const CdcopInstance& inst, const GridSpec& spec) {
  if (spec.resolution < 2) throw std::invalid_argument("grid resolution must be at least 2");
  if (spec.cap < 1) throw std::invalid_argument("grid cap must be positive");
  const int n = inst.agent_count();
  long long total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > spec.cap / spec.resolution)
      throw std::invalid_argument("grid of " + std::to_string(spec.resolution) + "^" +
                                  std::to_string(n) +
                                  " points exceeds the cap; lower the resolution or use "
                                  "fewer agents");
    total *= spec.resolution;
  }

  std::vector<int> idx(n, 0);
  Assignment x(n);
  for (int i = 0; i < n; ++i) x[i] = grid_point(inst.domain(i), 0, spec.resolution);

  GridResult result;
  result.argmax = x;
  result.max_value = global_utility(inst, x);
  result.min_value = result.max_value;

  // Odometer with the last coordinate fastest: ascending lexicographic
  // order, so a strict comparison keeps the smallest maximizer.
  for (long long step = 1; step < total; ++step) {
    int d = n - 1;
    while (idx[d] == spec.resolution - 1) {
      idx[d] = 0;
      x[d] = grid_point(inst.domain(d), 0, spec.resolution);
      --d;
    }
    ++idx[d];
    x[d] = grid_point(inst.domain(d), idx[d], spec.resolution);
    const double v = global_utility(inst, x);
    if (v > result.max_value) {
      result.max_value = v;
      result.argmax = x;
    }
    if (v < result.min_value) result.min_value = v;
  }
  return result;
}

}  // namespace abcd
