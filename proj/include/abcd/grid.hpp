#pragma once

#include "abcd/model.hpp"

namespace abcd {

// Exhaustive evaluation over a uniform discretization of every domain,
// both endpoints included. Only sensible at desk scale; the cap guards
// against accidental combinatorial blowups.
struct GridSpec {
  int resolution = 201;          // points per dimension, >= 2
  long long cap = 10'000'000;    // maximum total grid points
};

struct GridResult {
  Assignment argmax;  // lexicographically smallest maximizer
  double max_value = 0;
  double min_value = 0;  // useful as a utility-range reference
};

// t-th of `resolution` uniformly spaced points in dom; exact at both ends.
double grid_point(const IntervalDomain& dom, int t, int resolution);

// Scans every grid point in lexicographic order and returns the best
// (strictly-greater updates keep the first, i.e. smallest, maximizer).
GridResult grid_search(const CdcopInstance& inst, const GridSpec& spec);

}  // namespace abcd
