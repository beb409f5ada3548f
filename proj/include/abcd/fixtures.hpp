#pragma once

#include <cmath>
#include <memory>
#include <numbers>

#include "abcd/model.hpp"

namespace abcd::fixtures {

// Four-agent example used throughout the tests: a triangle {0,1,2} plus a
// pendant agent 3, all domains [-10, 10], with one non-polynomial utility
// per edge:
//   f01(x0, x1) = x0^2 - cos(2*pi*x1)
//   f02(x0, x2) = exp(sqrt(x0^2 + x2^2))
//   f03(x0, x3) = (x0 + 2*x3 - 7)^2
//   f12(x1, x2) = x1^2 + x2^2 - x1*x2
inline CdcopInstance four_agent_example() {
  std::vector<IntervalDomain> domains(4, IntervalDomain{-10.0, 10.0});
  std::vector<std::shared_ptr<const BinaryConstraint>> cs;
  cs.push_back(std::make_shared<CallableConstraint>(0, 1, [](double x, double y) {
    return x * x - std::cos(2.0 * std::numbers::pi * y);
  }));
  cs.push_back(std::make_shared<CallableConstraint>(0, 2, [](double x, double y) {
    return std::exp(std::sqrt(x * x + y * y));
  }));
  cs.push_back(std::make_shared<CallableConstraint>(0, 3, [](double x, double y) {
    double t = x + 2.0 * y - 7.0;
    return t * t;
  }));
  cs.push_back(std::make_shared<CallableConstraint>(1, 2, [](double x, double y) {
    return x * x + y * y - x * y;
  }));
  return CdcopInstance(std::move(domains), std::move(cs));
}

// The pendant edge of the example on its own: two agents, one constraint
// f(x, y) = (x + 2*y - 7)^2.
inline CdcopInstance pendant_edge_example() {
  std::vector<IntervalDomain> domains(2, IntervalDomain{-10.0, 10.0});
  std::vector<std::shared_ptr<const BinaryConstraint>> cs;
  cs.push_back(std::make_shared<CallableConstraint>(0, 1, [](double x, double y) {
    double t = x + 2.0 * y - 7.0;
    return t * t;
  }));
  return CdcopInstance(std::move(domains), std::move(cs));
}

// Two agents coupled by a single quadratic; handy for oracle comparisons.
inline CdcopInstance two_agent_quadratic(QuadraticCoefficients c,
                                         IntervalDomain dom = {-10.0, 10.0}) {
  std::vector<IntervalDomain> domains(2, dom);
  std::vector<std::shared_ptr<const BinaryConstraint>> cs;
  cs.push_back(std::make_shared<QuadraticConstraint>(0, 1, c));
  return CdcopInstance(std::move(domains), std::move(cs));
}

}  // namespace abcd::fixtures
