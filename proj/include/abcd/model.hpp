#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace abcd {

// Closed interval [lb, ub] a variable takes its value from.
struct IntervalDomain {
  double lb;
  double ub;

  bool contains(double x) const { return x >= lb && x <= ub; }
  double width() const { return ub - lb; }
};

// Coefficients of the quadratic form a*x^2 + b*x + d*y^2 + e*y + f*x*y + g.
struct QuadraticCoefficients {
  double a = 0, b = 0, d = 0, e = 0, f = 0, g = 0;

  double eval(double x, double y) const {
    return a * x * x + b * x + d * y * y + e * y + f * x * y + g;
  }
};

// A utility function over the ordered scope (i, j). The stored orientation
// is authoritative: both endpoint agents evaluate the function with the
// first argument bound to variable i and the second to variable j, so the
// two local sums of a shared constraint always agree.
class BinaryConstraint {
 public:
  BinaryConstraint(int i, int j) : i_(i), j_(j) {}
  virtual ~BinaryConstraint() = default;

  int first() const { return i_; }
  int second() const { return j_; }
  int other(int agent) const { return agent == i_ ? j_ : i_; }

  virtual double eval(double xi, double xj) const = 0;

 private:
  int i_;
  int j_;
};

class QuadraticConstraint : public BinaryConstraint {
 public:
  QuadraticConstraint(int i, int j, QuadraticCoefficients c);

  double eval(double xi, double xj) const override { return coeffs_.eval(xi, xj); }
  const QuadraticCoefficients& coeffs() const { return coeffs_; }

 private:
  QuadraticCoefficients coeffs_;
};

// Arbitrary callable constraint; used by test fixtures with
// non-polynomial utilities.
class CallableConstraint : public BinaryConstraint {
 public:
  using Fn = std::function<double(double, double)>;
  CallableConstraint(int i, int j, Fn fn) : BinaryConstraint(i, j), fn_(std::move(fn)) {}

  double eval(double xi, double xj) const override { return fn_(xi, xj); }

 private:
  Fn fn_;
};

using Assignment = std::vector<double>;

// One variable per agent, interval domains, binary constraints forming a
// connected graph. Immutable after construction; validation happens here
// so everything downstream can assume a well-formed problem.
class CdcopInstance {
 public:
  CdcopInstance(std::vector<IntervalDomain> domains,
                std::vector<std::shared_ptr<const BinaryConstraint>> constraints);

  int agent_count() const { return static_cast<int>(domains_.size()); }
  int constraint_count() const { return static_cast<int>(constraints_.size()); }

  const IntervalDomain& domain(int agent) const;
  const std::vector<std::shared_ptr<const BinaryConstraint>>& constraints() const {
    return constraints_;
  }

  // Neighbor ids in ascending order.
  const std::vector<int>& neighbors(int agent) const;
  bool adjacent(int a, int b) const;

  // Same object regardless of argument order; throws if no such edge.
  const BinaryConstraint& constraint_between(int a, int b) const;

  // True when x has one in-domain value per agent.
  bool valid_assignment(const Assignment& x) const;
  void require_valid(const Assignment& x) const;

 private:
  std::vector<IntervalDomain> domains_;
  std::vector<std::shared_ptr<const BinaryConstraint>> constraints_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<int>> edge_index_;  // [a] -> constraint index per neighbor slot
};

// Checked single-constraint evaluation against the instance's domains.
double evaluate_constraint(const CdcopInstance& inst, const BinaryConstraint& c,
                           double xi, double xj);

// Sum over all constraints, in constraint-list order. That order is part
// of the contract: reruns produce bit-identical utilities.
double global_utility(const CdcopInstance& inst, const Assignment& x);

// Sum over the constraints incident to `agent`, neighbors in ascending
// order. Summing this over all agents double-counts every constraint.
double local_utility(const CdcopInstance& inst, int agent, const Assignment& x);

}  // namespace abcd
