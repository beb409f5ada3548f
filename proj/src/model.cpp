#include "abcd/model.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <utility>

namespace abcd {

namespace {

std::string agent_name(int i) { return "agent " + std::to_string(i); }

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw std::invalid_argument(what + " must be finite");
}

}  // namespace

QuadraticConstraint::QuadraticConstraint(int i, int j, QuadraticCoefficients c)
    : BinaryConstraint(i, j), coeffs_(c) {
  require_finite(c.a, "coefficient a");
  require_finite(c.b, "coefficient b");
  require_finite(c.d, "coefficient d");
  require_finite(c.e, "coefficient e");
  require_finite(c.f, "coefficient f");
  require_finite(c.g, "coefficient g");
}

CdcopInstance::CdcopInstance(std::vector<IntervalDomain> domains,
                             std::vector<std::shared_ptr<const BinaryConstraint>> constraints)
    : domains_(std::move(domains)), constraints_(std::move(constraints)) {
  const int n = agent_count();
  if (n < 1) throw std::invalid_argument("instance needs at least one agent");
  for (int i = 0; i < n; ++i) {
    const auto& d = domains_[i];
    require_finite(d.lb, "domain lower bound");
    require_finite(d.ub, "domain upper bound");
    if (!(d.lb < d.ub))
      throw std::invalid_argument("domain of " + agent_name(i) +
                                  " must satisfy lb < ub (degenerate domains rejected)");
  }

  neighbors_.assign(n, {});
  edge_index_.assign(n, {});
  std::vector<std::vector<int>> seen(n);
  for (std::size_t k = 0; k < constraints_.size(); ++k) {
    const auto& c = constraints_[k];
    if (!c) throw std::invalid_argument("null constraint in list");
    const int i = c->first();
    const int j = c->second();
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw std::invalid_argument("constraint scope out of range: (" + std::to_string(i) +
                                  ", " + std::to_string(j) + ")");
    if (i == j)
      throw std::invalid_argument("self-loop constraint on " + agent_name(i));
    for (int s : seen[i])
      if (s == j)
        throw std::invalid_argument("duplicate constraint pair (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
    seen[i].push_back(j);
    seen[j].push_back(i);
    neighbors_[i].push_back(j);
    neighbors_[j].push_back(i);
    edge_index_[i].push_back(static_cast<int>(k));
    edge_index_[j].push_back(static_cast<int>(k));
  }

  // Keep neighbor lists ascending; downstream sum orders depend on it.
  for (int i = 0; i < n; ++i) {
    auto& nb = neighbors_[i];
    auto& ei = edge_index_[i];
    for (std::size_t a = 1; a < nb.size(); ++a) {
      int vn = nb[a], ve = ei[a];
      std::size_t b = a;
      while (b > 0 && nb[b - 1] > vn) {
        nb[b] = nb[b - 1];
        ei[b] = ei[b - 1];
        --b;
      }
      nb[b] = vn;
      ei[b] = ve;
    }
  }

  // Connectivity: one pseudo-tree must span all agents.
  std::vector<char> reached(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  reached[0] = 1;
  int count = 1;
  while (!frontier.empty()) {
    int a = frontier.front();
    frontier.pop();
    for (int b : neighbors_[a]) {
      if (!reached[b]) {
        reached[b] = 1;
        ++count;
        frontier.push(b);
      }
    }
  }
  if (count != n) {
    int missing = 0;
    while (reached[missing]) ++missing;
    throw std::invalid_argument("constraint graph is disconnected: " + agent_name(missing) +
                                " is unreachable from agent 0");
  }
}

const IntervalDomain& CdcopInstance::domain(int agent) const {
  if (agent < 0 || agent >= agent_count())
    throw std::invalid_argument("unknown " + agent_name(agent));
  return domains_[agent];
}

const std::vector<int>& CdcopInstance::neighbors(int agent) const {
  if (agent < 0 || agent >= agent_count())
    throw std::invalid_argument("unknown " + agent_name(agent));
  return neighbors_[agent];
}

bool CdcopInstance::adjacent(int a, int b) const {
  for (int nb : neighbors(a))
    if (nb == b) return true;
  return false;
}

const BinaryConstraint& CdcopInstance::constraint_between(int a, int b) const {
  const auto& nb = neighbors(a);
  for (std::size_t k = 0; k < nb.size(); ++k)
    if (nb[k] == b) return *constraints_[edge_index_[a][k]];
  throw std::invalid_argument("no constraint between " + agent_name(a) + " and " +
                              agent_name(b));
}

bool CdcopInstance::valid_assignment(const Assignment& x) const {
  if (static_cast<int>(x.size()) != agent_count()) return false;
  for (int i = 0; i < agent_count(); ++i)
    if (!domains_[i].contains(x[i])) return false;
  return true;
}

void CdcopInstance::require_valid(const Assignment& x) const {
  if (static_cast<int>(x.size()) != agent_count())
    throw std::invalid_argument("assignment has " + std::to_string(x.size()) +
                                " values, expected " + std::to_string(agent_count()));
  for (int i = 0; i < agent_count(); ++i)
    if (!domains_[i].contains(x[i]))
      throw std::invalid_argument("assignment value for " + agent_name(i) +
                                  " lies outside its domain");
}

double evaluate_constraint(const CdcopInstance& inst, const BinaryConstraint& c,
                           double xi, double xj) {
  if (!inst.domain(c.first()).contains(xi))
    throw std::invalid_argument("first argument outside the domain of " +
                                agent_name(c.first()));
  if (!inst.domain(c.second()).contains(xj))
    throw std::invalid_argument("second argument outside the domain of " +
                                agent_name(c.second()));
  return c.eval(xi, xj);
}

double global_utility(const CdcopInstance& inst, const Assignment& x) {
  inst.require_valid(x);
  double total = 0.0;
  for (const auto& c : inst.constraints()) total += c->eval(x[c->first()], x[c->second()]);
  return total;
}

double local_utility(const CdcopInstance& inst, int agent, const Assignment& x) {
  inst.require_valid(x);
  double total = 0.0;
  for (int nb : inst.neighbors(agent)) {
    const BinaryConstraint& c = inst.constraint_between(agent, nb);
    total += c.eval(x[c.first()], x[c.second()]);
  }
  return total;
}

}  // namespace abcd
