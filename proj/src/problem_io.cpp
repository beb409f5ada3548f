#include "abcd/problem_io.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace abcd {

namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const char* what) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool known = false;
    for (const char* k : allowed) known |= key == k;
    if (!known)
      throw std::runtime_error(std::string("unknown field '") + key + "' in " + what);
  }
  for (const char* k : allowed)
    if (!obj.contains(k))
      throw std::runtime_error(std::string("missing field '") + k + "' in " + what);
}

double as_number(const json& v, const char* what) {
  if (!v.is_number()) throw std::runtime_error(std::string(what) + " must be a number");
  return v.get<double>();
}

int as_int(const json& v, const char* what) {
  if (!v.is_number_integer()) throw std::runtime_error(std::string(what) + " must be an integer");
  return v.get<int>();
}

}  // namespace

CdcopInstance load_problem(std::istream& in) {
  std::string body, line;
  bool in_header = true;
  while (std::getline(in, line)) {
    if (in_header) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      in_header = false;
    }
    body += line;
    body += '\n';
  }
  if (body.empty()) throw std::runtime_error("problem file has no content after comments");

  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("problem file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("problem file must contain a JSON object");
  require_keys(doc, {"n", "domains", "constraints"}, "problem");

  const int n = as_int(doc["n"], "n");
  const json& doms = doc["domains"];
  if (!doms.is_array() || static_cast<int>(doms.size()) != n)
    throw std::runtime_error("domains must be an array of length n");
  std::vector<IntervalDomain> domains;
  domains.reserve(doms.size());
  for (const json& d : doms) {
    if (!d.is_array() || d.size() != 2)
      throw std::runtime_error("each domain must be a [lb, ub] pair");
    domains.push_back(IntervalDomain{as_number(d[0], "domain bound"),
                                     as_number(d[1], "domain bound")});
  }

  const json& cons = doc["constraints"];
  if (!cons.is_array()) throw std::runtime_error("constraints must be an array");
  std::vector<std::shared_ptr<const BinaryConstraint>> constraints;
  constraints.reserve(cons.size());
  for (const json& c : cons) {
    if (!c.is_object()) throw std::runtime_error("each constraint must be an object");
    require_keys(c, {"i", "j", "coeffs"}, "constraint");
    const int i = as_int(c["i"], "constraint endpoint i");
    const int j = as_int(c["j"], "constraint endpoint j");
    const json& k = c["coeffs"];
    if (!k.is_array() || k.size() != 6)
      throw std::runtime_error("coeffs must be an array of 6 numbers");
    QuadraticCoefficients q;
    q.a = as_number(k[0], "coefficient");
    q.b = as_number(k[1], "coefficient");
    q.d = as_number(k[2], "coefficient");
    q.e = as_number(k[3], "coefficient");
    q.f = as_number(k[4], "coefficient");
    q.g = as_number(k[5], "coefficient");
    constraints.push_back(std::make_shared<QuadraticConstraint>(i, j, q));
  }

  return CdcopInstance(std::move(domains), std::move(constraints));
}

CdcopInstance load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  try {
    return load_problem(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_problem(const CdcopInstance& inst, std::ostream& out,
                  const std::vector<std::string>& header_comments) {
  json doc;
  doc["n"] = inst.agent_count();
  json doms = json::array();
  for (int i = 0; i < inst.agent_count(); ++i) {
    const IntervalDomain& d = inst.domain(i);
    doms.push_back(json::array({d.lb, d.ub}));
  }
  doc["domains"] = std::move(doms);
  json cons = json::array();
  for (const auto& c : inst.constraints()) {
    auto q = dynamic_cast<const QuadraticConstraint*>(c.get());
    if (!q)
      throw std::runtime_error(
          "only quadratic constraints can be written to a problem file");
    const QuadraticCoefficients& k = q->coeffs();
    json entry;
    entry["i"] = q->first();
    entry["j"] = q->second();
    entry["coeffs"] = json::array({k.a, k.b, k.d, k.e, k.f, k.g});
    cons.push_back(std::move(entry));
  }
  doc["constraints"] = std::move(cons);
  for (const std::string& c : header_comments) out << "# " << c << '\n';
  out << doc.dump(2) << '\n';
}

void save_problem_file(const CdcopInstance& inst, const std::string& path,
                       const std::vector<std::string>& header_comments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  save_problem(inst, out, header_comments);
  if (!out) throw std::runtime_error("failed writing problem file: " + path);
}

}  // namespace abcd
