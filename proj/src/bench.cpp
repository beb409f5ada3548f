#include "abcd/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "abcd/problem_io.hpp"
#include "abcd/rng.hpp"

namespace abcd {

namespace {

using nlohmann::json;

constexpr std::uint64_t kEdgeStream = 0x65646765;      // topology draws
constexpr std::uint64_t kCoeffStream = 0x636f6566;     // coefficient draws
constexpr std::uint64_t kInstanceTag = 0x696e7374;     // instance seed domain
constexpr int kConnectivityAttempts = 64;

bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    for (int b : adj[a]) {
      if (!seen[b]) {
        seen[b] = 1;
        ++count;
        stack.push_back(b);
      }
    }
  }
  return count == n;
}

std::vector<std::pair<int, int>> erdos_renyi_edges(const TopologyConfig& topo,
                                                   SubstreamRng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < topo.n; ++i)
    for (int j = i + 1; j < topo.n; ++j)
      if (rng.uniform01() < topo.p) edges.emplace_back(i, j);
  return edges;
}

std::vector<std::pair<int, int>> barabasi_albert_edges(const TopologyConfig& topo,
                                                       SubstreamRng& rng) {
  const int m = topo.attach;
  std::set<std::pair<int, int>> edges;
  std::vector<int> degree(topo.n, 0);
  // Complete initial core of m nodes, so the preferential weights start
  // positive and every node keeps degree >= m.
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      edges.emplace(i, j);
      ++degree[i];
      ++degree[j];
    }
  }
  for (int v = m; v < topo.n; ++v) {
    std::vector<char> chosen(v, 0);
    for (int pick = 0; pick < m; ++pick) {
      // One degree-weighted draw over the not-yet-chosen predecessors.
      long long total = 0;
      for (int u = 0; u < v; ++u)
        if (!chosen[u]) total += degree[u] + 1;  // +1 keeps isolated m=1 cores drawable
      double r = rng.uniform01() * static_cast<double>(total);
      int target = -1;
      double cum = 0;
      for (int u = 0; u < v; ++u) {
        if (chosen[u]) continue;
        cum += static_cast<double>(degree[u] + 1);
        target = u;
        if (r < cum) break;
      }
      if (target < 0) throw std::logic_error("no attachment candidate left");
      chosen[target] = 1;
      edges.emplace(std::min(target, v), std::max(target, v));
      ++degree[target];
      ++degree[v];
    }
  }
  return {edges.begin(), edges.end()};
}

std::vector<std::pair<int, int>> watts_strogatz_edges(const TopologyConfig& topo,
                                                      SubstreamRng& rng) {
  const int n = topo.n;
  const int k = effective_ring_degree(topo.ring_k);
  std::set<std::pair<int, int>> edges;
  auto norm = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  for (int i = 0; i < n; ++i)
    for (int d = 1; d <= k / 2; ++d) edges.insert(norm(i, (i + d) % n));
  for (int i = 0; i < n; ++i) {
    for (int d = 1; d <= k / 2; ++d) {
      auto old_edge = norm(i, (i + d) % n);
      if (!edges.count(old_edge)) continue;  // already rewired away
      if (!(rng.uniform01() < topo.rewire)) continue;
      for (int attempt = 0; attempt < 32; ++attempt) {
        int j = rng.uniform_index(n);
        if (j == i || edges.count(norm(i, j))) continue;
        edges.erase(old_edge);
        edges.insert(norm(i, j));
        break;
      }
    }
  }
  return {edges.begin(), edges.end()};
}

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> required, const char* what) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool known = false;
    for (const char* k : allowed) known |= key == k;
    if (!known)
      throw std::runtime_error(std::string("unknown field '") + key + "' in " + what);
  }
  for (const char* k : required)
    if (!obj.contains(k))
      throw std::runtime_error(std::string("missing field '") + k + "' in " + what);
}

}  // namespace

const char* topology_name(TopologyConfig::Kind kind) {
  switch (kind) {
    case TopologyConfig::Kind::ErdosRenyi: return "er";
    case TopologyConfig::Kind::BarabasiAlbert: return "ba";
    case TopologyConfig::Kind::WattsStrogatz: return "ws";
  }
  return "?";
}

TopologyConfig::Kind topology_kind_from(const std::string& name) {
  if (name == "er") return TopologyConfig::Kind::ErdosRenyi;
  if (name == "ba") return TopologyConfig::Kind::BarabasiAlbert;
  if (name == "ws") return TopologyConfig::Kind::WattsStrogatz;
  throw std::invalid_argument("unknown topology: " + name);
}

int effective_ring_degree(int ring_k) {
  int k = ring_k;
  if (k < 2) k = 2;
  if (k % 2 != 0) ++k;
  return k;
}

void TopologyConfig::validate() const {
  if (n < 2) throw std::invalid_argument("topology needs at least two agents");
  switch (kind) {
    case Kind::ErdosRenyi:
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("edge probability must lie in [0, 1]");
      break;
    case Kind::BarabasiAlbert:
      if (attach < 1 || attach >= n)
        throw std::invalid_argument("attachment count must lie in [1, n)");
      break;
    case Kind::WattsStrogatz:
      if (effective_ring_degree(ring_k) >= n)
        throw std::invalid_argument("ring degree must be smaller than n");
      if (!(rewire >= 0.0 && rewire <= 1.0))
        throw std::invalid_argument("rewiring probability must lie in [0, 1]");
      break;
  }
}

void CoefficientSpec::validate() const {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("coefficient bounds must satisfy lo < hi");
}

std::vector<std::pair<int, int>> generate_edges(const TopologyConfig& topo) {
  topo.validate();
  for (int attempt = 0; attempt < kConnectivityAttempts; ++attempt) {
    SubstreamRng rng(mix64(topo.seed, static_cast<std::uint64_t>(attempt)), kEdgeStream);
    std::vector<std::pair<int, int>> edges;
    switch (topo.kind) {
      case TopologyConfig::Kind::ErdosRenyi: edges = erdos_renyi_edges(topo, rng); break;
      case TopologyConfig::Kind::BarabasiAlbert:
        edges = barabasi_albert_edges(topo, rng);
        break;
      case TopologyConfig::Kind::WattsStrogatz: edges = watts_strogatz_edges(topo, rng); break;
    }
    std::sort(edges.begin(), edges.end());
    if (connected(topo.n, edges)) return edges;
  }
  throw std::runtime_error(std::string("could not generate a connected ") +
                           topology_name(topo.kind) + " graph in " +
                           std::to_string(kConnectivityAttempts) + " attempts");
}

CdcopInstance generate_problem(const TopologyConfig& topo, const CoefficientSpec& coeff,
                               IntervalDomain domain) {
  coeff.validate();
  auto edges = generate_edges(topo);
  SubstreamRng rng(topo.seed, kCoeffStream);
  std::vector<IntervalDomain> domains(topo.n, domain);
  std::vector<std::shared_ptr<const BinaryConstraint>> constraints;
  constraints.reserve(edges.size());
  for (auto [i, j] : edges) {
    QuadraticCoefficients q;
    q.a = rng.uniform_in(coeff.lo, coeff.hi);
    q.b = rng.uniform_in(coeff.lo, coeff.hi);
    q.d = rng.uniform_in(coeff.lo, coeff.hi);
    q.e = rng.uniform_in(coeff.lo, coeff.hi);
    q.f = rng.uniform_in(coeff.lo, coeff.hi);
    q.g = rng.uniform_in(coeff.lo, coeff.hi);
    constraints.push_back(std::make_shared<QuadraticConstraint>(i, j, q));
  }
  return CdcopInstance(std::move(domains), std::move(constraints));
}

void ExperimentPlan::validate() const {
  topology.validate();
  coeffs.validate();
  if (!(domain.lb < domain.ub)) throw std::invalid_argument("domain must satisfy lb < ub");
  if (variants.empty()) throw std::invalid_argument("plan needs at least one variant");
  if (population_size < 1 || elite_size < 1 || elite_size > population_size)
    throw std::invalid_argument("invalid population or elite size");
  if (instances < 1) throw std::invalid_argument("plan needs at least one instance");
  if (repeats < 1) throw std::invalid_argument("plan needs at least one repeat");
  if (iterations < 1) throw std::invalid_argument("plan needs at least one iteration");
}

ExperimentPlan load_plan(std::istream& in) {
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
  if (body.empty()) throw std::runtime_error("plan file has no content after comments");
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("plan file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("plan file must contain a JSON object");
  require_keys(doc,
               {"topology", "coeffs", "domain", "variants", "S", "M", "instances", "repeats",
                "iterations", "seed"},
               {"topology"}, "plan");

  ExperimentPlan plan;
  const json& topo = doc["topology"];
  if (!topo.is_object()) throw std::runtime_error("topology must be an object");
  require_keys(topo, {"kind", "n", "p", "m", "k", "rewire"}, {"kind", "n"}, "topology");
  plan.topology.kind = topology_kind_from(topo["kind"].get<std::string>());
  plan.topology.n = topo["n"].get<int>();
  if (topo.contains("p")) plan.topology.p = topo["p"].get<double>();
  if (topo.contains("m")) plan.topology.attach = topo["m"].get<int>();
  if (topo.contains("k")) plan.topology.ring_k = topo["k"].get<int>();
  if (topo.contains("rewire")) plan.topology.rewire = topo["rewire"].get<double>();

  if (doc.contains("coeffs")) {
    const json& c = doc["coeffs"];
    require_keys(c, {"lo", "hi"}, {"lo", "hi"}, "coeffs");
    plan.coeffs.lo = c["lo"].get<double>();
    plan.coeffs.hi = c["hi"].get<double>();
  }
  if (doc.contains("domain")) {
    const json& d = doc["domain"];
    if (!d.is_array() || d.size() != 2)
      throw std::runtime_error("domain must be a [lb, ub] pair");
    plan.domain = IntervalDomain{d[0].get<double>(), d[1].get<double>()};
  }
  if (doc.contains("variants")) {
    plan.variants.clear();
    for (const json& v : doc["variants"]) {
      const std::string name = v.get<std::string>();
      if (name == "abcd-e") plan.variants.push_back(Variant::AbcdE);
      else if (name == "abcd-c") plan.variants.push_back(Variant::AbcdC);
      else throw std::runtime_error("unknown variant: " + name);
    }
  }
  if (doc.contains("S")) plan.population_size = doc["S"].get<int>();
  if (doc.contains("M")) plan.elite_size = doc["M"].get<int>();
  if (doc.contains("instances")) plan.instances = doc["instances"].get<int>();
  if (doc.contains("repeats")) plan.repeats = doc["repeats"].get<int>();
  if (doc.contains("iterations")) plan.iterations = doc["iterations"].get<int>();
  if (doc.contains("seed")) plan.base_seed = doc["seed"].get<std::uint64_t>();
  plan.validate();
  return plan;
}

ExperimentPlan load_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan file: " + path);
  try {
    return load_plan(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::uint64_t instance_seed(std::uint64_t base, int instance) {
  return mix64(mix64(base, kInstanceTag), static_cast<std::uint64_t>(instance));
}

std::uint64_t run_seed(std::uint64_t base, int instance, int repeat, Variant variant) {
  std::uint64_t tag = variant == Variant::AbcdE ? 0xE : 0xC;
  return mix64(mix64(mix64(mix64(base, static_cast<std::uint64_t>(instance)),
                           static_cast<std::uint64_t>(repeat)),
                     tag),
               0x72756e);  // run-seed domain separator
}

namespace {

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

std::string topology_summary(const TopologyConfig& topo) {
  std::ostringstream os;
  os << "topology=" << topology_name(topo.kind) << " n=" << topo.n;
  switch (topo.kind) {
    case TopologyConfig::Kind::ErdosRenyi: os << " p=" << format_double(topo.p); break;
    case TopologyConfig::Kind::BarabasiAlbert: os << " m=" << topo.attach; break;
    case TopologyConfig::Kind::WattsStrogatz:
      os << " k=" << topo.ring_k << " (ring degree " << effective_ring_degree(topo.ring_k)
         << ") rewire=" << format_double(topo.rewire);
      break;
  }
  os << " seed=" << topo.seed;
  return os.str();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan, const std::string& out_dir) {
  plan.validate();
  namespace fs = std::filesystem;
  if (!out_dir.empty()) fs::create_directories(out_dir);

  ExperimentResult result;
  for (int inst_idx = 0; inst_idx < plan.instances; ++inst_idx) {
    TopologyConfig topo = plan.topology;
    topo.seed = instance_seed(plan.base_seed, inst_idx);
    CdcopInstance instance = generate_problem(topo, plan.coeffs, plan.domain);
    if (!out_dir.empty()) {
      save_problem_file(
          instance, (fs::path(out_dir) / ("instance_" + zero_pad(inst_idx, 3) + ".json")).string(),
          {topology_summary(topo),
           "coeffs uniform[" + format_double(plan.coeffs.lo) + ", " +
               format_double(plan.coeffs.hi) + "]"});
    }
    for (Variant variant : plan.variants) {
      std::vector<double> finals;
      finals.reserve(plan.repeats);
      for (int rep = 0; rep < plan.repeats; ++rep) {
        SolverConfig cfg;
        cfg.population_size = plan.population_size;
        cfg.elite_size = plan.elite_size;
        cfg.iterations = plan.iterations;
        cfg.variant = variant;
        cfg.seed = run_seed(plan.base_seed, inst_idx, rep, variant);
        AnytimeTrace trace = solve(instance, cfg);
        finals.push_back(trace.final_utility);
        result.runs.push_back(RunResult{inst_idx, rep, variant, cfg.seed, trace.final_utility});
        if (!out_dir.empty()) {
          std::string name = "trace_i" + zero_pad(inst_idx, 3) + "_r" + zero_pad(rep, 2) + "_" +
                             variant_name(variant) + ".csv";
          std::ofstream out(fs::path(out_dir) / name);
          if (!out) throw std::runtime_error("cannot open trace file: " + name);
          write_trace_csv(trace, out,
                          {std::string("algo=") + variant_name(variant) +
                               " S=" + std::to_string(plan.population_size) +
                               " M=" + std::to_string(plan.elite_size) +
                               " iters=" + std::to_string(plan.iterations) +
                               " seed=" + std::to_string(cfg.seed),
                           topology_summary(topo)});
        }
      }
      auto [mean, sd] = mean_stddev(finals);
      result.aggregate.push_back(
          AggregateRow{inst_idx, variant, static_cast<int>(finals.size()), mean, sd});
    }
  }

  if (!out_dir.empty()) {
    std::ofstream out(std::filesystem::path(out_dir) / "aggregate.csv");
    if (!out) throw std::runtime_error("cannot open aggregate.csv in " + out_dir);
    out << "# " << topology_summary(plan.topology) << " S=" << plan.population_size
        << " M=" << plan.elite_size << " iters=" << plan.iterations
        << " instances=" << plan.instances << " repeats=" << plan.repeats
        << " base_seed=" << plan.base_seed << '\n';
    out << "instance,variant,runs,mean_final_utility,stddev_final_utility\n";
    for (const AggregateRow& row : result.aggregate) {
      out << row.instance << ',' << variant_name(row.variant) << ',' << row.runs << ','
          << format_double(row.mean_final) << ',' << format_double(row.stddev_final) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing aggregate.csv in " + out_dir);
  }
  return result;
}

std::pair<double, double> mean_stddev(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double sq = 0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size() - 1))};
}

std::vector<PlotPoint> plot_points_iteration(const std::vector<AnytimeTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("no traces to aggregate");
  const std::size_t len = traces.front().records.size();
  for (const AnytimeTrace& t : traces)
    if (t.records.size() != len)
      throw std::invalid_argument("traces have different lengths");
  std::vector<PlotPoint> points;
  points.reserve(len);
  std::vector<double> column(traces.size());
  for (std::size_t k = 0; k < len; ++k) {
    for (std::size_t t = 0; t < traces.size(); ++t)
      column[t] = traces[t].records[k].gbest_utility;
    auto [mean, sd] = mean_stddev(column);
    points.push_back(PlotPoint{static_cast<double>(traces.front().records[k].iteration), mean, sd});
  }
  return points;
}

std::vector<PlotPoint> plot_points_sweep(const std::vector<std::pair<double, double>>& samples) {
  std::map<double, std::vector<double>> groups;
  for (auto [x, y] : samples) groups[x].push_back(y);
  std::vector<PlotPoint> points;
  points.reserve(groups.size());
  for (const auto& [x, ys] : groups) {
    auto [mean, sd] = mean_stddev(ys);
    points.push_back(PlotPoint{x, mean, sd});
  }
  return points;
}

void emit_plot_data(const std::vector<PlotPoint>& points, const std::string& axis,
                    std::ostream& out) {
  if (axis != "iteration-vs-utility" && axis != "S-vs-utility" && axis != "M-vs-utility")
    throw std::invalid_argument("unknown plot axis: " + axis);
  if (points.empty()) throw std::invalid_argument("no data to plot for axis " + axis);
  out << "# axis: " << axis << '\n';
  out << "x,mean_utility,stddev_utility\n";
  for (const PlotPoint& p : points)
    out << format_double(p.x) << ',' << format_double(p.mean) << ',' << format_double(p.stddev)
        << '\n';
}

void emit_plot_data_file(const std::vector<PlotPoint>& points, const std::string& axis,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open plot data file: " + path);
  emit_plot_data(points, axis, out);
  if (!out) throw std::runtime_error("failed writing plot data file: " + path);
}

}  // namespace abcd
