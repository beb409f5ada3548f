#include "abcd/trace.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace abcd {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(const AnytimeTrace& trace, std::ostream& out,
                     const std::vector<std::string>& header_comments) {
  for (const auto& line : header_comments) out << "# " << line << '\n';
  out << "iteration,elapsed_ms,gbest_utility,employed_requests,onlooker_requests,"
         "total_messages\n";
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << format_double(r.elapsed_ms) << ','
        << format_double(r.gbest_utility) << ',' << r.employed_requests << ','
        << r.onlooker_requests << ',' << r.total_messages << '\n';
  }
}

std::optional<TraceDivergence> compare_traces(const AnytimeTrace& a,
                                              const AnytimeTrace& b) {
  if (a.records.size() != b.records.size())
    return TraceDivergence{0, "record_count", std::to_string(a.records.size()),
                           std::to_string(b.records.size())};
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    const auto& ra = a.records[k];
    const auto& rb = b.records[k];
    auto diff = [&](const std::string& field, const std::string& lhs,
                    const std::string& rhs) {
      return TraceDivergence{ra.iteration, field, lhs, rhs};
    };
    if (ra.iteration != rb.iteration)
      return diff("iteration", std::to_string(ra.iteration), std::to_string(rb.iteration));
    if (ra.gbest_utility != rb.gbest_utility)
      return diff("gbest_utility", format_double(ra.gbest_utility),
                  format_double(rb.gbest_utility));
    if (ra.employed_requests != rb.employed_requests)
      return diff("employed_requests", std::to_string(ra.employed_requests),
                  std::to_string(rb.employed_requests));
    if (ra.onlooker_requests != rb.onlooker_requests)
      return diff("onlooker_requests", std::to_string(ra.onlooker_requests),
                  std::to_string(rb.onlooker_requests));
    if (ra.total_messages != rb.total_messages)
      return diff("total_messages", std::to_string(ra.total_messages),
                  std::to_string(rb.total_messages));
  }
  if (a.final_assignment != b.final_assignment)
    return TraceDivergence{static_cast<int>(a.records.size()), "final_assignment", "", ""};
  if (a.final_utility != b.final_utility)
    return TraceDivergence{static_cast<int>(a.records.size()), "final_utility",
                           format_double(a.final_utility), format_double(b.final_utility)};
  return std::nullopt;
}

}  // namespace abcd
