#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "abcd/model.hpp"

namespace abcd {

// One anytime log row per iteration. Message counts are per-iteration
// deltas; `total_messages` counts transport sends (every relay hop),
// while the two request columns count logical requests.
struct TraceRecord {
  int iteration = 0;
  double elapsed_ms = 0.0;
  double gbest_utility = 0.0;
  long long employed_requests = 0;
  long long onlooker_requests = 0;
  long long total_messages = 0;
};

struct AnytimeTrace {
  std::vector<TraceRecord> records;
  Assignment final_assignment;
  double final_utility = 0.0;
};

// CSV with the fixed header
// iteration,elapsed_ms,gbest_utility,employed_requests,onlooker_requests,total_messages
// preceded by '#' comment lines carrying the run configuration.
void write_trace_csv(const AnytimeTrace& trace, std::ostream& out,
                     const std::vector<std::string>& header_comments = {});

// Shortest representation that round-trips the exact double.
std::string format_double(double v);

struct TraceDivergence {
  int iteration = 0;     // 1-based; 0 means "different record counts"
  std::string field;
  std::string lhs, rhs;
};

// Field-for-field comparison of the algorithmic trace columns. Elapsed
// wall time is observational and excluded. Returns the first divergence,
// or nullopt when the traces agree.
std::optional<TraceDivergence> compare_traces(const AnytimeTrace& a, const AnytimeTrace& b);

}  // namespace abcd
