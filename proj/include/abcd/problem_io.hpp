#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "abcd/model.hpp"

namespace abcd {

// Problem files are '#' comment lines (generator settings etc.) followed
// by one JSON object:
//   {
//     "n": 3,
//     "domains": [[-10, 10], [-10, 10], [-10, 10]],
//     "constraints": [{"i": 0, "j": 1, "coeffs": [a, b, d, e, f, g]}, ...]
//   }
// where coeffs spell out a*x^2 + b*x + d*y^2 + e*y + f*x*y + g over
// (x_i, x_j). Unknown fields are rejected, not ignored. Numbers are
// serialized with round-trip precision, so save/load is lossless.

CdcopInstance load_problem(std::istream& in);
CdcopInstance load_problem_file(const std::string& path);

void save_problem(const CdcopInstance& inst, std::ostream& out,
                  const std::vector<std::string>& header_comments = {});
void save_problem_file(const CdcopInstance& inst, const std::string& path,
                       const std::vector<std::string>& header_comments = {});

}  // namespace abcd
