#pragma once

#include <string>
#include <vector>

#include "ccn/basis.hpp"

namespace ccn {

// Oracle spec:
//   {"type_index": i, "family": name, "params": {...}, "f0": "zero" | "linear:<rate>"}
// families and params:
//   polynomial_multi  {"num_types": T, "coeffs": [{"n": [...], "a": "p/q"}, ...]}
//   exponential       {"num_types": T, "truncation": N | null}
//   symmetric_power   {"num_types": T, "n": n, "k": k}
//   nested            {"outer": ["p/q", ...], "inner": [["p/q", ...], ...]}
//   broken            {"breaks": "permutation" | "merge" | "zero_removal"}
// num_types falls back to default_types when absent.
OracleComponent parse_oracle(const Json& doc, std::size_t default_types = 1);
// Canonical form; re-parses to an identical component.
Json oracle_to_json(const OracleComponent& o);

// A single spec or an array of per-type specs, ordered and checked against num_types.
OracleFunction parse_oracle_function(const Json& doc, std::size_t num_types);

// {"center": state, "inputs": [{"type", "weight", "state"}, ...]}
// or the single-type shorthand {"w": [...], "x": [...]} with scalar states and a zero center.
ProbePoint parse_point(const Json& j);
std::vector<ProbePoint> parse_points(const Json& j);
Json point_to_json(const ProbePoint& p);

// "2", "2,3" or "[2,3]".
MultiIndex parse_bound(const std::string& text);

Json read_json_file(const std::string& path);

}  // namespace ccn
