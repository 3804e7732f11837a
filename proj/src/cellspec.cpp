#include "ccn/cellspec.hpp"

#include <algorithm>
#include <cmath>

namespace ccn {

MultiIndex type_profile(std::span<const Input> s, std::size_t num_types) {
  MultiIndex k = MultiIndex::zeros(num_types);
  for (const Input& in : s) {
    if (in.type < 1 || in.type > num_types)
      throw DimensionError("input type " + std::to_string(in.type) + " outside 1.." +
                           std::to_string(num_types));
    ++k[in.type - 1];
  }
  return k;
}

CellSpec subset(std::span<const Input> s, std::uint64_t mask) {
  CellSpec out;
  for (std::size_t c = 0; c < s.size(); ++c)
    if (mask >> c & 1U) out.push_back(s[c]);
  return out;
}

CellSpec expand(std::span<const Input> s, const MultiIndex& m) {
  return apply_multiplicity(m, s);
}

CellSpec MultiplicityPoint::expanded() const { return expand(s, m); }

Json state_to_json(const State& x) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) arr.push_back(x[i]);
  return arr;
}

State state_from_json(const Json& j) {
  if (j.is_number()) return scalar_state(j.get<double>());
  if (!j.is_array() || j.empty()) throw SpecError("state must be a number or a nonempty array");
  State x(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SpecError("state entries must be numbers");
    x[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return x;
}

Json cellspec_to_json(std::span<const Input> s) {
  Json arr = Json::array();
  for (const Input& in : s)
    arr.push_back({{"type", in.type}, {"weight", weight_to_json(in.weight)},
                   {"state", state_to_json(in.state)}});
  return arr;
}

CellSpec cellspec_from_json(const Json& j) {
  if (!j.is_array()) throw SpecError("neighborhood must be an array");
  CellSpec s;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("type") || !e.contains("weight") || !e.contains("state"))
      throw SpecError("neighborhood entry needs type, weight and state");
    if (!e.at("type").is_number_unsigned() || e.at("type").get<long long>() < 1)
      throw SpecError("neighborhood type must be a positive integer");
    s.push_back(Input{e.at("type").get<TypeIndex>(), weight_from_json(e.at("weight")),
                      state_from_json(e.at("state"))});
  }
  return s;
}

double scaled_diff(const Value& a, const Value& b) {
  if (a.size() != b.size()) return INFINITY;
  if (a.size() == 0) return 0.0;
  const double diff = (a - b).cwiseAbs().maxCoeff();
  const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  if (std::isnan(diff)) return INFINITY;
  return diff / scale;
}

bool near(const Value& a, const Value& b, double tol) { return scaled_diff(a, b) <= tol; }

State scalar_state(double v) {
  State x(1);
  x[0] = v;
  return x;
}

}  // namespace ccn
