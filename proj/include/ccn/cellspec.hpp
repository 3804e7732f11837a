#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ccn/monoid.hpp"
#include "ccn/multiindex.hpp"

namespace ccn {

using TypeIndex = std::uint32_t;  // 1-based
using State = Eigen::VectorXd;
using Value = Eigen::VectorXd;

// One in-neighborhood entry: source type, edge weight, source state.
struct Input {
  TypeIndex type;
  Weight weight;
  State state;
};

// Finite neighborhood s with weights w_s and states x_s.
using CellSpec = std::vector<Input>;

// K(s): number of entries of each type.
MultiIndex type_profile(std::span<const Input> s, std::size_t num_types);

// Evaluation point (x; m w_s, m x_s).
struct MultiplicityPoint {
  CellSpec s;
  MultiIndex m;
  State x;

  CellSpec expanded() const;
};

// Entries selected by the bits of mask (bit c <-> s[c]).
CellSpec subset(std::span<const Input> s, std::uint64_t mask);

// Each entry repeated m_c times.
CellSpec expand(std::span<const Input> s, const MultiIndex& m);

Json state_to_json(const State& x);
// Number or array of numbers.
State state_from_json(const Json& j);
Json cellspec_to_json(std::span<const Input> s);
CellSpec cellspec_from_json(const Json& j);

// |a - b|_inf <= tol * max(1, |a|_inf, |b|_inf).
bool near(const Value& a, const Value& b, double tol);
double scaled_diff(const Value& a, const Value& b);

State scalar_state(double v);

}  // namespace ccn
