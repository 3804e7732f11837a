#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ccn/coupling.hpp"

namespace ccn {

struct BasisComponent {
  enum class Form { Monomial, Symmetric, Generic };

  Form form = Form::Generic;
  // Monomial: coeff * prod_c w_c x_c. Symmetric: coeff * (prod_c w_c) e_d(x_s), d = x_degree.
  Rational coeff = 0;
  unsigned x_degree = 0;
  ComponentFn generic;

  Value eval(const State& x, std::span<const Input> s) const;
};

class BasisFamily {
 public:
  BasisFamily(TypeIndex target, std::size_t num_types, MultiIndex support_bound,
              Internal f0 = Internal::zero());

  // a_k (prod_j k_j!) prod_c w_c x_c at every supported k.
  static BasisFamily polynomial(const OracleComponent& structured);
  // (n-k)! k! (prod w) e_k(x) at every profile of norm n.
  static BasisFamily symmetric(unsigned n, unsigned k, Internal f0 = Internal::zero(),
                               std::size_t num_types = 1, TypeIndex target = 1);
  // Every component evaluated through basis_from_coupling.
  static BasisFamily from_coupling(const CouplingFamily& fam);

  static BasisFamily parse(const Json& doc);
  Json to_json() const;

  void set_component(const MultiIndex& k, BasisComponent c);

  TypeIndex target() const noexcept { return target_; }
  std::size_t num_types() const noexcept { return num_types_; }
  const MultiIndex& support_bound() const noexcept { return bound_; }
  const Internal& internal() const noexcept { return f0_; }
  const std::map<MultiIndex, BasisComponent>& components() const noexcept { return comps_; }
  // Nonzero keys other than 0 (every key <= bound for a generic family).
  std::vector<MultiIndex> support() const;

  // ^b f^{K(s)}(x; w_s, x_s); 0 outside the support.
  Value eval(std::span<const Input> s, const State& x) const;

 private:
  TypeIndex target_;
  std::size_t num_types_;
  MultiIndex bound_;
  Internal f0_;
  std::map<MultiIndex, BasisComponent> comps_;
  ComponentFn fallback_;
};

// sum_{m >= 1, K(ms) <= K} (-1)^{|m|-|s|} / prod m_c * f^{K(ms)}(x; m, w_s, x_s)
Value basis_from_coupling(const CouplingFamily& fam, std::span<const Input> s, const State& x);
// sum_{m >= 1, K(ms) <= K} 1/prod m_c! * ^b f^{K(ms)}(x; m, w_s, x_s)
Value coupling_from_basis(const BasisFamily& bf, std::span<const Input> s, const State& x);
// sum_{M >= 0} prod (m_c!/M_c!) S2(M_c, m_c) * ^b f^{K(Ms)}
Value coupling_from_basis_multi(const BasisFamily& bf, const MultiplicityPoint& p);
// sum_{M >= 0} (-1)^{|M|-|m|} prod (m_c!/M_c!) s1(M_c, m_c) * f^{K(Ms)}
Value basis_from_coupling_multi(const CouplingFamily& fam, const MultiplicityPoint& p);
// sum_{m >= 0, K(ms) <= K} 1/prod m_c! * ^b f^{K(ms)}
Value oracle_from_basis(const BasisFamily& bf, std::span<const Input> s, const State& x);

// Coupling family whose components come from coupling_from_basis.
CouplingFamily coupling_family_from_basis(const BasisFamily& bf);

// ^b f^{K(s)} straight from the oracle with the C(K_j, |M_j|, r) weights. Trusts K.
Value basis_from_oracle_direct(const OracleComponent& o, const MultiIndex& K, std::span<const Input> s,
                               const State& x);

struct DirectCheck {
  Value value;
  bool agrees = true;
  double max_discrepancy = 0.0;
};

// Reruns with K + 1_j for every j; disagreement means K was not a valid bound.
DirectCheck basis_from_oracle_direct_checked(const OracleComponent& o, const MultiIndex& K,
                                             std::span<const Input> s, const State& x,
                                             double tol = 1e-9);

struct BasisCheckReport {
  PropertyOutcome permutation;
  PropertyOutcome additivity;
  PropertyOutcome zero_kill;
  std::vector<Counterexample> counterexamples;

  bool ok() const noexcept { return permutation.ok && additivity.ok && zero_kill.ok; }
  Json to_json() const;
};

BasisCheckReport basis_family_check(const BasisFamily& bf, const MonoidRegistry& registry,
                                    const CheckOptions& opts = {});

struct ProbePoint {
  CellSpec s;
  State x;
};

struct TruncationReport {
  // values[p][N-1] = ^N f(x_p; w_p, x_p)
  std::vector<std::vector<Value>> values;
  // successive[p][N-2] = scaled |^N f - ^{N-1} f|
  std::vector<std::vector<double>> successive;
  // limit_error[p][N-1] when a limit evaluator is supplied
  std::vector<std::vector<double>> limit_error;

  double final_limit_error() const;
  Json to_json() const;
};

using FamilyGenerator = std::function<BasisFamily(unsigned)>;
using LimitFn = std::function<Value(const State& x, std::span<const Input> s)>;

TruncationReport truncation_sequence(const FamilyGenerator& gen, unsigned n_max,
                                     const std::vector<ProbePoint>& points, const LimitFn& limit = {});

// Basis families of the Taylor truncations, single type: a_n = 1/n! and the sine series.
BasisFamily exponential_truncation(unsigned N, Internal f0 = Internal::zero());
BasisFamily sine_truncation(unsigned N, Internal f0 = Internal::zero());

}  // namespace ccn
