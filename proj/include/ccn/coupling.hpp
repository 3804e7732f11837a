#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ccn/oracle.hpp"

namespace ccn {

inline constexpr std::size_t kExplicitCap = 20;
inline constexpr std::size_t kRecursiveCap = 12;

// Entry mask holds f^{K(s_mask)} for every subset of s (in-place Moebius inversion).
std::vector<Value> all_coupling_components(const OracleComponent& o, std::span<const Input> s,
                                           const State& x);
// Inclusion-exclusion over the subsets of s.
Value coupling_eval_explicit(const OracleComponent& o, std::span<const Input> s, const State& x);
// f^{K(s)} = f(s) - sum over proper subsets, memoized over subsets.
Value coupling_eval_recursive(const OracleComponent& o, std::span<const Input> s, const State& x);
// f^{K(ms)} at (x; m w_s, m x_s) through
//   sum_{mbar <= m} prod binom(m_c, mbar_c) (-1)^{|m|-|mbar|} f(x; mbar w_s, mbar x_s).
Value coupling_eval_multiplicity(const OracleComponent& o, const MultiplicityPoint& p);

// Closed form of the coupling components of a structured polynomial oracle:
//   f^{K(s)} = sum_n a_n prod_j n_j! sum_{m >= 1, |m| = n_j} prod_{c in s_j} (w_c x_c)^{m_c} / m_c!
Value polynomial_coupling(const OracleComponent& o, std::span<const Input> s, const State& x);

// Evaluates f^{K(s)}(x; w_s, x_s).
using ComponentFn = std::function<Value(const State& x, std::span<const Input> s)>;

class CouplingFamily {
 public:
  static CouplingFamily from_oracle(const OracleComponent& o);
  static CouplingFamily from_components(TypeIndex target, std::size_t num_types, ComponentFn fn,
                                        std::optional<MultiIndex> order_bound, std::string name);

  TypeIndex target() const noexcept { return target_; }
  std::size_t num_types() const noexcept { return num_types_; }
  const std::optional<MultiIndex>& order_bound() const noexcept { return bound_; }
  const OracleComponent* source() const noexcept { return source_.get(); }
  bool has_closed_form() const noexcept { return static_cast<bool>(closed_); }
  const std::string& name() const noexcept { return name_; }

  // Zero outside the order bound; closed form when present; inclusion-exclusion otherwise.
  Value eval(std::span<const Input> s, const State& x) const;
  Value eval_multi(const MultiplicityPoint& p) const;

 private:
  CouplingFamily() = default;
  Value zero_value(const State& x) const;

  TypeIndex target_ = 1;
  std::size_t num_types_ = 1;
  std::shared_ptr<const OracleComponent> source_;
  std::optional<MultiIndex> bound_;
  ComponentFn closed_;
  std::string name_;
};

// sum over subsets of f^{K(sbar)}.
Value recompose(const CouplingFamily& fam, std::span<const Input> s, const State& x);
Value recompose(const OracleComponent& o, std::span<const Input> s, const State& x);

struct CouplingCheckReport {
  PropertyOutcome permutation;
  PropertyOutcome expansion;  // f^k(w1||w2) = f^k(w1) + f^k(w2) + f^{k+1_j}(w1, w2)
  PropertyOutcome zero_kill;
  std::vector<Counterexample> counterexamples;

  bool ok() const noexcept { return permutation.ok && expansion.ok && zero_kill.ok; }
  Json to_json() const;
};

CouplingCheckReport coupling_family_check(const CouplingFamily& fam, const MonoidRegistry& registry,
                                          const CheckOptions& opts = {});

struct CouplingOrder {
  enum class Kind { Finite, InfiniteEvidence, Unknown };
  Kind kind = Kind::Unknown;
  unsigned gamma = 0;          // Finite: the order
  unsigned highest_nonzero = 0;  // probing: largest level with a nonzero component

  std::string label() const;
  Json to_json() const;
};

struct ProbeOptions {
  unsigned max_level = 8;
  unsigned samples = 4;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::vector<std::size_t> state_dims;
};

// Exact for structured families; otherwise probes f^{L 1_j} (unbounded) or the bound box.
CouplingOrder coupling_order(const CouplingFamily& fam, TypeIndex j, const MonoidRegistry* registry,
                             const ProbeOptions& opts = {});

// k with f^k != 0 and no nonzero kbar > k of the same zero pattern. Sorted.
std::vector<MultiIndex> locally_maximal_orders(const CouplingFamily& fam,
                                               const MonoidRegistry* registry = nullptr,
                                               const ProbeOptions& opts = {});

// Maximal elements of a support set within zero-pattern classes.
std::vector<MultiIndex> maximal_within_patterns(const std::set<MultiIndex>& support);

}  // namespace ccn
