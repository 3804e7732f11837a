#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccn/cellspec.hpp"
#include "ccn/rational.hpp"

namespace ccn {

// Internal dynamics f^0 : X_i -> Y_i.
class Internal {
 public:
  using Fn = std::function<Value(const State&)>;

  static Internal zero() { return Internal(Kind::Zero, 0.0, nullptr, "zero"); }
  // f^0(x) = rate * x
  static Internal linear(double rate);
  static Internal custom(Fn fn, std::string name);
  // "zero" or "linear:<rate>".
  static Internal parse(const std::string& text);

  Value operator()(const State& x) const;
  bool is_zero() const noexcept { return kind_ == Kind::Zero || (kind_ == Kind::Linear && rate_ == 0.0); }
  bool serializable() const noexcept { return kind_ != Kind::Custom; }
  const std::string& text() const noexcept { return text_; }

 private:
  enum class Kind { Zero, Linear, Custom };
  Internal(Kind kind, double rate, Fn fn, std::string text)
      : kind_(kind), rate_(rate), fn_(std::move(fn)), text_(std::move(text)) {}

  Kind kind_;
  double rate_;
  Fn fn_;
  std::string text_;
};

// Keys n > 0 of tupleness |T|; value a_n.
using PolynomialCoeffs = std::map<MultiIndex, Rational>;

// Coupling part of a black box; eval adds f^0(x).
using BlackBoxFn = std::function<Value(const State& x, std::span<const Input> s)>;

class OracleComponent {
 public:
  static OracleComponent black_box(TypeIndex target, std::size_t num_types, Internal f0,
                                   BlackBoxFn body, std::string name,
                                   std::optional<MultiIndex> declared_bound = std::nullopt);
  // f^0(x) + sum_n a_n prod_j (sum_{c in s_j} w_c x_c)^{n_j}, elementwise, 0^0 = 1.
  static OracleComponent polynomial(TypeIndex target, std::size_t num_types, PolynomialCoeffs a,
                                    Internal f0);

  TypeIndex target() const noexcept { return target_; }
  std::size_t num_types() const noexcept { return num_types_; }
  const Internal& internal() const noexcept { return f0_; }
  const std::string& name() const noexcept { return name_; }
  bool structured() const noexcept { return coeffs_ != nullptr; }
  // Throws DomainError for black boxes.
  const PolynomialCoeffs& coeffs() const;
  // Structured: entrywise maximum of the support. Black box: the declared bound.
  std::optional<MultiIndex> order_bound() const;

  Value eval(const State& x, std::span<const Input> s) const;
  Value operator()(const State& x, std::span<const Input> s) const { return eval(x, s); }

  // Canonical JSON spec when the component came from one.
  const std::optional<Json>& spec() const noexcept { return spec_; }
  void set_spec(Json j) { spec_ = std::move(j); }

 private:
  OracleComponent() = default;
  Value eval_polynomial(const State& x, std::span<const Input> s) const;

  TypeIndex target_ = 1;
  std::size_t num_types_ = 1;
  Internal f0_ = Internal::zero();
  std::string name_;
  BlackBoxFn body_;
  std::shared_ptr<const PolynomialCoeffs> coeffs_;
  std::vector<std::pair<MultiIndex, double>> coeffs_d_;
  std::optional<MultiIndex> declared_bound_;
  std::optional<Json> spec_;
};

// Per-type tuple; entry t-1 is the component of type t.
using OracleFunction = std::vector<OracleComponent>;

OracleComponent build_polynomial_single(const std::map<unsigned, Rational>& a,
                                        Internal f0 = Internal::zero(), TypeIndex target = 1);
OracleComponent build_polynomial_multi(const PolynomialCoeffs& a, Internal f0 = Internal::zero(),
                                       TypeIndex target = 1);
// Coefficients of F(sum_j F_j(sum_{c in s_j} w_c x_c)); outer[d-1] multiplies X^d,
// inner[j][l-1] multiplies X^l in F_{j+1}.
PolynomialCoeffs nested_coefficients(const std::vector<Rational>& outer,
                                     const std::vector<std::vector<Rational>>& inner);
OracleComponent build_nested(const std::vector<Rational>& outer,
                             const std::vector<std::vector<Rational>>& inner,
                             Internal f0 = Internal::zero(), TypeIndex target = 1);
// Finite N: a_n = 1/prod n_j! for 1 <= |n| <= N. Infinite: f0 + exp(sum w x) - 1.
OracleComponent build_exponential(std::optional<unsigned> truncation, Internal f0 = Internal::zero(),
                                  std::size_t num_types = 1, TypeIndex target = 1);
// f0 + (sum w)^{n-k} (sum w x)^k over all inputs.
OracleComponent build_symmetric_power(unsigned n, unsigned k, Internal f0 = Internal::zero(),
                                      std::size_t num_types = 1, TypeIndex target = 1);

// alpha * f + g as a black box; bound is the entrywise max when both are bounded.
OracleComponent linear_combination(double alpha, const OracleComponent& f, const OracleComponent& g);

enum class Property { Permutation, Merge, ZeroRemoval };
const char* property_name(Property p);

// Single-type oracles that violate exactly one property.
//   Permutation: sum w x + sum_{c<d} w_c w_d x_c x_d (x_d - x_c), additive_real weights.
//   Merge: (sum_c distinct_labels(w_c) x_c^2)^3, free_parallel weights.
//   ZeroRemoval: sum w x + sum_c [w_c == 0] x_c^2, additive_real weights.
OracleComponent build_broken(Property p, Internal f0 = Internal::zero());

struct CheckOptions {
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  // State dimension per type (1-based via index t-1); missing entries default to 1.
  std::vector<std::size_t> state_dims;
  unsigned max_per_type = 6;

  std::size_t dim(TypeIndex t) const { return t - 1 < state_dims.size() ? state_dims[t - 1] : 1; }
};

struct Counterexample {
  std::string property;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  Json input;
  Value lhs;
  Value rhs;
  double diff = 0.0;

  Json to_json() const;
};

struct PropertyOutcome {
  bool ok = true;
  std::size_t checked = 0;
  double max_diff = 0.0;

  Json to_json() const;
};

struct AdmissibilityReport {
  PropertyOutcome permutation;
  PropertyOutcome merge;
  PropertyOutcome zero_removal;
  PropertyOutcome determinism;
  std::vector<Counterexample> counterexamples;

  bool permutation_ok() const noexcept { return permutation.ok; }
  bool merge_ok() const noexcept { return merge.ok; }
  bool zero_removal_ok() const noexcept { return zero_removal.ok; }
  bool ok() const noexcept { return permutation.ok && merge.ok && zero_removal.ok && determinism.ok; }
  Json to_json() const;
};

AdmissibilityReport admissibility_check(const OracleComponent& o, const MonoidRegistry& registry,
                                        const CheckOptions& opts = {});

// Random sampling shared by the property checkers.
struct SampleSpace {
  const MonoidRegistry* registry;
  TypeIndex target;
  std::size_t num_types;
  const CheckOptions* opts;

  State state(Rng& rng, TypeIndex t) const;
  Input input(Rng& rng, TypeIndex t) const;
  // Exactly k_j entries of type j, in random order.
  CellSpec cellspec(Rng& rng, const MultiIndex& k) const;
  MultiIndex profile(Rng& rng, unsigned max_per_type) const;
};

// Dyadic state entries in [-1, 1] on a 1/8 grid.
State sample_state(Rng& rng, std::size_t dim);
void shuffle(Rng& rng, CellSpec& s);

}  // namespace ccn
