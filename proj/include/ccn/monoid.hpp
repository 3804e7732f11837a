#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>

#include <json.hpp>

namespace ccn {

using Json = nlohmann::json;
using Rng = std::mt19937_64;

// Finite multiset of edge labels.
struct Multiset {
  std::map<std::string, std::uint32_t> counts;

  std::size_t distinct() const noexcept { return counts.size(); }
  bool empty() const noexcept { return counts.empty(); }
  friend bool operator==(const Multiset&, const Multiset&) = default;
};

// User-registered value carried through serialization untouched.
struct Opaque {
  Json value;
  friend bool operator==(const Opaque& a, const Opaque& b) { return a.value == b.value; }
};

using Weight = std::variant<double, Multiset, bool, Opaque>;

Json weight_to_json(const Weight& w);
// Shape-directed decoding: number, array of labels, boolean, {"opaque": ...}.
Weight weight_from_json(const Json& j);
std::string describe(const Weight& w);

class WeightMonoid {
 public:
  using Combine = std::function<Weight(const Weight&, const Weight&)>;
  using Sampler = std::function<Weight(Rng&)>;
  using Equal = std::function<bool(const Weight&, const Weight&)>;
  using Accepts = std::function<bool(const Weight&)>;

  WeightMonoid(std::string id, Combine combine, Weight zero, Sampler sample_nonzero, Equal equal,
               Accepts accepts, std::optional<Weight> annihilator = std::nullopt);

  const std::string& id() const noexcept { return id_; }
  Weight combine(const Weight& a, const Weight& b) const { return combine_(a, b); }
  const Weight& zero() const noexcept { return zero_; }
  // Never returns the zero element.
  Weight sample(Rng& rng) const { return sample_(rng); }
  bool equal(const Weight& a, const Weight& b) const { return equal_(a, b); }
  bool is_zero(const Weight& w) const { return equal_(w, zero_); }
  bool accepts(const Weight& w) const { return accepts_(w); }
  const std::optional<Weight>& annihilator() const noexcept { return annihilator_; }

  // Decodes and type-checks a weight; throws SpecError on mismatch.
  Weight parse_weight(const Json& j) const;

 private:
  std::string id_;
  Combine combine_;
  Weight zero_;
  Sampler sample_;
  Equal equal_;
  Accepts accepts_;
  std::optional<Weight> annihilator_;
};

using MonoidPtr = std::shared_ptr<const WeightMonoid>;

MonoidPtr make_additive_real();
MonoidPtr make_free_parallel();
MonoidPtr make_bool_or();
// "additive_real", "free_parallel", "bool_or"; nullptr for unknown ids.
MonoidPtr make_monoid(const std::string& id);

// Dyadic rationals in [-4, 4] \ {0} on a 1/8 grid, exact in binary.
double sample_dyadic(Rng& rng, double half_width = 4.0, unsigned denominator = 8);
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

struct LawOutcome {
  bool ok = true;
  std::string witness;
};

struct LawReport {
  LawOutcome commutative;
  LawOutcome associative;
  LawOutcome identity;
  LawOutcome annihilator;  // vacuous when the monoid has none

  bool ok() const noexcept {
    return commutative.ok && associative.ok && identity.ok && annihilator.ok;
  }
};

// Samples mix nonzero values with the zero element. Deterministic per seed.
LawReport check_laws(const WeightMonoid& m, std::size_t trials, std::uint64_t seed);

// Per ordered (target type, source type) pair, 1-based.
class MonoidRegistry {
 public:
  void set(std::uint32_t target, std::uint32_t source, MonoidPtr m);
  bool contains(std::uint32_t target, std::uint32_t source) const;
  // Throws SpecError when the pair is missing.
  const WeightMonoid& at(std::uint32_t target, std::uint32_t source) const;
  const std::map<std::pair<std::uint32_t, std::uint32_t>, MonoidPtr>& entries() const noexcept {
    return m_;
  }

  // Same monoid for every pair in 1..num_types.
  static MonoidRegistry uniform(std::size_t num_types, MonoidPtr m);

 private:
  std::map<std::pair<std::uint32_t, std::uint32_t>, MonoidPtr> m_;
};

}  // namespace ccn
