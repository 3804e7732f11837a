#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ccn/errors.hpp"

namespace ccn {

// Ordered tuple of nonnegative integers. Tupleness 0 is a valid value.
class MultiIndex {
 public:
  using value_type = std::uint32_t;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<value_type> entries) : e_(std::move(entries)) {}
  MultiIndex(std::initializer_list<value_type> entries) : e_(entries) {}

  static MultiIndex zeros(std::size_t n) { return MultiIndex(std::vector<value_type>(n, 0)); }
  static MultiIndex ones(std::size_t n) { return MultiIndex(std::vector<value_type>(n, 1)); }
  // 1_j with j zero-based.
  static MultiIndex unit(std::size_t n, std::size_t j);

  std::size_t size() const noexcept { return e_.size(); }
  bool empty() const noexcept { return e_.empty(); }
  value_type operator[](std::size_t i) const { return e_[i]; }
  value_type& operator[](std::size_t i) { return e_[i]; }
  std::span<const value_type> entries() const noexcept { return e_; }
  const std::vector<value_type>& vec() const noexcept { return e_; }

  auto begin() const noexcept { return e_.begin(); }
  auto end() const noexcept { return e_.end(); }

  bool is_zero() const noexcept;
  // Same zero pattern: a_i == 0 iff b_i == 0.
  bool same_support(const MultiIndex& other) const;

  MultiIndex& operator+=(const MultiIndex& other);
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }
  friend MultiIndex operator*(value_type s, MultiIndex a);
  // Entrywise a - b; throws DomainError if an entry would go negative.
  friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);

  // Lexicographic, so it can key ordered containers.
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  std::string to_string() const;

 private:
  std::vector<value_type> e_;
};

std::ostream& operator<<(std::ostream& os, const MultiIndex& m);

std::uint64_t norm(const MultiIndex& m);

enum class Order { Less, Equal, Greater, Incomparable };

Order compare(const MultiIndex& a, const MultiIndex& b);
// a <= b entrywise.
bool leq(const MultiIndex& a, const MultiIndex& b);
MultiIndex entrywise_max(const MultiIndex& a, const MultiIndex& b);

// Each v[i] repeated m[i] times, consecutively.
template <class T>
std::vector<T> apply_multiplicity(const MultiIndex& m, std::span<const T> v) {
  if (m.size() != v.size())
    throw DimensionError("apply_multiplicity: tupleness " + std::to_string(m.size()) +
                         " vs length " + std::to_string(v.size()));
  std::vector<T> out;
  out.reserve(norm(m));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::uint32_t r = 0; r < m[i]; ++r) out.push_back(v[i]);
  return out;
}

template <class T>
std::vector<T> apply_multiplicity(const MultiIndex& m, const std::vector<T>& v) {
  return apply_multiplicity(m, std::span<const T>(v));
}

// M with M_i = sum of the i-th block of mbar, blocks sized by m.
MultiIndex compose_multiplicities(const MultiIndex& mbar, const MultiIndex& m);

struct NormEquals {
  std::uint64_t n;
};
struct NormAtMost {
  std::uint64_t n;
};
struct UpperBounded {
  MultiIndex bound;
};
using Constraint = std::variant<NormEquals, NormAtMost, UpperBounded>;

// General box: lower <= m <= upper (if given), norm_min <= |m| <= norm_max.
struct IndexBox {
  MultiIndex lower;
  std::optional<MultiIndex> upper;
  std::uint64_t norm_min = 0;
  std::optional<std::uint64_t> norm_max;
};

// Lazy lexicographic enumeration of a bounded index box.
class MultiIndexStream {
 public:
  explicit MultiIndexStream(IndexBox box);

  // Next multi-index, or nullopt once exhausted.
  std::optional<MultiIndex> next();

  class iterator {
   public:
    using value_type = MultiIndex;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    explicit iterator(MultiIndexStream* s) : s_(s) { ++*this; }
    const MultiIndex& operator*() const { return *cur_; }
    const MultiIndex* operator->() const { return &*cur_; }
    iterator& operator++() {
      cur_ = s_->next();
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return !cur_.has_value(); }

   private:
    MultiIndexStream* s_ = nullptr;
    std::optional<MultiIndex> cur_;
  };

  iterator begin() { return iterator(this); }
  std::default_sentinel_t end() { return {}; }

 private:
  bool feasible_range(std::size_t i, std::uint64_t prefix, std::uint64_t& lo,
                      std::uint64_t& hi) const;
  bool fill_from(std::size_t i);

  IndexBox box_;
  std::vector<std::uint64_t> min_rest_;
  std::vector<std::uint64_t> max_rest_;  // UINT64_MAX when unbounded
  std::vector<std::uint32_t> cur_;
  bool started_ = false;
  bool done_ = false;
};

// Constraint-style entry point. Unbounded boxes are rejected.
MultiIndexStream enumerate(std::size_t k, const MultiIndex& lower, const Constraint& c);

std::uint64_t count(MultiIndexStream s);

}  // namespace ccn
