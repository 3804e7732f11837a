#include "ccn/multiindex.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ccn {

namespace {

constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

void require_same_size(const MultiIndex& a, const MultiIndex& b, const char* where) {
  if (a.size() != b.size())
    throw DimensionError(std::string(where) + ": tupleness " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return (a == kUnbounded || b == kUnbounded || a > kUnbounded - b) ? kUnbounded : a + b;
}

}  // namespace

MultiIndex MultiIndex::unit(std::size_t n, std::size_t j) {
  if (j >= n) throw DimensionError("unit: index " + std::to_string(j) + " out of range");
  MultiIndex m = zeros(n);
  m.e_[j] = 1;
  return m;
}

bool MultiIndex::is_zero() const noexcept {
  return std::all_of(e_.begin(), e_.end(), [](value_type v) { return v == 0; });
}

bool MultiIndex::same_support(const MultiIndex& other) const {
  require_same_size(*this, other, "same_support");
  for (std::size_t i = 0; i < e_.size(); ++i)
    if ((e_[i] == 0) != (other.e_[i] == 0)) return false;
  return true;
}

MultiIndex& MultiIndex::operator+=(const MultiIndex& other) {
  require_same_size(*this, other, "operator+");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += other.e_[i];
  return *this;
}

MultiIndex operator*(MultiIndex::value_type s, MultiIndex a) {
  for (auto& v : a.e_) v *= s;
  return a;
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  require_same_size(a, b, "operator-");
  MultiIndex out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] > a[i]) throw DomainError("operator-: negative entry");
    out[i] = a[i] - b[i];
  }
  return out;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& m) {
  os << '[';
  for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
  return os << ']';
}

std::uint64_t norm(const MultiIndex& m) {
  return std::accumulate(m.begin(), m.end(), std::uint64_t{0});
}

Order compare(const MultiIndex& a, const MultiIndex& b) {
  require_same_size(a, b, "compare");
  bool less = false, greater = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) less = true;
    if (a[i] > b[i]) greater = true;
  }
  if (less && greater) return Order::Incomparable;
  if (less) return Order::Less;
  if (greater) return Order::Greater;
  return Order::Equal;
}

bool leq(const MultiIndex& a, const MultiIndex& b) {
  Order o = compare(a, b);
  return o == Order::Less || o == Order::Equal;
}

MultiIndex entrywise_max(const MultiIndex& a, const MultiIndex& b) {
  require_same_size(a, b, "entrywise_max");
  MultiIndex out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

MultiIndex compose_multiplicities(const MultiIndex& mbar, const MultiIndex& m) {
  if (mbar.size() != norm(m))
    throw DimensionError("compose_multiplicities: tupleness " + std::to_string(mbar.size()) +
                         " vs norm " + std::to_string(norm(m)));
  MultiIndex out = MultiIndex::zeros(m.size());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::uint32_t r = 0; r < m[i]; ++r) out[i] += mbar[pos++];
  return out;
}

MultiIndexStream::MultiIndexStream(IndexBox box) : box_(std::move(box)) {
  const std::size_t k = box_.lower.size();
  if (box_.upper && box_.upper->size() != k)
    throw DimensionError("enumerate: upper bound tupleness mismatch");
  if (!box_.upper && !box_.norm_max && k > 0)
    throw DomainError("enumerate: unbounded index set");
  min_rest_.assign(k + 1, 0);
  max_rest_.assign(k + 1, 0);
  for (std::size_t i = k; i-- > 0;) {
    min_rest_[i] = min_rest_[i + 1] + box_.lower[i];
    max_rest_[i] = box_.upper ? sat_add(max_rest_[i + 1], (*box_.upper)[i]) : kUnbounded;
  }
  cur_.assign(k, 0);
}

bool MultiIndexStream::feasible_range(std::size_t i, std::uint64_t prefix, std::uint64_t& lo,
                                      std::uint64_t& hi) const {
  lo = box_.lower[i];
  const std::uint64_t reach = sat_add(prefix, max_rest_[i + 1]);
  if (reach != kUnbounded && reach < box_.norm_min) lo = std::max(lo, box_.norm_min - reach);
  hi = box_.upper ? (*box_.upper)[i] : kUnbounded;
  if (box_.norm_max) {
    const std::uint64_t floor = prefix + min_rest_[i + 1];
    if (floor > *box_.norm_max) return false;
    hi = std::min(hi, *box_.norm_max - floor);
  }
  return lo <= hi;
}

bool MultiIndexStream::fill_from(std::size_t i) {
  std::uint64_t prefix = 0;
  for (std::size_t p = 0; p < i; ++p) prefix += cur_[p];
  for (std::size_t p = i; p < cur_.size(); ++p) {
    std::uint64_t lo, hi;
    if (!feasible_range(p, prefix, lo, hi)) return false;
    cur_[p] = static_cast<std::uint32_t>(lo);
    prefix += lo;
  }
  return true;
}

std::optional<MultiIndex> MultiIndexStream::next() {
  if (done_) return std::nullopt;
  const std::size_t k = cur_.size();
  if (!started_) {
    started_ = true;
    if (k == 0) {
      done_ = true;
      const bool ok = box_.norm_min == 0;
      if (ok) return MultiIndex{};
      return std::nullopt;
    }
    if (!fill_from(0)) {
      done_ = true;
      return std::nullopt;
    }
    return MultiIndex(cur_);
  }
  if (k == 0) {
    done_ = true;
    return std::nullopt;
  }
  std::uint64_t prefix = 0;
  for (std::size_t p = 0; p + 1 < k; ++p) prefix += cur_[p];
  for (std::size_t p = k; p-- > 0;) {
    std::uint64_t lo, hi;
    if (feasible_range(p, prefix, lo, hi)) {
      const std::uint64_t cand = std::max<std::uint64_t>(cur_[p] + 1ULL, lo);
      if (cand <= hi) {
        cur_[p] = static_cast<std::uint32_t>(cand);
        if (fill_from(p + 1)) return MultiIndex(cur_);
      }
    }
    if (p > 0) prefix -= cur_[p - 1];
  }
  done_ = true;
  return std::nullopt;
}

MultiIndexStream enumerate(std::size_t k, const MultiIndex& lower, const Constraint& c) {
  if (lower.size() != k) throw DimensionError("enumerate: lower bound tupleness mismatch");
  IndexBox box{lower, std::nullopt, 0, std::nullopt};
  std::visit(
      [&](const auto& con) {
        using T = std::decay_t<decltype(con)>;
        if constexpr (std::is_same_v<T, NormEquals>) {
          box.norm_min = con.n;
          box.norm_max = con.n;
        } else if constexpr (std::is_same_v<T, NormAtMost>) {
          box.norm_max = con.n;
        } else {
          box.upper = con.bound;
        }
      },
      c);
  return MultiIndexStream(std::move(box));
}

std::uint64_t count(MultiIndexStream s) {
  std::uint64_t n = 0;
  while (s.next()) ++n;
  return n;
}

}  // namespace ccn
