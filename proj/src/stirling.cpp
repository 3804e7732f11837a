#include "ccn/stirling.hpp"

#include <map>
#include <memory>

#include "ccn/errors.hpp"
#include "ccn/multiindex.hpp"

namespace ccn {

StirlingTable::StirlingTable(Kind kind, unsigned r) : kind_(kind), r_(kind == Kind::RFirst ? r : 0) {}

void StirlingTable::grow_to(unsigned n) const {
  while (rows_.size() <= n) {
    const unsigned m = static_cast<unsigned>(rows_.size());
    std::vector<BigInt> row(m + 1, 0);
    if (kind_ == Kind::RFirst) {
      if (m == r_) {
        row[r_] = 1;
      } else if (m > r_) {
        const auto& prev = rows_[m - 1];
        for (unsigned k = 1; k <= m; ++k) {
          BigInt v = 0;
          if (k <= m - 1) v += BigInt(m - 1) * prev[k];
          v += prev[k - 1];
          row[k] = v;
        }
      }
    } else if (m == 0) {
      row[0] = 1;
    } else {
      const auto& prev = rows_[m - 1];
      for (unsigned k = 1; k <= m; ++k) {
        BigInt v = prev[k - 1];
        if (k <= m - 1) v += BigInt(kind_ == Kind::First ? m - 1 : k) * prev[k];
        row[k] = v;
      }
    }
    rows_.push_back(std::move(row));
  }
}

BigInt StirlingTable::at(unsigned n, unsigned k) const {
  if (k > n) return 0;
  std::lock_guard lock(mu_);
  grow_to(n);
  return rows_[n][k];
}

std::vector<BigInt> StirlingTable::row(unsigned n) const {
  std::lock_guard lock(mu_);
  grow_to(n);
  return rows_[n];
}

namespace {

const StirlingTable& first_table() {
  static const StirlingTable t(StirlingTable::Kind::First);
  return t;
}

const StirlingTable& second_table() {
  static const StirlingTable t(StirlingTable::Kind::Second);
  return t;
}

const StirlingTable& r_table(unsigned r) {
  static std::mutex mu;
  static std::map<unsigned, std::unique_ptr<StirlingTable>> tables;
  std::lock_guard lock(mu);
  auto& slot = tables[r];
  if (!slot) slot = std::make_unique<StirlingTable>(StirlingTable::Kind::RFirst, r);
  return *slot;
}

}  // namespace

BigInt stirling1(unsigned n, unsigned k) { return first_table().at(n, k); }

BigInt stirling2(unsigned n, unsigned k) { return second_table().at(n, k); }

BigInt r_stirling1(unsigned r, unsigned n, unsigned k) {
  if (r == 0) return stirling1(n, k);
  return r_table(r).at(n, k);
}

Rational stirling1_sum(unsigned n, unsigned k) {
  Rational acc = 0;
  for (const MultiIndex& m : enumerate(k, MultiIndex::ones(k), NormEquals{n})) {
    BigInt prod = 1;
    for (auto v : m) prod *= v;
    acc += Rational(1, prod);
  }
  return acc * Rational(factorial(n), factorial(k));
}

Rational stirling2_sum(unsigned n, unsigned k) {
  Rational acc = 0;
  for (const MultiIndex& m : enumerate(k, MultiIndex::ones(k), NormEquals{n})) {
    BigInt prod = 1;
    for (auto v : m) prod *= factorial(v);
    acc += Rational(1, prod);
  }
  return acc * Rational(factorial(n), factorial(k));
}

Rational coefficient_C(unsigned K, unsigned M, unsigned r) {
  if (K < M)
    throw DomainError("coefficient_C: K=" + std::to_string(K) + " < M=" + std::to_string(M));
  return Rational(factorial(r) * r_stirling1(M + 1, K + 1, r + M + 1), factorial(K - M));
}

Rational coefficient_C_by_sum(unsigned K, unsigned M, unsigned r) {
  if (K < M)
    throw DomainError("coefficient_C_by_sum: K=" + std::to_string(K) + " < M=" + std::to_string(M));
  Rational acc = 0;
  const auto p_sum = [&](std::uint64_t room) {
    Rational s = 0;
    for (const MultiIndex& p : enumerate(r, MultiIndex::ones(r), NormAtMost{room})) {
      BigInt prod = 1;
      for (auto v : p) prod *= v;
      s += Rational(1, prod);
    }
    return s;
  };
  if (M == 0) return p_sum(K);
  for (unsigned m = M; m <= K; ++m) acc += Rational(binomial(m - 1, M - 1)) * p_sum(K - m);
  return acc;
}

BigInt multinomial(unsigned n, std::span<const long long> m) {
  long long total = 0;
  for (long long v : m) {
    if (v < 0) return 0;
    total += v;
  }
  if (total != static_cast<long long>(n))
    throw DomainError("multinomial: entries sum to " + std::to_string(total) + ", expected " +
                      std::to_string(n));
  BigInt den = 1;
  for (long long v : m) den *= factorial(static_cast<unsigned>(v));
  return factorial(n) / den;
}

}  // namespace ccn
