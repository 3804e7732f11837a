#pragma once

#include <mutex>
#include <span>
#include <vector>

#include "ccn/rational.hpp"

namespace ccn {

// Grow-only memo of a triangular Stirling table. Extension is serialized.
class StirlingTable {
 public:
  enum class Kind { First, Second, RFirst };

  explicit StirlingTable(Kind kind, unsigned r = 0);

  Kind kind() const noexcept { return kind_; }
  unsigned r() const noexcept { return r_; }

  BigInt at(unsigned n, unsigned k) const;
  // Row n, entries k = 0..n.
  std::vector<BigInt> row(unsigned n) const;

 private:
  void grow_to(unsigned n) const;

  Kind kind_;
  unsigned r_;
  mutable std::mutex mu_;
  mutable std::vector<std::vector<BigInt>> rows_;
};

// Unsigned, first kind: cycles of permutations.
BigInt stirling1(unsigned n, unsigned k);
// Second kind: set partitions.
BigInt stirling2(unsigned n, unsigned k);
// Unsigned r-Stirling, first kind. r = 0 coincides with stirling1.
BigInt r_stirling1(unsigned r, unsigned n, unsigned k);

// n!/k! * sum over m >= 1_k, |m| = n of 1/prod m_i.
Rational stirling1_sum(unsigned n, unsigned k);
// n!/k! * sum over m >= 1_k, |m| = n of 1/prod m_i!.
Rational stirling2_sum(unsigned n, unsigned k);

// C(K,M,r) = r!/(K-M)! * s1_{M+1}(K+1, r+M+1). Rational in general.
Rational coefficient_C(unsigned K, unsigned M, unsigned r);
// Same value through the bounded sum
//   sum_{m >= [M], p >= 1_r, |m|+|p| <= K} binom(m-1, M-1) prod 1/p_j
// (the M = 0 case uses the 0-tuple for m).
Rational coefficient_C_by_sum(unsigned K, unsigned M, unsigned r);

// n!/prod m_i! for m >= 0 with sum n; 0 if any entry is negative.
BigInt multinomial(unsigned n, std::span<const long long> m);

}  // namespace ccn
