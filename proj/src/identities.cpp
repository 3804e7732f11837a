#include "ccn/identities.hpp"

#include <algorithm>
#include <sstream>

#include "ccn/multiindex.hpp"
#include "ccn/stirling.hpp"

namespace ccn {

namespace {

class Tally {
 public:
  explicit Tally(std::string name) { r_.name = std::move(name); }

  void expect(const Rational& lhs, const Rational& rhs, const std::string& where) {
    ++r_.cases;
    if (lhs == rhs) return;
    if (r_.failures++ == 0) r_.first_failure = where + ": " + to_string(lhs) + " != " + to_string(rhs);
  }

  void expect(const BigInt& lhs, const BigInt& rhs, const std::string& where) {
    expect(Rational(lhs), Rational(rhs), where);
  }

  IdentityResult done() { return std::move(r_); }

 private:
  IdentityResult r_;
};

std::string args(std::initializer_list<long long> v) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (auto x : v) {
    os << (first ? "" : ",") << x;
    first = false;
  }
  os << ')';
  return os.str();
}

BigInt prod_entries(const MultiIndex& m) {
  BigInt p = 1;
  for (auto v : m) p *= v;
  return p;
}

// All M with tupleness k and |M| <= n.
MultiIndexStream all_up_to(std::size_t k, unsigned n) {
  return enumerate(k, MultiIndex::zeros(k), NormAtMost{n});
}

}  // namespace

IdentityBounds IdentityBounds::capped(unsigned n) {
  IdentityBounds b;
  for (unsigned* p : {&b.dual_n, &b.alternated_n, &b.cross_n, &b.partial_box, &b.frac1_n,
                      &b.frac2_box, &b.count_n, &b.pascal_n, &b.prod_comb_n, &b.multi_norm,
                      &b.trinomial, &b.coefficient_K})
    *p = std::min(*p, n);
  return b;
}

IdentityResult check_stirling1_dual_path(unsigned max_n) {
  Tally t("stirling1_sum == stirling1");
  for (unsigned n = 0; n <= max_n; ++n)
    for (unsigned k = 0; k <= n; ++k)
      t.expect(stirling1_sum(n, k), Rational(stirling1(n, k)), args({n, k}));
  return t.done();
}

IdentityResult check_stirling2_dual_path(unsigned max_n) {
  Tally t("stirling2_sum == stirling2");
  for (unsigned n = 0; n <= max_n; ++n)
    for (unsigned k = 0; k <= n; ++k)
      t.expect(stirling2_sum(n, k), Rational(stirling2(n, k)), args({n, k}));
  return t.done();
}

IdentityResult check_alternated_1(unsigned max_n) {
  Tally t("alternated first kind");
  for (unsigned n = 1; n <= max_n; ++n) {
    BigInt s = 0;
    for (unsigned k = 1; k <= n; ++k) s += (k % 2 ? -1 : 1) * stirling1(n, k);
    t.expect(s, BigInt(n == 1 ? -1 : 0), args({n}));
  }
  return t.done();
}

IdentityResult check_alternated_2(unsigned max_n) {
  Tally t("alternated second kind");
  for (unsigned n = 1; n <= max_n; ++n) {
    BigInt s = 0;
    for (unsigned k = 1; k <= n; ++k) s += (k % 2 ? -1 : 1) * factorial(k - 1) * stirling2(n, k);
    t.expect(s, BigInt(n == 1 ? -1 : 0), args({n}));
  }
  return t.done();
}

IdentityResult check_r0_agreement(unsigned max_n) {
  Tally t("r-Stirling r=0 and r=1 vs first kind");
  const StirlingTable r0(StirlingTable::Kind::RFirst, 0);
  for (unsigned n = 0; n <= max_n; ++n)
    for (unsigned k = 0; k <= n + 1; ++k) {
      t.expect(r0.at(n, k), stirling1(n, k), "r=0 " + args({n, k}));
      if (n > 0) t.expect(r_stirling1(1, n, k), stirling1(n, k), "r=1 " + args({n, k}));
    }
  return t.done();
}

IdentityResult check_cross_rec(unsigned max_n) {
  Tally t("r-Stirling cross recurrence");
  for (unsigned n = 1; n <= max_n; ++n)
    for (unsigned r = 0; r < n; ++r)
      for (unsigned k = 0; k <= n; ++k)
        t.expect(r_stirling1(r, n, k),
                 BigInt(r) * r_stirling1(r + 1, n, k + 1) + r_stirling1(r + 1, n, k),
                 args({r, n, k}));
  return t.done();
}

IdentityResult check_cross_rec2(unsigned max_n) {
  Tally t("r-Stirling second cross recurrence");
  for (unsigned n = 2; n <= max_n; ++n)
    for (unsigned r = 1; r < n; ++r)
      for (unsigned k = 1; k <= n; ++k)
        t.expect(r_stirling1(r, n, k),
                 BigInt(n - r) * r_stirling1(r, n - 1, k) + r_stirling1(r - 1, n - 1, k - 1),
                 args({r, n, k}));
  return t.done();
}

IdentityResult check_partial_sum(unsigned box) {
  Tally t("partial sum of s1_r(n+r,k+r)/n!");
  for (unsigned r = 0; r <= box; ++r)
    for (unsigned N = 0; N <= box; ++N)
      for (unsigned k = 0; k <= box; ++k) {
        Rational lhs = 0;
        for (unsigned n = 0; n <= N; ++n) lhs += Rational(r_stirling1(r, n + r, k + r), factorial(n));
        t.expect(lhs, Rational(r_stirling1(r + 1, N + r + 1, k + r + 1), factorial(N)),
                 args({r, N, k}));
      }
  return t.done();
}

IdentityResult check_stirstg_frac_sum_1(unsigned max_n) {
  Tally t("binomial weighted s1(p,k)/p! sum");
  for (unsigned n = 0; n <= max_n; ++n)
    for (unsigned r = 0; r <= n; ++r)
      for (unsigned k = 0; k <= n; ++k) {
        Rational lhs = 0;
        for (unsigned p = k; p + r <= n; ++p)
          lhs += Rational(binomial(n - p, r) * stirling1(p, k), factorial(p));
        t.expect(lhs, Rational(r_stirling1(r + 1, n + 1, k + r + 1), factorial(n - r)),
                 args({n, r, k}));
      }
  return t.done();
}

IdentityResult check_stirstg_frac_sum_2(unsigned box) {
  Tally t("multi-index weighted 1/prod m sum");
  for (unsigned n = 0; n <= box; ++n)
    for (unsigned r = 0; r <= n; ++r)
      for (unsigned k = 0; k <= box; ++k) {
        Rational lhs = 0;
        for (const MultiIndex& m : enumerate(k, MultiIndex::ones(k), NormAtMost{n - r}))
          lhs += Rational(binomial(n - static_cast<long long>(norm(m)), r), prod_entries(m));
        const Rational rhs =
            Rational(factorial(k), factorial(n - r)) * Rational(r_stirling1(r + 1, n + 1, k + r + 1));
        t.expect(lhs, rhs, args({k, r, n}));
      }
  return t.done();
}

IdentityResult check_sums_1_abs_leq_n(unsigned max_n) {
  Tally t("count of m >= 1_k with |m| <= n");
  for (unsigned n = 0; n <= max_n; ++n)
    for (unsigned k = 0; k <= n; ++k)
      t.expect(BigInt(count(enumerate(k, MultiIndex::ones(k), NormAtMost{n}))), binomial(n, k),
               args({k, n}));
  return t.done();
}

IdentityResult check_pascal_prod_sum(unsigned max_n, unsigned max_k) {
  Tally t("pascal product sum");
  for (unsigned k = 0; k <= max_k; ++k)
    for (unsigned n = 0; n <= max_n; ++n)
      for (const MultiIndex& M : enumerate(k, MultiIndex::ones(k), NormAtMost{n})) {
        BigInt lhs = 0;
        for (const MultiIndex& m : enumerate(k, M, NormAtMost{n})) {
          BigInt p = 1;
          for (std::size_t i = 0; i < k; ++i) p *= binomial(m[i] - 1LL, M[i] - 1LL);
          lhs += p;
        }
        t.expect(lhs, binomial(n, norm(M)), "M=" + M.to_string() + " n=" + std::to_string(n));
      }
  return t.done();
}

IdentityResult check_sum_prod_comb_stirstg(unsigned max_n) {
  Tally t("pascal and harmonic product sum");
  for (unsigned k = 0; k <= 2; ++k)
    for (unsigned r = 0; r <= 3; ++r)
      for (unsigned n = 0; n <= max_n; ++n)
        for (const MultiIndex& M : enumerate(k, MultiIndex::ones(k), NormAtMost{n})) {
          std::vector<std::uint32_t> low(M.begin(), M.end());
          low.resize(k + r, 1);
          Rational lhs = 0;
          for (const MultiIndex& mp : enumerate(k + r, MultiIndex(low), NormAtMost{n})) {
            BigInt num = 1, den = 1;
            for (std::size_t i = 0; i < k; ++i) num *= binomial(mp[i] - 1LL, M[i] - 1LL);
            for (std::size_t j = k; j < k + r; ++j) den *= mp[j];
            lhs += Rational(num, den);
          }
          const unsigned nm = static_cast<unsigned>(norm(M));
          const Rational rhs = Rational(factorial(r), factorial(n - nm)) *
                               Rational(r_stirling1(nm + 1, n + 1, r + nm + 1));
          t.expect(lhs, rhs, "M=" + M.to_string() + " r=" + std::to_string(r) +
                                 " n=" + std::to_string(n));
        }
  return t.done();
}

namespace {

// sum over mbar >= 1_{|m|} with mbar m = M of 1/prod g(mbar_i).
template <class G>
Rational composition_sum(const MultiIndex& m, const MultiIndex& M, G g) {
  const std::size_t len = norm(m);
  Rational acc = 0;
  for (const MultiIndex& mbar : enumerate(len, MultiIndex::ones(len), NormEquals{norm(M)})) {
    if (compose_multiplicities(mbar, m) != M) continue;
    BigInt den = 1;
    for (auto v : mbar) den *= g(v);
    acc += Rational(1, den);
  }
  return acc;
}

template <class G, class S>
IdentityResult multi_sum_check(std::string name, unsigned max_k, unsigned max_norm, G g, S stir) {
  Tally t(std::move(name));
  for (unsigned k = 0; k <= max_k; ++k)
    for (const MultiIndex& M : all_up_to(k, max_norm)) {
      MultiIndex up = M + MultiIndex::ones(k);
      for (const MultiIndex& m : enumerate(k, MultiIndex::zeros(k), UpperBounded{up})) {
        Rational rhs = 1;
        for (std::size_t i = 0; i < k; ++i)
          rhs *= Rational(factorial(m[i]) * stir(M[i], m[i]), factorial(M[i]));
        t.expect(composition_sum(m, M, g), rhs, "m=" + m.to_string() + " M=" + M.to_string());
      }
    }
  return t.done();
}

template <class W>
IdentityResult alternated_multi_check(std::string name, unsigned max_k, unsigned max_norm, W w) {
  Tally t(std::move(name));
  for (unsigned k = 0; k <= max_k; ++k)
    for (const MultiIndex& M : all_up_to(k, max_norm)) {
      BigInt lhs = 0;
      for (const MultiIndex& m : enumerate(k, MultiIndex::ones(k), UpperBounded{M})) {
        BigInt p = 1;
        for (std::size_t i = 0; i < k; ++i) p *= (m[i] % 2 ? -1 : 1) * w(M[i], m[i]);
        lhs += p;
      }
      const BigInt rhs = (M == MultiIndex::ones(k)) ? BigInt(k % 2 ? -1 : 1) : BigInt(0);
      t.expect(lhs, rhs, "M=" + M.to_string());
    }
  return t.done();
}

}  // namespace

IdentityResult check_stirling_sums_multi_1(unsigned max_k, unsigned max_norm) {
  return multi_sum_check("composition sum, first kind", max_k, max_norm,
                         [](unsigned v) { return BigInt(v); }, &stirling1);
}

IdentityResult check_stirling_sums_multi_2(unsigned max_k, unsigned max_norm) {
  return multi_sum_check("composition sum, second kind", max_k, max_norm,
                         [](unsigned v) { return factorial(v); }, &stirling2);
}

IdentityResult check_alternated_multi_1(unsigned max_k, unsigned max_norm) {
  return alternated_multi_check("alternated multi sum, first kind", max_k, max_norm,
                                [](unsigned M, unsigned m) { return stirling1(M, m); });
}

IdentityResult check_alternated_multi_2(unsigned max_k, unsigned max_norm) {
  return alternated_multi_check(
      "alternated multi sum, second kind", max_k, max_norm,
      [](unsigned M, unsigned m) { return BigInt(factorial(m - 1) * stirling2(M, m)); });
}

IdentityResult check_trinomial_minor(unsigned max_m) {
  Tally t("trinomial alternating sum (minor)");
  for (long long m1 = 1; m1 <= max_m; ++m1)
    for (long long m2 = 1; m2 <= max_m; ++m2) {
      BigInt s = 0;
      for (long long n = 0; n <= m1; ++n)
        s += (n % 2 ? -1 : 1) * binomial(m1, n) * binomial(n + m2 - 1, m1 - 1);
      t.expect(s, BigInt(0), args({m1, m2}));
    }
  return t.done();
}

IdentityResult check_trinomial_major(unsigned max_m) {
  Tally t("trinomial alternating sum (major)");
  for (long long m1 = 0; m1 <= max_m; ++m1)
    for (long long m2 = 0; m2 <= max_m; ++m2) {
      Rational s = 0;
      for (long long n = std::max({1LL, m1, m2}); n <= m1 + m2; ++n) {
        const long long parts[3] = {n - m1, n - m2, m1 + m2 - n};
        s += sign_power(n) * Rational(multinomial(static_cast<unsigned>(n), parts), n);
      }
      Rational expect = 0;
      if (m1 >= 1 && m2 == 0) expect = sign_power(m1) * Rational(1, m1);
      if (m1 == 0 && m2 >= 1) expect = sign_power(m2) * Rational(1, m2);
      t.expect(s, expect, args({m1, m2}));
    }
  return t.done();
}

IdentityResult check_coefficient_C(unsigned max_K) {
  Tally t("coefficient C closed form vs bounded sum");
  for (unsigned K = 0; K <= max_K; ++K)
    for (unsigned M = 0; M <= K; ++M)
      for (unsigned r = 0; r <= 3; ++r)
        t.expect(coefficient_C(K, M, r), coefficient_C_by_sum(K, M, r), args({K, M, r}));
  return t.done();
}

std::vector<IdentityResult> run_identity_suite(const IdentityBounds& b) {
  return {
      check_stirling1_dual_path(b.dual_n),
      check_stirling2_dual_path(b.dual_n),
      check_alternated_1(b.alternated_n),
      check_alternated_2(b.alternated_n),
      check_r0_agreement(b.cross_n),
      check_cross_rec(b.cross_n),
      check_cross_rec2(b.cross_n),
      check_partial_sum(b.partial_box),
      check_stirstg_frac_sum_1(b.frac1_n),
      check_stirstg_frac_sum_2(b.frac2_box),
      check_sums_1_abs_leq_n(b.count_n),
      check_pascal_prod_sum(b.pascal_n, b.multi_k),
      check_sum_prod_comb_stirstg(b.prod_comb_n),
      check_stirling_sums_multi_1(b.multi_k, b.multi_norm),
      check_stirling_sums_multi_2(b.multi_k, b.multi_norm),
      check_alternated_multi_1(b.multi_k, b.multi_norm),
      check_alternated_multi_2(b.multi_k, b.multi_norm),
      check_trinomial_minor(b.trinomial),
      check_trinomial_major(b.trinomial),
      check_coefficient_C(b.coefficient_K),
  };
}

}  // namespace ccn
