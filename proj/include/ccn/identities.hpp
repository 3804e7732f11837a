#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ccn {

// Outcome of one exhaustive identity check over a parameter box.
struct IdentityResult {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string first_failure;

  bool ok() const noexcept { return failures == 0 && cases > 0; }
};

struct IdentityBounds {
  unsigned dual_n = 12;
  unsigned alternated_n = 12;
  unsigned cross_n = 10;
  unsigned partial_box = 6;
  unsigned frac1_n = 10;
  unsigned frac2_box = 6;
  unsigned count_n = 10;
  unsigned pascal_n = 10;
  unsigned prod_comb_n = 8;
  unsigned multi_norm = 8;
  unsigned multi_k = 3;
  unsigned trinomial = 8;
  unsigned coefficient_K = 8;

  // Every bound capped at n.
  static IdentityBounds capped(unsigned n);
};

IdentityResult check_stirling1_dual_path(unsigned max_n);
IdentityResult check_stirling2_dual_path(unsigned max_n);
IdentityResult check_alternated_1(unsigned max_n);
IdentityResult check_alternated_2(unsigned max_n);
IdentityResult check_r0_agreement(unsigned max_n);
IdentityResult check_cross_rec(unsigned max_n);
IdentityResult check_cross_rec2(unsigned max_n);
IdentityResult check_partial_sum(unsigned box);
IdentityResult check_stirstg_frac_sum_1(unsigned max_n);
IdentityResult check_stirstg_frac_sum_2(unsigned box);
IdentityResult check_sums_1_abs_leq_n(unsigned max_n);
IdentityResult check_pascal_prod_sum(unsigned max_n, unsigned max_k);
IdentityResult check_sum_prod_comb_stirstg(unsigned max_n);
IdentityResult check_stirling_sums_multi_1(unsigned max_k, unsigned max_norm);
IdentityResult check_stirling_sums_multi_2(unsigned max_k, unsigned max_norm);
IdentityResult check_alternated_multi_1(unsigned max_k, unsigned max_norm);
IdentityResult check_alternated_multi_2(unsigned max_k, unsigned max_norm);
IdentityResult check_trinomial_minor(unsigned max_m);
IdentityResult check_trinomial_major(unsigned max_m);
IdentityResult check_coefficient_C(unsigned max_K);

std::vector<IdentityResult> run_identity_suite(const IdentityBounds& b = {});

}  // namespace ccn
