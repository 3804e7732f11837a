#include <doctest.h>

#include <cmath>

#include "brute.hpp"
#include "ccn/basis.hpp"

using namespace ccn;

namespace {

Input in(TypeIndex t, double w, double x) { return Input{t, w, scalar_state(x)}; }

MonoidRegistry additive(std::size_t T) { return MonoidRegistry::uniform(T, make_additive_real()); }

double at(const Value& v) { return v[0]; }

const State x0 = scalar_state(0.0);

CellSpec random_spec(Rng& rng, std::size_t n, std::size_t T) {
  CellSpec s;
  for (std::size_t c = 0; c < n; ++c)
    s.push_back(in(1 + uniform_index(rng, T), sample_dyadic(rng, 1.0), sample_dyadic(rng, 1.0)));
  return s;
}

// Random coefficients on a random subset of keys 0 < n <= [4, 4].
OracleComponent random_family(Rng& rng, Internal f0 = Internal::linear(-0.5)) {
  PolynomialCoeffs a;
  for (const MultiIndex& n : enumerate(2, MultiIndex::zeros(2), UpperBounded{{4, 4}})) {
    if (n.is_zero() || uniform_index(rng, 3) == 0) continue;
    a[n] = Rational(static_cast<long long>(uniform_index(rng, 9)) - 4, 1 + static_cast<long long>(uniform_index(rng, 4)));
  }
  a[MultiIndex{4, 4}] = Rational(1, 3);
  return build_polynomial_multi(a, std::move(f0));
}

double factorial_d(unsigned n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_CASE("basis of power_n") {
  for (unsigned n = 1; n <= 4; ++n) {
    const auto fam = CouplingFamily::from_oracle(build_polynomial_single({{n, 1}}, Internal::linear(2)));
    Rng rng(n);
    for (std::size_t size = 1; size <= 5; ++size) {
      const CellSpec s = random_spec(rng, size, 1);
      double prod = factorial_d(n);
      for (const auto& e : s) prod *= std::get<double>(e.weight) * e.state[0];
      const double got = at(basis_from_coupling(fam, s, x0));
      if (size == n)
        CHECK(got == doctest::Approx(prod).epsilon(1e-9));
      else
        CHECK(std::abs(got) <= 1e-9);
    }
    CHECK(at(BasisFamily::from_coupling(fam).eval({}, scalar_state(1.5))) == 3.0);
  }
}

TEST_CASE("coupling from the power_n basis") {
  for (unsigned n = 1; n <= 4; ++n) {
    const OracleComponent o = build_polynomial_single({{n, 1}});
    const BasisFamily bf = BasisFamily::polynomial(o);
    Rng rng(10 + n);
    for (std::size_t size = 1; size <= n; ++size) {
      const CellSpec s = random_spec(rng, size, 1);
      std::vector<double> y;
      for (const auto& e : s) y.push_back(std::get<double>(e.weight) * e.state[0]);
      const double expect = brute::polynomial_coupling(o.coeffs(), std::vector<unsigned>(size, 1), y, 1);
      CHECK(at(coupling_from_basis(bf, s, x0)) == doctest::Approx(expect).epsilon(1e-9));
    }
  }
  const BasisFamily only_f0(1, 1, MultiIndex{3}, Internal::linear(1));
  Rng rng(3);
  for (std::size_t size = 1; size <= 4; ++size) CHECK(at(coupling_from_basis(only_f0, random_spec(rng, size, 1), x0)) == 0.0);
}

TEST_CASE("bijection round trips on random polynomial families") {
  Rng rng(100);
  for (int fam_i = 0; fam_i < 5; ++fam_i) {
    const OracleComponent o = random_family(rng);
    const CouplingFamily cf = CouplingFamily::from_oracle(o);
    const BasisFamily bf = BasisFamily::polynomial(o);
    const CouplingFamily cf_from_b = coupling_family_from_basis(bf);
    const BasisFamily bf_from_c = BasisFamily::from_coupling(cf);
    for (int t = 0; t < 200; ++t) {
      const CellSpec s = random_spec(rng, uniform_index(rng, 6), 2);
      const State x = scalar_state(sample_dyadic(rng, 1.0));
      // coupling -> basis -> coupling
      CHECK(scaled_diff(coupling_from_basis(bf_from_c, s, x), cf.eval(s, x)) <= 1e-9);
      // basis -> coupling -> basis
      CHECK(scaled_diff(basis_from_coupling(cf_from_b, s, x), bf.eval(s, x)) <= 1e-9);
      // closed-form basis agrees with the transform of the coupling family
      CHECK(scaled_diff(bf_from_c.eval(s, x), bf.eval(s, x)) <= 1e-9);
      CHECK(scaled_diff(oracle_from_basis(bf, s, x), o.eval(x, s)) <= 1e-9);
    }
  }
}

TEST_CASE("multiplicity-general transforms") {
  Rng rng(200);
  for (int fam_i = 0; fam_i < 3; ++fam_i) {
    const OracleComponent o = random_family(rng);
    const CouplingFamily cf = CouplingFamily::from_oracle(o);
    const BasisFamily bf = BasisFamily::polynomial(o);
    for (int t = 0; t < 100; ++t) {
      const CellSpec s = random_spec(rng, 1 + uniform_index(rng, 3), 2);
      MultiIndex m = MultiIndex::zeros(s.size());
      for (std::size_t c = 0; c < s.size(); ++c) m[c] = static_cast<std::uint32_t>(uniform_index(rng, 4));
      const State x = scalar_state(sample_dyadic(rng, 1.0));
      const MultiplicityPoint p{s, m, x};
      const CellSpec e = p.expanded();
      CHECK(scaled_diff(coupling_from_basis_multi(bf, p), coupling_eval_explicit(o, e, x)) <= 1e-9);
      CHECK(scaled_diff(basis_from_coupling_multi(cf, p), bf.eval(e, x)) <= 1e-9);
      const MultiplicityPoint ones{s, MultiIndex::ones(s.size()), x};
      CHECK(scaled_diff(coupling_from_basis_multi(bf, ones), coupling_from_basis(bf, s, x)) <= 1e-9);
      CHECK(scaled_diff(basis_from_coupling_multi(cf, ones), basis_from_coupling(cf, s, x)) <= 1e-9);
    }
    const CellSpec s = random_spec(rng, 3, 2);
    CHECK(scaled_diff(basis_from_coupling_multi(cf, {s, MultiIndex::zeros(3), scalar_state(0.5)}),
                      o.internal()(scalar_state(0.5))) == 0.0);
  }
}

TEST_CASE("oracle from basis") {
  for (unsigned n = 1; n <= 4; ++n) {
    const BasisFamily bf = BasisFamily::polynomial(build_polynomial_single({{n, 1}}, Internal::linear(1)));
    Rng rng(n);
    const CellSpec s = random_spec(rng, 4, 1);
    double sum = 0.0;
    for (const auto& e : s) sum += std::get<double>(e.weight) * e.state[0];
    CHECK(at(oracle_from_basis(bf, s, scalar_state(0.25))) == doctest::Approx(0.25 + std::pow(sum, n)).epsilon(1e-9));
  }
  for (unsigned n = 1; n <= 4; ++n)
    for (unsigned k = 1; k <= n; ++k) {
      const BasisFamily bf = BasisFamily::symmetric(n, k, Internal::linear(1));
      const OracleComponent o = build_symmetric_power(n, k, Internal::linear(1));
      Rng rng(10 * n + k);
      for (int t = 0; t < 30; ++t) {
        const CellSpec s = random_spec(rng, uniform_index(rng, 5), 1);
        const State x = scalar_state(sample_dyadic(rng, 1.0));
        CHECK(scaled_diff(oracle_from_basis(bf, s, x), o.eval(x, s)) <= 1e-9);
        CHECK(scaled_diff(BasisFamily::from_coupling(CouplingFamily::from_oracle(o)).eval(s, x), bf.eval(s, x)) <= 1e-9);
      }
    }
  const BasisFamily empty(1, 2, MultiIndex{2, 2}, Internal::linear(3));
  Rng rng(1);
  CHECK(at(oracle_from_basis(empty, random_spec(rng, 3, 2), scalar_state(1))) == 3.0);
}

TEST_CASE("direct formula") {
  const OracleComponent p2 = build_polynomial_single({{2, 1}});
  const CouplingFamily cf = CouplingFamily::from_oracle(p2);
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const CellSpec s = random_spec(rng, uniform_index(rng, 3), 1);
    CHECK(scaled_diff(basis_from_oracle_direct(p2, {2}, s, x0), basis_from_coupling(cf, s, x0)) <= 1e-9);
    CHECK(scaled_diff(basis_from_oracle_direct(p2, {4}, s, x0), basis_from_coupling(cf, s, x0)) <= 1e-9);
  }
  const OracleComponent c = build_polynomial_single({}, Internal::linear(2));
  CHECK(at(basis_from_oracle_direct(c, {0}, {}, scalar_state(1.5))) == 3.0);
  CHECK_THROWS_AS(basis_from_oracle_direct(p2, {1}, CellSpec{in(1, 1, 1), in(1, 1, 1)}, x0), DomainError);
}

TEST_CASE("direct formula with two valid bounds on random families") {
  Rng rng(300);
  for (int fam_i = 0; fam_i < 3; ++fam_i) {
    const OracleComponent o = random_family(rng);
    const CouplingFamily cf = CouplingFamily::from_oracle(o);
    for (int t = 0; t < 40; ++t) {
      const CellSpec s = random_spec(rng, uniform_index(rng, 4), 2);
      const State x = scalar_state(sample_dyadic(rng, 1.0));
      const Value ref = basis_from_coupling(cf, s, x);
      CHECK(scaled_diff(basis_from_oracle_direct(o, {4, 4}, s, x), ref) <= 1e-9);
      CHECK(scaled_diff(basis_from_oracle_direct(o, {5, 4}, s, x), ref) <= 1e-9);
    }
  }
}

TEST_CASE("cross-check flags a bound that is too small") {
  const OracleComponent p3 = build_polynomial_single({{3, 1}});
  const CellSpec s{in(1, 1, 0.5), in(1, 0.75, 1)};
  CHECK_FALSE(basis_from_oracle_direct_checked(p3, {2}, s, x0).agrees);
  const DirectCheck ok = basis_from_oracle_direct_checked(p3, {3}, s, x0);
  CHECK(ok.agrees);
  CHECK(ok.max_discrepancy <= 1e-9);
}

TEST_CASE("basis family check") {
  CheckOptions opts;
  opts.trials = 2000;
  for (unsigned n = 1; n <= 4; ++n) {
    const auto r = basis_family_check(BasisFamily::polynomial(build_polynomial_single({{n, 1}})), additive(1), opts);
    CHECK(r.ok());
  }
  BasisFamily bad(1, 1, MultiIndex{1});
  bad.set_component({1}, BasisComponent{BasisComponent::Form::Generic, 0, 0, [](const State&, std::span<const Input> s) {
                                          const double y = std::get<double>(s[0].weight) * s[0].state[0];
                                          return Value(Value::Constant(1, y * y));
                                        }});
  const auto r = basis_family_check(bad, additive(1), opts);
  CHECK_FALSE(r.additivity.ok);
  CHECK(r.zero_kill.ok);
  CHECK(r.permutation.ok);
  bool witnessed = false;
  for (const auto& c : r.counterexamples) witnessed |= c.property == "additivity";
  CHECK(witnessed);
}

TEST_CASE("zero weight kills basis components") {
  Rng rng(40);
  const BasisFamily bf = BasisFamily::polynomial(random_family(rng));
  for (int t = 0; t < 100; ++t) {
    CellSpec s = random_spec(rng, 1 + uniform_index(rng, 5), 2);
    s[uniform_index(rng, s.size())].weight = 0.0;
    CHECK(bf.eval(s, x0).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("coupling and basis agree at locally maximal orders") {
  Rng rng(50);
  for (int fam_i = 0; fam_i < 5; ++fam_i) {
    const OracleComponent o = random_family(rng);
    const CouplingFamily cf = CouplingFamily::from_oracle(o);
    const BasisFamily bf = BasisFamily::polynomial(o);
    for (const MultiIndex& k : locally_maximal_orders(cf)) {
      if (k.is_zero()) continue;
      for (int t = 0; t < 20; ++t) {
        CellSpec s;
        for (std::size_t j = 0; j < 2; ++j)
          for (unsigned r = 0; r < k[j]; ++r)
            s.push_back(in(static_cast<TypeIndex>(j + 1), sample_dyadic(rng, 1.0), sample_dyadic(rng, 1.0)));
        CHECK(scaled_diff(cf.eval(s, x0), bf.eval(s, x0)) <= 1e-9);
      }
    }
    CHECK(scaled_diff(cf.eval({}, scalar_state(2)), bf.eval({}, scalar_state(2))) == 0.0);
  }
}

TEST_CASE("basis components are linear in the oracle") {
  const OracleComponent f = build_polynomial_single({{2, 1}, {3, Rational(-1, 2)}});
  const OracleComponent g = build_symmetric_power(3, 1);
  const OracleComponent h = linear_combination(1.5, f, g);
  const CouplingFamily cf = CouplingFamily::from_oracle(f), cg = CouplingFamily::from_oracle(g),
                       ch = CouplingFamily::from_oracle(h);
  Rng rng(60);
  for (int t = 0; t < 100; ++t) {
    const CellSpec s = random_spec(rng, uniform_index(rng, 4), 1);
    const Value lhs = basis_from_coupling(ch, s, x0);
    const Value rhs = 1.5 * basis_from_coupling(cf, s, x0) + basis_from_coupling(cg, s, x0);
    CHECK(scaled_diff(lhs, rhs) <= 1e-9);
  }
}

TEST_CASE("merge expansions at multiplicity") {
  Rng rng(70);
  for (int fam_i = 0; fam_i < 3; ++fam_i) {
    const OracleComponent o = random_family(rng);
    const CouplingFamily cf = CouplingFamily::from_oracle(o);
    const BasisFamily bf = BasisFamily::polynomial(o);
    for (int t = 0; t < 20; ++t) {
      const TypeIndex j = static_cast<TypeIndex>(1 + uniform_index(rng, 2));
      const double w1 = sample_dyadic(rng, 1.0), w2 = sample_dyadic(rng, 1.0);
      const double x12 = sample_dyadic(rng, 1.0);
      const CellSpec sbar = random_spec(rng, uniform_index(rng, 2), 2);
      MultiIndex mbar = MultiIndex::zeros(sbar.size());
      for (std::size_t c = 0; c < sbar.size(); ++c) mbar[c] = static_cast<std::uint32_t>(uniform_index(rng, 3));
      const auto point = [&](std::vector<std::pair<double, unsigned>> front) {
        CellSpec s;
        std::vector<MultiIndex::value_type> m;
        for (auto [w, mult] : front) {
          s.push_back(in(j, w, x12));
          m.push_back(mult);
        }
        s.insert(s.end(), sbar.begin(), sbar.end());
        m.insert(m.end(), mbar.begin(), mbar.end());
        return MultiplicityPoint{s, MultiIndex(m), x0}.expanded();
      };
      for (unsigned m12 = 0; m12 <= 4; ++m12) {
        const Value lhs_b = bf.eval(point({{w1 + w2, m12}}), x0);
        Value rhs_b = Value::Zero(1);
        for (unsigned m1 = 0; m1 <= m12; ++m1)
          rhs_b += to_double(Rational(brute::choose(m12, m1))) * bf.eval(point({{w1, m1}, {w2, m12 - m1}}), x0);
        CHECK(scaled_diff(lhs_b, rhs_b) <= 1e-9);

        const Value lhs_c = cf.eval(point({{w1 + w2, m12}}), x0);
        Value rhs_c = Value::Zero(1);
        for (unsigned m1 = 0; m1 <= m12; ++m1)
          for (unsigned m2 = 0; m2 <= m12; ++m2) {
            if (m1 + m2 < m12) continue;
            const BigInt B = brute::fact(m12) /
                             (brute::fact(m12 - m1) * brute::fact(m12 - m2) * brute::fact(m1 + m2 - m12));
            rhs_c += to_double(Rational(B)) * cf.eval(point({{w1, m1}, {w2, m2}}), x0);
          }
        CHECK(scaled_diff(lhs_c, rhs_c) <= 1e-9);
      }
    }
  }
}

TEST_CASE("json round trip") {
  const BasisFamily bf = BasisFamily::symmetric(3, 2, Internal::linear(-1), 2, 1);
  const Json j = bf.to_json();
  const BasisFamily back = BasisFamily::parse(j);
  CHECK(back.to_json() == j);
  Rng rng(80);
  for (int t = 0; t < 20; ++t) {
    const CellSpec s = random_spec(rng, uniform_index(rng, 4), 2);
    CHECK(scaled_diff(back.eval(s, x0), bf.eval(s, x0)) == 0.0);
  }
  const BasisFamily poly = BasisFamily::polynomial(build_polynomial_single({{2, Rational(2, 3)}}));
  CHECK(poly.to_json()["components"][0]["coeff"] == "4/3");
  CHECK_THROWS_AS(BasisFamily::parse(Json::parse(R"({"type_index":1,"support_bound":[1],"components":[{"k":[2],"family":"monomial","coeff":"1"}]})")),
                  SpecError);
  CHECK_THROWS_AS(BasisFamily::parse(Json::parse(R"({"type_index":1,"support_bound":[2],"components":[{"k":[1],"family":"wavelet","coeff":"1"}]})")),
                  SpecError);
}

TEST_CASE("truncation sequences") {
  std::vector<ProbePoint> pts;
  Rng rng(90);
  while (pts.size() < 20) {
    CellSpec s = random_spec(rng, 1 + uniform_index(rng, 3), 1);
    double sum = 0.0;
    for (auto& e : s) {
      e.weight = 2.0 * std::get<double>(e.weight);
      sum += std::abs(std::get<double>(e.weight) * e.state[0]);
    }
    if (sum <= 2.0) pts.push_back({s, scalar_state(sample_dyadic(rng, 1.0))});
  }
  const auto limit_of = [](auto fn) {
    return [fn](const State& x, std::span<const Input> s) {
      double y = 0.0;
      for (const auto& e : s) y += std::get<double>(e.weight) * e.state[0];
      return Value(x + Value::Constant(1, fn(y)));
    };
  };
  const auto exp_rep = truncation_sequence([](unsigned N) { return exponential_truncation(N, Internal::linear(1)); },
                                           12, pts, limit_of([](double y) { return std::expm1(y); }));
  CHECK(exp_rep.final_limit_error() < 1e-6);
  for (const auto& row : exp_rep.limit_error) CHECK(row.front() >= row.back());

  const auto sin_rep = truncation_sequence([](unsigned N) { return sine_truncation(N, Internal::linear(1)); }, 13,
                                           pts, limit_of([](double y) { return std::sin(y); }));
  CHECK(sin_rep.final_limit_error() < 1e-6);

  const auto const_rep = truncation_sequence(
      [](unsigned) { return BasisFamily::polynomial(build_polynomial_single({{1, 1}, {2, 1}})); }, 5, pts);
  for (const auto& row : const_rep.successive)
    for (double d : row) CHECK(d == 0.0);
  CHECK(const_rep.to_json()["points"].size() == pts.size());
}
