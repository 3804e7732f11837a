#include "ccn/basis.hpp"

#include <algorithm>

#include "ccn/stirling.hpp"

namespace ccn {

namespace {

Value elementary_symmetric(std::span<const Input> s, unsigned degree, Eigen::Index d) {
  std::vector<Value> e(degree + 1, Value::Zero(d));
  e[0].setOnes();
  for (const Input& in : s) {
    if (in.state.size() != d) throw DimensionError("state dimension mismatch");
    for (unsigned r = degree; r >= 1; --r) e[r] += e[r - 1].cwiseProduct(in.state);
  }
  return e[degree];
}

double real_weight(const Weight& w) {
  const double* v = std::get_if<double>(&w);
  if (!v) throw DomainError("structured basis component requires additive_real weights, got " + describe(w));
  return *v;
}

// Calls f(m) for every m in [lower, upper] with K(m s) <= K entrywise.
template <class F>
void for_each_multiplicity(std::span<const Input> s, const MultiIndex& K, const MultiIndex& lower,
                           std::optional<MultiIndex> upper, F&& f) {
  const std::size_t T = K.size();
  type_profile(s, T);
  MultiIndex up = MultiIndex::zeros(s.size());
  for (std::size_t c = 0; c < s.size(); ++c) {
    up[c] = K[s[c].type - 1];
    if (upper) up[c] = std::min(up[c], (*upper)[c]);
  }
  IndexBox box{lower, up, 0, norm(K)};
  for (const MultiIndex& m : MultiIndexStream(box)) {
    MultiIndex k = MultiIndex::zeros(T);
    bool ok = true;
    for (std::size_t c = 0; c < s.size() && ok; ++c) ok = (k[s[c].type - 1] += m[c]) <= K[s[c].type - 1];
    if (ok) f(m);
  }
}

void accumulate(Value& acc, const Rational& coef, const Value& v) {
  if (coef == 0) return;
  if (acc.size() == 0)
    acc = to_double(coef) * v;
  else
    acc += to_double(coef) * v;
}

Value or_zero(Value v, const State& x) {
  if (v.size() == 0) return Value::Zero(x.size());
  return v;
}

}  // namespace

Value BasisComponent::eval(const State& x, std::span<const Input> s) const {
  switch (form) {
    case Form::Monomial: {
      Value out = Value::Constant(x.size(), to_double(coeff));
      for (const Input& in : s) {
        if (in.state.size() != x.size()) throw DimensionError("state dimension mismatch");
        out = out.cwiseProduct(real_weight(in.weight) * in.state);
      }
      return out;
    }
    case Form::Symmetric: {
      double wprod = 1.0;
      for (const Input& in : s) wprod *= real_weight(in.weight);
      return (to_double(coeff) * wprod) * elementary_symmetric(s, x_degree, x.size());
    }
    case Form::Generic:
      return generic(x, s);
  }
  return Value::Zero(x.size());
}

BasisFamily::BasisFamily(TypeIndex target, std::size_t num_types, MultiIndex support_bound, Internal f0)
    : target_(target), num_types_(num_types), bound_(std::move(support_bound)), f0_(std::move(f0)) {
  if (bound_.size() != num_types_) throw DimensionError("support bound tupleness differs from type count");
  if (target_ < 1 || target_ > num_types_) throw DomainError("target type out of range");
}

BasisFamily BasisFamily::polynomial(const OracleComponent& o) {
  BasisFamily bf(o.target(), o.num_types(), *o.order_bound(), o.internal());
  for (const auto& [n, a] : o.coeffs()) {
    Rational c = a;
    for (auto v : n) c *= Rational(factorial(v));
    bf.set_component(n, BasisComponent{BasisComponent::Form::Monomial, c, 0, nullptr});
  }
  return bf;
}

BasisFamily BasisFamily::symmetric(unsigned n, unsigned k, Internal f0, std::size_t num_types, TypeIndex target) {
  if (k == 0 || k > n) throw DomainError("symmetric basis needs n >= k > 0");
  BasisFamily bf(target, num_types, static_cast<MultiIndex::value_type>(n) * MultiIndex::ones(num_types),
                 std::move(f0));
  const Rational c = Rational(factorial(n - k) * factorial(k));
  for (const MultiIndex& key : enumerate(num_types, MultiIndex::zeros(num_types), NormEquals{n}))
    bf.set_component(key, BasisComponent{BasisComponent::Form::Symmetric, c, k, nullptr});
  return bf;
}

BasisFamily BasisFamily::from_coupling(const CouplingFamily& fam) {
  if (!fam.order_bound()) throw DomainError("basis family needs a coupling family with an order bound");
  const OracleComponent* src = fam.source();
  Internal f0 = src ? src->internal()
                    : Internal::custom([fam](const State& x) { return fam.eval({}, x); }, "coupling_f0");
  BasisFamily bf(fam.target(), fam.num_types(), *fam.order_bound(), std::move(f0));
  bf.fallback_ = [fam](const State& x, std::span<const Input> s) { return basis_from_coupling(fam, s, x); };
  return bf;
}

void BasisFamily::set_component(const MultiIndex& k, BasisComponent c) {
  if (k.size() != num_types_) throw DimensionError("component key tupleness differs from type count");
  if (k.is_zero()) throw DomainError("the k = 0 component is the internal dynamics");
  if (!leq(k, bound_)) throw DomainError("component " + k.to_string() + " outside support bound " + bound_.to_string());
  comps_[k] = std::move(c);
}

std::vector<MultiIndex> BasisFamily::support() const {
  std::vector<MultiIndex> out;
  if (fallback_) {
    for (const MultiIndex& k : enumerate(num_types_, MultiIndex::zeros(num_types_), UpperBounded{bound_}))
      if (!k.is_zero()) out.push_back(k);
    return out;
  }
  for (const auto& [k, c] : comps_)
    if (c.form == BasisComponent::Form::Generic || c.coeff != 0) out.push_back(k);
  return out;
}

Value BasisFamily::eval(std::span<const Input> s, const State& x) const {
  const MultiIndex k = type_profile(s, num_types_);
  if (k.is_zero()) return f0_(x);
  if (!leq(k, bound_)) return Value::Zero(f0_(x).size());
  if (auto it = comps_.find(k); it != comps_.end()) return it->second.eval(x, s);
  if (fallback_) return fallback_(x, s);
  return Value::Zero(f0_(x).size());
}

namespace {

std::optional<MultiIndex> parse_index(const Json& j) {
  if (!j.is_array()) return std::nullopt;
  std::vector<std::uint32_t> v;
  for (const auto& e : j) {
    if (!e.is_number_integer() || e.get<long long>() < 0) return std::nullopt;
    v.push_back(e.get<std::uint32_t>());
  }
  return MultiIndex(std::move(v));
}

Json index_json(const MultiIndex& m) { return Json(m.vec()); }

}  // namespace

BasisFamily BasisFamily::parse(const Json& doc) {
  if (!doc.is_object()) throw SpecError("basis family must be an object");
  if (!doc.contains("type_index") || !doc.at("type_index").is_number_integer() ||
      doc.at("type_index").get<long long>() < 1)
    throw SpecError("basis family needs a positive integer type_index");
  const auto target = doc.at("type_index").get<TypeIndex>();
  if (!doc.contains("support_bound")) throw SpecError("basis family needs support_bound");
  const auto bound = parse_index(doc.at("support_bound"));
  if (!bound || bound->empty()) throw SpecError("support_bound must be a nonempty array of nonnegative integers");
  Internal f0 = Internal::zero();
  if (doc.contains("f0")) {
    if (!doc.at("f0").is_string()) throw SpecError("f0 must be a string");
    f0 = Internal::parse(doc.at("f0").get<std::string>());
  }
  if (target > bound->size()) throw SpecError("type_index exceeds the number of types");
  BasisFamily bf(target, bound->size(), *bound, std::move(f0));
  if (!doc.contains("components") || !doc.at("components").is_array())
    throw SpecError("basis family needs a components array");
  for (const auto& c : doc.at("components")) {
    const auto k = c.contains("k") ? parse_index(c.at("k")) : std::nullopt;
    if (!k) throw SpecError("component needs k");
    if (!c.contains("family") || !c.at("family").is_string()) throw SpecError("component needs family");
    if (!c.contains("coeff") || !c.at("coeff").is_string()) throw SpecError("component coeff must be a \"p/q\" string");
    const std::string fam = c.at("family").get<std::string>();
    BasisComponent comp;
    comp.coeff = parse_rational(c.at("coeff").get<std::string>());
    if (fam == "monomial") {
      comp.form = BasisComponent::Form::Monomial;
    } else if (fam == "symmetric") {
      comp.form = BasisComponent::Form::Symmetric;
      if (!c.contains("x_degree") || !c.at("x_degree").is_number_integer() || c.at("x_degree").get<long long>() < 0)
        throw SpecError("symmetric component needs x_degree");
      comp.x_degree = c.at("x_degree").get<unsigned>();
      if (comp.x_degree > norm(*k)) throw SpecError("x_degree exceeds |k|");
    } else {
      throw SpecError("unknown basis component family '" + fam + "'");
    }
    try {
      bf.set_component(*k, std::move(comp));
    } catch (const std::exception& e) {
      throw SpecError(e.what());
    }
  }
  return bf;
}

Json BasisFamily::to_json() const {
  if (fallback_ || !f0_.serializable()) throw DomainError("generic basis families are not serializable");
  Json comps = Json::array();
  for (const auto& [k, c] : comps_) {
    if (c.form == BasisComponent::Form::Generic) throw DomainError("generic basis components are not serializable");
    Json e{{"k", index_json(k)},
           {"family", c.form == BasisComponent::Form::Monomial ? "monomial" : "symmetric"},
           {"coeff", to_string(c.coeff)}};
    if (c.form == BasisComponent::Form::Symmetric) e["x_degree"] = c.x_degree;
    comps.push_back(std::move(e));
  }
  return Json{{"type_index", target_}, {"support_bound", index_json(bound_)}, {"f0", f0_.text()}, {"components", comps}};
}

Value basis_from_coupling(const CouplingFamily& fam, std::span<const Input> s, const State& x) {
  if (!fam.order_bound()) throw DomainError("basis_from_coupling: family has no order bound");
  Value acc;
  for_each_multiplicity(s, *fam.order_bound(), MultiIndex::ones(s.size()), std::nullopt, [&](const MultiIndex& m) {
    BigInt den = 1;
    for (auto v : m) den *= v;
    const Rational coef = sign_power(static_cast<long long>(norm(m) - s.size())) * Rational(1, den);
    CellSpec base(s.begin(), s.end());
    accumulate(acc, coef, fam.eval_multi(MultiplicityPoint{std::move(base), m, x}));
  });
  return or_zero(std::move(acc), x);
}

Value coupling_from_basis(const BasisFamily& bf, std::span<const Input> s, const State& x) {
  Value acc;
  for_each_multiplicity(s, bf.support_bound(), MultiIndex::ones(s.size()), std::nullopt, [&](const MultiIndex& m) {
    BigInt den = 1;
    for (auto v : m) den *= factorial(v);
    accumulate(acc, Rational(1, den), bf.eval(expand(s, m), x));
  });
  return or_zero(std::move(acc), x);
}

namespace {

// Multiplicities M >= m; entries with m_c = 0 stay 0.
MultiIndex pinned_upper(const MultiIndex& m, const MultiIndex& K, std::span<const Input> s) {
  MultiIndex up = MultiIndex::zeros(m.size());
  for (std::size_t c = 0; c < m.size(); ++c) up[c] = m[c] == 0 ? 0 : K[s[c].type - 1];
  return up;
}

}  // namespace

Value coupling_from_basis_multi(const BasisFamily& bf, const MultiplicityPoint& p) {
  if (p.m.size() != p.s.size()) throw DimensionError("multiplicity tupleness differs from |s|");
  Value acc;
  const MultiIndex& K = bf.support_bound();
  for_each_multiplicity(p.s, K, p.m, pinned_upper(p.m, K, p.s), [&](const MultiIndex& M) {
    Rational coef = 1;
    for (std::size_t c = 0; c < M.size(); ++c)
      coef *= Rational(factorial(p.m[c]) * stirling2(M[c], p.m[c]), factorial(M[c]));
    accumulate(acc, coef, bf.eval(expand(p.s, M), p.x));
  });
  return or_zero(std::move(acc), p.x);
}

Value basis_from_coupling_multi(const CouplingFamily& fam, const MultiplicityPoint& p) {
  if (!fam.order_bound()) throw DomainError("basis_from_coupling_multi: family has no order bound");
  if (p.m.size() != p.s.size()) throw DimensionError("multiplicity tupleness differs from |s|");
  Value acc;
  const MultiIndex& K = *fam.order_bound();
  for_each_multiplicity(p.s, K, p.m, pinned_upper(p.m, K, p.s), [&](const MultiIndex& M) {
    Rational coef = sign_power(static_cast<long long>(norm(M) - norm(p.m)));
    for (std::size_t c = 0; c < M.size(); ++c)
      coef *= Rational(factorial(p.m[c]) * stirling1(M[c], p.m[c]), factorial(M[c]));
    accumulate(acc, coef, fam.eval_multi(MultiplicityPoint{p.s, M, p.x}));
  });
  return or_zero(std::move(acc), p.x);
}

Value oracle_from_basis(const BasisFamily& bf, std::span<const Input> s, const State& x) {
  Value acc;
  for_each_multiplicity(s, bf.support_bound(), MultiIndex::zeros(s.size()), std::nullopt, [&](const MultiIndex& m) {
    BigInt den = 1;
    for (auto v : m) den *= factorial(v);
    accumulate(acc, Rational(1, den), bf.eval(expand(s, m), x));
  });
  return or_zero(std::move(acc), x);
}

CouplingFamily coupling_family_from_basis(const BasisFamily& bf) {
  return CouplingFamily::from_components(
      bf.target(), bf.num_types(),
      [bf](const State& x, std::span<const Input> s) { return coupling_from_basis(bf, s, x); },
      bf.support_bound(), "from_basis");
}

Value basis_from_oracle_direct(const OracleComponent& o, const MultiIndex& K, std::span<const Input> s,
                               const State& x) {
  const std::size_t T = o.num_types();
  if (K.size() != T) throw DimensionError("bound tupleness differs from type count");
  const MultiIndex ks = type_profile(s, T);
  if (!leq(ks, K)) throw DomainError("K(s) = " + ks.to_string() + " is not within the bound " + K.to_string());
  if (s.size() > kExplicitCap) throw SizeCapError("basis_from_oracle_direct: neighborhood too large");
  Value acc;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s.size()); ++mask) {
    const CellSpec sbar = subset(s, mask);
    // r_j = |s_j \ sbar_j|
    MultiIndex r = ks - type_profile(sbar, T);
    for_each_multiplicity(sbar, K, MultiIndex::ones(sbar.size()), std::nullopt, [&](const MultiIndex& M) {
      MultiIndex Mj = MultiIndex::zeros(T);
      BigInt den = 1;
      for (std::size_t c = 0; c < M.size(); ++c) {
        Mj[sbar[c].type - 1] += M[c];
        den *= M[c];
      }
      Rational coef = sign_power(static_cast<long long>(s.size() + norm(M))) * Rational(1, den);
      for (std::size_t j = 0; j < T; ++j) coef *= coefficient_C(K[j], Mj[j], r[j]);
      accumulate(acc, coef, o.eval(x, expand(sbar, M)));
    });
  }
  return or_zero(std::move(acc), x);
}

DirectCheck basis_from_oracle_direct_checked(const OracleComponent& o, const MultiIndex& K,
                                             std::span<const Input> s, const State& x, double tol) {
  DirectCheck out{basis_from_oracle_direct(o, K, s, x), true, 0.0};
  for (std::size_t j = 0; j < K.size(); ++j) {
    const Value alt = basis_from_oracle_direct(o, K + MultiIndex::unit(K.size(), j), s, x);
    out.max_discrepancy = std::max(out.max_discrepancy, scaled_diff(out.value, alt));
  }
  out.agrees = out.max_discrepancy <= tol;
  return out;
}

Json BasisCheckReport::to_json() const {
  Json ces = Json::array();
  for (const auto& c : counterexamples) ces.push_back(c.to_json());
  return Json{{"ok", ok()},
              {"permutation", permutation.to_json()},
              {"additivity", additivity.to_json()},
              {"zero_kill", zero_kill.to_json()},
              {"counterexamples", ces}};
}

BasisCheckReport basis_family_check(const BasisFamily& bf, const MonoidRegistry& registry,
                                    const CheckOptions& opts) {
  BasisCheckReport rep;
  std::map<std::string, int> fails;
  const auto record = [&](PropertyOutcome& out, const char* name, std::size_t trial, const Value& lhs,
                          const Value& rhs, Json input) {
    ++out.checked;
    const double d = scaled_diff(lhs, rhs);
    out.max_diff = std::max(out.max_diff, d);
    if (d <= opts.tol) return;
    out.ok = false;
    if (++fails[name] <= 3)
      rep.counterexamples.push_back(Counterexample{name, opts.seed, trial, std::move(input), lhs, rhs, d});
  };
  const std::vector<MultiIndex> keys = bf.support();
  if (keys.empty()) return rep;
  Rng rng(opts.seed);
  const SampleSpace space{&registry, bf.target(), bf.num_types(), &opts};
  for (std::size_t t = 0; t < opts.trials; ++t) {
    const MultiIndex& k = keys[uniform_index(rng, keys.size())];
    const CellSpec s = space.cellspec(rng, k);
    const State x = space.state(rng, bf.target());
    const auto point = [&](const CellSpec& v) { return Json{{"x", state_to_json(x)}, {"s", cellspec_to_json(v)}}; };
    const Value base = bf.eval(s, x);

    CellSpec perm = s;
    shuffle(rng, perm);
    record(rep.permutation, "permutation", t, bf.eval(perm, x), base, point(perm));

    const std::size_t c = uniform_index(rng, s.size());
    const WeightMonoid& m = registry.at(bf.target(), s[c].type);
    const Weight w1 = s[c].weight;
    Weight w2 = m.sample(rng);
    for (int tries = 0; tries < 16 && m.is_zero(m.combine(w1, w2)); ++tries) w2 = m.sample(rng);
    CellSpec merged = s, second = s;
    merged[c].weight = m.combine(w1, w2);
    second[c].weight = w2;
    record(rep.additivity, "additivity", t, bf.eval(merged, x), base + bf.eval(second, x), point(merged));

    CellSpec z = s;
    z[c].weight = m.zero();
    const Value zv = bf.eval(z, x);
    record(rep.zero_kill, "zero_kill", t, zv, Value::Zero(zv.size()), point(z));
  }
  return rep;
}

double TruncationReport::final_limit_error() const {
  double e = 0.0;
  for (const auto& row : limit_error)
    if (!row.empty()) e = std::max(e, row.back());
  return e;
}

Json TruncationReport::to_json() const {
  Json pts = Json::array();
  for (std::size_t p = 0; p < values.size(); ++p) {
    Json vals = Json::array();
    for (const Value& v : values[p]) vals.push_back(state_to_json(v));
    Json entry{{"values", vals}, {"successive", successive[p]}};
    if (p < limit_error.size()) entry["limit_error"] = limit_error[p];
    pts.push_back(std::move(entry));
  }
  return Json{{"points", pts}, {"final_limit_error", final_limit_error()}};
}

TruncationReport truncation_sequence(const FamilyGenerator& gen, unsigned n_max,
                                     const std::vector<ProbePoint>& points, const LimitFn& limit) {
  TruncationReport rep;
  rep.values.assign(points.size(), {});
  rep.successive.assign(points.size(), {});
  if (limit) rep.limit_error.assign(points.size(), {});
  std::vector<Value> limits;
  if (limit)
    for (const auto& p : points) limits.push_back(limit(p.x, p.s));
  for (unsigned N = 1; N <= n_max; ++N) {
    const BasisFamily bf = gen(N);
    for (std::size_t p = 0; p < points.size(); ++p) {
      Value v = oracle_from_basis(bf, points[p].s, points[p].x);
      if (!rep.values[p].empty()) rep.successive[p].push_back(scaled_diff(v, rep.values[p].back()));
      if (limit) rep.limit_error[p].push_back(scaled_diff(v, limits[p]));
      rep.values[p].push_back(std::move(v));
    }
  }
  return rep;
}

namespace {

BasisFamily single_type_series(unsigned N, Internal f0, const std::function<Rational(unsigned)>& a) {
  PolynomialCoeffs c;
  for (unsigned n = 1; n <= N; ++n)
    if (Rational v = a(n); v != 0) c[MultiIndex{n}] = v;
  BasisFamily bf(1, 1, MultiIndex{N}, f0);
  for (const auto& [n, v] : c)
    bf.set_component(n, BasisComponent{BasisComponent::Form::Monomial, v * Rational(factorial(n[0])), 0, nullptr});
  return bf;
}

}  // namespace

BasisFamily exponential_truncation(unsigned N, Internal f0) {
  return single_type_series(N, std::move(f0), [](unsigned n) { return Rational(1, factorial(n)); });
}

BasisFamily sine_truncation(unsigned N, Internal f0) {
  return single_type_series(N, std::move(f0), [](unsigned n) {
    if (n % 2 == 0) return Rational(0);
    return sign_power((n - 1) / 2) * Rational(1, factorial(n));
  });
}

}  // namespace ccn
