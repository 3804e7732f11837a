#include "ccn/coupling.hpp"

#include <algorithm>
#include <map>

namespace ccn {

namespace {

void require_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap)
    throw SizeCapError(std::string(what) + ": neighborhood of size " + std::to_string(n) +
                       " exceeds cap " + std::to_string(cap));
}

}  // namespace

std::vector<Value> all_coupling_components(const OracleComponent& o, std::span<const Input> s,
                                           const State& x) {
  require_cap(s.size(), kExplicitCap, "coupling_eval_explicit");
  const std::uint64_t full = (std::uint64_t{1} << s.size());
  std::vector<Value> t(full);
  for (std::uint64_t mask = 0; mask < full; ++mask) t[mask] = o.eval(x, subset(s, mask));
  // Differencing one element at a time keeps exact cancellation when the oracle ignores it.
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t mask = 0; mask < full; ++mask)
      if (mask & bit) t[mask] -= t[mask ^ bit];
  }
  return t;
}

Value coupling_eval_explicit(const OracleComponent& o, std::span<const Input> s, const State& x) {
  return all_coupling_components(o, s, x).back();
}

Value coupling_eval_recursive(const OracleComponent& o, std::span<const Input> s, const State& x) {
  require_cap(s.size(), kRecursiveCap, "coupling_eval_recursive");
  const std::uint64_t full = (std::uint64_t{1} << s.size());
  std::vector<Value> comp(full);
  for (std::uint64_t mask = 0; mask < full; ++mask) {
    Value v = o.eval(x, subset(s, mask));
    if (mask != 0)
      for (std::uint64_t sub = (mask - 1) & mask;; sub = (sub - 1) & mask) {
        v -= comp[sub];
        if (sub == 0) break;
      }
    comp[mask] = std::move(v);
  }
  return comp.back();
}

Value coupling_eval_multiplicity(const OracleComponent& o, const MultiplicityPoint& p) {
  if (p.m.size() != p.s.size()) throw DimensionError("multiplicity tupleness differs from |s|");
  Value acc;
  const std::uint64_t total = norm(p.m);
  for (const MultiIndex& mbar : enumerate(p.m.size(), MultiIndex::zeros(p.m.size()), UpperBounded{p.m})) {
    BigInt c = 1;
    for (std::size_t i = 0; i < p.m.size(); ++i) c *= binomial(p.m[i], mbar[i]);
    const double coef = to_double(Rational(c) * sign_power(static_cast<long long>(total - norm(mbar))));
    Value term = coef * o.eval(p.x, expand(p.s, mbar));
    if (acc.size() == 0)
      acc = std::move(term);
    else
      acc += term;
  }
  return acc;
}

Value polynomial_coupling(const OracleComponent& o, std::span<const Input> s, const State& x) {
  const std::size_t T = o.num_types();
  const MultiIndex k = type_profile(s, T);
  if (k.is_zero()) return o.internal()(x);
  const Eigen::Index d = x.size();
  const MultiIndex gamma = *o.order_bound();
  // E[j][n] = sum over m >= 1 with |m| = n of prod_{c in s_j} t_c^{m_c}/m_c!
  std::vector<std::vector<Value>> E(T);
  for (std::size_t j = 0; j < T; ++j) {
    E[j].assign(gamma[j] + 1, Value::Zero(d));
    E[j][0].setOnes();
  }
  std::vector<double> inv_fact(1, 1.0);
  for (const Input& in : s) {
    const std::size_t j = in.type - 1;
    const double* w = std::get_if<double>(&in.weight);
    if (!w) throw DomainError("polynomial oracle requires additive_real weights, got " + describe(in.weight));
    if (in.state.size() != d) throw DimensionError("state dimension mismatch");
    const unsigned g = gamma[j];
    while (inv_fact.size() <= g) inv_fact.push_back(inv_fact.back() / static_cast<double>(inv_fact.size()));
    const Value t = *w * in.state;
    std::vector<Value> pw(g + 1, Value::Ones(d));
    for (unsigned m = 1; m <= g; ++m) pw[m] = pw[m - 1].cwiseProduct(t);
    std::vector<Value> next(g + 1, Value::Zero(d));
    for (unsigned n = 1; n <= g; ++n)
      for (unsigned m = 1; m <= n; ++m) next[n] += inv_fact[m] * E[j][n - m].cwiseProduct(pw[m]);
    E[j] = std::move(next);
  }
  Value out = Value::Zero(d);
  for (const auto& [n, a] : o.coeffs()) {
    Rational scale = a;
    for (auto v : n) scale *= Rational(factorial(v));
    Value term = Value::Constant(d, to_double(scale));
    for (std::size_t j = 0; j < T; ++j) term = term.cwiseProduct(E[j][n[j]]);
    out += term;
  }
  return out;
}

CouplingFamily CouplingFamily::from_oracle(const OracleComponent& o) {
  CouplingFamily f;
  f.target_ = o.target();
  f.num_types_ = o.num_types();
  f.source_ = std::make_shared<const OracleComponent>(o);
  f.bound_ = o.order_bound();
  f.name_ = o.name();
  if (o.structured()) {
    std::shared_ptr<const OracleComponent> src = f.source_;
    f.closed_ = [src](const State& x, std::span<const Input> s) { return polynomial_coupling(*src, s, x); };
  }
  return f;
}

CouplingFamily CouplingFamily::from_components(TypeIndex target, std::size_t num_types, ComponentFn fn,
                                               std::optional<MultiIndex> order_bound, std::string name) {
  if (order_bound && order_bound->size() != num_types)
    throw DimensionError("order bound tupleness differs from type count");
  CouplingFamily f;
  f.target_ = target;
  f.num_types_ = num_types;
  f.bound_ = std::move(order_bound);
  f.closed_ = std::move(fn);
  f.name_ = std::move(name);
  return f;
}

Value CouplingFamily::zero_value(const State& x) const {
  if (source_) return Value::Zero(source_->internal()(x).size());
  return Value::Zero(x.size());
}

Value CouplingFamily::eval(std::span<const Input> s, const State& x) const {
  const MultiIndex k = type_profile(s, num_types_);
  if (bound_ && !leq(k, *bound_)) return zero_value(x);
  if (closed_) return closed_(x, s);
  return coupling_eval_explicit(*source_, s, x);
}

Value CouplingFamily::eval_multi(const MultiplicityPoint& p) const {
  if (p.m.size() != p.s.size()) throw DimensionError("multiplicity tupleness differs from |s|");
  if (closed_ || !source_) return eval(p.expanded(), p.x);
  const MultiIndex k = type_profile(p.expanded(), num_types_);
  if (bound_ && !leq(k, *bound_)) return zero_value(p.x);
  return coupling_eval_multiplicity(*source_, p);
}

Value recompose(const CouplingFamily& fam, std::span<const Input> s, const State& x) {
  require_cap(s.size(), kRecursiveCap, "recompose");
  Value acc = fam.eval({}, x);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << s.size()); ++mask) acc += fam.eval(subset(s, mask), x);
  return acc;
}

Value recompose(const OracleComponent& o, std::span<const Input> s, const State& x) {
  return recompose(CouplingFamily::from_oracle(o), s, x);
}

Json CouplingCheckReport::to_json() const {
  Json ces = Json::array();
  for (const auto& c : counterexamples) ces.push_back(c.to_json());
  return Json{{"ok", ok()},
              {"permutation", permutation.to_json()},
              {"expansion", expansion.to_json()},
              {"zero_kill", zero_kill.to_json()},
              {"counterexamples", ces}};
}

namespace {

void record(CouplingCheckReport& rep, PropertyOutcome& out, const char* name, const CheckOptions& opts,
            std::size_t trial, const Value& lhs, const Value& rhs, Json input,
            std::map<std::string, int>& fails) {
  ++out.checked;
  const double d = scaled_diff(lhs, rhs);
  out.max_diff = std::max(out.max_diff, d);
  if (d <= opts.tol) return;
  out.ok = false;
  if (++fails[name] <= 3)
    rep.counterexamples.push_back(Counterexample{name, opts.seed, trial, std::move(input), lhs, rhs, d});
}

MultiIndex sample_profile_within(Rng& rng, const SampleSpace& space, unsigned per_type,
                                 const std::optional<MultiIndex>& bound) {
  MultiIndex k = MultiIndex::zeros(space.num_types);
  for (std::size_t j = 0; j < k.size(); ++j) {
    unsigned cap = per_type;
    if (bound) cap = std::min(cap, (*bound)[j] + 1);
    k[j] = static_cast<std::uint32_t>(uniform_index(rng, cap + 1));
  }
  return k;
}

}  // namespace

CouplingCheckReport coupling_family_check(const CouplingFamily& fam, const MonoidRegistry& registry,
                                          const CheckOptions& opts) {
  CouplingCheckReport rep;
  std::map<std::string, int> fails;
  Rng rng(opts.seed);
  const SampleSpace space{&registry, fam.target(), fam.num_types(), &opts};
  const unsigned per_type = std::max(1U, std::min(opts.max_per_type, fam.num_types() > 2 ? 2U : 3U));
  const auto point = [](const State& x, const CellSpec& s) {
    return Json{{"x", state_to_json(x)}, {"s", cellspec_to_json(s)}};
  };
  for (std::size_t t = 0; t < opts.trials; ++t) {
    const State x = space.state(rng, fam.target());

    const CellSpec s = space.cellspec(rng, sample_profile_within(rng, space, per_type, fam.order_bound()));
    CellSpec perm = s;
    shuffle(rng, perm);
    const Value base = fam.eval(s, x);
    record(rep, rep.permutation, "permutation", opts, t, fam.eval(perm, x), base, point(x, perm), fails);

    // Three-term expansion around k = K(s0) + 1_j.
    const auto j = static_cast<TypeIndex>(1 + uniform_index(rng, fam.num_types()));
    std::optional<MultiIndex> below = fam.order_bound();
    if (below && (*below)[j - 1] > 0) --(*below)[j - 1];
    const CellSpec s0 = space.cellspec(rng, sample_profile_within(rng, space, per_type - 1, below));
    const WeightMonoid& m = registry.at(fam.target(), j);
    Weight w1 = m.sample(rng), w2 = m.sample(rng);
    for (int tries = 0; tries < 16 && m.is_zero(m.combine(w1, w2)); ++tries) w2 = m.sample(rng);
    const State x12 = space.state(rng, j);
    const auto with = [&](std::initializer_list<Input> front) {
      CellSpec out(front);
      out.insert(out.end(), s0.begin(), s0.end());
      return out;
    };
    const CellSpec merged = with({Input{j, m.combine(w1, w2), x12}});
    const Value lhs = fam.eval(merged, x);
    const Value rhs = fam.eval(with({Input{j, w1, x12}}), x) + fam.eval(with({Input{j, w2, x12}}), x) +
                      fam.eval(with({Input{j, w1, x12}, Input{j, w2, x12}}), x);
    record(rep, rep.expansion, "expansion", opts, t, lhs, rhs,
           Json{{"x", state_to_json(x)}, {"merged", cellspec_to_json(merged)},
                {"w1", weight_to_json(w1)}, {"w2", weight_to_json(w2)}},
           fails);

    CellSpec z = s;
    if (z.empty()) z.push_back(space.input(rng, static_cast<TypeIndex>(1 + uniform_index(rng, fam.num_types()))));
    const std::size_t c = uniform_index(rng, z.size());
    z[c].weight = registry.at(fam.target(), z[c].type).zero();
    const Value zv = fam.eval(z, x);
    record(rep, rep.zero_kill, "zero_kill", opts, t, zv, Value::Zero(zv.size()), point(x, z), fails);
  }
  return rep;
}

std::string CouplingOrder::label() const {
  switch (kind) {
    case Kind::Finite:
      return gamma == 0 ? "uncoupled" : gamma == 1 ? "additive" : "finite";
    case Kind::InfiniteEvidence:
      return "infinite_evidence";
    case Kind::Unknown:
      return "unknown";
  }
  return "unknown";
}

Json CouplingOrder::to_json() const {
  Json j{{"kind", label()}};
  if (kind == Kind::Finite)
    j["gamma"] = gamma;
  else
    j["highest_nonzero_probed"] = highest_nonzero;
  return j;
}

namespace {

bool probe_nonzero(const CouplingFamily& fam, const MultiIndex& k, const MonoidRegistry& registry,
                   const ProbeOptions& po, Rng& rng) {
  CheckOptions co;
  co.state_dims = po.state_dims;
  const SampleSpace space{&registry, fam.target(), fam.num_types(), &co};
  for (unsigned i = 0; i < po.samples; ++i) {
    const Value v = fam.eval(space.cellspec(rng, k), space.state(rng, fam.target()));
    if (v.size() > 0 && v.cwiseAbs().maxCoeff() > po.tol) return true;
  }
  return false;
}

std::set<MultiIndex> probed_support(const CouplingFamily& fam, const MonoidRegistry& registry,
                                    const ProbeOptions& po) {
  Rng rng(po.seed);
  std::set<MultiIndex> support;
  const MultiIndex& bound = *fam.order_bound();
  for (const MultiIndex& k : enumerate(bound.size(), MultiIndex::zeros(bound.size()), UpperBounded{bound}))
    if (probe_nonzero(fam, k, registry, po, rng)) support.insert(k);
  return support;
}

std::set<MultiIndex> structured_support(const OracleComponent& o) {
  std::set<MultiIndex> support;
  for (const auto& [n, a] : o.coeffs()) support.insert(n);
  if (!o.internal().is_zero()) support.insert(MultiIndex::zeros(o.num_types()));
  return support;
}

}  // namespace

CouplingOrder coupling_order(const CouplingFamily& fam, TypeIndex j, const MonoidRegistry* registry,
                             const ProbeOptions& opts) {
  if (j < 1 || j > fam.num_types()) throw DomainError("coupling_order: type out of range");
  CouplingOrder out;
  if (fam.source() && fam.source()->structured()) {
    out.kind = CouplingOrder::Kind::Finite;
    for (const auto& [n, a] : fam.source()->coeffs()) out.gamma = std::max(out.gamma, n[j - 1]);
    out.highest_nonzero = out.gamma;
    return out;
  }
  if (!registry) throw DomainError("coupling_order: probing a black box needs a monoid registry");
  if (fam.order_bound()) {
    out.kind = CouplingOrder::Kind::Finite;
    for (const MultiIndex& k : probed_support(fam, *registry, opts)) out.gamma = std::max(out.gamma, k[j - 1]);
    out.highest_nonzero = out.gamma;
    return out;
  }
  Rng rng(opts.seed);
  for (unsigned level = 1; level <= opts.max_level; ++level)
    if (probe_nonzero(fam, level * MultiIndex::unit(fam.num_types(), j - 1), *registry, opts, rng))
      out.highest_nonzero = level;
  out.kind = out.highest_nonzero == opts.max_level ? CouplingOrder::Kind::InfiniteEvidence
                                                   : CouplingOrder::Kind::Unknown;
  return out;
}

std::vector<MultiIndex> maximal_within_patterns(const std::set<MultiIndex>& support) {
  std::vector<MultiIndex> out;
  for (const MultiIndex& k : support) {
    bool dominated = false;
    for (const MultiIndex& other : support)
      if (other != k && leq(k, other) && k.same_support(other)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(k);
  }
  return out;
}

std::vector<MultiIndex> locally_maximal_orders(const CouplingFamily& fam, const MonoidRegistry* registry,
                                               const ProbeOptions& opts) {
  if (fam.source() && fam.source()->structured())
    return maximal_within_patterns(structured_support(*fam.source()));
  if (!fam.order_bound()) throw DomainError("locally_maximal_orders: family has no order bound");
  if (!registry) throw DomainError("locally_maximal_orders: probing needs a monoid registry");
  return maximal_within_patterns(probed_support(fam, *registry, opts));
}

}  // namespace ccn
