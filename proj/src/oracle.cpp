#include "ccn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ccn {

Internal Internal::linear(double rate) {
  std::ostringstream os;
  os.precision(17);
  os << "linear:" << rate;
  return Internal(Kind::Linear, rate, nullptr, os.str());
}

Internal Internal::custom(Fn fn, std::string name) {
  return Internal(Kind::Custom, 0.0, std::move(fn), std::move(name));
}

Internal Internal::parse(const std::string& text) {
  if (text == "zero") return zero();
  if (text.rfind("linear:", 0) == 0) {
    const std::string num = text.substr(7);
    std::size_t used = 0;
    double rate = 0.0;
    try {
      rate = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != num.size() || !std::isfinite(rate))
      throw SpecError("bad internal dynamics '" + text + "'");
    return linear(rate);
  }
  throw SpecError("unknown internal dynamics '" + text + "'");
}

Value Internal::operator()(const State& x) const {
  switch (kind_) {
    case Kind::Zero:
      return Value::Zero(x.size());
    case Kind::Linear:
      return rate_ * x;
    case Kind::Custom:
      return fn_(x);
  }
  return Value::Zero(x.size());
}

OracleComponent OracleComponent::black_box(TypeIndex target, std::size_t num_types, Internal f0,
                                           BlackBoxFn body, std::string name,
                                           std::optional<MultiIndex> declared_bound) {
  if (target < 1 || target > num_types)
    throw DomainError("target type " + std::to_string(target) + " outside 1.." +
                      std::to_string(num_types));
  if (declared_bound && declared_bound->size() != num_types)
    throw DimensionError("declared bound tupleness differs from type count");
  OracleComponent o;
  o.target_ = target;
  o.num_types_ = num_types;
  o.f0_ = std::move(f0);
  o.body_ = std::move(body);
  o.name_ = std::move(name);
  o.declared_bound_ = std::move(declared_bound);
  return o;
}

OracleComponent OracleComponent::polynomial(TypeIndex target, std::size_t num_types,
                                            PolynomialCoeffs a, Internal f0) {
  if (target < 1 || target > num_types)
    throw DomainError("target type " + std::to_string(target) + " outside 1.." +
                      std::to_string(num_types));
  OracleComponent o;
  o.target_ = target;
  o.num_types_ = num_types;
  o.f0_ = std::move(f0);
  o.name_ = "polynomial";
  for (auto it = a.begin(); it != a.end();) {
    if (it->first.size() != num_types) throw DimensionError("coefficient key " + it->first.to_string() + " has wrong tupleness");
    if (it->first.is_zero()) throw DomainError("zero multi-index key belongs in f0");
    if (it->second == 0) {
      it = a.erase(it);
    } else {
      o.coeffs_d_.emplace_back(it->first, to_double(it->second));
      ++it;
    }
  }
  o.coeffs_ = std::make_shared<const PolynomialCoeffs>(std::move(a));
  return o;
}

const PolynomialCoeffs& OracleComponent::coeffs() const {
  if (!coeffs_) throw DomainError("oracle '" + name_ + "' is a black box");
  return *coeffs_;
}

std::optional<MultiIndex> OracleComponent::order_bound() const {
  if (!coeffs_) return declared_bound_;
  MultiIndex b = MultiIndex::zeros(num_types_);
  for (const auto& [n, a] : *coeffs_) b = entrywise_max(b, n);
  return b;
}

Value OracleComponent::eval(const State& x, std::span<const Input> s) const {
  for (const Input& in : s)
    if (in.type < 1 || in.type > num_types_)
      throw DimensionError("input type " + std::to_string(in.type) + " outside 1.." +
                           std::to_string(num_types_));
  if (coeffs_) return eval_polynomial(x, s);
  Value out = f0_(x);
  Value body = body_(x, s);
  if (body.size() != out.size())
    throw DimensionError("oracle '" + name_ + "': body dimension " + std::to_string(body.size()) +
                         " vs internal dimension " + std::to_string(out.size()));
  return out + body;
}

Value OracleComponent::eval_polynomial(const State& x, std::span<const Input> s) const {
  const Eigen::Index d = x.size();
  Value out = f0_(x);
  if (out.size() != d) throw DimensionError("internal dynamics changed the state dimension");
  if (coeffs_d_.empty()) return out;
  const MultiIndex used = *order_bound();
  // Per-type sums of w_c x_c, summed in sorted order so the result is exactly symmetric.
  std::vector<Value> z(num_types_, Value::Zero(d));
  std::vector<std::vector<double>> terms(num_types_ * static_cast<std::size_t>(d));
  for (const Input& in : s) {
    const std::size_t j = in.type - 1;
    if (used[j] == 0) continue;
    const double* w = std::get_if<double>(&in.weight);
    if (!w) throw DomainError("polynomial oracle requires additive_real weights, got " + describe(in.weight));
    if (in.state.size() != d)
      throw DimensionError("state dimension " + std::to_string(in.state.size()) + " vs " +
                           std::to_string(d));
    for (Eigen::Index i = 0; i < d; ++i) terms[j * d + i].push_back(*w * in.state[i]);
  }
  for (std::size_t j = 0; j < num_types_; ++j)
    for (Eigen::Index i = 0; i < d; ++i) {
      auto& t = terms[j * d + i];
      std::sort(t.begin(), t.end());
      double acc = 0.0;
      for (double v : t) acc += v;
      z[j][i] = acc;
    }
  for (const auto& [n, a] : coeffs_d_) {
    Value term = Value::Constant(d, a);
    for (std::size_t j = 0; j < num_types_; ++j)
      for (std::uint32_t p = 0; p < n[j]; ++p) term = term.cwiseProduct(z[j]);
    out += term;
  }
  return out;
}

OracleComponent build_polynomial_single(const std::map<unsigned, Rational>& a, Internal f0,
                                        TypeIndex target) {
  // One type: inputs and target share it.
  if (target != 1) throw DomainError("single-type polynomial needs target type 1");
  PolynomialCoeffs c;
  for (const auto& [deg, coef] : a) {
    if (deg == 0) throw DomainError("degree 0 belongs in f0");
    c[MultiIndex{deg}] = coef;
  }
  return OracleComponent::polynomial(1, 1, std::move(c), std::move(f0));
}

OracleComponent build_polynomial_multi(const PolynomialCoeffs& a, Internal f0, TypeIndex target) {
  std::size_t T = 0;
  for (const auto& [n, coef] : a) {
    if (T == 0) T = n.size();
    if (n.size() != T) throw DimensionError("coefficient keys disagree on tupleness");
  }
  if (T == 0) T = std::max<std::size_t>(1, target);
  return OracleComponent::polynomial(target, T, a, std::move(f0));
}

PolynomialCoeffs nested_coefficients(const std::vector<Rational>& outer,
                                     const std::vector<std::vector<Rational>>& inner) {
  const std::size_t T = inner.size();
  const unsigned N = static_cast<unsigned>(outer.size());
  if (T == 0) throw DomainError("nested oracle needs at least one inner polynomial");
  // b[j][m][n] = sum over l >= 1_m, l <= N_j, |l| = n of prod inner[j][l_i - 1]
  std::vector<std::vector<std::vector<Rational>>> b(T);
  MultiIndex cap = MultiIndex::zeros(T);
  for (std::size_t j = 0; j < T; ++j) {
    const unsigned Nj = static_cast<unsigned>(inner[j].size());
    cap[j] = N * Nj;
    b[j].assign(N + 1, std::vector<Rational>(cap[j] + 1, Rational(0)));
    b[j][0][0] = 1;
    for (unsigned m = 1; m <= N && Nj > 0; ++m)
      for (const MultiIndex& l : enumerate(m, MultiIndex::ones(m), UpperBounded{MultiIndex(std::vector<std::uint32_t>(m, Nj))})) {
        Rational p = 1;
        for (auto li : l) p *= inner[j][li - 1];
        b[j][m][norm(l)] += p;
      }
  }
  PolynomialCoeffs a;
  for (const MultiIndex& n : enumerate(T, MultiIndex::zeros(T), UpperBounded{cap})) {
    if (n.is_zero()) continue;
    Rational an = 0;
    for (unsigned d = 1; d <= N; ++d) {
      if (outer[d - 1] == 0) continue;
      Rational inner_sum = 0;
      for (const MultiIndex& m : enumerate(T, MultiIndex::zeros(T), NormEquals{d})) {
        Rational p = 1;
        for (std::size_t j = 0; j < T && p != 0; ++j) {
          if (m[j] > N) {
            p = 0;
            break;
          }
          p *= b[j][m[j]][n[j]] / Rational(factorial(m[j]));
        }
        inner_sum += p;
      }
      an += outer[d - 1] * Rational(factorial(d)) * inner_sum;
    }
    if (an != 0) a[n] = an;
  }
  return a;
}

OracleComponent build_nested(const std::vector<Rational>& outer,
                             const std::vector<std::vector<Rational>>& inner, Internal f0,
                             TypeIndex target) {
  OracleComponent o =
      OracleComponent::polynomial(target, inner.size(), nested_coefficients(outer, inner), std::move(f0));
  return o;
}

namespace {

Value weighted_sum(const State& x, std::span<const Input> s, bool with_state) {
  Value z = Value::Zero(x.size());
  for (const Input& in : s) {
    const double* w = std::get_if<double>(&in.weight);
    if (!w) throw DomainError("additive_real weight expected, got " + describe(in.weight));
    if (!with_state) {
      z.array() += *w;
      continue;
    }
    if (in.state.size() != x.size())
      throw DimensionError("state dimension " + std::to_string(in.state.size()) + " vs " +
                           std::to_string(x.size()));
    z += *w * in.state;
  }
  return z;
}

}  // namespace

OracleComponent build_exponential(std::optional<unsigned> truncation, Internal f0,
                                  std::size_t num_types, TypeIndex target) {
  if (truncation) {
    PolynomialCoeffs a;
    for (const MultiIndex& n :
         enumerate(num_types, MultiIndex::zeros(num_types), NormAtMost{*truncation})) {
      if (n.is_zero()) continue;
      BigInt den = 1;
      for (auto v : n) den *= factorial(v);
      a[n] = Rational(1, den);
    }
    return OracleComponent::polynomial(target, num_types, std::move(a), std::move(f0));
  }
  return OracleComponent::black_box(
      target, num_types, std::move(f0),
      [](const State& x, std::span<const Input> s) -> Value {
        return weighted_sum(x, s, true).array().exp() - 1.0;
      },
      "exponential");
}

OracleComponent build_symmetric_power(unsigned n, unsigned k, Internal f0, std::size_t num_types,
                                      TypeIndex target) {
  if (k == 0 || k > n) throw DomainError("symmetric power needs n >= k > 0");
  return OracleComponent::black_box(
      target, num_types, std::move(f0),
      [n, k](const State& x, std::span<const Input> s) -> Value {
        const Value sw = weighted_sum(x, s, false);
        const Value swx = weighted_sum(x, s, true);
        Value out = Value::Ones(x.size());
        for (unsigned i = 0; i < n - k; ++i) out = out.cwiseProduct(sw);
        for (unsigned i = 0; i < k; ++i) out = out.cwiseProduct(swx);
        return out;
      },
      "symmetric_power", static_cast<MultiIndex::value_type>(n) * MultiIndex::ones(num_types));
}

OracleComponent linear_combination(double alpha, const OracleComponent& f, const OracleComponent& g) {
  if (f.num_types() != g.num_types() || f.target() != g.target())
    throw DimensionError("linear_combination: type signatures differ");
  std::optional<MultiIndex> bound;
  if (f.order_bound() && g.order_bound()) bound = entrywise_max(*f.order_bound(), *g.order_bound());
  Internal f0 = Internal::custom(
      [alpha, f, g](const State& x) -> Value { return alpha * f.internal()(x) + g.internal()(x); },
      "combined");
  return OracleComponent::black_box(
      f.target(), f.num_types(), std::move(f0),
      [alpha, f, g](const State& x, std::span<const Input> s) -> Value {
        return alpha * (f.eval(x, s) - f.internal()(x)) + (g.eval(x, s) - g.internal()(x));
      },
      "linear_combination", bound);
}

const char* property_name(Property p) {
  switch (p) {
    case Property::Permutation:
      return "permutation";
    case Property::Merge:
      return "merge";
    case Property::ZeroRemoval:
      return "zero_removal";
  }
  return "?";
}

OracleComponent build_broken(Property p, Internal f0) {
  switch (p) {
    case Property::Permutation:
      return OracleComponent::black_box(
          1, 1, std::move(f0),
          [](const State& x, std::span<const Input> s) -> Value {
            Value out = weighted_sum(x, s, true);
            for (std::size_t c = 0; c < s.size(); ++c)
              for (std::size_t d = c + 1; d < s.size(); ++d) {
                const double wc = std::get<double>(s[c].weight), wd = std::get<double>(s[d].weight);
                out += (wc * wd) * s[c].state.cwiseProduct(s[d].state).cwiseProduct(s[d].state - s[c].state);
              }
            return out;
          },
          "broken_permutation");
    case Property::Merge:
      return OracleComponent::black_box(
          1, 1, std::move(f0),
          [](const State& x, std::span<const Input> s) -> Value {
            Value z = Value::Zero(x.size());
            for (const Input& in : s) {
              const auto* m = std::get_if<Multiset>(&in.weight);
              if (!m) throw DomainError("free_parallel weight expected");
              z += static_cast<double>(m->distinct()) * in.state.cwiseProduct(in.state);
            }
            return z.cwiseProduct(z).cwiseProduct(z);
          },
          "broken_merge");
    case Property::ZeroRemoval:
      return OracleComponent::black_box(
          1, 1, std::move(f0),
          [](const State& x, std::span<const Input> s) -> Value {
            Value out = weighted_sum(x, s, true);
            for (const Input& in : s)
              if (std::get<double>(in.weight) == 0.0) out += in.state.cwiseProduct(in.state);
            return out;
          },
          "broken_zero_removal");
  }
  throw DomainError("unknown property");
}

Json PropertyOutcome::to_json() const {
  return Json{{"ok", ok}, {"checked", checked}, {"max_diff", max_diff}};
}

Json Counterexample::to_json() const {
  return Json{{"property", property}, {"seed", seed},       {"trial", trial},
              {"input", input},       {"lhs", state_to_json(lhs)},
              {"rhs", state_to_json(rhs)}, {"diff", diff}};
}

Json AdmissibilityReport::to_json() const {
  Json ces = Json::array();
  for (const auto& c : counterexamples) ces.push_back(c.to_json());
  return Json{{"ok", ok()},
              {"permutation", permutation.to_json()},
              {"merge", merge.to_json()},
              {"zero_removal", zero_removal.to_json()},
              {"determinism", determinism.to_json()},
              {"counterexamples", ces}};
}

State sample_state(Rng& rng, std::size_t dim) {
  State x(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = sample_dyadic(rng, 1.0, 8);
  return x;
}

void shuffle(Rng& rng, CellSpec& s) {
  for (std::size_t i = s.size(); i > 1; --i) std::swap(s[i - 1], s[uniform_index(rng, i)]);
}

State SampleSpace::state(Rng& rng, TypeIndex t) const { return sample_state(rng, opts->dim(t)); }

Input SampleSpace::input(Rng& rng, TypeIndex t) const {
  Weight w = registry->at(target, t).sample(rng);
  return Input{t, std::move(w), state(rng, t)};
}

CellSpec SampleSpace::cellspec(Rng& rng, const MultiIndex& k) const {
  CellSpec s;
  for (std::size_t j = 0; j < k.size(); ++j)
    for (std::uint32_t r = 0; r < k[j]; ++r) s.push_back(input(rng, static_cast<TypeIndex>(j + 1)));
  shuffle(rng, s);
  return s;
}

MultiIndex SampleSpace::profile(Rng& rng, unsigned max_per_type) const {
  MultiIndex k = MultiIndex::zeros(num_types);
  for (std::size_t j = 0; j < num_types; ++j)
    k[j] = static_cast<std::uint32_t>(uniform_index(rng, max_per_type + 1));
  return k;
}

namespace {

class Recorder {
 public:
  Recorder(AdmissibilityReport& rep, const CheckOptions& opts) : rep_(rep), opts_(opts) {}

  void compare(PropertyOutcome& out, const char* name, std::size_t trial, const Value& lhs,
               const Value& rhs, Json input, bool exact = false) {
    ++out.checked;
    const double d = scaled_diff(lhs, rhs);
    out.max_diff = std::max(out.max_diff, d);
    const bool pass = exact ? (lhs.size() == rhs.size() && (lhs.array() == rhs.array()).all())
                            : d <= opts_.tol;
    if (pass) return;
    out.ok = false;
    if (++failures_[name] > 3) return;
    rep_.counterexamples.push_back(
        Counterexample{name, opts_.seed, trial, std::move(input), lhs, rhs, d});
  }

 private:
  AdmissibilityReport& rep_;
  const CheckOptions& opts_;
  std::map<std::string, int> failures_;
};

}  // namespace

AdmissibilityReport admissibility_check(const OracleComponent& o, const MonoidRegistry& registry,
                                        const CheckOptions& opts) {
  AdmissibilityReport rep;
  Recorder rec(rep, opts);
  Rng rng(opts.seed);
  const SampleSpace space{&registry, o.target(), o.num_types(), &opts};
  const unsigned per_type = o.num_types() > 3 ? 2 : opts.max_per_type;
  for (std::size_t t = 0; t < opts.trials; ++t) {
    const CellSpec s = space.cellspec(rng, space.profile(rng, per_type));
    const State x = space.state(rng, o.target());
    const Value base = o.eval(x, s);
    const auto point = [&](const CellSpec& variant) {
      return Json{{"x", state_to_json(x)}, {"s", cellspec_to_json(s)}, {"variant", cellspec_to_json(variant)}};
    };

    rec.compare(rep.determinism, "determinism", t, base, o.eval(x, s), point(s), true);

    CellSpec perm = s;
    shuffle(rng, perm);
    rec.compare(rep.permutation, "permutation", t, o.eval(x, perm), base, point(perm));

    const auto j = static_cast<TypeIndex>(1 + uniform_index(rng, o.num_types()));
    const WeightMonoid& m = registry.at(o.target(), j);
    Weight w1 = m.sample(rng), w2 = m.sample(rng);
    for (int tries = 0; tries < 16 && m.is_zero(m.combine(w1, w2)); ++tries) w2 = m.sample(rng);
    if (!m.is_zero(m.combine(w1, w2))) {
      const State x12 = space.state(rng, j);
      CellSpec merged{Input{j, m.combine(w1, w2), x12}};
      CellSpec split{Input{j, w1, x12}, Input{j, w2, x12}};
      merged.insert(merged.end(), s.begin(), s.end());
      split.insert(split.end(), s.begin(), s.end());
      rec.compare(rep.merge, "merge", t, o.eval(x, merged), o.eval(x, split),
                  Json{{"x", state_to_json(x)}, {"merged", cellspec_to_json(merged)},
                       {"split", cellspec_to_json(split)}});
    }

    const auto jz = static_cast<TypeIndex>(1 + uniform_index(rng, o.num_types()));
    CellSpec with_zero = s;
    const auto pos = static_cast<std::ptrdiff_t>(uniform_index(rng, s.size() + 1));
    with_zero.insert(with_zero.begin() + pos, Input{jz, registry.at(o.target(), jz).zero(), space.state(rng, jz)});
    rec.compare(rep.zero_removal, "zero_removal", t, o.eval(x, with_zero), base, point(with_zero));
  }
  return rep;
}

}  // namespace ccn
