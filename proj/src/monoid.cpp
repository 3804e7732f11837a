#include "ccn/monoid.hpp"

#include <array>
#include <sstream>

#include "ccn/errors.hpp"

namespace ccn {

Json weight_to_json(const Weight& w) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return v;
        } else if constexpr (std::is_same_v<T, Multiset>) {
          Json arr = Json::array();
          for (const auto& [label, n] : v.counts)
            for (std::uint32_t i = 0; i < n; ++i) arr.push_back(label);
          return arr;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v;
        } else {
          return Json{{"opaque", v.value}};
        }
      },
      w);
}

Weight weight_from_json(const Json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number()) return j.get<double>();
  if (j.is_array()) {
    Multiset m;
    for (const auto& e : j) {
      if (!e.is_string()) throw SpecError("multiset weight entries must be strings");
      ++m.counts[e.get<std::string>()];
    }
    return m;
  }
  if (j.is_object() && j.size() == 1 && j.contains("opaque")) return Opaque{j.at("opaque")};
  throw SpecError("unrecognized weight " + j.dump());
}

std::string describe(const Weight& w) { return weight_to_json(w).dump(); }

WeightMonoid::WeightMonoid(std::string id, Combine combine, Weight zero, Sampler sample_nonzero,
                           Equal equal, Accepts accepts, std::optional<Weight> annihilator)
    : id_(std::move(id)),
      combine_(std::move(combine)),
      zero_(std::move(zero)),
      sample_(std::move(sample_nonzero)),
      equal_(std::move(equal)),
      accepts_(std::move(accepts)),
      annihilator_(std::move(annihilator)) {}

Weight WeightMonoid::parse_weight(const Json& j) const {
  Weight w = weight_from_json(j);
  if (!accepts_(w)) throw SpecError("weight " + j.dump() + " is not valid for monoid " + id_);
  return w;
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t n) { return rng() % n; }

double sample_dyadic(Rng& rng, double half_width, unsigned denominator) {
  const auto steps = static_cast<std::uint64_t>(half_width * denominator);
  const auto pick = uniform_index(rng, 2 * steps) ;
  // 0..steps-1 -> negative, steps..2steps-1 -> positive, never zero
  const long long v = pick < steps ? -static_cast<long long>(pick + 1)
                                   : static_cast<long long>(pick - steps + 1);
  return static_cast<double>(v) / denominator;
}

MonoidPtr make_additive_real() {
  return std::make_shared<const WeightMonoid>(
      "additive_real",
      [](const Weight& a, const Weight& b) -> Weight {
        return std::get<double>(a) + std::get<double>(b);
      },
      Weight{0.0}, [](Rng& rng) -> Weight { return sample_dyadic(rng); },
      [](const Weight& a, const Weight& b) {
        return std::get<double>(a) == std::get<double>(b);
      },
      [](const Weight& w) { return std::holds_alternative<double>(w); });
}

MonoidPtr make_free_parallel() {
  return std::make_shared<const WeightMonoid>(
      "free_parallel",
      [](const Weight& a, const Weight& b) -> Weight {
        Multiset out = std::get<Multiset>(a);
        for (const auto& [label, n] : std::get<Multiset>(b).counts) out.counts[label] += n;
        return out;
      },
      Weight{Multiset{}},
      [](Rng& rng) -> Weight {
        static const std::array<const char*, 4> labels{"a", "b", "c", "d"};
        Multiset m;
        const auto n = 1 + uniform_index(rng, 3);
        for (std::uint64_t i = 0; i < n; ++i) ++m.counts[labels[uniform_index(rng, labels.size())]];
        return m;
      },
      [](const Weight& a, const Weight& b) { return std::get<Multiset>(a) == std::get<Multiset>(b); },
      [](const Weight& w) { return std::holds_alternative<Multiset>(w); });
}

MonoidPtr make_bool_or() {
  return std::make_shared<const WeightMonoid>(
      "bool_or",
      [](const Weight& a, const Weight& b) -> Weight {
        return std::get<bool>(a) || std::get<bool>(b);
      },
      Weight{false}, [](Rng&) -> Weight { return true; },
      [](const Weight& a, const Weight& b) { return std::get<bool>(a) == std::get<bool>(b); },
      [](const Weight& w) { return std::holds_alternative<bool>(w); }, Weight{true});
}

MonoidPtr make_monoid(const std::string& id) {
  if (id == "additive_real") return make_additive_real();
  if (id == "free_parallel") return make_free_parallel();
  if (id == "bool_or") return make_bool_or();
  return nullptr;
}

LawReport check_laws(const WeightMonoid& m, std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  LawReport rep;
  const auto draw = [&]() -> Weight {
    return uniform_index(rng, 5) == 0 ? m.zero() : m.sample(rng);
  };
  const auto fail = [&](LawOutcome& o, std::size_t trial, const std::string& detail) {
    if (!o.ok) return;
    o.ok = false;
    std::ostringstream os;
    os << "seed " << seed << " trial " << trial << ": " << detail;
    o.witness = os.str();
  };
  for (std::size_t t = 0; t < trials; ++t) {
    const Weight a = draw(), b = draw(), c = draw();
    const Weight ab = m.combine(a, b), ba = m.combine(b, a);
    if (!m.equal(ab, ba))
      fail(rep.commutative, t,
           describe(a) + "|" + describe(b) + " = " + describe(ab) + " but " + describe(b) + "|" +
               describe(a) + " = " + describe(ba));
    const Weight left = m.combine(ab, c), right = m.combine(a, m.combine(b, c));
    if (!m.equal(left, right))
      fail(rep.associative, t,
           "(" + describe(a) + "|" + describe(b) + ")|" + describe(c) + " = " + describe(left) +
               " vs " + describe(right));
    const Weight za = m.combine(m.zero(), a), az = m.combine(a, m.zero());
    if (!m.equal(za, a) || !m.equal(az, a))
      fail(rep.identity, t, "zero|" + describe(a) + " = " + describe(za));
    if (m.annihilator()) {
      const Weight& ann = *m.annihilator();
      const Weight r = m.combine(ann, a);
      if (!m.equal(r, ann)) fail(rep.annihilator, t, "annihilator|" + describe(a) + " = " + describe(r));
    }
  }
  return rep;
}

void MonoidRegistry::set(std::uint32_t target, std::uint32_t source, MonoidPtr m) {
  m_[{target, source}] = std::move(m);
}

bool MonoidRegistry::contains(std::uint32_t target, std::uint32_t source) const {
  return m_.count({target, source}) > 0;
}

const WeightMonoid& MonoidRegistry::at(std::uint32_t target, std::uint32_t source) const {
  auto it = m_.find({target, source});
  if (it == m_.end())
    throw SpecError("no monoid registered for type pair " + std::to_string(target) + "," +
                    std::to_string(source));
  return *it->second;
}

MonoidRegistry MonoidRegistry::uniform(std::size_t num_types, MonoidPtr m) {
  MonoidRegistry r;
  for (std::uint32_t i = 1; i <= num_types; ++i)
    for (std::uint32_t j = 1; j <= num_types; ++j) r.set(i, j, m);
  return r;
}

}  // namespace ccn
