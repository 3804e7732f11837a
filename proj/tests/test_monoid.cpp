#include <doctest.h>

#include "ccn/errors.hpp"
#include "ccn/monoid.hpp"

using namespace ccn;

namespace {

Multiset ms(std::initializer_list<const char*> labels) {
  Multiset m;
  for (const char* l : labels) ++m.counts[l];
  return m;
}

}  // namespace

TEST_CASE("additive_real") {
  const auto m = make_additive_real();
  CHECK(std::get<double>(m->combine(1.5, 2.5)) == 4.0);
  CHECK(std::get<double>(m->combine(0.0, -3.25)) == -3.25);
  CHECK(m->is_zero(m->zero()));
  Rng rng(0);
  for (int i = 0; i < 1000; ++i) CHECK_FALSE(m->is_zero(m->sample(rng)));
}

TEST_CASE("free_parallel") {
  const auto m = make_free_parallel();
  CHECK(std::get<Multiset>(m->combine(ms({"a"}), ms({"b"}))) == ms({"a", "b"}));
  CHECK(std::get<Multiset>(m->combine(m->zero(), ms({"a", "a"}))) == ms({"a", "a"}));
  const Multiset aa = std::get<Multiset>(m->combine(ms({"a"}), ms({"a"})));
  CHECK(aa == ms({"a", "a"}));
  CHECK_FALSE(aa == ms({"a"}));
}

TEST_CASE("bool_or") {
  const auto m = make_bool_or();
  CHECK(std::get<bool>(m->combine(true, false)) == true);
  CHECK(std::get<bool>(m->combine(true, true)) == true);
  CHECK(std::get<bool>(m->combine(false, false)) == false);
  CHECK(std::get<bool>(m->combine(false, true)) == true);
  REQUIRE(m->annihilator());
  CHECK(std::get<bool>(*m->annihilator()) == true);
}

TEST_CASE("shipped monoids satisfy the laws") {
  for (const char* id : {"additive_real", "free_parallel", "bool_or"}) {
    INFO(id);
    const auto m = make_monoid(id);
    REQUIRE(m);
    const LawReport r = check_laws(*m, 10000, 0);
    CHECK(r.ok());
  }
  CHECK(make_monoid("nope") == nullptr);
}

TEST_CASE("subtraction is caught as non-commutative") {
  const WeightMonoid sub(
      "subtraction", [](const Weight& a, const Weight& b) { return Weight(std::get<double>(a) - std::get<double>(b)); },
      0.0, [](Rng& r) { return Weight(sample_dyadic(r)); },
      [](const Weight& a, const Weight& b) { return std::get<double>(a) == std::get<double>(b); },
      [](const Weight& w) { return std::holds_alternative<double>(w); });
  const LawReport r = check_laws(sub, 1000, 0);
  CHECK_FALSE(r.commutative.ok);
  CHECK_FALSE(r.commutative.witness.empty());
}

TEST_CASE("check_laws is deterministic per seed") {
  const WeightMonoid bad(
      "max_plus_one",
      [](const Weight& a, const Weight& b) { return Weight(std::max(std::get<double>(a), std::get<double>(b)) + 1); },
      0.0, [](Rng& r) { return Weight(sample_dyadic(r)); },
      [](const Weight& a, const Weight& b) { return std::get<double>(a) == std::get<double>(b); },
      [](const Weight& w) { return std::holds_alternative<double>(w); });
  const LawReport a = check_laws(bad, 200, 7), b = check_laws(bad, 200, 7);
  CHECK_FALSE(a.identity.ok);
  CHECK(a.identity.witness == b.identity.witness);
  CHECK(a.associative.witness == b.associative.witness);
}

TEST_CASE("weight json round trip and type checks") {
  const auto fp = make_free_parallel();
  const Weight w = fp->parse_weight(Json::parse(R"(["b","a","a"])"));
  CHECK(std::get<Multiset>(w) == ms({"a", "a", "b"}));
  CHECK(weight_from_json(weight_to_json(w)) == w);
  CHECK_THROWS_AS(make_additive_real()->parse_weight(Json(true)), SpecError);
  CHECK_THROWS_AS(make_bool_or()->parse_weight(Json(1.0)), SpecError);
  const Weight o = weight_from_json(Json::parse(R"({"opaque": {"k": 1}})"));
  CHECK(std::holds_alternative<Opaque>(o));
  CHECK(weight_to_json(o) == Json::parse(R"({"opaque": {"k": 1}})"));
}

TEST_CASE("registry") {
  MonoidRegistry reg = MonoidRegistry::uniform(2, make_additive_real());
  CHECK(reg.contains(1, 2));
  CHECK_FALSE(reg.contains(3, 1));
  CHECK_THROWS_AS(reg.at(3, 1), SpecError);
  reg.set(2, 1, make_bool_or());
  CHECK(reg.at(2, 1).id() == "bool_or");
}
