#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ccn/network.hpp"

using namespace ccn;

namespace {

Network two_cell(const std::string& weight = "1.0") {
  return Network::parse(Json::parse(R"({"types":[{"id":1}],"monoids":{"1,1":"additive_real"},
    "cells":[{"id":"a","type":1},{"id":"b","type":1}],
    "edges":[{"to":"a","from":"b","weight":)" + weight + "}]}"));
}

// Cell c of type 1 fed by squares a and b of type 2; merged variant feeds c from ab alone.
Network merging(bool merged, double wa, double wb) {
  Json doc = Json::parse(R"({"types":[{"id":1},{"id":2}],
    "monoids":{"1,1":"additive_real","1,2":"additive_real","2,1":"additive_real","2,2":"additive_real"}})");
  if (merged) {
    doc["cells"] = Json::parse(R"([{"id":"c","type":1},{"id":"ab","type":2}])");
    doc["edges"] = Json::array({Json{{"to", "c"}, {"from", "ab"}, {"weight", wa + wb}}});
  } else {
    doc["cells"] = Json::parse(R"([{"id":"c","type":1},{"id":"a","type":2},{"id":"b","type":2}])");
    doc["edges"] = Json::array({Json{{"to", "c"}, {"from", "a"}, {"weight", wa}},
                                Json{{"to", "c"}, {"from", "b"}, {"weight", wb}}});
  }
  return Network::parse(doc);
}

OracleFunction two_type_power_2() {
  PolynomialCoeffs a;
  a[MultiIndex{0, 2}] = 1;
  return {OracleComponent::polynomial(1, 2, a, Internal::zero()),
          OracleComponent::polynomial(2, 2, {}, Internal::zero())};
}

}  // namespace

TEST_CASE("parse") {
  const Network net = two_cell();
  CHECK(net.num_cells() == 2);
  int nonzero = 0;
  for (std::size_t t = 0; t < 2; ++t)
    for (std::size_t f = 0; f < 2; ++f) nonzero += net.weight(t, f).has_value();
  CHECK(nonzero == 1);
  CHECK(net.weight(0, 1).has_value());
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(two_cell("true"), SpecError);
  CHECK_THROWS_WITH_AS(
      Network::parse(Json::parse(R"({"types":[{"id":1}],"monoids":{"1,1":"additive_real"},
        "cells":[{"id":"a","type":1},{"id":"b","type":1}],"adjacency":[[0,1,0],[1,0,0]]})")),
      doctest::Contains("non-square"), SpecError);
  CHECK_THROWS_AS(Network::parse(Json::parse(R"({"types":[{"id":1}],"monoids":{"1,1":"tropical"},"cells":[]})")),
                  SpecError);
  CHECK_THROWS_AS(Network::parse(Json::parse(R"({"types":[{"id":1}],"cells":[{"id":"a","type":2}]})")), SpecError);
}

TEST_CASE("adjacency matrix form matches the edge list") {
  const Network a = Network::parse(Json::parse(R"({"types":[{"id":1}],"monoids":{"1,1":"additive_real"},
    "cells":[{"id":"a","type":1},{"id":"b","type":1}],"adjacency":[[0,1.5],[null,0]]})"));
  const Network b = two_cell("1.5");
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("parallel edges combine and zero edges vanish") {
  const Network net = Network::parse(Json::parse(R"({"types":[{"id":1}],"monoids":{"1,1":"additive_real"},
    "cells":[{"id":"a","type":1},{"id":"b","type":1}],
    "edges":[{"to":"a","from":"b","weight":1.0},{"to":"a","from":"b","weight":0.5},{"to":"b","from":"a","weight":0.0}]})"));
  CHECK(std::get<double>(*net.weight(0, 1)) == 1.5);
  CHECK_FALSE(net.weight(1, 0).has_value());
  CHECK(Network::parse(net.to_json()).to_json() == net.to_json());
}

TEST_CASE("in_neighborhood") {
  const Network edgeless = Network::parse(Json::parse(R"({"types":[{"id":1}],"monoids":{"1,1":"additive_real"},
    "cells":[{"id":"a","type":1}]})"));
  CHECK(in_neighborhood(edgeless, "a", {scalar_state(1)}).entries.empty());
  const Network m = merging(false, 1, 2);
  const StateVector x{scalar_state(0), scalar_state(1), scalar_state(1)};
  const Neighborhood nb = in_neighborhood(m, "c", x);
  REQUIRE(nb.entries.size() == 2);
  CHECK(nb.entries[0].type == 2);
  CHECK(nb.entries[1].type == 2);
  CHECK_THROWS_AS(in_neighborhood(m, "zz", x), SpecError);
}

TEST_CASE("evaluate_vector_field") {
  const Network a = merging(false, 1, 2);
  const Network b = merging(true, 1, 2);
  const OracleFunction f = two_type_power_2();
  const auto va = evaluate_vector_field(a, f, {scalar_state(0.3), scalar_state(1), scalar_state(1)});
  const auto vb = evaluate_vector_field(b, f, {scalar_state(0.3), scalar_state(1)});
  CHECK(va[0][0] == doctest::Approx(9.0));
  CHECK(std::abs(va[0][0] - vb[0][0]) <= 1e-12);

  const Network edgeless = Network::parse(Json::parse(R"({"types":[{"id":1}],"monoids":{"1,1":"additive_real"},
    "cells":[{"id":"a","type":1},{"id":"b","type":1}]})"));
  const OracleFunction lin{build_polynomial_single({{1, 1}}, Internal::linear(-2))};
  const auto v = evaluate_vector_field(edgeless, lin, {scalar_state(1), scalar_state(3)});
  CHECK(v[0][0] == -2.0);
  CHECK(v[1][0] == -6.0);
}

TEST_CASE("relabeling permutes outputs") {
  const Network net = Network::parse(Json::parse(R"({"types":[{"id":1}],"monoids":{"1,1":"additive_real"},
    "cells":[{"id":"a","type":1},{"id":"b","type":1},{"id":"c","type":1},{"id":"d","type":1}],
    "edges":[{"to":"a","from":"b","weight":1.0},{"to":"a","from":"c","weight":-0.5},
             {"to":"b","from":"d","weight":2.0},{"to":"d","from":"a","weight":0.25},{"to":"c","from":"c","weight":1.0}]})"));
  const OracleFunction f{build_polynomial_single({{1, 1}, {3, Rational(1, 3)}}, Internal::linear(-1))};
  const StateVector x{scalar_state(0.1), scalar_state(-0.7), scalar_state(0.4), scalar_state(1.2)};
  const std::vector<std::size_t> order{2, 0, 3, 1};
  const Network r = net.relabeled(order);
  StateVector xr;
  for (std::size_t i : order) xr.push_back(x[i]);
  const auto v = evaluate_vector_field(net, f, x);
  const auto vr = evaluate_vector_field(r, f, xr);
  for (std::size_t i = 0; i < order.size(); ++i) CHECK(std::abs(vr[i][0] - v[order[i]][0]) <= 1e-12);
}

TEST_CASE("a zero-weight edge changes nothing") {
  Network net = two_cell();
  const OracleFunction f{build_polynomial_single({{2, 1}}, Internal::linear(-1))};
  const StateVector x{scalar_state(0.5), scalar_state(2)};
  const auto before = evaluate_vector_field(net, f, x);
  net.add_edge(1, 0, 0.0);
  net.add_edge(0, 0, 0.0);
  const auto after = evaluate_vector_field(net, f, x);
  CHECK(before[0][0] == after[0][0]);
  CHECK(before[1][0] == after[1][0]);
}

TEST_CASE("integrate_rk4") {
  const Network one = Network::parse(Json::parse(R"({"types":[{"id":1}],"monoids":{"1,1":"additive_real"},
    "cells":[{"id":"a","type":1}]})"));
  const OracleFunction zero{build_polynomial_single({}, Internal::zero())};
  const auto flat = integrate_rk4(one, zero, {scalar_state(0.7)}, 0.1, 5);
  REQUIRE(flat.size() == 6);
  for (const auto& s : flat) CHECK(s[0][0] == 0.7);

  const OracleFunction decay{build_polynomial_single({}, Internal::linear(-1))};
  const auto traj = integrate_rk4(one, decay, {scalar_state(1)}, 0.1, 10);
  CHECK(std::abs(traj.back()[0][0] - std::exp(-1.0)) < 1e-6);

  CHECK_THROWS_AS(integrate_rk4(one, decay, {scalar_state(1)}, 0.0, 10), DomainError);

  const OracleFunction blowup{build_polynomial_single({}, Internal::linear(800))};
  try {
    integrate_rk4(one, blowup, {scalar_state(1)}, 1.0, 200);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step() > 0);
    CHECK(e.step() <= 200);
  }
}

TEST_CASE("state dimensions are enforced") {
  const Network net = Network::parse(Json::parse(R"({"types":[{"id":1,"state_dim":2}],"monoids":{"1,1":"additive_real"},
    "cells":[{"id":"a","type":1}]})"));
  CHECK_THROWS_AS(validate_states(net, {scalar_state(1)}), DimensionError);
  CHECK_NOTHROW(validate_states(net, {State::Ones(2)}));
}
