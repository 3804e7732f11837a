#include "ccn/spec_io.hpp"

#include <fstream>
#include <sstream>

namespace ccn {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SpecError(where + ": missing '" + key + "'");
  return j.at(key);
}

unsigned get_unsigned(const Json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw SpecError(what + " must be a nonnegative integer");
  return j.get<unsigned>();
}

Rational get_rational(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) throw SpecError(what + " must be a \"p/q\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw SpecError(what + ": " + e.what());
  }
}

MultiIndex get_index(const Json& j, const std::string& what) {
  if (!j.is_array()) throw SpecError(what + " must be an array");
  std::vector<MultiIndex::value_type> v;
  for (const auto& e : j) v.push_back(get_unsigned(e, what + " entry"));
  return MultiIndex(std::move(v));
}

std::vector<Rational> get_rationals(const Json& j, const std::string& what) {
  if (!j.is_array()) throw SpecError(what + " must be an array");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(get_rational(e, what + " entry"));
  return out;
}

Json rationals_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(to_string(r));
  return out;
}

std::size_t types_param(const Json& params, std::size_t fallback) {
  if (!params.contains("num_types")) return fallback;
  const unsigned t = get_unsigned(params.at("num_types"), "num_types");
  if (t == 0) throw SpecError("num_types must be positive");
  return t;
}

Property parse_property(const std::string& s) {
  for (Property p : {Property::Permutation, Property::Merge, Property::ZeroRemoval})
    if (s == property_name(p)) return p;
  throw SpecError("unknown broken property '" + s + "'");
}

}  // namespace

OracleComponent parse_oracle(const Json& doc, std::size_t default_types) {
  if (!doc.is_object()) throw SpecError("oracle spec must be an object");
  const std::string where = "oracle spec";
  const unsigned target = get_unsigned(field(doc, "type_index", where), "type_index");
  if (target == 0) throw SpecError("type_index must be positive");
  const Json& fam_j = field(doc, "family", where);
  if (!fam_j.is_string()) throw SpecError("family must be a string");
  const std::string fam = fam_j.get<std::string>();
  const Json params = doc.contains("params") ? doc.at("params") : Json::object();
  if (!params.is_object()) throw SpecError("params must be an object");
  Internal f0 = Internal::zero();
  if (doc.contains("f0")) {
    if (!doc.at("f0").is_string()) throw SpecError("f0 must be a string");
    f0 = Internal::parse(doc.at("f0").get<std::string>());
  }

  Json canon_params;
  std::optional<OracleComponent> o;
  try {
    if (fam == "polynomial_multi") {
      const std::size_t T = types_param(params, default_types);
      PolynomialCoeffs a;
      Json coeffs = Json::array();
      for (const auto& c : field(params, "coeffs", "polynomial_multi params")) {
        MultiIndex n = get_index(field(c, "n", "coefficient"), "n");
        if (n.size() != T) throw SpecError("coefficient key " + n.to_string() + " does not have num_types entries");
        if (a.count(n)) throw SpecError("duplicate coefficient key " + n.to_string());
        a[n] = get_rational(field(c, "a", "coefficient"), "a");
      }
      for (const auto& [n, v] : a)
        if (v != 0) coeffs.push_back(Json{{"n", n.vec()}, {"a", to_string(v)}});
      if (target > T) throw SpecError("type_index exceeds num_types");
      o = OracleComponent::polynomial(target, T, std::move(a), f0);
      canon_params = Json{{"num_types", T}, {"coeffs", coeffs}};
    } else if (fam == "exponential") {
      const std::size_t T = types_param(params, default_types);
      std::optional<unsigned> N;
      if (params.contains("truncation") && !params.at("truncation").is_null())
        N = get_unsigned(params.at("truncation"), "truncation");
      if (target > T) throw SpecError("type_index exceeds num_types");
      o = build_exponential(N, f0, T, target);
      canon_params = Json{{"num_types", T}, {"truncation", N ? Json(*N) : Json(nullptr)}};
    } else if (fam == "symmetric_power") {
      const std::size_t T = types_param(params, default_types);
      const unsigned n = get_unsigned(field(params, "n", "symmetric_power params"), "n");
      const unsigned k = get_unsigned(field(params, "k", "symmetric_power params"), "k");
      if (target > T) throw SpecError("type_index exceeds num_types");
      o = build_symmetric_power(n, k, f0, T, target);
      canon_params = Json{{"num_types", T}, {"n", n}, {"k", k}};
    } else if (fam == "nested") {
      const auto outer = get_rationals(field(params, "outer", "nested params"), "outer");
      const Json& inner_j = field(params, "inner", "nested params");
      if (!inner_j.is_array()) throw SpecError("inner must be an array");
      std::vector<std::vector<Rational>> inner;
      Json inner_c = Json::array();
      for (const auto& p : inner_j) {
        inner.push_back(get_rationals(p, "inner"));
        inner_c.push_back(rationals_json(inner.back()));
      }
      if (target > inner.size()) throw SpecError("type_index exceeds the number of inner polynomials");
      o = build_nested(outer, inner, f0, target);
      canon_params = Json{{"outer", rationals_json(outer)}, {"inner", inner_c}};
    } else if (fam == "broken") {
      const Json& b = field(params, "breaks", "broken params");
      if (!b.is_string()) throw SpecError("breaks must be a string");
      const Property p = parse_property(b.get<std::string>());
      if (target != 1) throw SpecError("broken oracles are single-type");
      o = build_broken(p, f0);
      canon_params = Json{{"breaks", property_name(p)}};
    } else {
      throw SpecError("unknown oracle family '" + fam + "'");
    }
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError("oracle family " + fam + ": " + e.what());
  }
  o->set_spec(Json{{"type_index", target}, {"family", fam}, {"params", canon_params}, {"f0", f0.text()}});
  return *o;
}

Json oracle_to_json(const OracleComponent& o) {
  if (o.spec()) return *o.spec();
  if (o.structured() && o.internal().serializable()) {
    Json coeffs = Json::array();
    for (const auto& [n, v] : o.coeffs()) coeffs.push_back(Json{{"n", n.vec()}, {"a", to_string(v)}});
    return Json{{"type_index", o.target()},
                {"family", "polynomial_multi"},
                {"params", Json{{"num_types", o.num_types()}, {"coeffs", coeffs}}},
                {"f0", o.internal().text()}};
  }
  throw DomainError("oracle '" + o.name() + "' has no JSON form");
}

OracleFunction parse_oracle_function(const Json& doc, std::size_t num_types) {
  std::vector<Json> specs;
  if (doc.is_array())
    specs.assign(doc.begin(), doc.end());
  else
    specs.push_back(doc);
  std::vector<std::optional<OracleComponent>> slots(num_types);
  for (const Json& s : specs) {
    OracleComponent o = parse_oracle(s, num_types);
    if (o.num_types() != num_types)
      throw SpecError("oracle for type " + std::to_string(o.target()) + " has " + std::to_string(o.num_types()) +
                      " types, network has " + std::to_string(num_types));
    if (slots[o.target() - 1]) throw SpecError("two oracles for type " + std::to_string(o.target()));
    slots[o.target() - 1] = std::move(o);
  }
  OracleFunction out;
  for (std::size_t t = 0; t < num_types; ++t) {
    if (!slots[t]) throw SpecError("no oracle for type " + std::to_string(t + 1));
    out.push_back(std::move(*slots[t]));
  }
  return out;
}

ProbePoint parse_point(const Json& j) {
  if (!j.is_object()) throw SpecError("point must be an object");
  try {
    if (j.contains("w")) {
      const Json& w = j.at("w");
      const Json& xs = field(j, "x", "point");
      if (!w.is_array() || !xs.is_array() || w.size() != xs.size())
        throw SpecError("point shorthand needs arrays w and x of equal length");
      ProbePoint p{{}, scalar_state(0.0)};
      for (std::size_t c = 0; c < w.size(); ++c) {
        if (!w[c].is_number() || !xs[c].is_number()) throw SpecError("point shorthand entries must be numbers");
        p.s.push_back(Input{1, w[c].get<double>(), scalar_state(xs[c].get<double>())});
      }
      return p;
    }
    ProbePoint p{cellspec_from_json(field(j, "inputs", "point")), state_from_json(field(j, "center", "point"))};
    return p;
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(std::string("point: ") + e.what());
  }
}

std::vector<ProbePoint> parse_points(const Json& j) {
  std::vector<ProbePoint> out;
  if (!j.is_array()) {
    out.push_back(parse_point(j));
    return out;
  }
  for (const auto& p : j) out.push_back(parse_point(p));
  return out;
}

Json point_to_json(const ProbePoint& p) {
  return Json{{"center", state_to_json(p.x)}, {"inputs", cellspec_to_json(p.s)}};
}

MultiIndex parse_bound(const std::string& text) {
  std::string t = text;
  if (!t.empty() && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
  std::vector<MultiIndex::value_type> v;
  std::stringstream ss(t);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    long long n = -1;
    try {
      n = std::stoll(part, &used);
    } catch (const std::exception&) {
    }
    while (used < part.size() && part[used] == ' ') ++used;
    if (n < 0 || used != part.size()) throw SpecError("bad bound '" + text + "'");
    v.push_back(static_cast<MultiIndex::value_type>(n));
  }
  if (v.empty()) throw SpecError("bad bound '" + text + "'");
  return MultiIndex(std::move(v));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SpecError(path + ": " + e.what());
  }
}

}  // namespace ccn
