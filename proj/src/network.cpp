#include "ccn/network.hpp"

#include <cmath>
#include <set>

namespace ccn {

Network::Network(std::vector<std::size_t> state_dims, MonoidRegistry registry,
                 std::vector<std::string> cell_ids, std::vector<TypeIndex> cell_types)
    : dims_(std::move(state_dims)),
      registry_(std::move(registry)),
      ids_(std::move(cell_ids)),
      types_(std::move(cell_types)) {
  if (ids_.size() != types_.size()) throw DimensionError("cell ids and types differ in length");
  for (std::size_t d : dims_)
    if (d == 0) throw SpecError("state_dim must be positive");
  std::set<std::string> seen;
  for (std::size_t c = 0; c < ids_.size(); ++c) {
    if (!seen.insert(ids_[c]).second) throw SpecError("duplicate cell id '" + ids_[c] + "'");
    if (types_[c] < 1 || types_[c] > dims_.size())
      throw SpecError("cell '" + ids_[c] + "': type " + std::to_string(types_[c]) + " out of range");
  }
  adj_.assign(ids_.size() * ids_.size(), std::nullopt);
}

std::size_t Network::index_of(const std::string& id) const {
  for (std::size_t c = 0; c < ids_.size(); ++c)
    if (ids_[c] == id) return c;
  throw SpecError("unknown cell '" + id + "'");
}

const WeightMonoid& Network::monoid_for(std::size_t to, std::size_t from) const {
  return registry_.at(types_.at(to), types_.at(from));
}

void Network::set_weight(std::size_t to, std::size_t from, const Weight& w) {
  const WeightMonoid& m = monoid_for(to, from);
  if (!m.accepts(w)) throw SpecError("weight " + describe(w) + " is not valid for monoid " + m.id());
  auto& slot = adj_.at(to * ids_.size() + from);
  if (m.is_zero(w))
    slot.reset();
  else
    slot = w;
}

void Network::add_edge(std::size_t to, std::size_t from, const Weight& w) {
  const WeightMonoid& m = monoid_for(to, from);
  if (!m.accepts(w)) throw SpecError("weight " + describe(w) + " is not valid for monoid " + m.id());
  const auto& cur = weight(to, from);
  set_weight(to, from, cur ? m.combine(*cur, w) : w);
}

Network Network::relabeled(const std::vector<std::size_t>& order) const {
  if (order.size() != ids_.size()) throw DimensionError("relabeling has wrong length");
  std::vector<std::string> ids;
  std::vector<TypeIndex> types;
  for (std::size_t c : order) {
    ids.push_back(ids_.at(c));
    types.push_back(types_.at(c));
  }
  Network out(dims_, registry_, ids, types);
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = 0; b < order.size(); ++b)
      if (const auto& w = weight(order[a], order[b])) out.set_weight(a, b, *w);
  return out;
}

namespace {

TypeIndex parse_type(const Json& j, std::size_t num_types, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 1 ||
      static_cast<std::size_t>(j.get<long long>()) > num_types)
    throw SpecError(what + ": type " + j.dump() + " out of range");
  return j.get<TypeIndex>();
}

const Json& field(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw SpecError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

}  // namespace

Network Network::parse(const Json& doc) {
  if (!doc.is_object()) throw SpecError("network document must be an object");
  const Json& types = field(doc, "types");
  if (!types.is_array() || types.empty()) throw SpecError("'types' must be a nonempty array");
  std::vector<std::size_t> dims(types.size(), 0);
  for (const auto& t : types) {
    const TypeIndex id = parse_type(field(t, "id"), types.size(), "types");
    if (dims[id - 1] != 0) throw SpecError("duplicate type id " + std::to_string(id));
    std::size_t d = 1;
    if (t.contains("state_dim")) {
      if (!t.at("state_dim").is_number_integer() || t.at("state_dim").get<long long>() < 1)
        throw SpecError("state_dim must be a positive integer");
      d = t.at("state_dim").get<std::size_t>();
    }
    dims[id - 1] = d;
  }

  MonoidRegistry reg;
  if (doc.contains("monoids")) {
    const Json& mons = doc.at("monoids");
    if (!mons.is_object()) throw SpecError("'monoids' must be an object");
    for (const auto& [key, val] : mons.items()) {
      const auto comma = key.find(',');
      std::size_t i = 0, j = 0;
      try {
        if (comma == std::string::npos) throw std::invalid_argument(key);
        std::size_t u1 = 0, u2 = 0;
        i = std::stoul(key.substr(0, comma), &u1);
        j = std::stoul(key.substr(comma + 1), &u2);
        if (u1 != comma || u2 != key.size() - comma - 1) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw SpecError("bad monoid key '" + key + "', expected \"target,source\"");
      }
      if (i < 1 || j < 1 || i > dims.size() || j > dims.size())
        throw SpecError("monoid key '" + key + "': type out of range");
      if (!val.is_string()) throw SpecError("monoid id must be a string");
      MonoidPtr m = make_monoid(val.get<std::string>());
      if (!m) throw SpecError("unknown monoid id '" + val.get<std::string>() + "'");
      reg.set(static_cast<TypeIndex>(i), static_cast<TypeIndex>(j), std::move(m));
    }
  }

  const Json& cells = field(doc, "cells");
  if (!cells.is_array()) throw SpecError("'cells' must be an array");
  std::vector<std::string> ids;
  std::vector<TypeIndex> ctypes;
  for (const auto& c : cells) {
    const Json& id = field(c, "id");
    if (!id.is_string()) throw SpecError("cell id must be a string");
    ids.push_back(id.get<std::string>());
    ctypes.push_back(parse_type(field(c, "type"), dims.size(), "cell '" + ids.back() + "'"));
  }
  Network net(dims, std::move(reg), std::move(ids), std::move(ctypes));

  const auto pair_monoid = [&](std::size_t to, std::size_t from) -> const WeightMonoid& {
    const TypeIndex i = net.type_of(to), j = net.type_of(from);
    if (!net.registry().contains(i, j))
      throw SpecError("edge " + net.id(from) + " -> " + net.id(to) + ": no monoid for type pair " +
                      std::to_string(i) + "," + std::to_string(j));
    return net.registry().at(i, j);
  };

  if (doc.contains("edges")) {
    const Json& edges = doc.at("edges");
    if (!edges.is_array()) throw SpecError("'edges' must be an array");
    for (const auto& e : edges) {
      const Json& to = field(e, "to");
      const Json& from = field(e, "from");
      if (!to.is_string() || !from.is_string()) throw SpecError("edge endpoints must be cell ids");
      const std::size_t t = net.index_of(to.get<std::string>());
      const std::size_t f = net.index_of(from.get<std::string>());
      net.add_edge(t, f, pair_monoid(t, f).parse_weight(field(e, "weight")));
    }
  }
  if (doc.contains("adjacency")) {
    const Json& mat = doc.at("adjacency");
    const std::size_t n = net.num_cells();
    if (!mat.is_array() || mat.size() != n) throw SpecError("adjacency matrix is non-square");
    for (std::size_t t = 0; t < n; ++t) {
      if (!mat[t].is_array() || mat[t].size() != n) throw SpecError("adjacency matrix is non-square");
      for (std::size_t f = 0; f < n; ++f)
        if (!mat[t][f].is_null()) net.add_edge(t, f, pair_monoid(t, f).parse_weight(mat[t][f]));
    }
  }
  return net;
}

Json Network::to_json() const {
  Json types = Json::array();
  for (std::size_t t = 0; t < dims_.size(); ++t) types.push_back({{"id", t + 1}, {"state_dim", dims_[t]}});
  Json mons = Json::object();
  for (const auto& [key, m] : registry_.entries())
    mons[std::to_string(key.first) + "," + std::to_string(key.second)] = m->id();
  Json cells = Json::array();
  for (std::size_t c = 0; c < ids_.size(); ++c) cells.push_back({{"id", ids_[c]}, {"type", types_[c]}});
  Json edges = Json::array();
  for (std::size_t t = 0; t < ids_.size(); ++t)
    for (std::size_t f = 0; f < ids_.size(); ++f)
      if (const auto& w = weight(t, f))
        edges.push_back({{"to", ids_[t]}, {"from", ids_[f]}, {"weight", weight_to_json(*w)}});
  return Json{{"types", types}, {"monoids", mons}, {"cells", cells}, {"edges", edges}};
}

void validate_states(const Network& net, const StateVector& x) {
  if (x.size() != net.num_cells())
    throw DimensionError("state vector has " + std::to_string(x.size()) + " cells, network has " +
                         std::to_string(net.num_cells()));
  for (std::size_t c = 0; c < x.size(); ++c)
    if (static_cast<std::size_t>(x[c].size()) != net.state_dim(net.type_of(c)))
      throw DimensionError("cell '" + net.id(c) + "': state dimension " + std::to_string(x[c].size()) +
                           ", expected " + std::to_string(net.state_dim(net.type_of(c))));
}

StateVector states_from_json(const Network& net, const Json& j) {
  StateVector x(net.num_cells());
  if (j.is_array()) {
    if (j.size() != net.num_cells()) throw SpecError("initial state array has wrong length");
    for (std::size_t c = 0; c < j.size(); ++c) x[c] = state_from_json(j[c]);
  } else if (j.is_object()) {
    std::vector<bool> seen(net.num_cells(), false);
    for (const auto& [id, v] : j.items()) {
      const std::size_t c = net.index_of(id);
      x[c] = state_from_json(v);
      seen[c] = true;
    }
    for (std::size_t c = 0; c < seen.size(); ++c)
      if (!seen[c]) throw SpecError("no initial state for cell '" + net.id(c) + "'");
  } else {
    throw SpecError("initial state must be an object or an array");
  }
  try {
    validate_states(net, x);
  } catch (const DimensionError& e) {
    throw SpecError(e.what());
  }
  return x;
}

Json states_to_json(const StateVector& x) {
  Json arr = Json::array();
  for (const State& s : x) arr.push_back(state_to_json(s));
  return arr;
}

Neighborhood in_neighborhood(const Network& net, std::size_t c, const StateVector& x) {
  if (c >= net.num_cells()) throw SpecError("unknown cell index " + std::to_string(c));
  validate_states(net, x);
  Neighborhood nb{net.type_of(c), {}, {}};
  for (std::size_t d = 0; d < net.num_cells(); ++d)
    if (const auto& w = net.weight(c, d)) {
      nb.sources.push_back(d);
      nb.entries.push_back(Input{net.type_of(d), *w, x[d]});
    }
  return nb;
}

Neighborhood in_neighborhood(const Network& net, const std::string& id, const StateVector& x) {
  return in_neighborhood(net, net.index_of(id), x);
}

std::vector<Value> evaluate_vector_field(const Network& net, const OracleFunction& oracle,
                                         const StateVector& x) {
  if (oracle.size() < net.num_types())
    throw DimensionError("oracle function has " + std::to_string(oracle.size()) +
                         " components for " + std::to_string(net.num_types()) + " types");
  for (std::size_t t = 0; t < net.num_types(); ++t)
    if (oracle[t].target() != t + 1 || oracle[t].num_types() != net.num_types())
      throw DimensionError("oracle component " + std::to_string(t + 1) +
                           " does not match the network's type signature");
  validate_states(net, x);
  std::vector<Value> out(net.num_cells());
  for (std::size_t c = 0; c < net.num_cells(); ++c) {
    const Neighborhood nb = in_neighborhood(net, c, x);
    out[c] = oracle[nb.center_type - 1].eval(x[c], nb.entries);
  }
  return out;
}

std::vector<StateVector> integrate_rk4(const Network& net, const OracleFunction& oracle,
                                       const StateVector& x0, double dt, std::size_t steps) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("integrate_rk4: dt must be positive");
  validate_states(net, x0);
  const auto field = [&](const StateVector& x) {
    std::vector<Value> f = evaluate_vector_field(net, oracle, x);
    for (std::size_t c = 0; c < f.size(); ++c)
      if (f[c].size() != x[c].size())
        throw DimensionError("cell '" + net.id(c) + "': output dimension differs from state dimension");
    return f;
  };
  const auto axpy = [](const StateVector& x, double h, const std::vector<Value>& k) {
    StateVector y = x;
    for (std::size_t c = 0; c < y.size(); ++c) y[c] += h * k[c];
    return y;
  };
  std::vector<StateVector> traj{x0};
  traj.reserve(steps + 1);
  StateVector x = x0;
  for (std::size_t step = 1; step <= steps; ++step) {
    const auto k1 = field(x);
    const auto k2 = field(axpy(x, dt / 2, k1));
    const auto k3 = field(axpy(x, dt / 2, k2));
    const auto k4 = field(axpy(x, dt, k3));
    for (std::size_t c = 0; c < x.size(); ++c) {
      x[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
      if (!x[c].allFinite())
        throw DivergenceError("non-finite state at step " + std::to_string(step) + " in cell '" +
                                  net.id(c) + "'",
                              step);
    }
    traj.push_back(x);
  }
  return traj;
}

}  // namespace ccn
