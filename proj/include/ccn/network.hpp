#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccn/oracle.hpp"

namespace ccn {

// Typed weighted multi-edge network with dense in-adjacency.
class Network {
 public:
  Network(std::vector<std::size_t> state_dims, MonoidRegistry registry,
          std::vector<std::string> cell_ids, std::vector<TypeIndex> cell_types);

  static Network parse(const Json& doc);
  Json to_json() const;

  std::size_t num_cells() const noexcept { return ids_.size(); }
  std::size_t num_types() const noexcept { return dims_.size(); }
  std::size_t state_dim(TypeIndex t) const { return dims_.at(t - 1); }
  const std::vector<std::size_t>& state_dims() const noexcept { return dims_; }
  const std::string& id(std::size_t c) const { return ids_.at(c); }
  TypeIndex type_of(std::size_t c) const { return types_.at(c); }
  std::size_t index_of(const std::string& id) const;
  const MonoidRegistry& registry() const noexcept { return registry_; }

  // Weight of the edge from -> to; nullopt means the monoid zero.
  const std::optional<Weight>& weight(std::size_t to, std::size_t from) const {
    return adj_[to * ids_.size() + from];
  }
  // Overwrites an entry.
  void set_weight(std::size_t to, std::size_t from, const Weight& w);
  // Parallel edge: combines with the existing entry through the monoid.
  void add_edge(std::size_t to, std::size_t from, const Weight& w);

  // Cell i of the result is cell order[i] of this network.
  Network relabeled(const std::vector<std::size_t>& order) const;

 private:
  const WeightMonoid& monoid_for(std::size_t to, std::size_t from) const;

  std::vector<std::size_t> dims_;
  MonoidRegistry registry_;
  std::vector<std::string> ids_;
  std::vector<TypeIndex> types_;
  std::vector<std::optional<Weight>> adj_;
};

using StateVector = std::vector<State>;

void validate_states(const Network& net, const StateVector& x);
// Object keyed by cell id, or an array in cell order.
StateVector states_from_json(const Network& net, const Json& j);
Json states_to_json(const StateVector& x);

struct Neighborhood {
  TypeIndex center_type;
  std::vector<std::size_t> sources;
  CellSpec entries;
};

Neighborhood in_neighborhood(const Network& net, std::size_t c, const StateVector& x);
Neighborhood in_neighborhood(const Network& net, const std::string& id, const StateVector& x);

std::vector<Value> evaluate_vector_field(const Network& net, const OracleFunction& oracle,
                                         const StateVector& x);

// Samples x(0), x(dt), ..., x(steps * dt).
std::vector<StateVector> integrate_rk4(const Network& net, const OracleFunction& oracle,
                                       const StateVector& x0, double dt, std::size_t steps);

}  // namespace ccn
