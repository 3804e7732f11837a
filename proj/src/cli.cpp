#include "ccn/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ccn/identities.hpp"
#include "ccn/network.hpp"
#include "ccn/spec_io.hpp"
#include "ccn/stirling.hpp"

namespace ccn::cli {

namespace {

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 10000;
  double tol = 1e-9;
  std::string out_path;

  std::string network_path, oracle_path, points_path, x0_path;
  std::string to = "coupling";
  std::string bound;
  std::string kind = "1";
  unsigned r = 0;
  unsigned max_n = 12;
  bool check = false;
  double dt = 0.01;
  std::size_t steps = 100;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json value_json(const Value& v) {
  if (v.size() == 1) return v[0];
  return state_to_json(v);
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + cfg.out_path);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::optional<BasisFamily> basis_for(const OracleComponent& o) {
  if (o.structured()) return BasisFamily::polynomial(o);
  if (o.spec() && o.spec()->at("family") == "symmetric_power") {
    const Json& p = o.spec()->at("params");
    return BasisFamily::symmetric(p.at("n").get<unsigned>(), p.at("k").get<unsigned>(), o.internal(),
                                  o.num_types(), o.target());
  }
  if (o.order_bound()) return BasisFamily::from_coupling(CouplingFamily::from_oracle(o));
  return std::nullopt;
}

Json component_label(const OracleComponent& o) {
  return Json{{"type_index", o.target()}, {"family", o.spec() ? o.spec()->at("family") : Json(o.name())}};
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const Network net = Network::parse(read_json_file(cfg.network_path));
  const OracleFunction oracle = parse_oracle_function(read_json_file(cfg.oracle_path), net.num_types());
  CheckOptions opts;
  opts.trials = cfg.trials;
  opts.seed = cfg.seed;
  opts.tol = cfg.tol;
  opts.state_dims = net.state_dims();
  for (std::size_t i = 1; i <= net.num_types(); ++i)
    for (std::size_t j = 1; j <= net.num_types(); ++j)
      if (!net.registry().contains(i, j))
        throw SpecError("network declares no monoid for type pair " + std::to_string(i) + "," + std::to_string(j));

  Json comps = Json::array();
  std::vector<std::string> violations;
  for (const OracleComponent& o : oracle) {
    Json entry = component_label(o);
    const auto tag = [&](const std::string& p) {
      const std::string v = "type " + std::to_string(o.target()) + ": " + p;
      if (std::find(violations.begin(), violations.end(), v) == violations.end()) violations.push_back(v);
    };
    const AdmissibilityReport adm = admissibility_check(o, net.registry(), opts);
    entry["admissibility"] = adm.to_json();
    if (!adm.permutation.ok) tag("permutation");
    if (!adm.merge.ok) tag("merge");
    if (!adm.zero_removal.ok) tag("zero_removal");
    if (!adm.determinism.ok) tag("determinism");

    const CouplingCheckReport cpl = coupling_family_check(CouplingFamily::from_oracle(o), net.registry(), opts);
    entry["coupling"] = cpl.to_json();
    if (!cpl.ok()) tag("coupling");

    if (const auto bf = basis_for(o)) {
      const BasisCheckReport bas = basis_family_check(*bf, net.registry(), opts);
      entry["basis"] = bas.to_json();
      if (!bas.ok()) tag("basis");
    } else {
      entry["basis"] = Json{{"skipped", "no finite order bound"}};
    }
    comps.push_back(std::move(entry));
  }
  const Json report{{"command", "verify"},
                    {"seed", cfg.seed},
                    {"trials", cfg.trials},
                    {"tol", cfg.tol},
                    {"network", Json{{"cells", net.num_cells()}, {"types", net.num_types()}}},
                    {"components", comps},
                    {"violations", violations},
                    {"ok", violations.empty()}};
  emit(cfg, dump(report), out);
  return violations.empty() ? kOk : kViolation;
}

Json orders_json(const OracleComponent& o, const RunConfig& cfg) {
  const CouplingFamily fam = CouplingFamily::from_oracle(o);
  Json j = Json::object();
  if (o.structured()) {
    ProbeOptions po;
    po.seed = cfg.seed;
    po.tol = cfg.tol;
    Json per = Json::array();
    for (TypeIndex t = 1; t <= o.num_types(); ++t) per.push_back(coupling_order(fam, t, nullptr, po).to_json());
    j["coupling_orders"] = per;
    Json lm = Json::array();
    for (const MultiIndex& k : locally_maximal_orders(fam, nullptr, po)) lm.push_back(k.vec());
    j["locally_maximal"] = lm;
  }
  if (const auto b = o.order_bound()) j["order_bound"] = b->vec();
  return j;
}

int cmd_decompose(const RunConfig& cfg, std::ostream& out) {
  const OracleComponent o = parse_oracle(read_json_file(cfg.oracle_path));
  const std::vector<ProbePoint> points = parse_points(read_json_file(cfg.points_path));
  const bool to_basis = cfg.to == "basis";
  std::optional<MultiIndex> K;
  if (to_basis) {
    if (cfg.bound.empty()) throw UsageError("finite support bound required: pass --bound");
    if (!o.order_bound()) throw UsageError("finite support bound required: oracle has no finite coupling order");
    K = parse_bound(cfg.bound);
    if (K->size() == 1 && o.num_types() > 1) K = (*K)[0] * MultiIndex::ones(o.num_types());
    if (K->size() != o.num_types()) throw UsageError("--bound must have one entry per type");
    if (!leq(*o.order_bound(), *K))
      throw UsageError("--bound " + K->to_string() + " does not dominate the order bound " +
                       o.order_bound()->to_string());
  }
  const CouplingFamily fam = CouplingFamily::from_oracle(o);

  Json pts = Json::array();
  for (const ProbePoint& p : points) {
    Json entry{{"point", point_to_json(p)}, {"f0", value_json(o.internal()(p.x))}, {"oracle", value_json(o.eval(p.x, p.s))}};
    Json comps = Json::array();
    std::map<MultiIndex, Json> by_k;
    const std::vector<Value> coupling = all_coupling_components(o, p.s, p.x);
    double discrepancy = 0.0;
    for (std::uint64_t mask = 1; mask < coupling.size(); ++mask) {
      const CellSpec sub = subset(p.s, mask);
      const MultiIndex k = type_profile(sub, o.num_types());
      Json idx = Json::array();
      for (std::size_t c = 0; c < p.s.size(); ++c)
        if ((mask >> c) & 1) idx.push_back(c);
      Value v;
      if (!to_basis) {
        v = coupling[mask];
      } else if (!leq(k, *K)) {
        v = Value::Zero(coupling[mask].size());
      } else {
        v = basis_from_oracle_direct(o, *K, sub, p.x);
        discrepancy = std::max(discrepancy, scaled_diff(v, basis_from_coupling(fam, sub, p.x)));
      }
      comps.push_back(Json{{"subset", idx}, {"k", k.vec()}, {"value", value_json(v)}});
      by_k[k].push_back(value_json(v));
    }
    entry["components"] = comps;
    Json grouped = Json::array();
    for (auto& [k, vals] : by_k) grouped.push_back(Json{{"k", k.vec()}, {"vals", vals}});
    entry["by_k"] = grouped;
    if (to_basis) {
      entry["direct_vs_coupling"] = discrepancy;
    } else {
      Value sum = o.internal()(p.x);
      for (std::uint64_t mask = 1; mask < coupling.size(); ++mask) sum += coupling[mask];
      entry["recomposition_error"] = scaled_diff(sum, o.eval(p.x, p.s));
    }
    pts.push_back(std::move(entry));
  }
  Json report{{"command", "decompose"}, {"to", cfg.to}, {"oracle", oracle_to_json(o)}, {"points", pts}};
  report["orders"] = orders_json(o, cfg);
  if (K) report["bound"] = K->vec();
  emit(cfg, dump(report), out);
  return kOk;
}

int cmd_stirling(const RunConfig& cfg, std::ostream& out) {
  if (cfg.max_n > 64) throw UsageError("--max is capped at 64");
  StirlingTable::Kind kind;
  if (cfg.kind == "1")
    kind = StirlingTable::Kind::First;
  else if (cfg.kind == "2")
    kind = StirlingTable::Kind::Second;
  else if (cfg.kind == "r1")
    kind = StirlingTable::Kind::RFirst;
  else
    throw UsageError("--kind must be 1, 2 or r1");
  if (kind != StirlingTable::Kind::RFirst && cfg.r != 0) throw UsageError("--r applies to --kind r1 only");
  const StirlingTable table(kind, cfg.r);

  // Entries can exceed 64 bits, so the rows are written as raw integer literals.
  std::ostringstream rows;
  rows << "[";
  for (unsigned n = 0; n <= cfg.max_n; ++n) {
    rows << (n ? ",\n    [" : "\n    [");
    const auto row = table.row(n);
    for (std::size_t k = 0; k < row.size(); ++k) rows << (k ? "," : "") << row[k];
    rows << "]";
  }
  rows << "\n  ]";

  Json report{{"command", "stirling"}, {"kind", cfg.kind}, {"r", cfg.r}, {"max", cfg.max_n}, {"rows", "@ROWS@"}};
  bool ok = true;
  if (cfg.check) {
    Json ids = Json::array();
    for (const IdentityResult& res : run_identity_suite(IdentityBounds::capped(cfg.max_n))) {
      ok = ok && res.ok();
      Json e{{"name", res.name}, {"cases", res.cases}, {"failures", res.failures}, {"ok", res.ok()}};
      if (!res.first_failure.empty()) e["first_failure"] = res.first_failure;
      ids.push_back(std::move(e));
    }
    report["check"] = Json{{"ok", ok}, {"identities", ids}};
  }
  std::string text = dump(report);
  const std::string marker = "\"@ROWS@\"";
  text.replace(text.find(marker), marker.size(), rows.str());
  emit(cfg, text, out);
  return ok ? kOk : kViolation;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!(cfg.dt > 0.0)) throw UsageError("--dt must be positive");
  const Network net = Network::parse(read_json_file(cfg.network_path));
  const OracleFunction oracle = parse_oracle_function(read_json_file(cfg.oracle_path), net.num_types());
  const StateVector x0 = states_from_json(net, read_json_file(cfg.x0_path));
  try {
    const auto traj = integrate_rk4(net, oracle, x0, cfg.dt, cfg.steps);
    Json arr = Json::array();
    for (const StateVector& x : traj) arr.push_back(states_to_json(x));
    emit(cfg, dump(arr), out);
    return kOk;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    emit(cfg, dump(Json{{"error", "divergence"}, {"step", e.step()}}), out);
    return kViolation;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Coupled cell network oracle toolkit"};
  app.require_subcommand(1);
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--trials", cfg.trials, "Property-check trials")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Scaled float tolerance")->capture_default_str();
  app.add_option("--out", cfg.out_path, "Write the report here instead of stdout");

  auto* verify = app.add_subcommand("verify", "Admissibility, coupling and basis checks");
  verify->add_option("network", cfg.network_path, "Network JSON")->required();
  verify->add_option("oracle", cfg.oracle_path, "Oracle JSON (object or per-type array)")->required();

  auto* decompose = app.add_subcommand("decompose", "Coupling or basis components at probe points");
  decompose->add_option("oracle", cfg.oracle_path, "Oracle JSON")->required();
  decompose->add_option("--points", cfg.points_path, "Points JSON")->required();
  decompose->add_option("--to", cfg.to, "coupling or basis")
      ->check(CLI::IsMember({"coupling", "basis"}))
      ->capture_default_str();
  decompose->add_option("--bound", cfg.bound, "Support bound K, e.g. 2 or 2,3");

  auto* stirling = app.add_subcommand("stirling", "Dump a Stirling table");
  stirling->add_option("--kind", cfg.kind, "1, 2 or r1")->capture_default_str();
  stirling->add_option("--r", cfg.r, "r for --kind r1")->capture_default_str();
  stirling->add_option("--max", cfg.max_n, "Largest n (at most 64)")->capture_default_str();
  stirling->add_flag("--check", cfg.check, "Run the identity suite up to --max");

  auto* simulate = app.add_subcommand("simulate", "RK4 trajectory");
  simulate->add_option("network", cfg.network_path, "Network JSON")->required();
  simulate->add_option("oracle", cfg.oracle_path, "Oracle JSON")->required();
  simulate->add_option("x0", cfg.x0_path, "Initial states JSON")->required();
  simulate->add_option("--dt", cfg.dt, "Step size")->capture_default_str();
  simulate->add_option("--steps", cfg.steps, "Number of steps")->capture_default_str();

  for (auto* sub : {verify, decompose, stirling, simulate}) sub->fallthrough();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (decompose->parsed()) return cmd_decompose(cfg, out);
    if (stirling->parsed()) return cmd_stirling(cfg, out);
    return cmd_simulate(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace ccn::cli
