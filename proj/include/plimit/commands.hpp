#pragma once

// The four batch commands behind the plimit tool. Each reads a RunConfig,
// runs the pipeline and writes its outputs under the configured prefix.

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "plimit/config.hpp"
#include "plimit/error.hpp"
#include "plimit/geo_limits.hpp"
#include "plimit/grid.hpp"
#include "plimit/io.hpp"
#include "plimit/plap.hpp"
#include "plimit/viscosity.hpp"
#include "plimit/weight.hpp"

namespace plimit {

struct Pipeline {
  DomainMask mask;
  DistanceField dist;
  WeightField weight;
  std::optional<ScalarField> zero_order;

  const ScalarField* potential() const { return zero_order ? &*zero_order : nullptr; }
};

namespace cmd_detail {

// Re-raise a module error with the config key that produced the input.
template <class F>
auto in_context(const char* key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("config ") + key + ": " + e.what());
  }
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::io, "cannot write " + path);
  return os;
}

inline nlohmann::json node_json(const Grid& g, Node n) {
  return {{"i", n.i}, {"j", n.j}, {"x", g.x(n.i)}, {"y", g.y(n.j)}};
}

inline std::string p_tag(double p) {
  std::string s = format_double(p);
  for (char& c : s)
    if (c == '.') c = '_';
  return s;
}

}  // namespace cmd_detail

inline Pipeline build_pipeline(const RunConfig& cfg) {
  using cmd_detail::in_context;
  DomainMask mask = in_context("/domain", [&] { return rasterize(cfg.domain, cfg.grid); });
  DistanceField dist = edt(mask);
  WeightField w = in_context("/weight", [&] { return build_weight(cfg.weight, mask); });
  std::optional<ScalarField> c;
  if (cfg.zero_order) {
    const WeightField cw =
        in_context("/zero_order", [&] { return build_weight(*cfg.zero_order, mask); });
    c = ScalarField(cfg.grid, cw.values());
    for (double v : c->u)
      if (v < 0) fail(ErrorKind::config, "config /zero_order: C must be nonnegative");
  }
  return {std::move(mask), std::move(dist), std::move(w), std::move(c)};
}

inline nlohmann::json to_json(const GeoLimits& L, const Grid& g) {
  using cmd_detail::node_json;
  nlohmann::json j;
  j["r_plus"] = L.r_plus;
  j["center_plus"] = node_json(g, L.center_plus);
  j["r2_plus"] = L.r2_plus;
  nlohmann::json centers = nlohmann::json::array();
  for (const Node& n : L.centers2) centers.push_back(node_json(g, n));
  j["centers2"] = centers;
  j["lambda1_inf"] = L.lambda1_inf;
  j["lambda2_inf"] = L.lambda2_inf;
  j["lambda1_inf_C"] = L.lambda1_inf_C;
  j["r_minus"] = L.r_minus ? nlohmann::json(*L.r_minus) : nlohmann::json();
  j["center_minus"] = L.center_minus ? node_json(g, *L.center_minus) : nlohmann::json();
  j["mu1_inf"] = L.mu1_inf ? nlohmann::json(*L.mu1_inf) : nlohmann::json();
  j["grid"] = grid_json(g);
  return j;
}

inline GeoLimits cmd_limits(const RunConfig& cfg, std::ostream& log) {
  const Pipeline pl = build_pipeline(cfg);
  const GeoLimits L =
      cmd_detail::in_context("/weight", [&] { return geo_limits(pl.dist, pl.weight); });
  auto os = cmd_detail::open_out(cfg.out + "_limits.json");
  nlohmann::json rec = to_json(L, cfg.grid);
  rec["has_zero_order"] = cfg.zero_order.has_value();
  os << rec.dump() << '\n';

  log << "grid " << cfg.grid.nx << "x" << cfg.grid.ny << ", h = " << cfg.grid.h << ", "
      << pl.mask.count() << " inside nodes\n";
  log << "R+ = " << L.r_plus << "  lambda1_inf = " << L.lambda1_inf << '\n';
  log << "R2+ = " << L.r2_plus << "  lambda2_inf = " << L.lambda2_inf << '\n';
  if (L.mu1_inf)
    log << "R- = " << *L.r_minus << "  mu1_inf = " << *L.mu1_inf << '\n';
  else
    log << "no negative region, mu1_inf undefined\n";
  if (cfg.zero_order) log << "lambda1_inf(C,m) = " << L.lambda1_inf_C << '\n';
  return L;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& recs) {
  os << "p,lambda_root,target,deviation,cone_bound,iterations,converged\n";
  for (const auto& r : recs)
    os << format_double(r.p) << ',' << format_double(r.lambda_root) << ','
       << format_double(r.target) << ',' << format_double(r.deviation) << ','
       << format_double(r.cone_bound) << ',' << r.iterations << ','
       << (r.converged ? 1 : 0) << '\n';
}

inline std::vector<SweepRecord> cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  const Pipeline pl = build_pipeline(cfg);
  const auto recs = cmd_detail::in_context("/weight", [&] {
    return sweep(pl.weight, cfg.p_list, pl.potential(), cfg.solver);
  });
  {
    auto os = cmd_detail::open_out(cfg.out + "_sweep.csv");
    write_sweep_csv(os, recs);
  }
  for (const auto& r : recs) {
    if (r.error.empty())
      save_field(cfg.out + "_field_p" + cmd_detail::p_tag(r.p) + ".csv", r.field,
                 "eigenfunction");
    log << "p = " << r.p;
    if (!r.error.empty()) {
      log << "  failed: " << r.error << '\n';
      continue;
    }
    log << "  lambda^(1/p) = " << r.lambda_root << "  deviation = " << r.deviation
        << "  iterations = " << r.iterations << (r.converged ? "" : "  NOT CONVERGED")
        << '\n';
  }
  return recs;
}

inline bool sweep_ok(const std::vector<SweepRecord>& recs) {
  for (const auto& r : recs)
    if (!r.error.empty() || !r.converged) return false;
  return true;
}

inline nlohmann::json to_json(const ViscosityReport& rep, double lambda) {
  auto stats = [](const RegimeStats& s) {
    return nlohmann::json{{"count", s.count}, {"max_residual", s.max_residual},
                          {"pass", s.pass}};
  };
  return {{"lambda", lambda},          {"tolerance", rep.tolerance},
          {"pos", stats(rep.pos)},     {"neg", stats(rep.neg)},
          {"zero", stats(rep.zero)},   {"excluded", rep.excluded},
          {"boundary_max", rep.boundary_max}, {"lipschitz", rep.lipschitz},
          {"kink_tol", rep.kink_tol}};
}

/// An empty field path or unset lambda falls back to the config's check
/// section; an unset lambda there means 1/R+.
inline ViscosityReport cmd_check(const RunConfig& cfg, std::ostream& log,
                                 std::string field_path = {},
                                 std::optional<double> lambda = std::nullopt) {
  if (field_path.empty()) field_path = cfg.check.field;
  if (!lambda) lambda = cfg.check.lambda;
  if (field_path.empty()) fail(ErrorKind::config, "config /check/field: no field file given");
  const Pipeline pl = build_pipeline(cfg);
  const ScalarField u = load_field(field_path);
  require(u.grid.same_shape(cfg.grid), ErrorKind::grid_mismatch,
          "field " + field_path + " is " + std::to_string(u.grid.nx) + "x" +
              std::to_string(u.grid.ny) + " but the config grid is " +
              std::to_string(cfg.grid.nx) + "x" + std::to_string(cfg.grid.ny));
  if (!lambda) lambda = 1.0 / r_plus(pl.dist, pl.weight.plus()).radius;

  ViscosityOptions opts = cfg.check.options;
  opts.keep_residual_field = true;
  const ViscosityReport rep = check_viscosity(u, *lambda, pl.weight, opts);
  {
    auto os = cmd_detail::open_out(cfg.out + "_check.json");
    os << to_json(rep, *lambda).dump() << '\n';
  }
  save_field(cfg.out + "_residual.csv", *rep.residual, "residual");

  log << "lambda = " << *lambda << "  tolerance = " << rep.tolerance << '\n';
  auto line = [&](const char* name, const RegimeStats& s) {
    log << name << ": " << s.count << " nodes, max residual " << s.max_residual << ", "
        << (s.pass ? "pass" : "FAIL") << '\n';
  };
  line("POS ", rep.pos);
  line("NEG ", rep.neg);
  line("ZERO", rep.zero);
  log << "excluded " << rep.excluded << " nodes near kinks or regime boundaries\n";
  return rep;
}

inline PackingResult cmd_pack(const RunConfig& cfg, std::ostream& log) {
  const Pipeline pl = build_pipeline(cfg);
  PackOptions opts = cfg.pack;
  opts.seed = cfg.seed;
  const PackingResult res = cmd_detail::in_context(
      "/pack/k", [&] { return pack(cfg.pack_k, pl.dist, pl.weight.plus(), opts); });
  nlohmann::json j;
  j["k"] = res.k;
  j["radius"] = res.radius;
  j["lambda_k_inf"] = 1.0 / res.radius;
  j["exact"] = res.exact;
  j["seed"] = cfg.seed;
  nlohmann::json centers = nlohmann::json::array();
  for (const Node& n : res.centers) centers.push_back(cmd_detail::node_json(cfg.grid, n));
  j["centers"] = centers;
  auto os = cmd_detail::open_out(cfg.out + "_pack.json");
  os << j.dump() << '\n';
  log << res.k << " balls of radius " << res.radius << " (lambda_k_inf upper bound "
      << 1.0 / res.radius << ")" << (res.exact ? "" : ", heuristic") << '\n';
  return res;
}

}  // namespace plimit
