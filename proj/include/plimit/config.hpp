#pragma once

// Run configuration: one JSON document per run. Every key has a default and
// unknown keys are rejected. Errors name the offending JSON path.
//
//   {
//     "grid":   {"h": 0.015625, "bounds": [-1, 1, -1, 1]}
//               or {"nx": 96, "ny": 96, "h": 0.02, "origin": [-1, -1]}
//               (bounds default to the domain's bounding box)
//     "domain": [{"shape": "disk", "center": [0, 0], "radius": 1,
//                 "op": "union"}, ...]              (default: unit disk)
//     "weight": {"type": "piecewise", "background": -1,
//                "regions": [{"shape": "disk", "center": [0, 0],
//                             "radius": 0.25, "value": 1}]}
//               | {"type": "affine", "a": 0, "b": 1, "c": 0}
//               | {"type": "radial", "center": [0, 0], "a": 1, "b": -1}
//                                                   (default: m = 1)
//     "zero_order": weight-style spec for C, or absent
//     "p_list": [4, 8, 16, 32],
//     "solver": {"tol": 1e-8, "max_iter": 20000},
//     "pack":   {"k": 2, "restarts": 8},
//     "check":  {"field": "", "lambda": null, "regime_tol": -1,
//                "kink_tol": null, "c_tol": 4},
//     "out": "plimit",
//     "seed": 0
//   }

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "plimit/error.hpp"
#include "plimit/geo_limits.hpp"
#include "plimit/grid.hpp"
#include "plimit/plap.hpp"
#include "plimit/viscosity.hpp"
#include "plimit/weight.hpp"

namespace plimit {

struct CheckConfig {
  std::string field;
  std::optional<double> lambda;
  ViscosityOptions options;
};

struct RunConfig {
  Grid grid;
  std::vector<Primitive> domain;
  WeightSpec weight = PiecewiseWeight{1.0, {}};
  std::optional<WeightSpec> zero_order;
  std::vector<double> p_list{4.0, 8.0, 16.0, 32.0};
  EigenOptions solver;
  int pack_k = 2;
  PackOptions pack;
  CheckConfig check;
  std::string out = "plimit";
  std::uint64_t seed = 0;
};

namespace config_detail {

using nlohmann::json;

[[noreturn]] inline void bad(const std::string& path, const std::string& msg) {
  fail(ErrorKind::config, "config " + (path.empty() ? "/" : path) + ": " + msg);
}

inline void allow_keys(const json& j, const std::string& path,
                       std::initializer_list<const char*> keys) {
  if (!j.is_object()) bad(path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) bad(path + "/" + k, "unknown key");
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

template <class Int>
inline Int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    bad(path, "expected an integer");
  if (j.is_number_unsigned()) return static_cast<Int>(j.get<std::uint64_t>());
  const auto v = j.get<std::int64_t>();
  if (v < 0 && std::is_unsigned_v<Int>) bad(path, "expected a nonnegative integer");
  return static_cast<Int>(v);
}

inline Point point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) bad(path, "expected [x, y]");
  return {number(j[0], path + "/0"), number(j[1], path + "/1")};
}

inline Shape shape(const json& j, const std::string& path,
                   std::initializer_list<const char*> extra) {
  if (!j.is_object() || !j.contains("shape")) bad(path, "missing 'shape'");
  const std::string kind = j["shape"].get<std::string>();
  auto keys = [&](std::initializer_list<const char*> own) {
    std::vector<const char*> all(own);
    all.insert(all.end(), extra.begin(), extra.end());
    const std::set<std::string> allowed(all.begin(), all.end());
    for (const auto& [k, v] : j.items())
      if (!allowed.count(k)) bad(path + "/" + k, "unknown key");
  };
  if (kind == "disk") {
    keys({"shape", "center", "radius"});
    if (!j.contains("radius")) bad(path, "disk needs 'radius'");
    const double r = number(j["radius"], path + "/radius");
    if (r < 0) bad(path + "/radius", "radius must be nonnegative");
    return Disk{j.contains("center") ? point(j["center"], path + "/center")
                                     : Point{},
                r};
  }
  if (kind == "rect") {
    keys({"shape", "lo", "hi"});
    if (!j.contains("lo") || !j.contains("hi")) bad(path, "rect needs 'lo' and 'hi'");
    return Rect{point(j["lo"], path + "/lo"), point(j["hi"], path + "/hi")};
  }
  if (kind == "polygon") {
    keys({"shape", "vertices"});
    if (!j.contains("vertices") || !j["vertices"].is_array() ||
        j["vertices"].size() < 3)
      bad(path + "/vertices", "polygon needs at least 3 vertices");
    Polygon poly;
    for (std::size_t v = 0; v < j["vertices"].size(); ++v)
      poly.vertices.push_back(
          point(j["vertices"][v], path + "/vertices/" + std::to_string(v)));
    return poly;
  }
  bad(path + "/shape", "unknown shape '" + kind + "'");
}

inline void extend_box(const Shape& s, double box[4]) {
  auto add = [&](Point p) {
    box[0] = std::min(box[0], p.x);
    box[1] = std::max(box[1], p.x);
    box[2] = std::min(box[2], p.y);
    box[3] = std::max(box[3], p.y);
  };
  if (const auto* d = std::get_if<Disk>(&s)) {
    add({d->center.x - d->radius, d->center.y - d->radius});
    add({d->center.x + d->radius, d->center.y + d->radius});
  } else if (const auto* r = std::get_if<Rect>(&s)) {
    add(r->lo);
    add(r->hi);
  } else {
    for (const auto& p : std::get<Polygon>(s).vertices) add(p);
  }
}

inline WeightSpec weight_spec(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  const std::string type = j.value("type", "piecewise");
  if (type == "piecewise") {
    allow_keys(j, path, {"type", "background", "regions"});
    PiecewiseWeight w;
    if (j.contains("background"))
      w.background = number(j["background"], path + "/background");
    if (j.contains("regions")) {
      const auto& regs = j["regions"];
      if (!regs.is_array()) bad(path + "/regions", "expected an array");
      for (std::size_t r = 0; r < regs.size(); ++r) {
        const std::string rp = path + "/regions/" + std::to_string(r);
        if (!regs[r].contains("value")) bad(rp, "region needs 'value'");
        w.regions.push_back({shape(regs[r], rp, {"value"}),
                             number(regs[r]["value"], rp + "/value")});
      }
    }
    return w;
  }
  if (type == "affine") {
    allow_keys(j, path, {"type", "a", "b", "c"});
    AffineWeight w;
    if (j.contains("a")) w.a = number(j["a"], path + "/a");
    if (j.contains("b")) w.b = number(j["b"], path + "/b");
    if (j.contains("c")) w.c = number(j["c"], path + "/c");
    return w;
  }
  if (type == "radial") {
    allow_keys(j, path, {"type", "center", "a", "b"});
    RadialWeight w;
    if (j.contains("center")) w.center = point(j["center"], path + "/center");
    if (j.contains("a")) w.a = number(j["a"], path + "/a");
    if (j.contains("b")) w.b = number(j["b"], path + "/b");
    return w;
  }
  bad(path + "/type", "unknown weight type '" + type + "'");
}

}  // namespace config_detail

inline RunConfig parse_config(const nlohmann::json& j) {
  using namespace config_detail;
  allow_keys(j, "", {"grid", "domain", "weight", "zero_order", "p_list",
                     "solver", "pack", "check", "out", "seed"});
  RunConfig cfg;

  if (j.contains("domain")) {
    const auto& d = j["domain"];
    if (!d.is_array() || d.empty()) bad("/domain", "expected a nonempty array");
    for (std::size_t k = 0; k < d.size(); ++k) {
      const std::string path = "/domain/" + std::to_string(k);
      Primitive prim;
      prim.shape = shape(d[k], path, {"op"});
      const std::string op = d[k].value("op", "union");
      if (op == "union")
        prim.op = SetOp::unite;
      else if (op == "subtract")
        prim.op = SetOp::subtract;
      else
        bad(path + "/op", "op must be 'union' or 'subtract'");
      cfg.domain.push_back(std::move(prim));
    }
  } else {
    cfg.domain.push_back({Disk{{0.0, 0.0}, 1.0}, SetOp::unite});
  }

  {
    const nlohmann::json g = j.value("grid", nlohmann::json::object());
    allow_keys(g, "/grid", {"nx", "ny", "h", "origin", "bounds"});
    const double h = g.contains("h") ? number(g["h"], "/grid/h") : 1.0 / 64.0;
    if (!(h > 0)) bad("/grid/h", "spacing must be positive");
    try {
      if (g.contains("nx") || g.contains("ny")) {
        if (!g.contains("nx") || !g.contains("ny") || !g.contains("origin"))
          bad("/grid", "explicit grids need nx, ny and origin");
        if (g.contains("bounds")) bad("/grid/bounds", "conflicts with nx/ny");
        const Point o = point(g["origin"], "/grid/origin");
        cfg.grid = Grid(integer<int>(g["nx"], "/grid/nx"),
                        integer<int>(g["ny"], "/grid/ny"), h, o.x, o.y);
      } else {
        double box[4] = {std::numeric_limits<double>::infinity(),
                         -std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity(),
                         -std::numeric_limits<double>::infinity()};
        if (g.contains("bounds")) {
          const auto& b = g["bounds"];
          if (!b.is_array() || b.size() != 4)
            bad("/grid/bounds", "expected [xmin, xmax, ymin, ymax]");
          for (int k = 0; k < 4; ++k)
            box[k] = number(b[k], "/grid/bounds/" + std::to_string(k));
        } else {
          for (const auto& prim : cfg.domain)
            if (prim.op == SetOp::unite) extend_box(prim.shape, box);
        }
        cfg.grid = Grid::covering(box[0], box[1], box[2], box[3], h);
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::config) throw;
      bad("/grid", e.what());
    }
  }

  if (j.contains("weight")) cfg.weight = weight_spec(j["weight"], "/weight");
  if (j.contains("zero_order") && !j["zero_order"].is_null())
    cfg.zero_order = weight_spec(j["zero_order"], "/zero_order");

  if (j.contains("p_list")) {
    const auto& pl = j["p_list"];
    if (!pl.is_array() || pl.empty()) bad("/p_list", "expected a nonempty array");
    cfg.p_list.clear();
    for (std::size_t k = 0; k < pl.size(); ++k) {
      const double p = number(pl[k], "/p_list/" + std::to_string(k));
      if (p < kMinP || p > kMaxP) bad("/p_list/" + std::to_string(k), "p must lie in [2, 64]");
      if (!cfg.p_list.empty() && p <= cfg.p_list.back())
        bad("/p_list", "values must be increasing");
      cfg.p_list.push_back(p);
    }
  }

  if (j.contains("solver")) {
    const auto& s = j["solver"];
    allow_keys(s, "/solver", {"tol", "max_iter"});
    if (s.contains("tol")) {
      cfg.solver.tol = number(s["tol"], "/solver/tol");
      if (!(cfg.solver.tol > 0)) bad("/solver/tol", "must be positive");
    }
    if (s.contains("max_iter")) {
      cfg.solver.max_iter = integer<int>(s["max_iter"], "/solver/max_iter");
      if (cfg.solver.max_iter < 1) bad("/solver/max_iter", "must be at least 1");
    }
  }

  if (j.contains("pack")) {
    const auto& p = j["pack"];
    allow_keys(p, "/pack", {"k", "restarts"});
    if (p.contains("k")) {
      cfg.pack_k = integer<int>(p["k"], "/pack/k");
      if (cfg.pack_k < 1) bad("/pack/k", "must be at least 1");
    }
    if (p.contains("restarts"))
      cfg.pack.restarts = integer<int>(p["restarts"], "/pack/restarts");
  }

  if (j.contains("check")) {
    const auto& c = j["check"];
    allow_keys(c, "/check", {"field", "lambda", "regime_tol", "kink_tol", "c_tol"});
    if (c.contains("field")) {
      if (!c["field"].is_string()) bad("/check/field", "expected a string");
      cfg.check.field = c["field"].get<std::string>();
    }
    if (c.contains("lambda") && !c["lambda"].is_null())
      cfg.check.lambda = number(c["lambda"], "/check/lambda");
    if (c.contains("regime_tol"))
      cfg.check.options.regime_tol = number(c["regime_tol"], "/check/regime_tol");
    if (c.contains("kink_tol") && !c["kink_tol"].is_null())
      cfg.check.options.kink_tol = number(c["kink_tol"], "/check/kink_tol");
    if (c.contains("c_tol"))
      cfg.check.options.c_tol = number(c["c_tol"], "/check/c_tol");
  }

  if (j.contains("out")) {
    if (!j["out"].is_string()) bad("/out", "expected a string");
    cfg.out = j["out"].get<std::string>();
  }
  if (j.contains("seed")) cfg.seed = integer<std::uint64_t>(j["seed"], "/seed");
  cfg.pack.seed = cfg.seed;
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::config, std::string("config: ") + e.what());
  }
  return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::config, "cannot open config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace plimit
