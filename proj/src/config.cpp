#include "kppwaves/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "kppwaves/error.hpp"

namespace kppwaves {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ConfigError, path + ": " + what);
}

void only_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) fail(path, "must be positive");
  return v;
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

template <class F>
void with(const json& j, const char* key, F&& f) {
  if (j.contains(key)) f(j.at(key));
}

}  // namespace

RunConfig parse_config(const json& j) {
  only_keys(j, "", {"model", "speeds", "sweep", "ode_tolerances", "seed_eps", "pde", "output_dir"});
  RunConfig cfg;

  if (!j.contains("model")) fail("model", "required");
  const json& jm = j.at("model");
  only_keys(jm, "model", {"m", "p", "q", "kappa", "alpha", "beta"});
  for (const char* key : {"m", "p", "q"}) {
    if (!jm.contains(key)) fail(std::string("model.") + key, "required");
  }
  cfg.model.m = positive(jm.at("m"), "model.m");
  cfg.model.p = number(jm.at("p"), "model.p");
  cfg.model.q = number(jm.at("q"), "model.q");
  cfg.general = jm.contains("kappa") || jm.contains("alpha") || jm.contains("beta");
  with(jm, "kappa", [&](const json& v) { cfg.model.kappa = positive(v, "model.kappa"); });
  with(jm, "alpha", [&](const json& v) { cfg.model.alpha = positive(v, "model.alpha"); });
  with(jm, "beta", [&](const json& v) { cfg.model.beta = positive(v, "model.beta"); });

  cfg.canonical = CanonicalModel::make(cfg.model.m, cfg.model.p, cfg.model.q);
  cfg.canonical.require_supported();
  try {
    auto [cm, scale] = nondimensionalize(cfg.model);
    cfg.scaling = scale;
  } catch (const Error& e) {
    fail("model", e.what());
  }

  with(j, "speeds", [&](const json& v) { cfg.speeds = numbers(v, "speeds"); });
  with(j, "sweep", [&](const json& v) {
    only_keys(v, "sweep", {"c_min", "c_max", "step"});
    SweepRange r;
    for (const char* key : {"c_min", "c_max", "step"}) {
      if (!v.contains(key)) fail(std::string("sweep.") + key, "required");
    }
    r.c_min = number(v.at("c_min"), "sweep.c_min");
    r.c_max = number(v.at("c_max"), "sweep.c_max");
    r.step = positive(v.at("step"), "sweep.step");
    if (r.c_max < r.c_min) fail("sweep.c_max", "must not be below c_min");
    cfg.sweep = r;
  });
  with(j, "ode_tolerances", [&](const json& v) {
    only_keys(v, "ode_tolerances", {"abs", "rel"});
    with(v, "abs", [&](const json& x) { cfg.abs_tol = positive(x, "ode_tolerances.abs"); });
    with(v, "rel", [&](const json& x) { cfg.rel_tol = positive(x, "ode_tolerances.rel"); });
  });
  with(j, "seed_eps", [&](const json& v) {
    cfg.seed_eps = positive(v, "seed_eps");
    if (cfg.seed_eps > 1e-2) fail("seed_eps", "must not exceed 1e-2");
  });
  with(j, "pde", [&](const json& v) {
    only_keys(v, "pde", {"x_min", "x_max", "N", "cfl", "T", "snapshot_times", "checkpoints"});
    auto& p = cfg.pde;
    with(v, "x_min", [&](const json& x) { p.x_min = number(x, "pde.x_min"); });
    with(v, "x_max", [&](const json& x) { p.x_max = number(x, "pde.x_max"); });
    if (p.x_min.has_value() != p.x_max.has_value()) fail("pde", "give both x_min and x_max or neither");
    if (p.x_min && !(*p.x_max > *p.x_min)) fail("pde.x_max", "must exceed x_min");
    with(v, "N", [&](const json& x) {
      if (!x.is_number_integer() || x.get<long>() < 2) fail("pde.N", "expected an integer >= 2");
      p.cells = x.get<int>();
    });
    with(v, "cfl", [&](const json& x) {
      p.cfl = positive(x, "pde.cfl");
      if (p.cfl > 0.9) fail("pde.cfl", "must not exceed 0.9");
    });
    with(v, "T", [&](const json& x) {
      p.t_final = number(x, "pde.T");
      if (p.t_final < 0.0) fail("pde.T", "must be non-negative");
    });
    with(v, "checkpoints", [&](const json& x) {
      if (!x.is_number_integer() || x.get<long>() < 1) fail("pde.checkpoints", "expected an integer >= 1");
      p.checkpoints = x.get<int>();
    });
    with(v, "snapshot_times", [&](const json& x) { p.snapshot_times = numbers(x, "pde.snapshot_times"); });
    for (std::size_t i = 0; i < p.snapshot_times.size(); ++i) {
      const double t = p.snapshot_times[i];
      if (t < 0.0 || t > p.t_final) fail("pde.snapshot_times[" + std::to_string(i) + "]", "outside [0, T]");
    }
  });
  with(j, "output_dir", [&](const json& v) {
    if (!v.is_string() || v.get<std::string>().empty()) fail("output_dir", "expected a non-empty string");
    cfg.output_dir = v.get<std::string>();
  });
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, path + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path + ": " + e.what());
  }
  return parse_config(j);
}

json effective_config(const RunConfig& cfg) {
  json j;
  j["model"] = {{"m", cfg.model.m}, {"p", cfg.model.p}, {"q", cfg.model.q}};
  if (cfg.general) {
    j["model"]["kappa"] = cfg.model.kappa;
    j["model"]["alpha"] = cfg.model.alpha;
    j["model"]["beta"] = cfg.model.beta;
  }
  j["speeds"] = cfg.speeds;
  if (cfg.sweep) {
    j["sweep"] = {{"c_min", cfg.sweep->c_min}, {"c_max", cfg.sweep->c_max}, {"step", cfg.sweep->step}};
  }
  j["ode_tolerances"] = {{"abs", cfg.abs_tol}, {"rel", cfg.rel_tol}};
  j["seed_eps"] = cfg.seed_eps;
  json p = {{"N", cfg.pde.cells},
            {"cfl", cfg.pde.cfl},
            {"T", cfg.pde.t_final},
            {"checkpoints", cfg.pde.checkpoints},
            {"snapshot_times", cfg.pde.snapshot_times}};
  if (cfg.pde.x_min) {
    p["x_min"] = *cfg.pde.x_min;
    p["x_max"] = *cfg.pde.x_max;
  }
  j["pde"] = p;
  j["output_dir"] = cfg.output_dir;
  return j;
}

ShootOptions shoot_options(const RunConfig& cfg) {
  ShootOptions o;
  o.ode.abs_tol = cfg.abs_tol;
  o.ode.rel_tol = cfg.rel_tol;
  o.eps = cfg.seed_eps;
  return o;
}

std::vector<double> sweep_speeds(const SweepRange& r) {
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((r.c_max - r.c_min) / r.step + 1e-9));
  for (long i = 0; i <= n; ++i) {
    const double c = r.c_min + static_cast<double>(i) * r.step;
    out.push_back(std::round(c * 1e9) / 1e9 + 0.0);  // no negative zero
  }
  return out;
}

}  // namespace kppwaves
