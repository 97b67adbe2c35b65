#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kppwaves/connect.hpp"
#include "kppwaves/model.hpp"

namespace kppwaves {

struct SweepRange {
  double c_min = 0.0;
  double c_max = 0.0;
  double step = 0.1;
};

struct PdeConfig {
  std::optional<double> x_min;  // automatic from the profile when absent
  std::optional<double> x_max;
  int cells = 4000;
  double cfl = 0.9;
  double t_final = 5.0;
  int checkpoints = 10;
  std::vector<double> snapshot_times;
};

/// Shared configuration of every subcommand. Speeds are canonical speeds.
struct RunConfig {
  GeneralModel model;
  bool general = false;  // kappa/alpha/beta given explicitly
  CanonicalModel canonical;
  ScalingMap scaling;
  std::vector<double> speeds;
  std::optional<SweepRange> sweep;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double seed_eps = 1e-6;
  PdeConfig pde;
  std::string output_dir = "out";
};

/// Validates and resolves defaults. Errors carry the offending field path
/// (ConfigError), except an unsupported exponent triple (Unsupported).
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Effective configuration with every default spelled out.
nlohmann::json effective_config(const RunConfig& cfg);

ShootOptions shoot_options(const RunConfig& cfg);

/// Grid points c_min, c_min + step, ..., c_max, rounded to 1e-9.
std::vector<double> sweep_speeds(const SweepRange& r);

}  // namespace kppwaves
