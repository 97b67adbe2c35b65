#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kppwaves/config.hpp"
#include "kppwaves/report.hpp"

namespace kppwaves {

struct CommandOptions {
  int jobs = 1;
  bool json = false;  // mirror CSV tables as JSON arrays
};

/// Per-item failures of a command; outputs for the other items are kept.
struct CommandStatus {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Writes analysis.json and returns the report.
nlohmann::json cmd_analyze(const RunConfig& cfg, const CommandOptions& opts = {});

/// Classification, trajectory and profile files for each speed.
CommandStatus cmd_shoot(const RunConfig& cfg, const CommandOptions& opts = {});

/// Advection test for each speed whose profile was written by cmd_shoot.
CommandStatus cmd_pde(const RunConfig& cfg, const CommandOptions& opts = {});

/// One row of the regime sweep.
SweepRow sweep_row(const CanonicalModel& cm, double c, const ShootOptions& shoot);
/// Rows ordered by c whatever the completion order.
std::vector<SweepRow> run_sweep(const CanonicalModel& cm, std::vector<double> speeds,
                                const ShootOptions& shoot, int jobs);
CommandStatus cmd_sweep(const RunConfig& cfg, const CommandOptions& opts = {});

/// Writes config.effective.json into the output directory.
void echo_config(const RunConfig& cfg);

}  // namespace kppwaves
