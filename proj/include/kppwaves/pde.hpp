#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "kppwaves/connect.hpp"
#include "kppwaves/model.hpp"

namespace kppwaves {

/// Uniform vertex grid: nodes x_i = x_min + i dx, i = 0..cells.
struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  int cells = 100;

  double dx() const { return (x_max - x_min) / cells; }
  double x(int i) const { return x_min + i * dx(); }
  int nodes() const { return cells + 1; }
};

enum class BoundaryKind { Dirichlet, ZeroFlux };

struct PdeSettings {
  double kappa = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double cfl = 0.9;
  BoundaryKind boundary = BoundaryKind::Dirichlet;
  double left_value = 1.0;
  double right_value = 0.0;
  bool reaction = true;
  double u_floor = 1e-12;  // reaction is switched off below this
  double u_blowup = 10.0;
  double front_level = 0.5;
};

struct FrontRecord {
  double t = 0.0;
  double x = 0.0;  // NaN when the level set is absent or not a single point
};

/// Explicit conservative finite-volume solution of
/// u_t = kappa (u^{m-1} u_x)_x + alpha u^p - beta u^q.
struct PdeRun {
  Grid grid;
  PdeSettings settings;
  std::vector<double> u;
  double time = 0.0;
  double dt = 0.0;  // last step taken
  long steps = 0;
  std::vector<FrontRecord> front_track;
};

PdeRun make_run(const Grid& grid, const std::function<double(double)>& initial,
                const PdeSettings& settings = {});

/// Largest stable step for the current state.
double stable_dt(const PdeRun& run, const CanonicalModel& cm);

/// Advances by min(stable_dt, dt_cap) and records the front position.
/// Throws StabilityViolation on blow-up and NegativityError when diffusion
/// drives a value negative. Absorption may extinguish a value (clamped to 0).
void step(PdeRun& run, const CanonicalModel& cm,
          double dt_cap = std::numeric_limits<double>::infinity());

/// Integrates up to time t_end exactly.
void advance_to(PdeRun& run, const CanonicalModel& cm, double t_end);

/// Position where u crosses level by linear interpolation; absent unless there
/// is exactly one crossing.
std::optional<double> level_position(const PdeRun& run, double level);

/// Least-squares slope of the recorded front positions over [t0, t1]. Throws
/// NoFront when fewer than ten records or any record lacks a front.
double measure_front_speed(const PdeRun& run, double level, double t0, double t1);
double fit_front_speed(const std::vector<FrontRecord>& track, double t0, double t1);

/// Rightmost node with u > threshold.
std::optional<double> support_edge(const PdeRun& run, double threshold);

/// Trapezoid-free mass dx * sum u_i (conserved by diffusion under zero flux).
double mass(const PdeRun& run);

struct AdvectionOptions {
  int cells = 4000;
  std::optional<std::pair<double, double>> domain;  // automatic when absent
  double cfl = 0.9;
  int checkpoints = 10;
  std::vector<double> snapshot_times;
};

struct AdvectionResult {
  double max_error = 0.0;
  std::vector<std::pair<double, double>> errors;  // (t, max-norm error)
  std::optional<double> measured_speed;
  double max_u = 0.0;
  Grid grid;
  std::vector<FrontRecord> front_track;
  std::vector<std::pair<double, std::vector<double>>> snapshots;
  long steps = 0;
};

/// Runs the PDE from f(x) to time T and compares with f(x - c t).
AdvectionResult advect_profile_test(const WaveProfile& profile, const CanonicalModel& cm,
                                    double t_final, const AdvectionOptions& opts = {});

}  // namespace kppwaves
