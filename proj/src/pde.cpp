#include "kppwaves/pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kppwaves/error.hpp"
#include "kppwaves/power.hpp"

namespace kppwaves {
namespace {

constexpr double kNegativityTol = 1e-12;

void require_pde_model(const CanonicalModel& cm) {
  cm.require_supported();
  if (cm.m < 1.0) {
    throw Error(ErrorCode::InvalidParameter, "the explicit scheme needs m >= 1 (bounded diffusivity)");
  }
  if (cm.q < 0.0) {
    throw Error(ErrorCode::InvalidParameter, "PDE runs need q >= 0");
  }
}

void require_settings(const PdeSettings& s) {
  if (!(s.cfl > 0.0 && s.cfl <= 0.9)) {
    throw Error(ErrorCode::InvalidParameter, "cfl must lie in (0, 0.9]");
  }
  if (!(s.kappa > 0.0) || !(s.alpha > 0.0) || !(s.beta > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "kappa, alpha and beta must be positive");
  }
}

}  // namespace

PdeRun make_run(const Grid& grid, const std::function<double(double)>& initial,
                const PdeSettings& settings) {
  if (grid.cells < 2 || !(grid.x_max > grid.x_min)) {
    throw Error(ErrorCode::InvalidParameter, "grid needs at least 2 cells and x_max > x_min");
  }
  require_settings(settings);
  PdeRun run;
  run.grid = grid;
  run.settings = settings;
  run.u.resize(static_cast<std::size_t>(grid.nodes()));
  for (int i = 0; i < grid.nodes(); ++i) {
    const double v = initial(grid.x(i));
    if (!(v >= 0.0)) {
      throw Error(ErrorCode::InvalidParameter, "initial data must be non-negative");
    }
    run.u[static_cast<std::size_t>(i)] = v;
  }
  if (settings.boundary == BoundaryKind::Dirichlet) {
    run.u.front() = settings.left_value;
    run.u.back() = settings.right_value;
  }
  return run;
}

double stable_dt(const PdeRun& run, const CanonicalModel& cm) {
  const auto& s = run.settings;
  const double dx = run.grid.dx();
  const Power diff(cm.m - 1.0);
  double max_d = 0.0, max_u = 0.0;
  for (double v : run.u) {
    max_d = std::max(max_d, diff(v));
    max_u = std::max(max_u, v);
  }
  double dt = std::numeric_limits<double>::infinity();
  if (max_d > 0.0) dt = s.cfl * dx * dx / (2.0 * s.kappa * max_d);
  if (s.reaction && max_u >= s.u_floor) {
    const double rate = std::abs(s.alpha * cm.p * real_pow(max_u, cm.p - 1.0) -
                                 s.beta * cm.q * real_pow(max_u, cm.q - 1.0));
    if (rate > 0.0) dt = std::min(dt, 0.5 / rate);
  }
  if (!std::isfinite(dt)) dt = s.cfl * dx * dx / 2.0;
  return dt;
}

void step(PdeRun& run, const CanonicalModel& cm, double dt_cap) {
  require_pde_model(cm);
  const auto& s = run.settings;
  const double dt = std::min(stable_dt(run, cm), dt_cap);
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidParameter, "time step must be positive");

  const std::size_t n = run.u.size();
  const double dx = run.grid.dx();
  const Power diff(cm.m - 1.0), pp(cm.p), pq(cm.q);

  // Interface fluxes; flux[i] sits between nodes i and i+1.
  std::vector<double> flux(n - 1);
  double d_left = diff(run.u[0]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d_right = diff(run.u[i + 1]);
    flux[i] = s.kappa * 0.5 * (d_left + d_right) * (run.u[i + 1] - run.u[i]) / dx;
    d_left = d_right;
  }

  const bool dirichlet = s.boundary == BoundaryKind::Dirichlet;
  const std::size_t first = dirichlet ? 1 : 0;
  const std::size_t last = dirichlet ? n - 1 : n;
  std::vector<double> next = run.u;
  for (std::size_t i = first; i < last; ++i) {
    const double in = (i > 0) ? flux[i - 1] : 0.0;
    const double out = (i + 1 < n) ? flux[i] : 0.0;
    double v = run.u[i] + dt * (out - in) / dx;
    if (v < -kNegativityTol) {
      std::ostringstream msg;
      msg << "diffusion produced u=" << v << " at x=" << run.grid.x(static_cast<int>(i));
      throw Error(ErrorCode::NegativityError, msg.str());
    }
    v = std::max(v, 0.0);
    const double ui = run.u[i];
    if (s.reaction && ui >= s.u_floor) {
      // Absorption may overshoot zero in one step; that is extinction, not an error.
      v = std::max(v + dt * (s.alpha * pp(ui) - s.beta * pq(ui)), 0.0);
    }
    if (!(v <= s.u_blowup)) {
      std::ostringstream msg;
      msg << "u=" << v << " exceeds " << s.u_blowup << " at x=" << run.grid.x(static_cast<int>(i))
          << ", t=" << run.time + dt;
      throw Error(ErrorCode::StabilityViolation, msg.str());
    }
    next[i] = v;
  }
  run.u = std::move(next);
  run.time += dt;
  run.dt = dt;
  ++run.steps;
  const auto x = level_position(run, s.front_level);
  run.front_track.push_back({run.time, x ? *x : std::numeric_limits<double>::quiet_NaN()});
}

void advance_to(PdeRun& run, const CanonicalModel& cm, double t_end) {
  // Stop short of a sliver step that rounding would otherwise leave behind.
  while (t_end - run.time > 1e-12 * std::max(1.0, std::abs(t_end))) {
    step(run, cm, t_end - run.time);
  }
}

std::optional<double> level_position(const PdeRun& run, double level) {
  std::optional<double> found;
  int crossings = 0;
  for (std::size_t i = 0; i + 1 < run.u.size(); ++i) {
    const double a = run.u[i] - level, b = run.u[i + 1] - level;
    if ((a >= 0.0 && b < 0.0) || (a < 0.0 && b >= 0.0)) {
      ++crossings;
      const double w = a / (a - b);
      found = run.grid.x(static_cast<int>(i)) + w * run.grid.dx();
    }
  }
  if (crossings != 1) return std::nullopt;
  return found;
}

double fit_front_speed(const std::vector<FrontRecord>& track, double t0, double t1) {
  double st = 0.0, sx = 0.0;
  std::size_t n = 0;
  for (const auto& r : track) {
    if (r.t < t0 || r.t > t1) continue;
    if (std::isnan(r.x)) {
      throw Error(ErrorCode::NoFront, "level set absent or not single-valued at t=" + std::to_string(r.t));
    }
    st += r.t;
    sx += r.x;
    ++n;
  }
  if (n < 10) {
    throw Error(ErrorCode::NoFront, "need at least 10 front records in the window, have " + std::to_string(n));
  }
  const double tm = st / static_cast<double>(n), xm = sx / static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (const auto& r : track) {
    if (r.t < t0 || r.t > t1) continue;
    num += (r.t - tm) * (r.x - xm);
    den += (r.t - tm) * (r.t - tm);
  }
  if (!(den > 0.0)) throw Error(ErrorCode::NoFront, "front records span no time");
  return num / den;
}

double measure_front_speed(const PdeRun& run, double level, double t0, double t1) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "front level must lie in (0, 1)");
  }
  if (level != run.settings.front_level) {
    throw Error(ErrorCode::InvalidParameter, "the run tracked level " + std::to_string(run.settings.front_level));
  }
  return fit_front_speed(run.front_track, t0, t1);
}

std::optional<double> support_edge(const PdeRun& run, double threshold) {
  if (!(threshold >= run.settings.u_floor)) {
    throw Error(ErrorCode::InvalidParameter, "support threshold must be at least u_floor");
  }
  for (std::size_t i = run.u.size(); i-- > 0;) {
    if (run.u[i] > threshold) return run.grid.x(static_cast<int>(i));
  }
  return std::nullopt;
}

double mass(const PdeRun& run) {
  double sum = 0.0;
  for (double v : run.u) sum += v;
  return sum * run.grid.dx();
}

AdvectionResult advect_profile_test(const WaveProfile& profile, const CanonicalModel& cm,
                                    double t_final, const AdvectionOptions& opts) {
  require_pde_model(cm);
  if (profile.classification == WaveClass::None || profile.samples.size() < 2) {
    throw Error(ErrorCode::InvalidParameter, "advection needs a travelling-wave profile");
  }
  if (!(t_final >= 0.0)) throw Error(ErrorCode::InvalidParameter, "T must be non-negative");
  const double c = profile.c;

  Grid grid;
  grid.cells = opts.cells;
  if (opts.domain) {
    grid.x_min = opts.domain->first;
    grid.x_max = opts.domain->second;
  } else {
    // The reference f(x - ct) must stay inside the sampled range at both ends.
    grid.x_min = profile.xi_min() + std::min(c, 0.0) * t_final;
    grid.x_max = profile.xi_max() + std::max(c, 0.0) * t_final;
  }

  PdeSettings settings;
  settings.cfl = opts.cfl;
  settings.left_value = profile.samples.front().f;
  settings.right_value = profile.samples.back().f;
  PdeRun run = make_run(grid, [&](double x) { return profile.eval(x); }, settings);

  std::vector<double> stops;
  const int n_check = std::max(opts.checkpoints, 1);
  for (int k = 1; k <= n_check; ++k) stops.push_back(t_final * k / n_check);
  for (double t : opts.snapshot_times) {
    if (t < 0.0 || t > t_final) {
      throw Error(ErrorCode::InvalidParameter, "snapshot time outside [0, T]");
    }
    stops.push_back(t);
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  AdvectionResult res;
  res.grid = grid;
  auto max_error = [&]() {
    double err = 0.0;
    for (int i = 1; i < grid.cells; ++i) {
      const double x = grid.x(i);
      err = std::max(err, std::abs(run.u[static_cast<std::size_t>(i)] - profile.eval(x - c * run.time)));
    }
    return err;
  };
  auto record = [&](double t) {
    const double err = max_error();
    res.errors.emplace_back(t, err);
    res.max_error = std::max(res.max_error, err);
    for (double ts : opts.snapshot_times) {
      if (ts == t) res.snapshots.emplace_back(t, run.u);
    }
    for (double v : run.u) res.max_u = std::max(res.max_u, v);
  };
  record(0.0);

  const double margin = 10.0 * grid.dx();
  auto too_small = [&](double xf, double t) {
    std::ostringstream msg;
    msg << "front at x=" << xf << " (t=" << t << ") is within 10 dx of the boundary; use at least ["
        << profile.xi_min() + std::min(c, 0.0) * t_final - margin << ", "
        << profile.xi_max() + std::max(c, 0.0) * t_final + margin << "]";
    return Error(ErrorCode::DomainTooSmall, msg.str());
  };
  // A boundary layer can pin the computed front, so the reference f(0) = 1/2
  // at x = c t is checked as well.
  for (double xf : {0.0, c * t_final}) {
    if (xf - grid.x_min < margin || grid.x_max - xf < margin) throw too_small(xf, xf == 0.0 ? 0.0 : t_final);
  }
  for (double t : stops) {
    if (t == 0.0) continue;
    while (t - run.time > 1e-12 * std::max(1.0, t)) {
      step(run, cm, t - run.time);
      const double xf = run.front_track.back().x;
      if (!std::isnan(xf) && (xf - grid.x_min < margin || grid.x_max - xf < margin)) throw too_small(xf, run.time);
    }
    record(t);
  }

  res.front_track = run.front_track;
  res.steps = run.steps;
  if (t_final > 0.0) {
    try {
      res.measured_speed = fit_front_speed(run.front_track, 0.0, t_final);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoFront) throw;
    }
  }
  return res;
}

}  // namespace kppwaves
