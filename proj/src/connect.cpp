#include "kppwaves/connect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kppwaves/error.hpp"
#include "kppwaves/power.hpp"

namespace kppwaves {
namespace {

double norm(PhasePoint z) { return std::hypot(z.x, z.y); }

struct Anchor {
  FixedPointRole role;
  PhasePoint location;
  bool armed = false;
};

std::vector<Anchor> anchors_of(const PhaseSystem& sys) {
  std::vector<Anchor> out;
  for (auto role : {FixedPointRole::P0, FixedPointRole::P1, FixedPointRole::P2}) {
    const PhasePoint loc = fixed_point_location(sys, role);
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Anchor& a) {
      return a.location.x == loc.x && a.location.y == loc.y;
    });
    if (!dup) out.push_back({role, loc, false});
  }
  return out;
}

struct Seed {
  PhasePoint point;
  std::string description;
  bool slow_departure = false;  // saddle-node centre direction
};

// The centre-direction departure from the Case I saddle-node is stiff: the
// transverse rate is c while the orbit creeps out at about gamma X / c.
// Backward Euler carries it to X = kStiffExit; errors along the orbit only
// shift tau and transverse ones decay at rate c.
constexpr double kStiffExit = 1e-3;
constexpr double kStiffRelTol = 1e-7;

// Seed eps away from a fixed point on X = 0 along the eigendirection that
// leaves the axis. At such points the Jacobian is lower triangular; the axis
// X = 0 is the eigenvector of J11 and the other one is (J00 - J11, J10).
Seed axis_seed(const PhaseSystem& sys, FixedPointRole role, int dir, double eps) {
  const PhasePoint fp = fixed_point_location(sys, role);
  const Matrix2 j = jacobian(sys, fp);
  const double lambda = j[0][0];
  PhasePoint v{j[0][0] - j[1][1], j[1][0]};

  const auto* s1 = std::get_if<PhaseSystemI>(&sys);
  if (v.x == 0.0) {
    // Nilpotent linearisation: only the Case I origin at c = 0, where the
    // orbit through the origin is Y^2 = 2X/(2+gamma) - 2X^k/(2+gamma k).
    if (s1 && role == FixedPointRole::P0 && s1->c() == 0.0) {
      const double w = 1.0 / (2.0 + s1->gamma());
      const double x = eps * eps / (w + std::sqrt(w * w + eps * eps));
      const double y = dir * std::sqrt(2.0 * x * w);
      return {{x, y}, "P0 seed on the c=0 explicit curve, eps=" + std::to_string(eps)};
    }
    throw Error(ErrorCode::SeedFailure,
                to_string(role) + " has no eigendirection leaving the axis X=0");
  }
  if (v.x < 0.0) v = -1.0 * v;
  v = (1.0 / norm(v)) * v;

  const double scale = std::abs(j[0][0]) + std::abs(j[1][1]) + std::abs(j[1][0]);
  const bool centre = std::abs(lambda) <= 1e-14 * scale;
  const bool leaves = centre ? (dir * v.y > 0.0) : (dir * lambda > 0.0);
  if (!leaves) {
    throw Error(ErrorCode::SeedFailure, to_string(role) + " branch into X>0 does not leave in the " +
                                            (dir > 0 ? "forward" : "backward") + " direction");
  }
  std::string what = centre ? "centre direction" : "eigenvector (lambda=" + std::to_string(lambda) + ")";
  return {fp + eps * v, to_string(role) + " seed along " + what + ", eps=" + std::to_string(eps), centre && s1};
}

Trajectory integrate_orbit(const PhaseSystem& sys, const Seed& seed, FixedPointRole start,
                           int dir, const ShootOptions& opts) {
  Trajectory traj;
  traj.c = speed_of(sys);
  traj.seed = seed.point;
  traj.seed_description = seed.description;
  traj.start_role = start;
  traj.samples.push_back({0.0, seed.point.x, seed.point.y});

  auto anchors = anchors_of(sys);
  auto nearest = [&](PhasePoint z) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& a : anchors) d = std::min(d, norm(z - a.location));
    return std::max(d, 1e-300);
  };
  for (auto& a : anchors) a.armed = norm(seed.point - a.location) > 2.0 * opts.r_arrival;

  PhasePoint last_recorded = seed.point;
  auto push_sample = [&](double tau, PhasePoint z) {
    if (tau == traj.samples.back().tau) return traj.samples.size() - 1;
    traj.samples.push_back({tau, z.x, z.y});
    last_recorded = z;
    return traj.samples.size() - 1;
  };

  struct Pending {
    double tau;
    EventKind kind;
    std::optional<FixedPointRole> target;
  };

  auto rhs = [&sys](PhasePoint z) { return field_unchecked(sys, z); };
  auto observer = [&](const ode::StepRecord& st) {
    std::vector<Pending> found;
    auto crossing = [&](double g0, double g1) { return (g0 < 0.0 && g1 >= 0.0) || (g0 > 0.0 && g1 <= 0.0); };

    if (crossing(st.z0.y, st.z1.y)) {
      found.push_back({ode::locate_root(st, [](PhasePoint z) { return z.y; }), EventKind::XAxisCross, {}});
    }
    if (crossing(st.z0.x - 1.0, st.z1.x - 1.0)) {
      found.push_back({ode::locate_root(st, [](PhasePoint z) { return z.x - 1.0; }), EventKind::UnitXCross, {}});
    }
    for (auto& a : anchors) {
      const double d0 = norm(st.z0 - a.location), d1 = norm(st.z1 - a.location);
      if (a.armed && d0 >= opts.r_arrival && d1 < opts.r_arrival) {
        auto g = [&](PhasePoint z) { return norm(z - a.location) - opts.r_arrival; };
        found.push_back({ode::locate_root(st, g), EventKind::FixedPointArrival, a.role});
      }
      if (d1 > 2.0 * opts.r_arrival) a.armed = true;
    }
    std::sort(found.begin(), found.end(), [&](const Pending& a, const Pending& b) {
      return std::abs(a.tau - st.t0) < std::abs(b.tau - st.t0);
    });

    for (const auto& ev : found) {
      const PhasePoint z = st.dense(ev.tau);
      const std::size_t idx = push_sample(ev.tau, z);
      traj.events.push_back({ev.kind, idx, z, ev.target});
      if (ev.kind == EventKind::FixedPointArrival && opts.stop_at_arrival) {
        traj.end_role = ev.target;
        return ode::Verdict::Stop;
      }
      if (ev.kind == EventKind::XAxisCross && opts.stop_at_x_axis) return ode::Verdict::Stop;
    }

    const bool escaped = st.z1.x > opts.x_max || std::abs(st.z1.y) > opts.y_max;
    const bool on_axis = st.z1.x < opts.x_floor;
    if (escaped || on_axis ||
        norm(st.z1 - last_recorded) >= 1e-3 * nearest(st.z1)) {
      push_sample(st.t1, st.z1);
    }
    if (escaped || on_axis) {
      traj.events.push_back({escaped ? EventKind::Escape : EventKind::YAxisCross,
                             traj.samples.size() - 1, st.z1, {}});
      return ode::Verdict::Stop;
    }
    return ode::Verdict::Continue;
  };

  PhasePoint z_start = seed.point;
  double tau_start = 0.0;
  long leg_steps = 0;
  if (seed.slow_departure) {
    auto jac = [&sys](PhasePoint z) { return jacobian(sys, z); };
    auto done = [](PhasePoint z) { return z.x >= kStiffExit; };
    const auto leg = ode::integrate_backward_euler(rhs, jac, seed.point, 0.0, dir, kStiffRelTol,
                                                   opts.ode.max_steps, done, observer);
    leg_steps = leg.result.accepted;
    if (!leg.finished) {
      traj.status = leg.result.status;
      traj.accepted_steps = leg_steps;
      if (leg.result.status == ode::Status::StepUnderflow) {
        throw Error(ErrorCode::StepFailure, "implicit departure from P0 failed at X=" +
                                                std::to_string(leg.result.z_end.x));
      }
      if (leg.result.status != ode::Status::Stopped) push_sample(leg.result.t_end, leg.result.z_end);
      return traj;
    }
    z_start = leg.result.z_end;
    tau_start = leg.result.t_end;
  }

  const auto res = ode::integrate(rhs, z_start, tau_start, dir, opts.ode, observer);
  traj.status = res.status;
  traj.accepted_steps = leg_steps + res.accepted;
  if (res.status == ode::Status::StepUnderflow) {
    throw Error(ErrorCode::StepFailure, "step size underflow at tau=" + std::to_string(res.t_end) +
                                            " (X=" + std::to_string(res.z_end.x) +
                                            ", Y=" + std::to_string(res.z_end.y) + ")");
  }
  if (res.status != ode::Status::Stopped) push_sample(res.t_end, res.z_end);
  return traj;
}

}  // namespace

bool Trajectory::has_event(EventKind kind) const {
  return std::any_of(events.begin(), events.end(), [kind](const auto& e) { return e.kind == kind; });
}

std::vector<TrajectoryEvent> Trajectory::events_of(EventKind kind) const {
  std::vector<TrajectoryEvent> out;
  for (const auto& e : events) {
    if (e.kind == kind) out.push_back(e);
  }
  return out;
}

PhasePoint Trajectory::at(const PhaseSystem& sys, double tau) const {
  if (samples.empty()) throw Error(ErrorCode::DomainError, "empty trajectory");
  const bool increasing = samples.size() < 2 || samples.back().tau > samples.front().tau;
  auto before = [increasing](const TrajectorySample& s, double t) {
    return increasing ? s.tau < t : s.tau > t;
  };
  auto it = std::lower_bound(samples.begin(), samples.end(), tau, before);
  if (it == samples.begin()) return samples.front().point();
  if (it == samples.end()) return samples.back().point();
  const auto& b = *it;
  const auto& a = *(it - 1);
  ode::StepRecord seg;
  seg.t0 = a.tau;
  seg.t1 = b.tau;
  seg.z0 = a.point();
  seg.z1 = b.point();
  seg.f0 = field_unchecked(sys, seg.z0);
  seg.f1 = field_unchecked(sys, seg.z1);
  return seg.dense(tau);
}

Trajectory reversed(const Trajectory& traj) {
  Trajectory out = traj;
  std::reverse(out.samples.begin(), out.samples.end());
  const std::size_t n = out.samples.size();
  for (auto& e : out.events) e.index = n - 1 - e.index;
  std::reverse(out.events.begin(), out.events.end());
  std::swap(out.start_role, out.end_role);
  return out;
}

Trajectory shoot_from(const PhaseSystem& sys, FixedPointRole point, Direction direction,
                      const ShootOptions& opts) {
  const int dir = direction == Direction::Forward ? 1 : -1;
  const double c = speed_of(sys);

  if (point != FixedPointRole::P2) {
    if (point == FixedPointRole::P1 && std::holds_alternative<PhaseSystemI>(sys) && c == 0.0) {
      throw Error(ErrorCode::SeedFailure, "P1 coincides with P0 at c = 0");
    }
    return integrate_orbit(sys, axis_seed(sys, point, dir, opts.eps), point, dir, opts);
  }

  // P2 is a sink for c > 0 and a source for c < 0; the orbit joining it to P0
  // is computed from the P0 end and reversed.
  if (c == 0.0 || dir * c > 0.0) {
    throw Error(ErrorCode::SeedFailure, std::string("P2 has no connection leaving it ") +
                                            (dir > 0 ? "forward" : "backward") + " for c = " +
                                            std::to_string(c));
  }
  ShootOptions inner = opts;
  inner.stop_at_arrival = true;
  inner.stop_at_x_axis = false;
  Trajectory branch = integrate_orbit(sys, axis_seed(sys, FixedPointRole::P0, -dir, opts.eps),
                                      FixedPointRole::P0, -dir, inner);
  if (branch.end_role != FixedPointRole::P2) {
    throw Error(ErrorCode::SeedFailure, "the P0 branch did not reach P2 for c = " + std::to_string(c));
  }
  Trajectory out = reversed(branch);
  out.seed_description = "P2 connection, integrated from the P0 end (" + branch.seed_description + ")";
  return out;
}

double first_x_axis_intersection(const Trajectory& traj) {
  const bool from_end = traj.start_role != FixedPointRole::P0 && traj.end_role == FixedPointRole::P0;
  auto crossings = traj.events_of(EventKind::XAxisCross);
  if (from_end) std::reverse(crossings.begin(), crossings.end());

  double x0;
  auto it = std::find_if(crossings.begin(), crossings.end(),
                         [](const TrajectoryEvent& e) { return e.state.x > 0.0; });
  if (it != crossings.end()) {
    x0 = it->state.x;
  } else if (traj.start_role == FixedPointRole::P2 || traj.end_role == FixedPointRole::P2) {
    x0 = 1.0;  // enters P2 from Y > 0 without crossing the axis first
  } else if (traj.status == ode::Status::StepBudget || traj.status == ode::Status::SpanBudget) {
    throw Error(ErrorCode::NoIntersection, "integration budget exhausted before the orbit crossed Y = 0 or reached P2");
  } else {
    throw Error(ErrorCode::NoIntersection, "orbit neither crosses Y = 0 nor reaches P2");
  }
  if (x0 < 1.0 - 1e-6) {
    throw Error(ErrorCode::Inconclusive, "first X-axis intersection " + std::to_string(x0) + " < 1");
  }
  return x0;
}

X0Table x0_monotonicity_check(const CanonicalModel& cm, std::span<const double> speeds,
                              const ShootOptions& opts) {
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    if (speeds[i] < 0.0 || (i > 0 && !(speeds[i] > speeds[i - 1]))) {
      throw Error(ErrorCode::InvalidParameter, "speeds must be non-negative and increasing");
    }
  }
  ShootOptions o = opts;
  o.stop_at_x_axis = true;
  X0Table table;
  for (double c : speeds) {
    const auto sys = build_system(cm, c);
    const auto traj = shoot_from(sys, FixedPointRole::P0, Direction::Forward, o);
    const double x0 = first_x_axis_intersection(traj);
    if (!table.entries.empty()) {
      const double inc = x0 - table.entries.back().x0;
      table.max_increase = std::max(table.max_increase, inc);
      if (inc > 1e-6) table.non_increasing = false;
    }
    table.entries.push_back({c, x0});
  }
  return table;
}

double x0_seed_sensitivity(const PhaseSystem& sys, const ShootOptions& opts) {
  ShootOptions o = opts;
  o.stop_at_x_axis = true;
  const double a = first_x_axis_intersection(shoot_from(sys, FixedPointRole::P0, Direction::Forward, o));
  o.eps = opts.eps / 2.0;
  const double b = first_x_axis_intersection(shoot_from(sys, FixedPointRole::P0, Direction::Forward, o));
  return std::abs(a - b);
}

Connection classify_connection(const CanonicalModel& cm, double c_original, const ShootOptions& opts) {
  cm.require_supported();
  Connection out;
  if (c_original >= 0.0) {
    out.classification = WaveClass::None;
    out.system = build_system(cm, c_original);
    return out;
  }
  const double c = -c_original;
  out.system = build_system(cm, c);
  out.low_confidence = std::abs(c - critical_speed(cm)) <= kLowConfidenceBand;

  ShootOptions o = opts;
  o.stop_at_arrival = true;
  o.stop_at_x_axis = false;
  o.r_arrival = std::min(o.r_arrival, kClassifyArrivalRadius);
  Trajectory branch;
  try {
    branch = shoot_from(out.system, FixedPointRole::P0, Direction::Forward, o);
  } catch (const Error& e) {
    throw Error(ErrorCode::Inconclusive, std::string("shooting failed: ") + e.what());
  }
  if (branch.end_role != FixedPointRole::P2) {
    throw Error(ErrorCode::Inconclusive, "P0 branch did not reach P2 within the integration budget");
  }

  // Extrema of X sit on Y = 0 crossings; one counts when it follows an X = 1
  // crossing and clears the grazing threshold.
  bool crossed_unit = false;
  double max_x = 0.0;
  for (const auto& s : branch.samples) max_x = std::max(max_x, s.x);
  for (const auto& e : branch.events) {
    if (e.kind == EventKind::UnitXCross) crossed_unit = true;
    if (e.kind == EventKind::XAxisCross) {
      const double amp = std::abs(e.state.x - 1.0);
      if (crossed_unit && amp > kOscillationThreshold) out.extrema.push_back(amp);
      crossed_unit = false;
    }
  }
  out.n_oscillations = static_cast<int>(out.extrema.size());
  out.x0 = first_x_axis_intersection(branch);

  if (out.extrema.empty()) {
    if (max_x > 1.0 + kOscillationThreshold) {
      throw Error(ErrorCode::Inconclusive, "X leaves [0,1] without a measurable oscillation");
    }
    out.classification = WaveClass::Monotone;
  } else {
    // Overshoots and undershoots alternate and are not symmetric when the
    // damping is weak, so each is compared with the previous one on its side.
    for (std::size_t i = 2; i < out.extrema.size(); ++i) {
      if (!(out.extrema[i] < out.extrema[i - 2])) {
        throw Error(ErrorCode::Inconclusive, "oscillation amplitudes are not strictly decreasing");
      }
    }
    out.classification = WaveClass::Oscillatory;
  }
  out.trajectory = reversed(branch);
  return out;
}

double WaveProfile::eval(double xi) const {
  if (samples.empty()) return 0.0;
  if (xi <= samples.front().xi) return samples.front().f;
  if (xi >= samples.back().xi) return samples.back().f;
  auto it = std::lower_bound(samples.begin(), samples.end(), xi,
                             [](const ProfileSample& s, double v) { return s.xi < v; });
  if (it == samples.begin()) return it->f;
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double h = b.xi - a.xi;
  const double s = (xi - a.xi) / h;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * a.f + h10 * h * a.df + h01 * b.f + h11 * h * b.df;
}

std::vector<std::pair<double, double>> WaveProfile::resample(double dxi) const {
  std::vector<std::pair<double, double>> out;
  if (samples.empty() || !(dxi > 0.0)) return out;
  const double a = xi_min(), b = xi_max();
  const auto n = static_cast<std::size_t>(std::floor((b - a) / dxi));
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double xi = a + static_cast<double>(i) * dxi;
    out.emplace_back(xi, eval(xi));
  }
  return out;
}

WaveProfile reconstruct_profile(const Trajectory& traj, const PhaseSystem& sys,
                                const CanonicalModel& cm) {
  (void)cm;
  if (!traj.start_role || !traj.end_role || traj.samples.size() < 2) {
    throw Error(ErrorCode::NotAConnection, "trajectory is not attached to fixed points at both ends");
  }
  const double c = speed_of(sys);
  // The orbit solves the wave equation with speed c in xi_sys; the wave with
  // speed -|c| is xi -> -xi when c > 0.
  const double flip = c > 0.0 ? -1.0 : 1.0;

  WaveProfile prof;
  prof.c = -std::abs(c);
  prof.samples.reserve(traj.samples.size());
  double xi_sys = 0.0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    if (i > 0) {
      const auto& a = traj.samples[i - 1];
      const double mid_tau = 0.5 * (a.tau + s.tau);
      const PhasePoint zm = traj.at(sys, mid_tau);
      const double dtau = s.tau - a.tau;
      xi_sys += dtau / 6.0 *
                (xi_density(sys, a.x) + 4.0 * xi_density(sys, std::max(zm.x, 0.0)) + xi_density(sys, s.x));
    }
    prof.samples.push_back({flip * xi_sys, f_of_x(sys, s.x), flip * df_dxi(sys, s.point())});
  }
  if (prof.samples.front().xi > prof.samples.back().xi) {
    std::reverse(prof.samples.begin(), prof.samples.end());
  }
  // Keep xi strictly increasing.
  std::vector<ProfileSample> clean;
  clean.reserve(prof.samples.size());
  for (const auto& s : prof.samples) {
    if (clean.empty() || s.xi > clean.back().xi) clean.push_back(s);
  }
  prof.samples = std::move(clean);

  // Anchor f(0) = 1/2 at the last downward crossing.
  for (std::size_t i = prof.samples.size() - 1; i-- > 0;) {
    const auto& a = prof.samples[i];
    const auto& b = prof.samples[i + 1];
    if (a.f >= 0.5 && b.f < 0.5) {
      double lo = a.xi, hi = b.xi;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (prof.eval(mid) >= 0.5 ? lo : hi) = mid;
      }
      const double shift = 0.5 * (lo + hi);
      for (auto& s : prof.samples) s.xi -= shift;
      break;
    }
  }

  // Extrema of f away from the plateau value 1, listed right to left.
  for (std::size_t i = prof.samples.size() - 1; i-- > 0;) {
    const auto& a = prof.samples[i];
    const auto& b = prof.samples[i + 1];
    if ((a.df > 0.0 && b.df <= 0.0) || (a.df < 0.0 && b.df >= 0.0)) {
      const double t = (a.df == b.df) ? 0.5 : a.df / (a.df - b.df);
      const double xi = a.xi + t * (b.xi - a.xi);
      const double f = prof.eval(xi);
      if (std::abs(f - 1.0) > kOscillationThreshold && f > 0.5) prof.overshoot_extrema.emplace_back(xi, f);
    }
  }

  double max_f = 0.0;
  for (const auto& s : prof.samples) {
    max_f = std::max(max_f, s.f);
    if (s.f == 0.0 && !prof.support_edge) prof.support_edge = s.xi;
  }
  if (c == 0.0) prof.classification = WaveClass::None;
  else if (max_f > 1.0 + kOscillationThreshold && !prof.overshoot_extrema.empty())
    prof.classification = WaveClass::Oscillatory;
  else prof.classification = WaveClass::Monotone;
  return prof;
}

WaveProfile constant_profile(double xi_min, double xi_max, std::size_t n) {
  WaveProfile prof;
  prof.classification = WaveClass::Monotone;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = xi_min + (xi_max - xi_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    prof.samples.push_back({xi, 1.0, 0.0});
  }
  return prof;
}

std::vector<double> default_tail_thresholds() { return {1e-2, 1e-3, 1e-4, 1e-5}; }

TailExtrapolation threshold_extrapolation(const WaveProfile& profile,
                                          std::span<const double> thresholds) {
  TailExtrapolation out;
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  const auto& s = profile.samples;
  for (double th : thresholds) {
    std::size_t last = s.size();
    for (std::size_t i = s.size(); i-- > 0;) {
      if (s[i].f >= th) {
        last = i;
        break;
      }
    }
    if (last == s.size() || last + 1 == s.size()) {
      throw Error(ErrorCode::InsufficientTail,
                  "profile does not drop below threshold " + std::to_string(th));
    }
    double lo = s[last].xi, hi = s[last + 1].xi;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (profile.eval(mid) >= th ? lo : hi) = mid;
    }
    out.positions.push_back(0.5 * (lo + hi));
  }
  for (std::size_t j = 0; j + 1 < out.positions.size(); ++j) {
    out.gaps.push_back(out.positions[j + 1] - out.positions[j]);
  }
  for (std::size_t j = 0; j + 1 < out.gaps.size(); ++j) {
    out.ratios.push_back(out.gaps[j] / out.gaps[j + 1]);
  }
  out.converged = !out.ratios.empty() &&
                  std::all_of(out.ratios.begin(), out.ratios.end(), [](double r) { return r >= kTailRatioMin; });
  if (out.converged) {
    out.xi0 = out.positions.back() + out.gaps.back() / (out.ratios.back() - 1.0);
  }
  return out;
}

std::optional<double> detect_finite_propagation(const WaveProfile& profile, const CanonicalModel& cm) {
  if (profile.support_edge) return profile.support_edge;
  for (const auto& s : profile.samples) {
    if (s.f == 0.0) return s.xi;
  }
  const auto th = default_tail_thresholds();
  const auto ex = threshold_extrapolation(profile, th);
  if (!(cm.q < 1.0 && cm.m > cm.q)) return std::nullopt;
  return ex.xi0;
}

double weak_form_residual(const WaveProfile& profile, const CanonicalModel& cm, double h) {
  if (!(h > 0.0) || profile.samples.size() < 2) {
    throw Error(ErrorCode::InvalidParameter, "weak-form residual needs h > 0 and a sampled profile");
  }
  const double a = profile.xi_min(), b = profile.xi_max();
  const auto n = static_cast<std::size_t>(std::floor((b - a) / h));
  if (n < 4) throw Error(ErrorCode::InvalidParameter, "grid spacing too coarse for the profile");
  std::vector<double> f(n + 1);
  for (std::size_t i = 0; i <= n; ++i) f[i] = profile.eval(a + static_cast<double>(i) * h);

  const Power diff(cm.m - 1.0), pp(cm.p), pq(cm.q);
  auto flux = [&](std::size_t i) { return diff(f[i]) * (f[i + 1] - f[i - 1]) / (2.0 * h); };
  auto source = [&](std::size_t i) { return pp(f[i]) - pq(f[i]); };

  const double c = profile.c;
  const double flux0 = flux(1);
  double integral = 0.0, worst = 0.0;
  for (std::size_t i = 2; i < n; ++i) {
    integral += 0.5 * h * (source(i - 1) + source(i));
    const double r = flux(i) - flux0 + c * (f[i] - f[1]) + integral;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::YAxisCross: return "YAxisCross";
    case EventKind::XAxisCross: return "XAxisCross";
    case EventKind::UnitXCross: return "UnitXCross";
    case EventKind::Escape: return "Escape";
    case EventKind::FixedPointArrival: return "FixedPointArrival";
  }
  return "Escape";
}

std::string to_string(WaveClass w) {
  switch (w) {
    case WaveClass::Monotone: return "Monotone";
    case WaveClass::Oscillatory: return "Oscillatory";
    case WaveClass::None: return "None";
  }
  return "None";
}

}  // namespace kppwaves
