#pragma once

// Dormand-Prince 5(4) with FSAL, PI step-size control and cubic Hermite dense
// output, specialised to the two-dimensional phase plane, plus a backward
// Euler stepper for stiff stretches.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "kppwaves/phaseplane.hpp"

namespace kppwaves::ode {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double h_init = 0.0;  // 0 selects a starting step automatically
  double h_min = 1e-14;
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 10'000'000;
  double max_span = 1e9;  // bound on |tau - tau0|
};

/// One accepted step, in the caller's time direction (t1 < t0 when backward).
struct StepRecord {
  double t0 = 0.0, t1 = 0.0;
  PhasePoint z0, z1;
  PhasePoint f0, f1;  // dz/dtau at the ends

  /// Cubic Hermite interpolant, third-order accurate.
  PhasePoint dense(double t) const {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return {h00 * z0.x + h10 * h * f0.x + h01 * z1.x + h11 * h * f1.x,
            h00 * z0.y + h10 * h * f0.y + h01 * z1.y + h11 * h * f1.y};
  }
};

enum class Status { Stopped, StepUnderflow, StepBudget, SpanBudget };

struct Result {
  Status status = Status::Stopped;
  long accepted = 0;
  long rejected = 0;
  double t_end = 0.0;
  PhasePoint z_end;
};

enum class Verdict { Continue, Stop };

/// Locates a sign change of g inside a step by bisection on the dense output.
/// Requires g(t0) and g(t1) of opposite sign (or g(t1) == 0).
template <class G>
double locate_root(const StepRecord& step, G&& g, double t_tol = 1e-12) {
  double a = step.t0, b = step.t1;
  double ga = g(step.z0);
  for (int it = 0; it < 200 && std::abs(b - a) > t_tol; ++it) {
    const double mid = 0.5 * (a + b);
    const double gm = g(step.dense(mid));
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (ga < 0.0)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

/// Integrates the autonomous system z' = rhs(z) from tau0 in the given
/// direction (+1 forward, -1 backward), handing each accepted step to the
/// observer until it returns Verdict::Stop or a budget is exhausted.
template <class Rhs, class Observer>
Result integrate(Rhs&& rhs, PhasePoint z0, double tau0, int direction, const Options& opt,
                 Observer&& observer) {
  // Dormand-Prince tableau; the system is autonomous so the nodes c_i are unused.
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double dir = direction >= 0 ? 1.0 : -1.0;
  auto f = [&](PhasePoint z) {
    const PhasePoint v = rhs(z);
    return PhasePoint{dir * v.x, dir * v.y};
  };
  auto scale = [&](double a, double b) {
    return opt.abs_tol + opt.rel_tol * std::max(std::abs(a), std::abs(b));
  };

  Result res;
  double s = 0.0;  // elapsed |tau - tau0|
  PhasePoint z = z0;
  PhasePoint k1 = f(z);
  if (!std::isfinite(k1.x) || !std::isfinite(k1.y)) {
    res.status = Status::StepUnderflow;
    res.z_end = z;
    res.t_end = tau0;
    return res;
  }

  double h = opt.h_init;
  if (h <= 0.0) {
    const double d0 = std::hypot(z.x / scale(z.x, z.x), z.y / scale(z.y, z.y));
    const double d1 = std::hypot(k1.x / scale(z.x, z.x), k1.y / scale(z.y, z.y));
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, opt.h_max);
  }

  double err_prev = 1e-4;
  while (true) {
    if (res.accepted >= opt.max_steps) {
      res.status = Status::StepBudget;
      break;
    }
    if (s >= opt.max_span) {
      res.status = Status::SpanBudget;
      break;
    }
    h = std::min({h, opt.h_max, opt.max_span - s + opt.h_min});
    if (h < opt.h_min) {
      res.status = Status::StepUnderflow;
      break;
    }

    const PhasePoint k2 = f(z + h * (a21 * k1));
    const PhasePoint k3 = f(z + h * (a31 * k1 + a32 * k2));
    const PhasePoint k4 = f(z + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const PhasePoint k5 = f(z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const PhasePoint k6 = f(z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const PhasePoint zn = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const PhasePoint k7 = f(zn);
    const PhasePoint e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double ex = e.x / scale(z.x, zn.x);
    const double ey = e.y / scale(z.y, zn.y);
    double err = std::sqrt(0.5 * (ex * ex + ey * ey));
    if (!std::isfinite(err) || !std::isfinite(zn.x) || !std::isfinite(zn.y)) {
      ++res.rejected;
      h *= 0.25;
      continue;
    }

    if (err <= 1.0) {
      StepRecord rec;
      rec.t0 = tau0 + dir * s;
      rec.t1 = tau0 + dir * (s + h);
      rec.z0 = z;
      rec.z1 = zn;
      rec.f0 = dir * k1;
      rec.f1 = dir * k7;
      s += h;
      z = zn;
      k1 = k7;
      ++res.accepted;
      err = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, 5.0);
      err_prev = err;
      h *= fac;
      if (observer(rec) == Verdict::Stop) {
        res.status = Status::Stopped;
        break;
      }
    } else {
      ++res.rejected;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
    }
  }
  res.t_end = tau0 + dir * s;
  res.z_end = z;
  return res;
}

struct ImplicitLeg {
  Result result;
  bool finished = false;  // done() became true
};

/// L-stable backward Euler with step doubling, for stiff stretches where the
/// explicit pair is held to tiny steps by a fast decaying direction. Steps are
/// handed to the observer as with integrate(); stops when done(z) holds.
template <class Rhs, class Jac, class Done, class Observer>
ImplicitLeg integrate_backward_euler(Rhs&& rhs, Jac&& jac, PhasePoint z0, double tau0, int direction,
                                     double rel_tol, long max_steps, Done&& done, Observer&& observer) {
  const double dir = direction >= 0 ? 1.0 : -1.0;
  auto norm = [](PhasePoint v) { return std::hypot(v.x, v.y); };

  // Solves w = z + dir h F(w) by Newton; false when it does not converge.
  auto solve = [&](PhasePoint z, double h, PhasePoint& w) {
    w = z;
    for (int it = 0; it < 30; ++it) {
      const PhasePoint fw = rhs(w);
      const auto j = jac(w);
      const double a = 1.0 - dir * h * j[0][0], b = -dir * h * j[0][1];
      const double c = -dir * h * j[1][0], d = 1.0 - dir * h * j[1][1];
      const double gx = w.x - z.x - dir * h * fw.x, gy = w.y - z.y - dir * h * fw.y;
      const double det = a * d - b * c;
      if (!(std::abs(det) > 0.0)) return false;
      const PhasePoint delta{(d * gx - b * gy) / det, (a * gy - c * gx) / det};
      w = w - delta;
      if (!std::isfinite(w.x) || !std::isfinite(w.y)) return false;
      if (norm(delta) <= 1e-14 * norm(w)) return true;
    }
    return false;
  };

  ImplicitLeg leg;
  Result& res = leg.result;
  PhasePoint z = z0;
  double s = 0.0;
  double h = 1e-3 * norm(z) / std::max(norm(rhs(z)), 1e-300);
  while (true) {
    if (res.accepted >= max_steps) {
      res.status = Status::StepBudget;
      break;
    }
    if (h < 1e-14 * std::max(1.0, s)) {
      res.status = Status::StepUnderflow;
      break;
    }
    PhasePoint big, half, two;
    if (!solve(z, h, big) || !solve(z, 0.5 * h, half) || !solve(half, 0.5 * h, two)) {
      ++res.rejected;
      h *= 0.25;
      continue;
    }
    const double err = norm(big - two) / (rel_tol * std::max(norm(two), norm(z)));
    if (err <= 1.0) {
      StepRecord rec;
      rec.t0 = tau0 + dir * s;
      rec.t1 = tau0 + dir * (s + h);
      rec.z0 = z;
      rec.z1 = two;
      rec.f0 = rhs(z);
      rec.f1 = rhs(two);
      s += h;
      z = two;
      ++res.accepted;
      h *= std::clamp(0.9 / std::sqrt(std::max(err, 1e-10)), 0.2, 2.0);
      if (observer(rec) == Verdict::Stop) {
        res.status = Status::Stopped;
        break;
      }
      if (done(z)) {
        leg.finished = true;
        break;
      }
    } else {
      ++res.rejected;
      h *= std::clamp(0.9 / std::sqrt(err), 0.1, 0.9);
    }
  }
  res.t_end = tau0 + dir * s;
  res.z_end = z;
  return leg;
}

}  // namespace kppwaves::ode
