#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kppwaves/integrator.hpp"
#include "kppwaves/model.hpp"
#include "kppwaves/phaseplane.hpp"

namespace kppwaves {

enum class EventKind { YAxisCross, XAxisCross, UnitXCross, Escape, FixedPointArrival };

struct TrajectorySample {
  double tau = 0.0;
  double x = 0.0;
  double y = 0.0;

  PhasePoint point() const { return {x, y}; }
};

struct TrajectoryEvent {
  EventKind kind = EventKind::XAxisCross;
  std::size_t index = 0;  // into Trajectory::samples
  PhasePoint state;
  std::optional<FixedPointRole> target;  // FixedPointArrival only
};

/// Event-annotated orbit in (tau, X, Y). Samples are strictly monotone in tau
/// (decreasing for backward runs).
struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<TrajectoryEvent> events;
  PhasePoint seed;
  std::string seed_description;
  double c = 0.0;
  /// Fixed points the orbit is attached to at each end, when it is.
  std::optional<FixedPointRole> start_role;
  std::optional<FixedPointRole> end_role;
  ode::Status status = ode::Status::Stopped;
  long accepted_steps = 0;

  bool has_event(EventKind kind) const;
  std::vector<TrajectoryEvent> events_of(EventKind kind) const;
  /// Cubic Hermite interpolation in tau (derivatives from the field).
  PhasePoint at(const PhaseSystem& sys, double tau) const;
};

enum class Direction { Forward, Backward };

struct ShootOptions {
  ode::Options ode;
  double eps = 1e-6;        // seed offset along the local direction
  double r_arrival = 1e-5;  // fixed-point arrival radius
  double x_max = 1e3;
  double y_max = 1e3;
  double x_floor = 1e-14;  // treated as reaching the invariant axis X = 0
  bool stop_at_x_axis = false;
  bool stop_at_arrival = true;
};

/// Shoots the orbit attached to a fixed point.
///
/// P0 and P1 are seeded eps away along the eigendirection that leaves the axis
/// X = 0 (the centre direction Y = X/c for the Case I saddle-node; the explicit
/// c = 0 curve when the linearisation is nilpotent). The orbit through P2 is the
/// P2 <-> P0 connection: it is integrated from the P0 end, where it is
/// attracting, and returned reversed so that it starts at P2 and runs in the
/// requested direction.
///
/// Throws SeedFailure when the direction is not admissible and StepFailure on
/// step-size underflow.
Trajectory shoot_from(const PhaseSystem& sys, FixedPointRole point, Direction direction,
                      const ShootOptions& opts = {});

Trajectory reversed(const Trajectory& traj);

/// X at the first crossing of Y = 0 (1 when the orbit enters P2 without one).
double first_x_axis_intersection(const Trajectory& traj);

struct X0Entry {
  double c = 0.0;
  double x0 = 0.0;
};

struct X0Table {
  std::vector<X0Entry> entries;
  bool non_increasing = true;
  double max_increase = 0.0;
};

/// First X-axis intersection of the P0 branch over increasing speeds c >= 0.
X0Table x0_monotonicity_check(const CanonicalModel& cm, std::span<const double> speeds,
                              const ShootOptions& opts = {});

/// Change in X0 when the seed offset is halved.
double x0_seed_sensitivity(const PhaseSystem& sys, const ShootOptions& opts = {});

enum class WaveClass { Monotone, Oscillatory, None };

struct Connection {
  WaveClass classification = WaveClass::None;
  bool low_confidence = false;
  /// P2 -> P0 orbit of the system with speed |c| (empty for None).
  Trajectory trajectory;
  PhaseSystem system = PhaseSystemI(1.0, 2.0, 0.0, 2.0, 1.0);
  /// |X - 1| at successive extrema, ordered from P0 towards P2.
  std::vector<double> extrema;
  double x0 = 0.0;
  int n_oscillations = 0;
};

inline constexpr double kOscillationThreshold = 1e-6;
inline constexpr double kLowConfidenceBand = 1e-3;
// Overshoots near c* are tiny; stopping at the usual radius would miss them.
inline constexpr double kClassifyArrivalRadius = 1e-9;

/// Observed class of the wave with (original, signed) speed c.
Connection classify_connection(const CanonicalModel& cm, double c_original,
                               const ShootOptions& opts = {});

struct ProfileSample {
  double xi = 0.0;
  double f = 0.0;
  double df = 0.0;  // df/dxi
};

struct WaveProfile {
  std::vector<ProfileSample> samples;  // increasing xi
  double c = 0.0;
  WaveClass classification = WaveClass::None;
  std::vector<std::pair<double, double>> overshoot_extrema;  // (xi, f), right to left
  std::optional<double> support_edge;

  /// Cubic Hermite evaluation; constant extension beyond the sampled range.
  double eval(double xi) const;
  double xi_min() const { return samples.front().xi; }
  double xi_max() const { return samples.back().xi; }
  /// Uniform resampling (xi, f) over the sampled range.
  std::vector<std::pair<double, double>> resample(double dxi) const;
};

/// Quadrature of dxi along the orbit and f from X; presented as a wave moving
/// with speed -|c| (1 behind, 0 ahead), shifted so that f(0) = 1/2.
WaveProfile reconstruct_profile(const Trajectory& traj, const PhaseSystem& sys,
                                const CanonicalModel& cm);

/// Constant profile f = 1 sampled on [xi_min, xi_max].
WaveProfile constant_profile(double xi_min, double xi_max, std::size_t n);

struct TailExtrapolation {
  std::vector<double> thresholds;
  std::vector<double> positions;  // xi where f last drops below each threshold
  std::vector<double> gaps;
  std::vector<double> ratios;  // gap_j / gap_{j+1}
  bool converged = false;
  std::optional<double> xi0;
};

inline constexpr double kTailRatioMin = 1.25;

/// Positions of decreasing thresholds on the right tail and their geometric
/// extrapolation. Throws InsufficientTail if f never drops below the last one.
TailExtrapolation threshold_extrapolation(const WaveProfile& profile,
                                          std::span<const double> thresholds);

std::vector<double> default_tail_thresholds();

/// Estimated support edge when the model has q < 1 and m > q; absent otherwise
/// or when the threshold positions do not converge.
std::optional<double> detect_finite_propagation(const WaveProfile& profile,
                                                const CanonicalModel& cm);

/// Max-norm residual of the once-integrated wave equation
///   [f^{m-1} f']_a^xi + c [f]_a^xi + int_a^xi (f^p - f^q) = 0
/// on a uniform grid of spacing h over the sampled range (central differences
/// and the trapezoid rule, so the residual is second order in h).
double weak_form_residual(const WaveProfile& profile, const CanonicalModel& cm, double h);

std::string to_string(EventKind k);
std::string to_string(WaveClass w);

}  // namespace kppwaves
