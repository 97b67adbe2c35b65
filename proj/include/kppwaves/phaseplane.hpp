#pragma once

#include <array>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "kppwaves/model.hpp"
#include "kppwaves/power.hpp"

namespace kppwaves {

/// A point (X, Y) of the phase plane.
struct PhasePoint {
  double x = 0.0;
  double y = 0.0;
};

inline PhasePoint operator+(PhasePoint a, PhasePoint b) { return {a.x + b.x, a.y + b.y}; }
inline PhasePoint operator-(PhasePoint a, PhasePoint b) { return {a.x - b.x, a.y - b.y}; }
inline PhasePoint operator*(double s, PhasePoint a) { return {s * a.x, s * a.y}; }

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// X' = gamma X Y,  Y' = -Y (Y + c) + X - X^k   (m + q > 2)
///
/// X = f^{m+q-2}, Y = f^{m-2} f', and X^{(m-1)/gamma} dtau = dxi.
class PhaseSystemI {
 public:
  PhaseSystemI(double gamma, double k, double c, double m, double q);

  double gamma() const { return gamma_; }
  double k() const { return k_; }
  double c() const { return c_; }
  double m() const { return m_; }
  double q() const { return q_; }

  /// Field without domain checks; NaN for X < 0.
  PhasePoint field(PhasePoint z) const {
    return {gamma_ * z.x * z.y, -z.y * (z.y + c_) + z.x - pow_k_(z.x)};
  }
  Matrix2 jacobian(PhasePoint z) const;
  PhaseSystemI mirrored() const { return PhaseSystemI(gamma_, k_, -c_, m_, q_); }

  // Maps between phase variables and the wave profile.
  double f_of_x(double x) const { return real_pow(x, 1.0 / gamma_); }
  double xi_density(double x) const { return real_pow(x, (m_ - 1.0) / gamma_); }
  double df_dxi(PhasePoint z) const { return z.y * real_pow(f_of_x(z.x), 2.0 - m_); }

 private:
  double gamma_, k_, c_, m_, q_;
  Power pow_k_;
};

/// X' = gamma X Y,  Y' = -Y (Y + c1 X^{k1}) + 1 - X^{k2}   (0 < m + q <= 2)
///
/// X = f^k, Y = sqrt((m+q)/2) f^{(m-q-2)/2} f', sqrt(2/(m+q)) X^{(m-q)/(2k)} dtau = dxi.
class PhaseSystemII {
 public:
  PhaseSystemII(double gamma, double k, double k1, double k2, double c, double m, double q);

  double gamma() const { return gamma_; }
  double k() const { return k_; }
  double k1() const { return k1_; }
  double k2() const { return k2_; }
  double c() const { return c_; }
  double c1() const { return c1_; }
  double m() const { return m_; }
  double q() const { return q_; }

  PhasePoint field(PhasePoint z) const {
    return {gamma_ * z.x * z.y, -z.y * (z.y + c1_ * pow_k1_(z.x)) + 1.0 - pow_k2_(z.x)};
  }
  Matrix2 jacobian(PhasePoint z) const;
  PhaseSystemII mirrored() const { return PhaseSystemII(gamma_, k_, k1_, k2_, -c_, m_, q_); }

  double f_of_x(double x) const { return real_pow(x, 1.0 / k_); }
  double xi_density(double x) const {
    return std::sqrt(2.0 / (m_ + q_)) * real_pow(x, (m_ - q_) / (2.0 * k_));
  }
  double df_dxi(PhasePoint z) const {
    return z.y * real_pow(f_of_x(z.x), (2.0 + q_ - m_) / 2.0) / std::sqrt((m_ + q_) / 2.0);
  }

 private:
  double gamma_, k_, k1_, k2_, c_, c1_, m_, q_;
  Power pow_k1_, pow_k2_;
};

using PhaseSystem = std::variant<PhaseSystemI, PhaseSystemII>;

/// Builds the Case I or Case II system for wave speed c. Requires a supported
/// model and c >= 0; negative speeds are reached through mirrored().
PhaseSystem build_system(const CanonicalModel& cm, double c);

double speed_of(const PhaseSystem& sys);
PhaseSystem mirrored(const PhaseSystem& sys);

/// Checked evaluation: throws DomainError for X < 0.
PhasePoint vector_field(const PhaseSystem& sys, double x, double y);
PhasePoint field_unchecked(const PhaseSystem& sys, PhasePoint z);
Matrix2 jacobian(const PhaseSystem& sys, PhasePoint z);

double f_of_x(const PhaseSystem& sys, double x);
double xi_density(const PhaseSystem& sys, double x);
double df_dxi(const PhaseSystem& sys, PhasePoint z);

enum class FixedPointKind {
  SaddleNode,
  Saddle,
  StableNode,
  StableFocus,
  UnstableNode,
  UnstableFocus,
  Center,
  Degenerate,
};

/// P0: the equilibrium on X = 0 whose branch into X > 0 carries the wave
/// tail (the origin in Case I). P1: the other X = 0 equilibrium. P2: (1, 0).
enum class FixedPointRole { P0, P1, P2 };

struct FixedPointInfo {
  FixedPointRole role = FixedPointRole::P0;
  PhasePoint location;
  Matrix2 jacobian{};
  std::array<std::complex<double>, 2> eigenvalues{};
  FixedPointKind kind = FixedPointKind::Degenerate;
  /// Repeated real eigenvalue (discriminant zero); kind then reports the node.
  bool degenerate = false;
};

struct EigenDecomposition {
  std::array<std::complex<double>, 2> values{};
  FixedPointKind kind = FixedPointKind::Degenerate;
  bool repeated = false;
};

EigenDecomposition classify_jacobian(const Matrix2& j);

std::vector<FixedPointInfo> fixed_points(const PhaseSystem& sys);
PhasePoint fixed_point_location(const PhaseSystem& sys, FixedPointRole role);

/// Divergence of (B P, B Q) with B = X^{2/gamma - 1}; equals -c X^{2/gamma - 1}.
double dulac_divergence(const PhaseSystemI& sys, double x, double y);
double dulac_weight(const PhaseSystemI& sys, double x);

/// Normal flux n.V of the field across Y = a (1 - X), a = c / (2 (m+q-2)).
double region_g_slope(const PhaseSystemI& sys, double mq);
double region_g_residual(const PhaseSystemI& sys, double mq, double x);

/// Y^2 on the c = 0 trajectory through the origin (may be negative).
double zero_speed_curve(const PhaseSystemI& sys, double x);
/// Positive X-axis intersection of the c = 0 trajectory.
double zero_speed_x0(const PhaseSystemI& sys);

std::string to_string(FixedPointKind k);
std::string to_string(FixedPointRole r);

}  // namespace kppwaves
