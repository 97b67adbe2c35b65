#include "kppwaves/phaseplane.hpp"

#include <cmath>
#include <limits>

#include "kppwaves/error.hpp"

namespace kppwaves {
namespace {

// d/dx x^e with the x = 0 limits spelled out.
double dpow(double x, double e) {
  if (e == 0.0) return 0.0;
  if (e == 1.0) return 1.0;
  return e * real_pow(x, e - 1.0);
}

double sign_or_plus(double c) { return c < 0.0 ? -1.0 : 1.0; }

}  // namespace

PhaseSystemI::PhaseSystemI(double gamma, double k, double c, double m, double q)
    : gamma_(gamma), k_(k), c_(c), m_(m), q_(q), pow_k_(k) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidParameter, "Case I requires gamma > 0");
  if (!(k > 1.0)) throw Error(ErrorCode::InvalidParameter, "Case I requires k > 1");
}

Matrix2 PhaseSystemI::jacobian(PhasePoint z) const {
  return {{{gamma_ * z.y, gamma_ * z.x}, {1.0 - dpow(z.x, k_), -2.0 * z.y - c_}}};
}

PhaseSystemII::PhaseSystemII(double gamma, double k, double k1, double k2, double c, double m,
                             double q)
    : gamma_(gamma),
      k_(k),
      k1_(k1),
      k2_(k2),
      c_(c),
      c1_(c * std::sqrt(2.0 / (m + q))),
      m_(m),
      q_(q),
      pow_k1_(k1),
      pow_k2_(k2) {
  if (!(k > 0.0)) throw Error(ErrorCode::InvalidParameter, "Case II requires k > 0");
}

Matrix2 PhaseSystemII::jacobian(PhasePoint z) const {
  return {{{gamma_ * z.y, gamma_ * z.x},
           {-z.y * c1_ * dpow(z.x, k1_) - dpow(z.x, k2_), -2.0 * z.y - c1_ * pow_k1_(z.x)}}};
}

PhaseSystem build_system(const CanonicalModel& cm, double c) {
  cm.require_supported();
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidParameter,
                "build_system expects c >= 0; map negative speeds with mirrored()");
  }
  const double m = cm.m, p = cm.p, q = cm.q;
  const double mq = m + q;
  if (cm.regime == Regime::CaseI) {
    const double gamma = mq - 2.0;
    return PhaseSystemI(gamma, (m + p - 2.0) / gamma, c, m, q);
  }
  double k, k1, k2;
  if (mq == 2.0) {
    k = p - q;
    k1 = 0.0;
    k2 = 1.0;
  } else {
    const double diffusive = (2.0 - mq) / 2.0;
    const double kinetic = p - q;
    if (diffusive <= kinetic) {
      k = diffusive;
      k1 = 1.0;
      k2 = 2.0 * (p - q) / (2.0 - mq);
    } else {
      k = kinetic;
      k1 = (2.0 - mq) / (2.0 * (p - q));
      k2 = 1.0;
    }
  }
  return PhaseSystemII(2.0 * k / mq, k, k1, k2, c, m, q);
}

double speed_of(const PhaseSystem& sys) {
  return std::visit([](const auto& s) { return s.c(); }, sys);
}

PhaseSystem mirrored(const PhaseSystem& sys) {
  return std::visit([](const auto& s) -> PhaseSystem { return s.mirrored(); }, sys);
}

PhasePoint field_unchecked(const PhaseSystem& sys, PhasePoint z) {
  return std::visit([z](const auto& s) { return s.field(z); }, sys);
}

PhasePoint vector_field(const PhaseSystem& sys, double x, double y) {
  if (x < 0.0 || std::isnan(x)) {
    throw Error(ErrorCode::DomainError, "vector field needs X >= 0, got " + std::to_string(x));
  }
  return field_unchecked(sys, {x, y});
}

Matrix2 jacobian(const PhaseSystem& sys, PhasePoint z) {
  return std::visit([z](const auto& s) { return s.jacobian(z); }, sys);
}

double f_of_x(const PhaseSystem& sys, double x) {
  return std::visit([x](const auto& s) { return s.f_of_x(x); }, sys);
}

double xi_density(const PhaseSystem& sys, double x) {
  return std::visit([x](const auto& s) { return s.xi_density(x); }, sys);
}

double df_dxi(const PhaseSystem& sys, PhasePoint z) {
  return std::visit([z](const auto& s) { return s.df_dxi(z); }, sys);
}

EigenDecomposition classify_jacobian(const Matrix2& j) {
  const double tr = j[0][0] + j[1][1];
  const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  const double disc = tr * tr - 4.0 * det;
  const double scale = std::abs(j[0][0]) + std::abs(j[0][1]) + std::abs(j[1][0]) + std::abs(j[1][1]);
  const double zero_tol = 1e-12 * (scale > 0.0 ? scale : 1.0);

  EigenDecomposition out;
  if (std::abs(disc) <= 1e-12 * (tr * tr + std::abs(det)) && scale > 0.0) {
    out.values = {std::complex<double>(tr / 2.0), std::complex<double>(tr / 2.0)};
    out.repeated = true;
  } else if (disc > 0.0) {
    // Avoid cancellation: larger-magnitude root first, the other via det.
    const double s = std::sqrt(disc);
    const double big = (tr >= 0.0) ? (tr + s) / 2.0 : (tr - s) / 2.0;
    const double small = (big != 0.0) ? det / big : 0.0;
    out.values = {std::complex<double>(big), std::complex<double>(small)};
  } else {
    const double im = std::sqrt(-disc) / 2.0;
    out.values = {std::complex<double>(tr / 2.0, im), std::complex<double>(tr / 2.0, -im)};
  }

  const double l0 = out.values[0].real(), l1 = out.values[1].real();
  const bool complex_pair = out.values[0].imag() != 0.0;
  const bool z0 = std::abs(out.values[0]) <= zero_tol;
  const bool z1 = std::abs(out.values[1]) <= zero_tol;

  if (z0 && z1) {
    out.kind = FixedPointKind::Degenerate;
  } else if (z0 || z1) {
    out.kind = FixedPointKind::SaddleNode;
  } else if (complex_pair) {
    if (std::abs(l0) <= zero_tol) out.kind = FixedPointKind::Center;
    else out.kind = l0 < 0.0 ? FixedPointKind::StableFocus : FixedPointKind::UnstableFocus;
  } else if (l0 * l1 < 0.0) {
    out.kind = FixedPointKind::Saddle;
  } else {
    out.kind = l0 < 0.0 ? FixedPointKind::StableNode : FixedPointKind::UnstableNode;
  }
  return out;
}

PhasePoint fixed_point_location(const PhaseSystem& sys, FixedPointRole role) {
  if (role == FixedPointRole::P2) return {1.0, 0.0};
  if (const auto* s1 = std::get_if<PhaseSystemI>(&sys)) {
    return role == FixedPointRole::P0 ? PhasePoint{0.0, 0.0} : PhasePoint{0.0, -s1->c()};
  }
  const auto& s2 = std::get<PhaseSystemII>(sys);
  // On X = 0 the Y equation reduces to Y^2 + c1 [k1 == 0] Y - 1 = 0.
  const double b = (s2.k1() == 0.0) ? s2.c1() : 0.0;
  const double root = std::sqrt(b * b + 4.0);
  const double sgn = sign_or_plus(s2.c());
  const double near = 2.0 / (std::abs(b) + root);
  const double far = (std::abs(b) + root) / 2.0;
  return role == FixedPointRole::P0 ? PhasePoint{0.0, sgn * near} : PhasePoint{0.0, -sgn * far};
}

std::vector<FixedPointInfo> fixed_points(const PhaseSystem& sys) {
  std::vector<FixedPointInfo> out;
  for (auto role : {FixedPointRole::P0, FixedPointRole::P1, FixedPointRole::P2}) {
    FixedPointInfo info;
    info.role = role;
    info.location = fixed_point_location(sys, role);
    if (role == FixedPointRole::P1 && !out.empty() && info.location.x == out[0].location.x &&
        info.location.y == out[0].location.y) {
      continue;  // P1 merges into P0 at c = 0 (Case I)
    }
    info.jacobian = jacobian(sys, info.location);
    const auto eig = classify_jacobian(info.jacobian);
    info.eigenvalues = eig.values;
    info.kind = eig.kind;
    info.degenerate = eig.repeated;
    out.push_back(info);
  }
  return out;
}

double dulac_weight(const PhaseSystemI& sys, double x) {
  return real_pow(x, 2.0 / sys.gamma() - 1.0);
}

double dulac_divergence(const PhaseSystemI& sys, double x, double /*y*/) {
  if (!(x > 0.0)) throw Error(ErrorCode::DomainError, "Dulac weight needs X > 0");
  // d/dX (B gamma X Y) = 2 Y B and d/dY (B Q) = B (-2 Y - c); the Y terms cancel.
  return -sys.c() * dulac_weight(sys, x);
}

double region_g_slope(const PhaseSystemI& sys, double mq) { return sys.c() / (2.0 * (mq - 2.0)); }

double region_g_residual(const PhaseSystemI& sys, double mq, double x) {
  const double a = region_g_slope(sys, mq);
  const double c = sys.c();
  return -x * x * a * a * (mq - 1.0) + x * (a * a * mq + c * a + 1.0) - a * a - c * a -
         real_pow(x, sys.k());
}

double zero_speed_curve(const PhaseSystemI& sys, double x) {
  const double g = sys.gamma(), k = sys.k();
  return 2.0 * x / (2.0 + g) - 2.0 * real_pow(x, k) / (2.0 + g * k);
}

double zero_speed_x0(const PhaseSystemI& sys) {
  const double g = sys.gamma(), k = sys.k();
  return std::pow((2.0 + g * k) / (2.0 + g), 1.0 / (k - 1.0));
}

std::string to_string(FixedPointKind k) {
  switch (k) {
    case FixedPointKind::SaddleNode: return "SaddleNode";
    case FixedPointKind::Saddle: return "Saddle";
    case FixedPointKind::StableNode: return "StableNode";
    case FixedPointKind::StableFocus: return "StableFocus";
    case FixedPointKind::UnstableNode: return "UnstableNode";
    case FixedPointKind::UnstableFocus: return "UnstableFocus";
    case FixedPointKind::Center: return "Center";
    case FixedPointKind::Degenerate: return "Degenerate";
  }
  return "Degenerate";
}

std::string to_string(FixedPointRole r) {
  switch (r) {
    case FixedPointRole::P0: return "P0";
    case FixedPointRole::P1: return "P1";
    case FixedPointRole::P2: return "P2";
  }
  return "P0";
}

}  // namespace kppwaves
