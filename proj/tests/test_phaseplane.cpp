#include <doctest.h>

#include <cmath>
#include <random>

#include "kppwaves/error.hpp"
#include "kppwaves/phaseplane.hpp"

using namespace kppwaves;

namespace {

CanonicalModel random_supported(std::mt19937_64& rng, bool case_one) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    const double m = 0.2 + 3.0 * u(rng);
    const double q = -0.5 + 3.0 * u(rng);
    const double p = q + 0.05 + 3.0 * u(rng);
    const auto cm = CanonicalModel::make(m, p, q);
    if (!cm.supported()) continue;
    if (case_one != (cm.regime == Regime::CaseI)) continue;
    return cm;
  }
}

double p2_discriminant(const PhaseSystem& sys) {
  const Matrix2 j = jacobian(sys, {1.0, 0.0});
  const double tr = j[0][0] + j[1][1], det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  return tr * tr - 4.0 * det;
}

}  // namespace

TEST_CASE("build_system coefficients") {
  {
    const auto sys = std::get<PhaseSystemI>(build_system(CanonicalModel::make(2, 2, 1), 1.0));
    CHECK(sys.gamma() == 1.0);
    CHECK(sys.k() == 2.0);
  }
  {
    const auto sys = std::get<PhaseSystemII>(build_system(CanonicalModel::make(1, 2, 1), 1.0));
    CHECK(sys.k() == 1.0);
    CHECK(sys.k1() == 0.0);
    CHECK(sys.k2() == 1.0);
    CHECK(sys.gamma() == 1.0);
    CHECK(sys.c1() == doctest::Approx(1.0));
  }
  {
    const auto sys = std::get<PhaseSystemII>(build_system(CanonicalModel::make(0.5, 2, 0.5), 1.0));
    CHECK(sys.k() == doctest::Approx(0.5));
    CHECK(sys.k1() == 1.0);
    CHECK(sys.k2() == doctest::Approx(3.0));
    CHECK(sys.gamma() == doctest::Approx(1.0));
    CHECK(sys.c1() == doctest::Approx(std::sqrt(2.0)));
  }
  {
    // Kinetic exponent smaller: k = p - q, k2 = 1.
    const auto sys = std::get<PhaseSystemII>(build_system(CanonicalModel::make(0.5, 0.7, 0.5), 1.0));
    CHECK(sys.k() == doctest::Approx(0.2));
    CHECK(sys.k2() == 1.0);
    CHECK(sys.k1() == doctest::Approx(1.0 / 0.4));
  }
  CHECK_THROWS_AS(build_system(CanonicalModel::make(1, 1, 2), 1.0), Error);
  CHECK_THROWS_AS(build_system(CanonicalModel::make(2, 2, 1), -1.0), Error);
}

TEST_CASE("Case I gamma (k - 1) equals p - q") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto cm = random_supported(rng, true);
    const auto sys = std::get<PhaseSystemI>(build_system(cm, 1.0));
    CHECK(sys.gamma() * (sys.k() - 1.0) == doctest::Approx(cm.p - cm.q).epsilon(1e-12));
  }
}

TEST_CASE("vector field values") {
  const PhaseSystem sys = PhaseSystemI(1.0, 2.0, 1.0, 2.0, 1.0);
  auto v = vector_field(sys, 1.0, 0.0);
  CHECK(v.x == 0.0);
  CHECK(v.y == 0.0);
  v = vector_field(sys, 0.5, 0.2);
  CHECK(v.x == doctest::Approx(0.1));
  CHECK(v.y == doctest::Approx(0.01));

  const PhaseSystem sys2 = PhaseSystemII(1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0);
  v = vector_field(sys2, 1.0, 0.0);
  CHECK(v.x == 0.0);
  CHECK(v.y == 0.0);

  try {
    vector_field(sys, -0.1, 0.0);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainError);
  }
}

TEST_CASE("fixed points are zeros of the field") {
  std::mt19937_64 rng(17);
  for (bool case_one : {true, false}) {
    for (int i = 0; i < 50; ++i) {
      const auto cm = random_supported(rng, case_one);
      for (double c : {0.3, 1.0, 2.5}) {
        const PhaseSystem sys = build_system(cm, c);
        for (const auto& fp : fixed_points(sys)) {
          const auto v = vector_field(sys, fp.location.x, fp.location.y);
          CHECK(std::abs(v.x) <= 1e-14);
          CHECK(std::abs(v.y) <= 1e-14);
        }
      }
    }
  }
}

TEST_CASE("eigenvalues solve the characteristic polynomial") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const Matrix2 j{{{u(rng), u(rng)}, {u(rng), u(rng)}}};
    const auto eig = classify_jacobian(j);
    const double tr = j[0][0] + j[1][1], det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    for (auto l : eig.values) {
      const auto r = l * l - tr * l + det;
      const double scale = std::norm(l) + std::abs(tr * l) + std::abs(det);
      CHECK(std::abs(r) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("Case I fixed point kinds") {
  const auto cm = CanonicalModel::make(2, 2, 1);
  auto kinds = [&](double c) { return fixed_points(build_system(cm, c)); };

  const auto node = kinds(3.0);
  REQUIRE(node.size() == 3);
  CHECK(node[0].kind == FixedPointKind::SaddleNode);
  CHECK(node[1].kind == FixedPointKind::Saddle);
  CHECK(node[1].location.y == -3.0);
  CHECK(node[2].jacobian[0][1] == 1.0);
  CHECK(node[2].jacobian[1][0] == -1.0);
  CHECK(node[2].jacobian[1][1] == -3.0);
  CHECK(node[2].kind == FixedPointKind::StableNode);
  CHECK_FALSE(node[2].degenerate);

  CHECK(kinds(1.0)[2].kind == FixedPointKind::StableFocus);

  const auto boundary = kinds(2.0);
  CHECK(boundary[2].kind == FixedPointKind::StableNode);
  CHECK(boundary[2].degenerate);

  // P1 merges into P0 at c = 0.
  CHECK(kinds(0.0).size() == 2);
}

TEST_CASE("node/focus boundary at P2 sits at the critical speed") {
  std::mt19937_64 rng(29);
  for (bool case_one : {true, false}) {
    for (int i = 0; i < 50; ++i) {
      const auto cm = random_supported(rng, case_one);
      const double cs = critical_speed(cm);
      CHECK(p2_discriminant(build_system(cm, cs * (1 - 1e-6))) < 0.0);
      CHECK(p2_discriminant(build_system(cm, cs * (1 + 1e-6))) > 0.0);
      CHECK(fixed_points(build_system(cm, 0.5 * cs)).back().kind == FixedPointKind::StableFocus);
      CHECK(fixed_points(build_system(cm, 1.5 * cs)).back().kind == FixedPointKind::StableNode);
    }
  }
}

TEST_CASE("Case II axis equilibria are saddles") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 30; ++i) {
    const auto cm = random_supported(rng, false);
    const auto pts = fixed_points(build_system(cm, 1.3));
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].kind == FixedPointKind::Saddle);
    CHECK(pts[1].kind == FixedPointKind::Saddle);
    CHECK(pts[0].location.y > 0.0);
    CHECK(pts[1].location.y < 0.0);
  }
}

TEST_CASE("mirror symmetry of the field") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> ux(0.0, 2.0), uy(-2.0, 2.0);
  for (bool case_one : {true, false}) {
    for (int i = 0; i < 20; ++i) {
      const auto cm = random_supported(rng, case_one);
      const PhaseSystem sys = build_system(cm, 1.7);
      const PhaseSystem mir = mirrored(sys);
      CHECK(speed_of(mir) == -1.7);
      for (int s = 0; s < 10; ++s) {
        const double x = ux(rng), y = uy(rng);
        const auto a = vector_field(sys, x, y);
        const auto b = vector_field(mir, x, -y);
        CHECK(b.x == doctest::Approx(-a.x).epsilon(1e-13));
        CHECK(b.y == doctest::Approx(a.y).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("Dulac divergence") {
  CHECK(dulac_divergence(PhaseSystemI(1, 2, 1, 2, 1), 1.0, 0.7) == doctest::Approx(-1.0));
  CHECK(dulac_divergence(PhaseSystemI(2, 2, 3, 2, 2), 4.0, -0.3) == doctest::Approx(-3.0));
  CHECK(dulac_divergence(PhaseSystemI(1.5, 2.5, 0, 2, 1.5), 0.3, 0.2) == 0.0);
  CHECK_THROWS_AS(dulac_divergence(PhaseSystemI(1, 2, 1, 2, 1), 0.0, 0.0), Error);

  // Central differences of (B P, B Q), with a second-order check.
  const PhaseSystemI sys(1.3, 2.2, 0.8, 2.0, 1.3);
  auto fd = [&](double x, double y, double h) {
    auto bp = [&](double xx, double yy) { return dulac_weight(sys, xx) * sys.field({xx, yy}).x; };
    auto bq = [&](double xx, double yy) { return dulac_weight(sys, xx) * sys.field({xx, yy}).y; };
    return (bp(x + h, y) - bp(x - h, y)) / (2 * h) + (bq(x, y + h) - bq(x, y - h)) / (2 * h);
  };
  for (double x : {0.2, 0.7, 1.4}) {
    for (double y : {-0.5, 0.1, 0.9}) {
      const double exact = dulac_divergence(sys, x, y);
      const double e1 = std::abs(fd(x, y, 1e-2) - exact), e2 = std::abs(fd(x, y, 5e-3) - exact);
      CHECK(e2 < 1e-4);
      if (e1 > 1e-9) CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
    }
  }
}

TEST_CASE("region G residual") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 50; ++i) {
    const auto cm = random_supported(rng, true);
    const double mq = cm.m + cm.q;
    for (double c : {0.5, critical_speed(cm), 3.0}) {
      const auto sys = std::get<PhaseSystemI>(build_system(cm, c));
      CHECK(std::abs(region_g_residual(sys, mq, 1.0)) <= 1e-12 * (1 + c * c));
      const double a = region_g_slope(sys, mq);
      CHECK(region_g_residual(sys, mq, 0.0) == doctest::Approx(-a * a - c * a));
      CHECK(region_g_residual(sys, mq, 0.0) < 0.0);
    }
    // At the critical speed the residual never exceeds zero on [0, 1].
    const auto sys = std::get<PhaseSystemI>(build_system(cm, critical_speed(cm)));
    for (int k = 0; k <= 10000; ++k) CHECK(region_g_residual(sys, mq, k / 10000.0) <= 1e-12);
  }
}

TEST_CASE("region G residual is the normal flux across Y = a (1 - X)") {
  const auto cm = CanonicalModel::make(2, 2, 1);
  const auto sys = std::get<PhaseSystemI>(build_system(cm, 2.0));
  const double a = region_g_slope(sys, 3.0);
  for (double x : {0.1, 0.5, 0.9}) {
    const double y = a * (1 - x);
    const auto v = sys.field({x, y});
    // Normal (a, 1) of the line.
    const double flux = a * v.x + v.y;
    CHECK(flux == doctest::Approx(region_g_residual(sys, 3.0, x)).epsilon(1e-12));
  }
}

TEST_CASE("c = 0 explicit trajectory") {
  const PhaseSystemI s12(1, 2, 0, 2, 1);
  CHECK(zero_speed_curve(s12, 0.0) == 0.0);
  CHECK(zero_speed_curve(s12, 4.0 / 3.0) == doctest::Approx(0.0));
  CHECK(zero_speed_curve(s12, 1.0) == doctest::Approx(1.0 / 6.0));
  CHECK(zero_speed_x0(s12) == doctest::Approx(4.0 / 3.0));
  CHECK(zero_speed_x0(PhaseSystemI(2, 2, 0, 2, 2)) == doctest::Approx(1.5));
  CHECK(zero_speed_x0(PhaseSystemI(2, 3, 0, 2, 2)) == doctest::Approx(std::sqrt(2.0)));
}
