#include <doctest.h>

#include <cmath>
#include <random>

#include "kppwaves/error.hpp"
#include "kppwaves/pde.hpp"

using namespace kppwaves;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ConfigError;
}

WaveProfile profile_for(const CanonicalModel& cm, double c) {
  const auto conn = classify_connection(cm, c);
  return reconstruct_profile(conn.trajectory, conn.system, cm);
}

}  // namespace

TEST_CASE("constant states are steady") {
  const auto cm = CanonicalModel::make(2, 2, 1);
  const Grid g{-5, 5, 200};
  for (double v : {0.0, 1.0}) {
    PdeSettings s;
    s.left_value = s.right_value = v;
    auto run = make_run(g, [v](double) { return v; }, s);
    advance_to(run, cm, 2.0);
    for (double u : run.u) CHECK(u == v);
    CHECK(run.time == 2.0);
  }
}

TEST_CASE("zero-flux mass balance") {
  const auto cm = CanonicalModel::make(2, 2, 1);
  const Grid g{-5, 5, 400};
  auto bump = [](double x) { return 0.2 + 1.3 * std::exp(-x * x); };

  PdeSettings off;
  off.boundary = BoundaryKind::ZeroFlux;
  off.reaction = false;
  auto run = make_run(g, bump, off);
  const double m0 = mass(run);
  advance_to(run, cm, 1.0);
  CHECK(std::abs(mass(run) - m0) <= 1e-12 * m0);

  // With reaction each step adds dt dx sum (u^p - u^q) of the old state.
  PdeSettings on = off;
  on.reaction = true;
  auto r = make_run(g, bump, on);
  for (int k = 0; k < 20; ++k) {
    double src = 0.0;
    for (double u : r.u) src += u * u - u;
    const double before = mass(r);
    step(r, cm);
    CHECK(mass(r) - before == doctest::Approx(r.dt * g.dx() * src).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("guards") {
  const auto cm = CanonicalModel::make(2, 2, 1);
  const Grid g{0, 1, 50};
  CHECK(code_of([&] { make_run(g, [](double) { return -0.1; }); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([&] { make_run(Grid{0, 1, 1}, [](double) { return 0.0; }); }) == ErrorCode::InvalidParameter);
  PdeSettings bad;
  bad.cfl = 1.5;
  CHECK(code_of([&] { make_run(g, [](double) { return 0.0; }, bad); }) == ErrorCode::InvalidParameter);

  auto run = make_run(g, [](double) { return 0.5; });
  CHECK(code_of([&] { step(run, CanonicalModel::make(0.5, 2, 1)); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([&] { step(run, CanonicalModel::make(2, 1, -0.5)); }) == ErrorCode::InvalidParameter);

  // An over-large diffusive step overshoots below zero next to a jump.
  PdeSettings s;
  s.reaction = false;
  auto neg = make_run(Grid{-1, 1, 40}, [](double x) { return x < 0 ? 1.0 : 0.0; }, s);
  neg.settings.cfl = 4.0;
  CHECK(code_of([&] { step(neg, CanonicalModel::make(1, 2, 1)); }) == ErrorCode::NegativityError);

  // u' = u^3 - u from u = 5 passes the blow-up bound in finite time.
  PdeSettings z;
  z.boundary = BoundaryKind::ZeroFlux;
  auto blow = make_run(Grid{0, 1, 20}, [](double) { return 5.0; }, z);
  CHECK(code_of([&] { advance_to(blow, CanonicalModel::make(2, 3, 1), 1.0); }) == ErrorCode::StabilityViolation);
}

TEST_CASE("absorption extinguishes instead of failing") {
  // q < 1: u' = u^2 - sqrt(u) drives small values to zero in finite time.
  const auto cm = CanonicalModel::make(1, 2, 0.5);
  PdeSettings s;
  s.boundary = BoundaryKind::ZeroFlux;
  auto run = make_run(Grid{0, 1, 10}, [](double) { return 0.01; }, s);
  advance_to(run, cm, 1.0);
  for (double u : run.u) CHECK(u == 0.0);
}

TEST_CASE("front speed fit") {
  std::vector<FrontRecord> track;
  for (int i = 0; i <= 50; ++i) track.push_back({0.1 * i, 2.0 - 3.0 * 0.1 * i});
  CHECK(fit_front_speed(track, 0.0, 5.0) == doctest::Approx(-3.0).epsilon(1e-12));

  std::mt19937_64 rng(13);
  std::normal_distribution<double> noise(0.0, 1e-3);
  std::vector<FrontRecord> noisy;
  for (int i = 0; i < 100; ++i) noisy.push_back({0.1 * i, 1.0 - 0.7 * 0.1 * i + noise(rng)});
  CHECK(std::abs(fit_front_speed(noisy, 0.0, 10.0) + 0.7) < 1e-3);

  std::vector<FrontRecord> few(track.begin(), track.begin() + 9);
  CHECK(code_of([&] { fit_front_speed(few, 0.0, 5.0); }) == ErrorCode::NoFront);
  auto gap = track;
  gap[10].x = std::nan("");
  CHECK(code_of([&] { fit_front_speed(gap, 0.0, 5.0); }) == ErrorCode::NoFront);
  CHECK(fit_front_speed(gap, 1.5, 5.0) == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("level position and support edge") {
  const Grid g{0, 4, 400};
  auto run = make_run(g, [](double x) {
    if (x <= 1.0) return 1.0;
    if (x >= 1.1) return 0.0;
    const double s = (x - 1.0) / 0.1;
    return 0.5 * (1 + std::cos(M_PI * s));
  });
  CHECK(*level_position(run, 0.5) == doctest::Approx(1.05).epsilon(1e-3));
  const auto edge = support_edge(run, 1e-6);
  REQUIRE(edge);
  CHECK(std::abs(*edge - 1.1) <= 1.5 * g.dx());

  auto zero = make_run(g, [](double) { return 0.0; }, PdeSettings{.left_value = 0.0});
  CHECK_FALSE(support_edge(zero, 1e-6));
  CHECK_FALSE(level_position(zero, 0.5));
  CHECK(code_of([&] { support_edge(zero, 1e-14); }) == ErrorCode::InvalidParameter);

  auto bumps = make_run(g, [](double x) { return std::abs(std::sin(3 * x)); }, PdeSettings{.right_value = 0.14});
  CHECK_FALSE(level_position(bumps, 0.5));
}

TEST_CASE("support edge moves at a bounded rate under strong absorption") {
  const auto cm = CanonicalModel::make(1, 1, 0.5);
  auto run = make_run(Grid{-10, 30, 2000}, [](double x) { return x < 0 ? 1.0 : 0.0; });
  double last = *support_edge(run, 1e-8), t_last = 0.0;
  for (int k = 1; k <= 20; ++k) {
    advance_to(run, cm, 0.25 * k);
    const auto e = support_edge(run, 1e-8);
    REQUIRE(e);
    CHECK(std::abs(*e - last) <= 10.0 * (run.time - t_last));
    last = *e;
    t_last = run.time;
  }
}

TEST_CASE("travelling profiles are reproduced by the PDE") {
  {
    const auto cm = CanonicalModel::make(1, 2, 1);
    AdvectionOptions o;
    o.cells = 2000;
    const auto res = advect_profile_test(profile_for(cm, -3.0), cm, 3.0, o);
    CHECK(res.max_error < 0.02);
    REQUIRE(res.measured_speed);
    CHECK(std::abs(*res.measured_speed / -3.0 - 1.0) < 0.02);
    CHECK(res.errors.front().first == 0.0);
  }
  {
    const auto cm = CanonicalModel::make(2, 2, 1);
    AdvectionOptions o;
    o.cells = 2000;
    const auto res = advect_profile_test(profile_for(cm, -1.0), cm, 3.0, o);
    CHECK(res.max_u > 1.0);
    CHECK(res.max_error < 0.02);
  }
}

TEST_CASE("advection edge cases") {
  const auto cm = CanonicalModel::make(2, 2, 1);
  const auto res = advect_profile_test(constant_profile(-10, 10, 101), cm, 1.0);
  CHECK(res.max_error <= 1e-14);
  CHECK_FALSE(res.measured_speed);

  AdvectionOptions narrow;
  narrow.cells = 400;
  narrow.domain = std::make_pair(-5.0, 5.0);
  CHECK(code_of([&] { advect_profile_test(profile_for(cm, -3.0), cm, 10.0, narrow); }) == ErrorCode::DomainTooSmall);

  WaveProfile none = constant_profile(-1, 1, 10);
  none.classification = WaveClass::None;
  CHECK(code_of([&] { advect_profile_test(none, cm, 1.0); }) == ErrorCode::InvalidParameter);
}

// U(X, T) = l u(X/a, T/b): with grids scaled by a the stable steps scale by b,
// so the discrete solutions agree to rounding.
TEST_CASE("general coefficients are equivalent to the canonical run") {
  const GeneralModel gm{2.0, 3.0, 1.5, 2.0, 2.0, 1.0};
  const auto [cm, s] = nondimensionalize(gm);
  auto u0 = [](double x) { return x < 0 ? 1.0 : std::exp(-4 * x * x); };

  PdeSettings cs;
  auto canon = make_run(Grid{-4, 4, 200}, u0, cs);
  advance_to(canon, cm, 0.5);

  PdeSettings gs;
  gs.kappa = gm.kappa;
  gs.alpha = gm.alpha;
  gs.beta = gm.beta;
  gs.left_value = s.l;
  gs.u_floor = s.l * cs.u_floor;
  gs.u_blowup = s.l * cs.u_blowup;
  auto gen = make_run(Grid{-4 * s.a, 4 * s.a, 200}, [&](double X) { return s.l * u0(X / s.a); }, gs);
  advance_to(gen, cm, 0.5 * s.b);

  CHECK(std::abs(gen.steps - canon.steps) <= 1);
  for (std::size_t i = 0; i < canon.u.size(); ++i) CHECK(gen.u[i] / s.l == doctest::Approx(canon.u[i]).epsilon(1e-9).scale(1e-9));
}
