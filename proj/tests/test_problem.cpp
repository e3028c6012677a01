#include "pinncert/problem.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace pinncert;

TEST_CASE("damped wave: printed closed form") {
  const ProblemSpec p = damped_wave_problem();
  Vec origin(2);
  origin << 0.0, 0.0;
  CHECK(p.exact->u(origin, 0.0) == 1.0);
  CHECK_THAT(p.exact->u(origin, 0.25),
             Catch::Matchers::WithinRel(0.6447938838896689, 1e-14));
  // boundary factor cos(+-pi/2) kills the solution on all four faces
  Vec face(2);
  face << 0.5, 0.17;
  CHECK_THAT(p.exact->u(face, 0.3), Catch::Matchers::WithinAbs(0.0, 1e-16));
  face << -0.5, -0.3;
  CHECK_THAT(p.exact->u(face, 0.1), Catch::Matchers::WithinAbs(0.0, 1e-16));
  // u_t(x, y, 0) = u1 = 0
  CHECK(p.exact->u_t(origin, 0.0) == 0.0);
  CHECK(p.u1(origin) == 0.0);
}

TEST_CASE("damped wave: exact solution solves the PDE") {
  const ProblemSpec p = damped_wave_problem();
  Vec x(2);
  x << 0.1, -0.2;
  CHECK_THAT(exact_pde_check(p, x, 0.3), Catch::Matchers::WithinAbs(0.0, 1e-8));

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> xs(-0.5, 0.5), ts(0.0, 0.5);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    x << xs(rng), xs(rng);
    worst = std::max(worst, std::abs(exact_pde_check(p, x, ts(rng))));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("damped wave: u_tt two ways") {
  // analytic jet vs the FD fallback of the same closed form
  const ProblemSpec p = damped_wave_problem();
  ExactSolution fd_only;
  fd_only.u = p.exact->u;
  fd_only.u_t = p.exact->u_t;
  Vec x(2);
  x << 0.0, 0.0;
  const Jet analytic = p.exact->jet(x, 0.0);
  const Jet fd = fd_only.jet_at(x, 0.0, 1e-4);
  CHECK_THAT(analytic.dtt, Catch::Matchers::WithinAbs(fd.dtt, 1e-6));
  // u_tt(0,0,0) = -Lap u - 2 pi u_t = 2 pi^2 * 1 - 0
  CHECK_THAT(analytic.dtt, Catch::Matchers::WithinRel(-2.0 * M_PI * M_PI, 1e-14));
  CHECK_THAT(analytic.laplacian, Catch::Matchers::WithinRel(-2.0 * M_PI * M_PI, 1e-14));
}

TEST_CASE("damped wave: boundary condition exact on 10^4 random face points") {
  const ProblemSpec p = damped_wave_problem();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xs(-0.5, 0.5), ts(0.0, 0.5);
  std::uniform_int_distribution<int> face(0, 3);
  for (int i = 0; i < 10000; ++i) {
    Vec x(2);
    const int f = face(rng);
    const double fixed = f % 2 == 0 ? -0.5 : 0.5;
    if (f < 2)
      x << fixed, xs(rng);
    else
      x << xs(rng), fixed;
    CHECK(std::abs(p.exact->u(x, ts(rng))) <= 1e-15);
  }
}

TEST_CASE("semilinear power family") {
  const BoxDomain box = BoxDomain::unit_square(0.5);
  auto zero_fn = [](const Vec&) { return 0.0; };
  auto zero_grad = [](const Vec&) { return Vec::Zero(2).eval(); };

  const ProblemSpec lin = semilinear_power_problem(0.0, box, zero_fn, 0.0, zero_fn, zero_fn, zero_grad);
  Vec x(2);
  x << 0.1, 0.1;
  CHECK(lin.f(x, 0.7) == 0.7);  // p = 0: linear Klein-Gordon term
  CHECK(lin.df_du(x, 0.7) == 1.0);

  const ProblemSpec p2 = semilinear_power_problem(2.0, box, zero_fn, 0.0, zero_fn, zero_fn, zero_grad);
  CHECK(p2.f(x, 0.5) == 0.125);
  CHECK(p2.df_du(x, 0.5) == 0.75);
  CHECK(p2.growth_c == 3.0);
  CHECK(p2.growth_r == 2.0);

  // odd symmetry and continuity at 0
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> us(-2.0, 2.0);
  for (double p : {0.0, 0.5, 1.0, 2.0, 3.5}) {
    const ProblemSpec ps = semilinear_power_problem(p, box, zero_fn, 0.0, zero_fn, zero_fn, zero_grad);
    for (int i = 0; i < 100; ++i) {
      const double u = us(rng);
      CHECK_THAT(ps.f(x, -u), Catch::Matchers::WithinAbs(-ps.f(x, u), 1e-14));
    }
    CHECK(ps.f(x, 0.0) == 0.0);
  }

  // A2 range caps for d = 3: r < 5
  const BoxDomain box3({0, 0, 0}, {1, 1, 1}, 1.0);
  auto zero_grad3 = [](const Vec&) { return Vec::Zero(3).eval(); };
  CHECK_THROWS_AS(
      semilinear_power_problem(5.0, box3, zero_fn, 0.0, zero_fn, zero_fn, zero_grad3),
      ConfigError);
  CHECK_THROWS_AS(
      semilinear_power_problem(-1.0, box, zero_fn, 0.0, zero_fn, zero_fn, zero_grad),
      ConfigError);
}

TEST_CASE("assumption validation") {
  const ProblemSpec dw = damped_wave_problem();
  const AssumptionReport ok = validate_assumptions(dw);
  CHECK(ok.damping_ok);
  CHECK_THAT(ok.damping_min, Catch::Matchers::WithinRel(2.0 * M_PI, 1e-14));
  CHECK(ok.growth_ok);  // no nonlinearity to violate anything

  // f = |u| u with (c, r) = (2, 1): |f| = |u|^2 = (c/2)|u|^{r+1}, ratio 1/2;
  // |df| = 2|u| = c|u|^r exactly, ratio 1
  const BoxDomain box = BoxDomain::unit_square(0.5);
  auto zero_fn = [](const Vec&) { return 0.0; };
  auto zero_grad = [](const Vec&) { return Vec::Zero(2).eval(); };
  const ProblemSpec p1 = semilinear_power_problem(1.0, box, zero_fn, 0.0, zero_fn, zero_fn, zero_grad);
  const AssumptionReport r1 = validate_assumptions(p1);
  CHECK(r1.growth_ok);
  CHECK_THAT(r1.worst_df_ratio, Catch::Matchers::WithinRel(1.0, 1e-12));

  // a(x) = -1 must be flagged
  ProblemSpec bad = damped_wave_problem();
  bad.damping = [](const Vec&) { return -1.0; };
  CHECK_FALSE(validate_assumptions(bad).damping_ok);
}

TEST_CASE("exact_pde_check needs an exact solution") {
  const BoxDomain box = BoxDomain::unit_square(0.5);
  auto zero_fn = [](const Vec&) { return 0.0; };
  auto zero_grad = [](const Vec&) { return Vec::Zero(2).eval(); };
  const ProblemSpec p = semilinear_power_problem(1.0, box, zero_fn, 0.0, zero_fn, zero_fn, zero_grad);
  Vec x(2);
  x << 0.0, 0.0;
  CHECK_THROWS_AS(exact_pde_check(p, x, 0.1), UnavailableError);
}
