#include "pinncert/optimize.hpp"
#include "pinncert/problem.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace pinncert;

TEST_CASE("two-loop recursion: empty history is steepest descent") {
  Vec g(2);
  g << 3.0, -4.0;
  const Vec p = lbfgs_direction({}, g);
  CHECK(p == (-g).eval());
}

TEST_CASE("two-loop recursion: one pair of an exact quadratic is a Newton step") {
  // f(w) = w^2 has curvature 2; after one (s, y = 2 s) pair the direction
  // must be -g/2
  Vec s(1), y(1), g(1);
  s << 0.7;
  y << 1.4;
  g << 3.0;
  const Vec p = lbfgs_direction({{s, y}}, g);
  CHECK_THAT(p(0), Catch::Matchers::WithinRel(-1.5, 1e-14));
}

TEST_CASE("two-loop recursion: descent on random SPD quadratics") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 6;
    Mat a = Mat::NullaryExpr(n, n, [&](Eigen::Index, Eigen::Index) { return normal(rng); });
    Mat spd = a * a.transpose() + Mat::Identity(n, n);
    std::vector<std::pair<Vec, Vec>> history;
    Vec x = Vec::NullaryExpr(n, [&](Eigen::Index) { return normal(rng); });
    for (int i = 0; i < 4; ++i) {
      Vec s = Vec::NullaryExpr(n, [&](Eigen::Index) { return normal(rng); });
      history.emplace_back(s, (spd * s).eval());
    }
    const Vec g = (spd * x).eval();
    const Vec p = lbfgs_direction(history, g);
    CHECK(p.dot(g) < 0.0);
  }
}

TEST_CASE("wolfe line search on a 1-d quadratic accepts step 1") {
  // f(x) = (x-1)^2 from x=0 along p=1 with the Newton-scaled direction
  Objective f = [](const Vec& x, Vec& grad) {
    grad.resize(1);
    grad(0) = 2.0 * (x(0) - 1.0);
    return (x(0) - 1.0) * (x(0) - 1.0);
  };
  Vec x0(1), g0(1), p(1);
  x0 << 0.0;
  g0 << -2.0;
  p << 1.0;
  const LineSearchResult r = wolfe_line_search(f, x0, 1.0, g0, p);
  CHECK(r.ok);
  CHECK(r.alpha == 1.0);
  CHECK(r.f == 0.0);
}

TEST_CASE("wolfe line search rejects non-descent directions") {
  Objective f = [](const Vec& x, Vec& grad) {
    grad.resize(1);
    grad(0) = 2.0 * x(0);
    return x(0) * x(0);
  };
  Vec x0(1), g0(1), p(1);
  x0 << 1.0;
  g0 << 2.0;
  p << 1.0;  // uphill
  CHECK_THROWS_AS(wolfe_line_search(f, x0, 1.0, g0, p), ContractViolation);
}

TEST_CASE("wolfe line search satisfies Armijo on random convex profiles") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> coef(0.5, 3.0), shift(0.2, 2.0);
  for (int rep = 0; rep < 40; ++rep) {
    const double a = coef(rng), b = shift(rng), c = coef(rng);
    // f(t) = a (t - b)^2 + c e^{-t} is convex in t
    Objective f = [&](const Vec& x, Vec& grad) {
      grad.resize(1);
      grad(0) = 2.0 * a * (x(0) - b) - c * std::exp(-x(0));
      return a * (x(0) - b) * (x(0) - b) + c * std::exp(-x(0));
    };
    Vec x0(1);
    x0 << 0.0;
    Vec g0(1);
    f(x0, g0);
    const double f0 = a * b * b + c;
    Vec p = -g0;
    const double c1 = 1e-4;
    const LineSearchResult r = wolfe_line_search(f, x0, f0, g0, p, c1, 0.9, 1.0);
    REQUIRE(r.ok);
    CHECK(r.f <= f0 + c1 * r.alpha * g0.dot(p) + 1e-15);
  }
}

TEST_CASE("minimize: 1-parameter quadratic converges in a handful of steps") {
  Objective f = [](const Vec& x, Vec& grad) {
    grad.resize(1);
    grad(0) = 2.0 * (x(0) - 1.0);
    return (x(0) - 1.0) * (x(0) - 1.0);
  };
  Vec x0(1);
  x0 << 0.0;
  TrainConfig cfg;
  cfg.max_iterations = 50;
  const MinimizeResult r = minimize(f, x0, cfg);
  CHECK(std::abs(r.x(0) - 1.0) <= 1e-8);
  CHECK(r.iterations <= 5);
}

TEST_CASE("minimize: immediate return at a stationary start") {
  Objective f = [](const Vec& x, Vec& grad) {
    grad.resize(1);
    grad(0) = 2.0 * x(0) * 1e-12;
    return x(0) * x(0) * 1e-12;
  };
  Vec x0 = Vec::Zero(1);
  TrainConfig cfg;
  const MinimizeResult r = minimize(f, x0, cfg);
  CHECK(r.termination == "gradient-tolerance");
  CHECK(r.iterations == 0);
}

TEST_CASE("minimize: convex quadratic in n variables within 3n iterations") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int n : {5, 12, 20}) {
    Mat a = Mat::NullaryExpr(n, n, [&](Eigen::Index, Eigen::Index) { return normal(rng); });
    const Mat spd = (a * a.transpose() + Mat::Identity(n, n)).eval();
    const Vec target = Vec::NullaryExpr(n, [&](Eigen::Index) { return normal(rng); });
    Objective f = [&](const Vec& x, Vec& grad) {
      grad = spd * (x - target);
      return 0.5 * (x - target).dot(spd * (x - target));
    };
    TrainConfig cfg;
    cfg.max_iterations = 3 * n;
    cfg.grad_tolerance = 0.0;
    cfg.loss_tolerance = 0.0;
    cfg.wolfe_c2 = 0.1;  // near-exact line search suits a quadratic
    const MinimizeResult r = minimize(f, Vec::Zero(n), cfg);
    CHECK((r.x - target).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("minimize: accepted iterates strictly decrease the loss") {
  // nonconvex 2-d objective
  Objective f = [](const Vec& x, Vec& grad) {
    grad.resize(2);
    grad(0) = std::cos(x(0)) + 0.2 * x(0);
    grad(1) = 2.0 * x(1) * std::exp(-x(1) * x(1)) * (1.0 - x(1) * x(1)) * -1.0 + 0.2 * x(1);
    return std::sin(x(0)) + 0.1 * x(0) * x(0) - x(1) * x(1) * std::exp(-x(1) * x(1)) +
           0.1 * x(1) * x(1) + 2.0;
  };
  Vec x0(2);
  x0 << 2.0, 0.3;
  TrainConfig cfg;
  cfg.max_iterations = 200;
  const MinimizeResult r = minimize(f, x0, cfg);
  for (size_t i = 1; i < r.loss_history.size(); ++i)
    CHECK(r.loss_history[i] < r.loss_history[i - 1]);
}

TEST_CASE("train: zero iterations returns initial errors") {
  const ProblemSpec problem = damped_wave_problem();
  const CollocationSets sets = build_sets(problem.box, CollocationCounts::regular(2, 3));
  const MlpParams p0 = init_params(Architecture::mlp(3, {6}), 1);
  TrainConfig cfg;
  cfg.max_iterations = 0;
  const TrainRecord rec = train(p0, sets, problem, cfg);
  CHECK(rec.iterations == 0);
  CHECK(rec.params.to_flat() == p0.to_flat());
  CHECK(rec.loss_history.size() == 1);
}

TEST_CASE("train: loss decreases and the run is deterministic") {
  const ProblemSpec problem = damped_wave_problem();
  const CollocationSets sets = build_sets(problem.box, CollocationCounts::regular(2, 4));
  const MlpParams p0 = init_params(Architecture::mlp(3, {10, 10}), 4);
  TrainConfig cfg;
  cfg.max_iterations = 60;
  const TrainRecord a = train(p0, sets, problem, cfg);
  const TrainRecord b = train(p0, sets, problem, cfg);
  CHECK(a.loss_history == b.loss_history);  // bit-exact
  CHECK(a.params.to_flat() == b.params.to_flat());
  CHECK(a.loss_history.back() < a.loss_history.front());
  CHECK(a.report.total_sq() > 0.0);
}

TEST_CASE("train: non-finite start is an error") {
  const ProblemSpec problem = damped_wave_problem();
  const CollocationSets sets = build_sets(problem.box, CollocationCounts::regular(2, 2));
  MlpParams p0 = init_params(Architecture::mlp(3, {4}), 1);
  p0.weights[0](0, 0) = kInf;
  CHECK_THROWS_AS(train(p0, sets, problem, TrainConfig{}), NumericalError);
}

TEST_CASE("train config validation") {
  TrainConfig bad;
  bad.wolfe_c1 = 0.95;  // violates c1 < c2
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  TrainConfig bad2;
  bad2.memory = 0;
  CHECK_THROWS_AS(bad2.validate(), ConfigError);
}
