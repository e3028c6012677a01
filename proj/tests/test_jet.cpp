#include "pinncert/jet.hpp"
#include "pinncert/loss.hpp"
#include "pinncert/problem.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace pinncert;

namespace {

MlpParams scalar_chain_net() {
  // 1-1-1 tanh net, unit weights, zero biases: u(z) = tanh(z)
  const Architecture arch = Architecture::mlp(1, {1});
  MlpParams p = MlpParams::zeros(arch);
  p.weights[0](0, 0) = 1.0;
  p.weights[1](0, 0) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("jet of the scalar tanh chain") {
  const MlpParams p = scalar_chain_net();
  Vec z(1);
  z << 0.0;
  Jet j = eval_jet(p, z);
  CHECK(j.value == 0.0);
  CHECK(j.dt == 1.0);   // tanh'(0)
  CHECK(j.dtt == 0.0);  // tanh''(0)

  z << 0.5;
  j = eval_jet(p, z);
  CHECK_THAT(j.value, Catch::Matchers::WithinAbs(0.46211715726000976, 1e-15));
  CHECK_THAT(j.dtt, Catch::Matchers::WithinAbs(-0.7268619813835873, 1e-12));
}

TEST_CASE("jet of the zero network vanishes") {
  const MlpParams p = MlpParams::zeros(Architecture::mlp(3, {6, 6}));
  Vec z(3);
  z << 0.7, -0.3, 0.2;
  const Jet j = eval_jet(p, z);
  CHECK(j.value == 0.0);
  CHECK(j.dt == 0.0);
  CHECK(j.dtt == 0.0);
  CHECK(j.laplacian == 0.0);
  CHECK(j.grad_x.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("jet matches central finite differences on random nets") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-0.8, 0.8);
  for (int rep = 0; rep < 25; ++rep) {
    const Architecture arch = Architecture::mlp(3, {8, 8});
    const MlpParams p = init_params(arch, 100 + rep);
    Vec z(3);
    z << dist(rng), dist(rng), dist(rng);
    const GradCheckReport report = fd_check_jet(p, z, 1e-4);
    CHECK(report.max_rel_error <= 1e-6);
  }
}

TEST_CASE("second differences agree at h = 1e-3") {
  for (int rep = 0; rep < 5; ++rep) {
    const MlpParams p = init_params(Architecture::mlp(3, {8, 8}), 40 + rep);
    Vec z(3);
    z << 0.1 * rep, -0.2, 0.3;
    const GradCheckReport report = fd_check_jet(p, z, 1e-3);
    for (const auto& [name, rel] : report.per_quantity)
      if (name == "dtt" || name == "laplacian") CHECK(rel <= 1e-6);
  }
}

TEST_CASE("linearity: averaging two nets averages their jets") {
  const Architecture arch = Architecture::mlp(3, {6});
  const MlpParams a = init_params(arch, 1);
  const MlpParams b = init_params(arch, 2);

  // concatenate hidden layers, average with the output layer
  MlpParams avg = MlpParams::zeros(Architecture::mlp(3, {12}));
  avg.weights[0].topRows(6) = a.weights[0];
  avg.weights[0].bottomRows(6) = b.weights[0];
  avg.biases[0].head(6) = a.biases[0];
  avg.biases[0].tail(6) = b.biases[0];
  avg.weights[1].leftCols(6) = 0.5 * a.weights[1];
  avg.weights[1].rightCols(6) = 0.5 * b.weights[1];
  avg.biases[1](0) = 0.5 * (a.biases[1](0) + b.biases[1](0));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int s = 0; s < 50; ++s) {
    Vec z(3);
    z << dist(rng), dist(rng), dist(rng);
    const Jet ja = eval_jet(a, z);
    const Jet jb = eval_jet(b, z);
    const Jet jm = eval_jet(avg, z);
    CHECK_THAT(jm.value, Catch::Matchers::WithinAbs(0.5 * (ja.value + jb.value), 1e-12));
    CHECK_THAT(jm.dt, Catch::Matchers::WithinAbs(0.5 * (ja.dt + jb.dt), 1e-12));
    CHECK_THAT(jm.dtt, Catch::Matchers::WithinAbs(0.5 * (ja.dtt + jb.dtt), 1e-12));
    CHECK_THAT(jm.laplacian,
               Catch::Matchers::WithinAbs(0.5 * (ja.laplacian + jb.laplacian), 1e-12));
  }
}

TEST_CASE("hidden-unit permutation leaves jets unchanged") {
  const Architecture arch = Architecture::mlp(3, {5, 4});
  const MlpParams p = init_params(arch, 77);
  MlpParams q = p;
  const std::vector<int> perm = {3, 0, 4, 1, 2};
  for (int i = 0; i < 5; ++i) {
    q.weights[0].row(i) = p.weights[0].row(perm[static_cast<size_t>(i)]);
    q.biases[0](i) = p.biases[0](perm[static_cast<size_t>(i)]);
    q.weights[1].col(i) = p.weights[1].col(perm[static_cast<size_t>(i)]);
  }
  Vec z(3);
  z << 0.3, -0.6, 0.25;
  // identical up to summation reordering inside the affine maps
  const Jet jp = eval_jet(p, z);
  const Jet jq = eval_jet(q, z);
  CHECK_THAT(jq.value, Catch::Matchers::WithinRel(jp.value, 1e-14));
  CHECK_THAT(jq.dt, Catch::Matchers::WithinRel(jp.dt, 1e-13));
  CHECK_THAT(jq.dtt, Catch::Matchers::WithinRel(jp.dtt, 1e-13));
  CHECK_THAT(jq.laplacian, Catch::Matchers::WithinRel(jp.laplacian, 1e-13));
}

TEST_CASE("batched evaluation equals the single-point path") {
  const MlpParams p = init_params(Architecture::mlp(3, {7, 7}), 23);
  BatchJetEngine engine(p);
  Mat X(4, 3);
  X << 0.1, 0.2, 0.3, -0.4, 0.5, 0.0, 0.25, -0.25, 0.5, 0.0, 0.0, 0.1;
  const JetBatch jb = engine.evaluate(X, all_directions(3), 2);
  for (int i = 0; i < 4; ++i) {
    const Jet j = eval_jet(p, X.row(i).transpose());
    CHECK(jb.value(i) == j.value);
    CHECK(jb.first(i, 2) == j.dt);
    CHECK(jb.second(i, 2) == j.dtt);
    CHECK(jb.second(i, 0) + jb.second(i, 1) == j.laplacian);
  }
}

TEST_CASE("loss gradient of the zero network agrees with FD") {
  const ProblemSpec problem = damped_wave_problem();
  const CollocationSets sets = build_sets(problem.box, CollocationCounts::regular(2, 2));
  const MlpParams zero = MlpParams::zeros(Architecture::mlp(3, {4}));
  const GradCheckReport fd = fd_check_loss(zero, sets, problem, 1e-5);
  CHECK(fd.max_rel_error <= 1e-8);
}

TEST_CASE("loss gradient matches finite differences entry by entry") {
  const ProblemSpec problem = damped_wave_problem();
  const CollocationSets sets = build_sets(problem.box, CollocationCounts::regular(2, 3));
  // width-4, depth-3 network: every parameter entry checked
  const MlpParams p = init_params(Architecture::mlp(3, {4, 4}), 2024);
  const GradCheckReport fd = fd_check_loss(p, sets, problem, 1e-5);
  for (const auto& [name, rel] : fd.per_quantity) {
    INFO(name);
    CHECK(rel <= 1e-5);
  }
}

TEST_CASE("loss gradient with a nonlinearity matches finite differences") {
  const BoxDomain box({-0.5, -0.5}, {0.5, 0.5}, 0.5);
  const ProblemSpec problem = semilinear_power_problem(
      2.0, box, [](const Vec&) { return 1.0; }, 1.0,
      [](const Vec& x) { return std::cos(M_PI * x(0)) * std::cos(M_PI * x(1)); },
      [](const Vec&) { return 0.0; },
      [](const Vec& x) {
        Vec g(2);
        g(0) = -M_PI * std::sin(M_PI * x(0)) * std::cos(M_PI * x(1));
        g(1) = -M_PI * std::cos(M_PI * x(0)) * std::sin(M_PI * x(1));
        return g;
      });
  const CollocationSets sets = build_sets(box, CollocationCounts::regular(2, 3));
  const MlpParams p = init_params(Architecture::mlp(3, {5}), 31);
  const GradCheckReport fd = fd_check_loss(p, sets, problem, 1e-5);
  CHECK(fd.max_rel_error <= 1e-5);
}

TEST_CASE("gradient coordinate vanishes at a partial minimum") {
  const ProblemSpec problem = damped_wave_problem();
  const CollocationSets sets = build_sets(problem.box, CollocationCounts::regular(2, 2));
  const CollocationLoss loss(problem, sets);
  const Architecture arch = Architecture::mlp(3, {3});
  const MlpParams p0 = init_params(arch, 8);
  Vec flat = p0.to_flat();

  // minimize the loss along one coordinate by ternary search
  const Eigen::Index coord = 5;
  auto value_at = [&](double v) {
    Vec x = flat;
    x(coord) = v;
    return loss.value(MlpParams::from_flat(arch, x));
  };
  double lo = flat(coord) - 2.0, hi = flat(coord) + 2.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (value_at(m1) < value_at(m2))
      hi = m2;
    else
      lo = m1;
  }
  flat(coord) = 0.5 * (lo + hi);
  Vec grad;
  loss.value_and_gradient(MlpParams::from_flat(arch, flat), &grad);
  const double h = 1e-5 * std::max(1.0, std::abs(flat(coord)));
  const double fd = (value_at(flat(coord) + h) - value_at(flat(coord) - h)) / (2.0 * h);
  CHECK_THAT(grad(coord), Catch::Matchers::WithinAbs(fd, 1e-5));
  CHECK(std::abs(grad(coord)) <= 1e-4);
}

TEST_CASE("non-finite residual points are named") {
  const ProblemSpec problem = damped_wave_problem();
  const CollocationSets sets = build_sets(problem.box, CollocationCounts::regular(2, 2));
  MlpParams p = init_params(Architecture::mlp(3, {4}), 3);
  p.weights[0](0, 0) = kInf;
  CollocationLoss loss(problem, sets);
  CHECK_THROWS_AS(loss.value(p), NumericalError);
  try {
    loss.value(p);
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("interior") != std::string::npos);
    CHECK(std::string(e.what()).find("(") != std::string::npos);
  }
}
