#include "pinncert/runner.hpp"
#include "pinncert/serialize.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace pinncert;

TEST_CASE("architecture json: inf weight bound") {
  Architecture arch = Architecture::mlp(3, {80, 80});
  const Json j = to_json(arch);
  CHECK(j.at("weight_bound") == "inf");
  const Architecture back = architecture_from_json(j);
  CHECK(back.weight_bound == kInf);
  CHECK(back.widths == arch.widths);

  arch.weight_bound = 2.5;
  CHECK(architecture_from_json(to_json(arch)).weight_bound == 2.5);
}

TEST_CASE("params json schema fields") {
  const MlpParams p = init_params(Architecture::mlp(3, {4, 3}), 77);
  const Json j = to_json(p);
  REQUIRE(j.contains("architecture"));
  REQUIRE(j.contains("layers"));
  REQUIRE(j.at("layers").is_array());
  CHECK(j.at("layers").size() == 3);
  for (const auto& layer : j.at("layers")) {
    CHECK(layer.contains("weights"));
    CHECK(layer.contains("bias"));
  }
  // row-major flattening: first layer weights are 4 rows x 3 cols
  CHECK(j.at("layers")[0].at("weights").size() == 12);
  CHECK(j.at("layers")[0].at("weights")[1].get<double>() == p.weights[0](0, 1));

  Json broken = j;
  broken["layers"][0]["weights"] = std::vector<double>{1.0};
  CHECK_THROWS_AS(params_from_json(broken), ConfigError);
}

TEST_CASE("training report json round trip") {
  TrainingErrorReport r;
  r.pde_sq = 0.5;
  r.su_sq = 0.125;
  r.sut_sq = 0.25;
  r.u0_sq = 1.0 / 64.0;
  r.u1_sq = 1.0 / 32.0;
  r.gradu_sq = 1.0 / 16.0;
  r.m_pde = 1000;
  r.m_s = 400;
  r.m_t = 100;
  const TrainingErrorReport back = training_error_from_json(to_json(r));
  CHECK(back.pde_sq == r.pde_sq);
  CHECK(back.total_sq() == r.total_sq());
  CHECK(back.m_pde == 1000);
  CHECK(to_json(r).at("total") == r.total());
}

TEST_CASE("loss history thinning is deterministic and keeps the last entry") {
  TrainRecord rec;
  rec.iterations = 9999;
  rec.termination = "iteration-cap";
  for (int i = 0; i < 10000; ++i) rec.loss_history.push_back(1.0 / (i + 1.0));
  rec.params = MlpParams::zeros(Architecture::mlp(3, {4}));
  const Json a = to_json(rec, false);
  const Json b = to_json(rec, false);
  CHECK(a == b);
  CHECK(a.at("loss_history").size() <= 4002);
  CHECK(a.at("loss_history").back().get<double>() == rec.loss_history.back());
  CHECK(a.at("final_loss").get<double>() == rec.loss_history.back());
}

TEST_CASE("strip_timing removes wall-clock fields everywhere") {
  Json j = {{"timing", {{"seconds", 1.0}}},
            {"nested", {{"train_seconds", 2.0}, {"keep", 3}}},
            {"list", Json::array({Json{{"seconds", 4.0}, {"x", 1}}})}};
  strip_timing(j);
  CHECK_FALSE(j.contains("timing"));
  CHECK_FALSE(j.at("nested").contains("train_seconds"));
  CHECK(j.at("nested").at("keep") == 3);
  CHECK_FALSE(j.at("list")[0].contains("seconds"));
  CHECK(j.at("list")[0].at("x") == 1);
}

TEST_CASE("run config json round trip") {
  RunConfig cfg;
  cfg.problem = "damped-wave";
  cfg.hidden = {32, 32};
  cfg.train.max_iterations = 123;
  cfg.collocation_n = 7;
  cfg.bound_mode = "lemma";
  cfg.geom.c_omega = 2.0;
  Json j = to_json(cfg);
  j["seeds"] = std::vector<int>{3, 4};
  j["out_dir"] = "somewhere";
  const RunConfig back = run_config_from_json(j);
  CHECK(back.hidden == cfg.hidden);
  CHECK(back.train.max_iterations == 123);
  CHECK(back.collocation_n == 7);
  CHECK(back.bound_mode == "lemma");
  CHECK(back.geom.c_omega == 2.0);
  CHECK(back.seeds == std::vector<int>{3, 4});
  CHECK(back.out_dir == "somewhere");
}

TEST_CASE("expression problem config round trip and evaluation") {
  RunConfig cfg;
  cfg.problem = "expression";
  ExpressionProblemConfig e;
  e.d = 2;
  e.lower = {-0.5, -0.5};
  e.upper = {0.5, 0.5};
  e.horizon = 0.5;
  e.damping = "2*pi";
  e.damping_c2_norm = 2.0 * M_PI;
  e.u0 = "cos(pi*x)*cos(pi*y)";
  e.u1 = "0";
  e.exact_u = "exp(-pi*t)*(cos(pi*t)+sin(pi*t))*cos(pi*x)*cos(pi*y)";
  cfg.expression = e;

  const RunConfig back = run_config_from_json(to_json(cfg));
  REQUIRE(back.expression.has_value());
  const ProblemSpec p = build_problem(back);
  const ProblemSpec reference = damped_wave_problem();
  Vec x(2);
  x << 0.2, -0.3;
  CHECK_THAT(p.u0(x), Catch::Matchers::WithinRel(reference.u0(x), 1e-14));
  CHECK_THAT(p.damping(x), Catch::Matchers::WithinRel(2.0 * M_PI, 1e-14));
  CHECK_THAT(p.grad_u0(x)(0), Catch::Matchers::WithinRel(reference.grad_u0(x)(0), 1e-14));
  REQUIRE(p.exact.has_value());
  CHECK_THAT(p.exact->u(x, 0.3), Catch::Matchers::WithinRel(reference.exact->u(x, 0.3), 1e-14));
  // u_t derived symbolically from the exact expression
  CHECK_THAT(p.exact->u_t(x, 0.3),
             Catch::Matchers::WithinRel(reference.exact->u_t(x, 0.3), 1e-12));
}

TEST_CASE("bound report json carries the full breakdown") {
  BoundReport b;
  b.c_of_m = 2.0;
  b.gronwall = 27.0;
  b.bound_value = 54.0;
  b.mode = "empirical-sampled";
  const Json j = to_json(b);
  CHECK(j.at("bound_value") == 54.0);
  REQUIRE(j.contains("terms"));
  for (const char* key : {"u1_deficit", "u1_train", "pde_deficit", "pde_train",
                          "gradu_deficit", "gradu_train", "boundary_mixed", "u0_deficit",
                          "u0_train"})
    CHECK(j.at("terms").contains(key));
}

TEST_CASE("sweep csv header is pinned") {
  CHECK(std::string(kSweepCsvHeader) ==
        "M_total,M_PDE,M_s,M_t,aggregate,E_T,E_T_pde_sq,E_T_su_sq,E_T_sut_sq,E_T_u0_sq,"
        "E_T_u1_sq,E_T_gradu_sq,l2_error,h1_quantity,bound,train_seconds");
}
