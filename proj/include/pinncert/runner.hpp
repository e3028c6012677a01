#pragma once

#include "pinncert/bounds.hpp"
#include "pinncert/expression.hpp"
#include "pinncert/loss.hpp"
#include "pinncert/metrics.hpp"
#include "pinncert/optimize.hpp"
#include "pinncert/problem.hpp"
#include "pinncert/serialize.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace pinncert {

/// Problem defined by expression strings (variables x, y, t, u).
struct ExpressionProblemConfig {
  int d = 2;
  std::vector<double> lower, upper;
  double horizon = 0.5;
  std::string damping = "0";
  double damping_c2_norm = 0.0;
  std::string f;  // empty -> linear problem
  double growth_c = 0.0;
  double growth_r = 1.0;
  std::string u0 = "0";
  std::string u1 = "0";
  std::string exact_u;   // optional
  std::string exact_ut;  // optional
};

struct RunConfig {
  std::string problem = "damped-wave";
  std::optional<ExpressionProblemConfig> expression;

  std::vector<int> hidden = {80, 80};
  double weight_bound = kInf;  // during training

  TrainConfig train;
  int collocation_n = 10;
  int metric_factor = 4;

  std::string bound_mode = "empirical";  // or "lemma"
  double bound_weight_bound = 0.0;       // 0 -> max observed |entry|, rounded up
  GeometryConstants geom;
  // Sampling grid for the empirical norms; 0 resolves to the training nodes
  // plus all cell midpoints (2n + 1 nodes per axis), the minimal refinement
  // that is strictly finer than the training grid.
  EmpiricalGrid cn_grid{0, 0};

  EmpiricalGrid resolved_cn_grid() const {
    EmpiricalGrid g = cn_grid;
    if (g.space <= 0) g.space = 2 * collocation_n + 1;
    if (g.time <= 0) g.time = 2 * collocation_n + 1;
    return g;
  }

  std::vector<int> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::string out_dir = "out";
};

namespace detail {

inline std::vector<std::string> axis_names(int d) {
  static const std::vector<std::string> names = {"x", "y", "z", "w"};
  if (d > static_cast<int>(names.size())) throw ConfigError("expression problems support d <= 4");
  return {names.begin(), names.begin() + d};
}

inline Expression::Env axis_env(const Vec& x) {
  Expression::Env env;
  const auto names = axis_names(static_cast<int>(x.size()));
  for (int i = 0; i < static_cast<int>(x.size()); ++i) env[names[static_cast<size_t>(i)]] = x(i);
  return env;
}

}  // namespace detail

inline ProblemSpec build_expression_problem(const ExpressionProblemConfig& cfg) {
  ProblemSpec p;
  p.name = "expression";
  p.box = BoxDomain(cfg.lower, cfg.upper, cfg.horizon);
  const int d = cfg.d;
  if (p.box.dim() != d) throw ConfigError("expression problem: box dimension != d");
  const auto names = detail::axis_names(d);

  const Expression a_expr = Expression::parse(cfg.damping);
  p.damping = [a_expr](const Vec& x) { return a_expr.eval(detail::axis_env(x)); };
  p.damping_c2_norm = cfg.damping_c2_norm;

  if (!cfg.f.empty()) {
    const Expression f_expr = Expression::parse(cfg.f);
    const Expression dfdu_expr = f_expr.derivative("u");
    p.has_nonlinearity = true;
    p.f = [f_expr](const Vec& x, double u) {
      auto env = detail::axis_env(x);
      env["u"] = u;
      return f_expr.eval(env);
    };
    p.df_du = [dfdu_expr](const Vec& x, double u) {
      auto env = detail::axis_env(x);
      env["u"] = u;
      return dfdu_expr.eval(env);
    };
    p.growth_c = cfg.growth_c;
    p.growth_r = cfg.growth_r;
  }

  const Expression u0_expr = Expression::parse(cfg.u0);
  const Expression u1_expr = Expression::parse(cfg.u1);
  std::vector<Expression> grad_u0;
  for (const auto& name : names) grad_u0.push_back(u0_expr.derivative(name));
  p.u0 = [u0_expr](const Vec& x) { return u0_expr.eval(detail::axis_env(x)); };
  p.u1 = [u1_expr](const Vec& x) { return u1_expr.eval(detail::axis_env(x)); };
  p.grad_u0 = [grad_u0, d](const Vec& x) {
    Vec g(d);
    const auto env = detail::axis_env(x);
    for (int i = 0; i < d; ++i) g(i) = grad_u0[static_cast<size_t>(i)].eval(env);
    return g;
  };

  if (!cfg.exact_u.empty()) {
    const Expression u_expr = Expression::parse(cfg.exact_u);
    ExactSolution exact;
    exact.u = [u_expr](const Vec& x, double t) {
      auto env = detail::axis_env(x);
      env["t"] = t;
      return u_expr.eval(env);
    };
    if (!cfg.exact_ut.empty()) {
      const Expression ut_expr = Expression::parse(cfg.exact_ut);
      exact.u_t = [ut_expr](const Vec& x, double t) {
        auto env = detail::axis_env(x);
        env["t"] = t;
        return ut_expr.eval(env);
      };
    } else {
      const Expression ut_expr = u_expr.derivative("t");
      exact.u_t = [ut_expr](const Vec& x, double t) {
        auto env = detail::axis_env(x);
        env["t"] = t;
        return ut_expr.eval(env);
      };
    }
    p.exact = std::move(exact);
  }
  return p;
}

inline ProblemSpec build_problem(const RunConfig& cfg) {
  if (cfg.problem == "damped-wave") return damped_wave_problem();
  if (cfg.problem == "expression") {
    if (!cfg.expression) throw ConfigError("problem 'expression' needs an expression block");
    return build_expression_problem(*cfg.expression);
  }
  throw ConfigError("unknown problem: " + cfg.problem);
}

inline Json to_json(const RunConfig& cfg) {
  Json j;
  j["problem"] = cfg.problem;
  if (cfg.expression) {
    const auto& e = *cfg.expression;
    j["expression"] = {{"d", e.d},
                       {"lower", e.lower},
                       {"upper", e.upper},
                       {"horizon", e.horizon},
                       {"damping", e.damping},
                       {"damping_c2_norm", e.damping_c2_norm},
                       {"f", e.f},
                       {"growth_c", e.growth_c},
                       {"growth_r", e.growth_r},
                       {"u0", e.u0},
                       {"u1", e.u1},
                       {"exact_u", e.exact_u},
                       {"exact_ut", e.exact_ut}};
  }
  j["hidden"] = cfg.hidden;
  j["weight_bound"] = std::isfinite(cfg.weight_bound) ? Json(cfg.weight_bound) : Json("inf");
  j["train"] = {{"max_iterations", cfg.train.max_iterations},
                {"memory", cfg.train.memory},
                {"wolfe_c1", cfg.train.wolfe_c1},
                {"wolfe_c2", cfg.train.wolfe_c2},
                {"grad_tolerance", cfg.train.grad_tolerance},
                {"loss_tolerance", cfg.train.loss_tolerance},
                {"stagnation_window", cfg.train.stagnation_window},
                {"init_scheme", cfg.train.init_scheme},
                {"init_scale", cfg.train.init_scale}};
  j["collocation_n"] = cfg.collocation_n;
  j["metric_factor"] = cfg.metric_factor;
  j["bound_mode"] = cfg.bound_mode;
  j["bound_weight_bound"] = cfg.bound_weight_bound;
  j["geometry"] = {{"c_omega", cfg.geom.c_omega},
                   {"c_omega_t", cfg.geom.c_omega_t},
                   {"c_boundary", cfg.geom.c_boundary}};
  j["cn_grid"] = {{"space", cfg.cn_grid.space}, {"time", cfg.cn_grid.time}};
  return j;  // seeds and out_dir deliberately excluded (fingerprint)
}

inline RunConfig run_config_from_json(const Json& j) {
  RunConfig cfg;
  cfg.problem = j.value("problem", std::string("damped-wave"));
  if (j.contains("expression")) {
    const Json& e = j.at("expression");
    ExpressionProblemConfig ec;
    ec.d = e.value("d", 2);
    ec.lower = e.at("lower").get<std::vector<double>>();
    ec.upper = e.at("upper").get<std::vector<double>>();
    ec.horizon = e.at("horizon");
    ec.damping = e.value("damping", std::string("0"));
    ec.damping_c2_norm = e.value("damping_c2_norm", 0.0);
    ec.f = e.value("f", std::string());
    ec.growth_c = e.value("growth_c", 0.0);
    ec.growth_r = e.value("growth_r", 1.0);
    ec.u0 = e.value("u0", std::string("0"));
    ec.u1 = e.value("u1", std::string("0"));
    ec.exact_u = e.value("exact_u", std::string());
    ec.exact_ut = e.value("exact_ut", std::string());
    cfg.expression = ec;
  }
  cfg.hidden = j.value("hidden", std::vector<int>{80, 80});
  if (j.contains("weight_bound") && !j.at("weight_bound").is_string())
    cfg.weight_bound = j.at("weight_bound").get<double>();
  if (j.contains("train")) {
    const Json& t = j.at("train");
    cfg.train.max_iterations = t.value("max_iterations", cfg.train.max_iterations);
    cfg.train.memory = t.value("memory", cfg.train.memory);
    cfg.train.wolfe_c1 = t.value("wolfe_c1", cfg.train.wolfe_c1);
    cfg.train.wolfe_c2 = t.value("wolfe_c2", cfg.train.wolfe_c2);
    cfg.train.grad_tolerance = t.value("grad_tolerance", cfg.train.grad_tolerance);
    cfg.train.loss_tolerance = t.value("loss_tolerance", cfg.train.loss_tolerance);
    cfg.train.stagnation_window = t.value("stagnation_window", cfg.train.stagnation_window);
    cfg.train.init_scheme = t.value("init_scheme", cfg.train.init_scheme);
    cfg.train.init_scale = t.value("init_scale", cfg.train.init_scale);
  }
  cfg.collocation_n = j.value("collocation_n", cfg.collocation_n);
  cfg.metric_factor = j.value("metric_factor", cfg.metric_factor);
  cfg.bound_mode = j.value("bound_mode", cfg.bound_mode);
  cfg.bound_weight_bound = j.value("bound_weight_bound", cfg.bound_weight_bound);
  if (j.contains("geometry")) {
    cfg.geom.c_omega = j.at("geometry").value("c_omega", 1.0);
    cfg.geom.c_omega_t = j.at("geometry").value("c_omega_t", 1.0);
    cfg.geom.c_boundary = j.at("geometry").value("c_boundary", 1.0);
  }
  if (j.contains("cn_grid")) {
    cfg.cn_grid.space = j.at("cn_grid").value("space", cfg.cn_grid.space);
    cfg.cn_grid.time = j.at("cn_grid").value("time", cfg.cn_grid.time);
  }
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<int>>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  return cfg;
}

struct SeedResult {
  int seed = 0;
  TrainRecord record;
  double l2_error = 0.0;
  H1ErrorReport h1;
  BoundReport bound;
  ConstantLedger ledger;
  double total_seconds = 0.0;
  bool from_cache = false;
};

/// Computes the configured a-posteriori bound for trained parameters.
inline std::pair<BoundReport, ConstantLedger> compute_bound(const RunConfig& cfg,
                                                            const ProblemSpec& problem,
                                                            const CollocationSets& sets,
                                                            const MlpParams& params,
                                                            const TrainingErrorReport& report) {
  ConstantLedger ledger;
  const EmpiricalGrid cn_grid = cfg.resolved_cn_grid();
  if (cfg.bound_mode == "empirical") {
    const EmpiricalNorms norms = empirical_residual_norms(params, problem, cn_grid);
    ledger = empirical_constants(problem, cfg.geom, norms);
  } else if (cfg.bound_mode == "lemma") {
    double r_bound = cfg.bound_weight_bound;
    if (r_bound <= 0.0) r_bound = std::ceil(params.max_abs_entry());
    Architecture arch = params.arch;
    arch.weight_bound = r_bound;
    const double u_c1 = problem.exact ? sampled_exact_cn_norm(problem, 1, cn_grid) : 0.0;
    const double u_c2 = problem.exact ? sampled_exact_cn_norm(problem, 2, cn_grid) : 0.0;
    const double u_c3 = problem.exact ? sampled_exact_cn_norm(problem, 3, cn_grid) : 0.0;
    ledger = lemma_constants(arch, problem, cfg.geom, u_c1, u_c2, u_c3);
    if (problem.has_nonlinearity) {
      const EmpiricalNorms norms = empirical_residual_norms(params, problem, cn_grid);
      ledger.hat_c = hat_c(problem, norms.u_c0, norms.uhat_c0);
    }
  } else {
    throw ConfigError("bound mode must be 'lemma' or 'empirical': " + cfg.bound_mode);
  }
  return {posterior_bound(report, sets, ledger, problem.box, problem.has_nonlinearity), ledger};
}

inline Json to_json(const SeedResult& r, bool include_params) {
  Json j;
  j["schema"] = "pinncert-seed-v1";
  j["seed"] = r.seed;
  j["train"] = to_json(r.record, include_params);
  j["metrics"] = {{"l2_error", r.l2_error},
                  {"h1_l2_part", r.h1.l2_part},
                  {"h1_dt_part", r.h1.dt_part},
                  {"h1_quantity", r.h1.sum}};
  j["bound"] = to_json(r.bound);
  j["constants"] = to_json(r.ledger);
  j["timing"] = {{"train_seconds", r.record.seconds}, {"total_seconds", r.total_seconds}};
  return j;
}

/// One seed of the pipeline: init, train, measure, bound. Results are cached
/// as JSON in the output directory; a cached seed whose fingerprint matches
/// is loaded instead of recomputed.
inline SeedResult run_seed(const RunConfig& cfg, const ProblemSpec& problem,
                           const CollocationSets& sets, int seed) {
  namespace fs = std::filesystem;
  const Json fingerprint = to_json(cfg);
  fs::path seed_path;
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    seed_path = fs::path(cfg.out_dir) / ("seed_" + std::to_string(seed) + ".json");
    if (fs::exists(seed_path)) {
      const Json j = read_json(seed_path.string());
      if (j.value("schema", std::string()) == "pinncert-seed-v1" &&
          j.value("fingerprint", Json()) == fingerprint && j.contains("result")) {
        const Json& res = j.at("result");
        SeedResult out;
        out.seed = seed;
        out.from_cache = true;
        out.record.params = params_from_json(res.at("train").at("params"));
        out.record.iterations = res.at("train").at("iterations");
        out.record.termination = res.at("train").at("termination");
        out.record.loss_history = res.at("train").at("loss_history").get<std::vector<double>>();
        out.record.seconds = res.at("timing").at("train_seconds");
        out.record.report = training_error_from_json(res.at("train").at("training_error"));
        out.l2_error = res.at("metrics").at("l2_error");
        out.h1.l2_part = res.at("metrics").at("h1_l2_part");
        out.h1.dt_part = res.at("metrics").at("h1_dt_part");
        out.h1.sum = res.at("metrics").at("h1_quantity");
        out.bound.bound_value = res.at("bound").at("bound_value");
        out.bound.c_of_m = res.at("bound").at("c_of_m");
        out.bound.gronwall = res.at("bound").at("gronwall_factor");
        out.bound.mode = res.at("bound").at("mode");
        out.total_seconds = res.at("timing").at("total_seconds");
        return out;
      }
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  SeedResult out;
  out.seed = seed;

  Architecture arch = Architecture::mlp(problem.dim() + 1, cfg.hidden, cfg.weight_bound);
  TrainConfig tc = cfg.train;
  tc.seed = static_cast<std::uint64_t>(seed);
  const MlpParams params0 =
      init_params(arch, tc.seed, tc.init_scheme, tc.init_scale);
  out.record = train(params0, sets, problem, tc);

  if (problem.exact) {
    std::vector<int> metric_space(static_cast<size_t>(problem.dim()),
                                  cfg.collocation_n * cfg.metric_factor);
    const int metric_time = cfg.collocation_n * cfg.metric_factor;
    out.h1 = total_error_h1(out.record.params, problem, metric_space, metric_time);
    out.l2_error = out.h1.l2_norm();
  }

  auto [bound, ledger] = compute_bound(cfg, problem, sets, out.record.params, out.record.report);
  out.bound = bound;
  out.ledger = ledger;
  out.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!seed_path.empty()) {
    Json j;
    j["schema"] = "pinncert-seed-v1";
    j["fingerprint"] = fingerprint;
    j["result"] = to_json(out, true);
    write_json(j, seed_path.string());
  }
  return out;
}

struct Aggregate {
  double mean = 0.0, min = kInf, max = -kInf;
  void add(double v) {
    mean += v;
    min = std::min(min, v);
    max = std::max(max, v);
  }
  void finish(size_t n) { mean /= static_cast<double>(n); }
};

struct RunReport {
  RunConfig config;
  std::vector<SeedResult> seeds;
  Aggregate l2_error, h1_quantity, h1_l2_part, bound_value, train_error_total, train_seconds;
  std::vector<Aggregate> train_error_parts;  // pde, su, sut, u0, u1, gradu (squared)
};

inline int parallelism_from_env() {
  if (const char* env = std::getenv("PINNCERT_PARALLEL")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Validates a configuration against every module's preconditions before any
/// work starts.
inline void validate_run_config(const RunConfig& cfg, const ProblemSpec& problem) {
  cfg.train.validate();
  Architecture::mlp(problem.dim() + 1, cfg.hidden, cfg.weight_bound).validate();
  CollocationCounts::regular(problem.dim(), cfg.collocation_n).validate(problem.dim());
  if (cfg.metric_factor < 2)
    throw ConfigError("run config: metric_factor must be >= 2 (out-of-sample metrics)");
  if (cfg.bound_mode != "lemma" && cfg.bound_mode != "empirical")
    throw ConfigError("run config: bound_mode must be 'lemma' or 'empirical'");
  if (cfg.seeds.empty()) throw ConfigError("run config: at least one seed required");
  if (cfg.geom.c_omega <= 0.0 || cfg.geom.c_omega_t <= 0.0 || cfg.geom.c_boundary <= 0.0)
    throw ConfigError("run config: geometry constants must be positive");
  const AssumptionReport assumptions = validate_assumptions(problem);
  if (!assumptions.damping_ok)
    throw ConfigError("run config: damping violates a(x) >= 0 on the sample grid");
}

/// Trains all configured seeds (possibly in parallel processes' worth of
/// threads; each seed's pipeline is single-threaded and deterministic) and
/// aggregates sorted by seed.
inline RunReport run(const RunConfig& cfg) {
  const ProblemSpec problem = build_problem(cfg);
  validate_run_config(cfg, problem);
  const CollocationSets sets = build_sets(problem.box, CollocationCounts::regular(problem.dim(), cfg.collocation_n));

  RunReport report;
  report.config = cfg;
  report.seeds.resize(cfg.seeds.size());

  const int workers = std::min<int>(parallelism_from_env(), static_cast<int>(cfg.seeds.size()));
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::string> errors(cfg.seeds.size());
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= cfg.seeds.size()) return;
        try {
          report.seeds[i] = run_seed(cfg, problem, sets, cfg.seeds[i]);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty())
      throw NumericalError("seed " + std::to_string(cfg.seeds[i]) + " failed: " + errors[i]);

  std::sort(report.seeds.begin(), report.seeds.end(),
            [](const SeedResult& a, const SeedResult& b) { return a.seed < b.seed; });

  report.train_error_parts.assign(6, Aggregate());
  for (const SeedResult& s : report.seeds) {
    report.l2_error.add(s.l2_error);
    report.h1_quantity.add(s.h1.sum);
    report.h1_l2_part.add(s.h1.l2_part);
    report.bound_value.add(s.bound.bound_value);
    report.train_error_total.add(s.record.report.total());
    report.train_seconds.add(s.record.seconds);
    report.train_error_parts[0].add(s.record.report.pde_sq);
    report.train_error_parts[1].add(s.record.report.su_sq);
    report.train_error_parts[2].add(s.record.report.sut_sq);
    report.train_error_parts[3].add(s.record.report.u0_sq);
    report.train_error_parts[4].add(s.record.report.u1_sq);
    report.train_error_parts[5].add(s.record.report.gradu_sq);
  }
  const size_t n = report.seeds.size();
  report.l2_error.finish(n);
  report.h1_quantity.finish(n);
  report.h1_l2_part.finish(n);
  report.bound_value.finish(n);
  report.train_error_total.finish(n);
  report.train_seconds.finish(n);
  for (auto& a : report.train_error_parts) a.finish(n);
  return report;
}

inline Json to_json(const Aggregate& a) {
  return Json{{"mean", a.mean}, {"min", a.min}, {"max", a.max}};
}

inline Json to_json(const RunReport& r) {
  Json j;
  j["schema"] = "pinncert-run-v1";
  j["config"] = to_json(r.config);
  j["config"]["seeds"] = r.config.seeds;
  Json seeds = Json::array();
  for (const SeedResult& s : r.seeds) seeds.push_back(to_json(s, false));
  j["seeds"] = seeds;
  j["aggregates"] = {{"l2_error", to_json(r.l2_error)},
                     {"h1_quantity", to_json(r.h1_quantity)},
                     {"h1_l2_part", to_json(r.h1_l2_part)},
                     {"bound_value", to_json(r.bound_value)},
                     {"train_error_total", to_json(r.train_error_total)},
                     {"train_seconds", to_json(r.train_seconds)},
                     {"train_error_parts",
                      {{"pde_sq", to_json(r.train_error_parts[0])},
                       {"su_sq", to_json(r.train_error_parts[1])},
                       {"sut_sq", to_json(r.train_error_parts[2])},
                       {"u0_sq", to_json(r.train_error_parts[3])},
                       {"u1_sq", to_json(r.train_error_parts[4])},
                       {"gradu_sq", to_json(r.train_error_parts[5])}}}};
  return j;
}

// ---------------------------------------------------------------------------
// sweeps over training-set sizes
// ---------------------------------------------------------------------------

inline const char* kSweepCsvHeader =
    "M_total,M_PDE,M_s,M_t,aggregate,E_T,E_T_pde_sq,E_T_su_sq,E_T_sut_sq,E_T_u0_sq,"
    "E_T_u1_sq,E_T_gradu_sq,l2_error,h1_quantity,bound,train_seconds";

/// Each sweep setting carries its own iteration cap: settings train until
/// their own grid's quadrature floor, so coarse grids are not overfit
/// between collocation points while fine grids get the iterations they need.
struct SweepPreset {
  std::string name;
  std::vector<int> n_values;
  std::vector<int> iteration_caps;  // parallel to n_values
  std::vector<int> seeds;
};

/// fig5-small: desk-scale smoke ladder (totals 144..1500, 3 seeds);
/// fig5-accept: 144 / 1500 / 18750 endpoint ladder, 10 seeds;
/// fig5-full: the full grid ladder up to 18750 points, 10 seeds.
inline SweepPreset sweep_preset(const std::string& name) {
  const std::vector<int> ten_seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  if (name == "fig5-small") return {name, {4, 6, 8, 10}, {300, 400, 550, 700}, {0, 1, 2}};
  if (name == "fig5-accept") return {name, {4, 10, 25}, {300, 700, 2500}, ten_seeds};
  if (name == "fig5-full")
    return {name,
            {4, 7, 10, 14, 18, 21, 25},
            {300, 500, 700, 1100, 1500, 2000, 2500},
            ten_seeds};
  throw ConfigError("unknown preset: " + name);
}

inline std::vector<RunReport> sweep(RunConfig base, const SweepPreset& preset,
                                    std::ostream& csv) {
  if (preset.n_values.size() != preset.iteration_caps.size())
    throw ConfigError("sweep preset: one iteration cap per setting required");
  csv << kSweepCsvHeader << '\n';
  csv.precision(12);
  std::vector<RunReport> reports;
  const std::string root = base.out_dir;
  base.seeds = preset.seeds;
  for (size_t si = 0; si < preset.n_values.size(); ++si) {
    const int n = preset.n_values[si];
    RunConfig cfg = base;
    cfg.collocation_n = n;
    cfg.train.max_iterations = preset.iteration_caps[si];
    if (!root.empty()) cfg.out_dir = root + "/n" + std::to_string(n);
    RunReport rep = run(cfg);

    const ProblemSpec problem = build_problem(cfg);
    const CollocationSets sets =
        build_sets(problem.box, CollocationCounts::regular(problem.dim(), n));
    auto row = [&](const char* name, auto pick) {
      csv << sets.total() << ',' << sets.m_pde() << ',' << sets.m_s() << ',' << sets.m_t() << ','
          << name << ',' << pick(rep.train_error_total) << ','
          << pick(rep.train_error_parts[0]) << ',' << pick(rep.train_error_parts[1]) << ','
          << pick(rep.train_error_parts[2]) << ',' << pick(rep.train_error_parts[3]) << ','
          << pick(rep.train_error_parts[4]) << ',' << pick(rep.train_error_parts[5]) << ','
          << pick(rep.l2_error) << ',' << pick(rep.h1_quantity) << ',' << pick(rep.bound_value)
          << ',' << pick(rep.train_seconds) << '\n';
    };
    row("mean", [](const Aggregate& a) { return a.mean; });
    row("min", [](const Aggregate& a) { return a.min; });
    row("max", [](const Aggregate& a) { return a.max; });
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace pinncert
