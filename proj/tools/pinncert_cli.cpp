#include "pinncert/pinncert.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace pinncert;

std::vector<int> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  std::vector<int> seeds;
  if (dots == std::string::npos) {
    seeds.push_back(std::stoi(text));
    return seeds;
  }
  const int a = std::stoi(text.substr(0, dots));
  const int b = std::stoi(text.substr(dots + 2));
  if (b < a) throw ConfigError("--seeds: range end before start");
  for (int s = a; s <= b; ++s) seeds.push_back(s);
  return seeds;
}

RunConfig load_run_config(const std::string& config_path, const std::string& preset,
                          const std::string& seeds, const std::string& out,
                          const std::string& mode) {
  RunConfig cfg;
  if (!config_path.empty()) cfg = run_config_from_json(read_json(config_path));
  if (!preset.empty()) {
    const SweepPreset sp = sweep_preset(preset);
    cfg.seeds = sp.seeds;
    cfg.train.max_iterations = sp.iteration_caps.back();
    cfg.collocation_n = sp.n_values.back();
  }
  if (!seeds.empty()) cfg.seeds = parse_seed_range(seeds);
  if (!out.empty()) cfg.out_dir = out;
  if (const char* env = std::getenv("PINNCERT_OUT")) cfg.out_dir = env;
  if (!mode.empty()) cfg.bound_mode = mode;
  return cfg;
}

int run_train(const RunConfig& cfg) {
  const RunReport report = run(cfg);
  const Json j = to_json(report);
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_json(j, cfg.out_dir + "/run_report.json");
    std::cout << "report written to " << cfg.out_dir << "/run_report.json\n";
    // pointwise |u_theta - u| snapshots of the first seed
    const ProblemSpec problem = build_problem(cfg);
    if (problem.exact && problem.dim() == 2) {
      const MlpParams& params = report.seeds.front().record.params;
      for (double t : {0.0, 0.5 * problem.box.horizon, problem.box.horizon}) {
        const Mat field = pointwise_error_field(params, problem, t, 64, 64);
        std::ostringstream name;
        name << cfg.out_dir << "/error_field_t" << t << ".csv";
        std::ofstream os(name.str());
        write_field_csv(field, problem.box, t, os);
      }
      std::cout << "error fields written for seed " << report.seeds.front().seed << '\n';
    }
  }
  std::cout << "mean L2 error       " << report.l2_error.mean << '\n'
            << "mean H1 quantity    " << report.h1_quantity.mean << '\n'
            << "mean bound value    " << report.bound_value.mean << '\n'
            << "mean training error " << report.train_error_total.mean << '\n';
  return 0;
}

int run_sweep(RunConfig cfg, const std::string& preset) {
  SweepPreset sp = sweep_preset(preset.empty() ? "fig5-small" : preset);
  if (cfg.out_dir.empty()) cfg.out_dir = "out/" + sp.name;
  std::filesystem::create_directories(cfg.out_dir);
  const std::string csv_path = cfg.out_dir + "/sweep.csv";
  std::ofstream csv(csv_path);
  sweep(cfg, sp, csv);
  std::cout << "sweep table written to " << csv_path << '\n';
  return 0;
}

int run_bound(const std::string& seed_json, const RunConfig& cli_cfg) {
  const Json j = read_json(seed_json);
  if (j.value("schema", std::string()) != "pinncert-seed-v1")
    throw ConfigError("bound: expected a pinncert-seed-v1 JSON file");
  RunConfig cfg = run_config_from_json(j.at("fingerprint"));
  cfg.bound_mode = cli_cfg.bound_mode;
  cfg.out_dir = cli_cfg.out_dir;
  const ProblemSpec problem = build_problem(cfg);
  const CollocationSets sets =
      build_sets(problem.box, CollocationCounts::regular(problem.dim(), cfg.collocation_n));
  const MlpParams params = params_from_json(j.at("result").at("train").at("params"));
  const TrainingErrorReport report =
      training_error_from_json(j.at("result").at("train").at("training_error"));
  auto [bound, ledger] = compute_bound(cfg, problem, sets, params, report);
  Json out;
  out["schema"] = "pinncert-bound-v1";
  out["bound"] = to_json(bound);
  out["constants"] = to_json(ledger);
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_json(out, cfg.out_dir + "/bound_report.json");
    std::cout << "bound report written to " << cfg.out_dir << "/bound_report.json\n";
  } else {
    std::cout << out.dump(2) << '\n';
  }
  return 0;
}

int run_theory(const std::string& config_path, const std::string& out_dir) {
  TheoryInputs in;
  double epsilon = 0.0;
  double apriori_k = 0.0;
  std::vector<int> n_values = {6, 8, 12, 16, 24, 32, 48, 64};
  BoxDomain omega = BoxDomain::unit_square(0.5);
  double a_linf = 2.0 * M_PI;
  if (!config_path.empty()) {
    const Json j = read_json(config_path);
    in.d = j.value("d", in.d);
    in.k = j.value("k", in.k);
    in.n = j.value("n", in.n);
    in.T = j.value("T", in.T);
    in.hat_lower = j.value("hat_lower", std::vector<int>{-1, -1});
    in.hat_upper = j.value("hat_upper", std::vector<int>{1, 1});
    in.delta = j.value("delta", in.delta);
    in.gamma = j.value("gamma", in.gamma);
    in.growth_c = j.value("growth_c", in.growth_c);
    in.h_seminorm = j.value("h_seminorm", in.h_seminorm);
    in.w_linf = j.value("w_linf", std::vector<double>{1.0, 1.0, 1.0});
    in.gn_constant = j.value("gn_constant", in.gn_constant);
    in.u_h2 = j.value("u_h2", in.u_h2);
    in.u_l2 = j.value("u_l2", in.u_l2);
    if (j.contains("n_values")) n_values = j.at("n_values").get<std::vector<int>>();
    a_linf = j.value("a_linf", a_linf);
    epsilon = j.value("apriori_epsilon", 0.0);
    apriori_k = j.value("apriori_k", 0.0);
    if (j.contains("omega"))
      omega = BoxDomain(j.at("omega").at("lower").get<std::vector<double>>(),
                        j.at("omega").at("upper").get<std::vector<double>>(),
                        j.at("omega").at("horizon").get<double>());
  } else {
    in.hat_lower = {-1, -1};
    in.hat_upper = {1, 1};
    in.h_seminorm = 1.0;
    in.w_linf = {1.0, 1.0, 1.0};
  }

  const auto [w1, w2] = q1_widths(in, n_values.front());
  std::cout << "hidden-layer widths at N=" << n_values.front() << ": " << w1 << ", " << w2
            << '\n';

  std::ostringstream csv;
  csv << "N,width1,width2,gen_bound,gen_rate,M_PDE,M_t,M_s,train_rate\n";
  csv.precision(12);
  const auto rows = rate_curves(in, omega, a_linf, n_values);
  for (const RateRow& r : rows) {
    const auto [rw1, rw2] = q1_widths(in, r.N);
    csv << r.N << ',' << rw1 << ',' << rw2 << ',' << r.gen_bound << ',' << r.gen_rate << ','
        << r.m_pde << ',' << r.m_t << ',' << r.m_s << ',' << r.train_rate << '\n';
  }
  csv << "# train_rate combines all quadrature terms with plus signs; the printed form "
         "carries a sign typo\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream os(out_dir + "/theory_rates.csv");
    os << csv.str();
    std::cout << "rate table written to " << out_dir << "/theory_rates.csv\n";
  } else {
    std::cout << csv.str();
  }

  if (epsilon > 0.0 && apriori_k > 0.0) {
    const SizingPlan plan = apriori_sizes(epsilon, in.d, apriori_k);
    std::cout << to_json(plan).dump(2) << '\n';
  }
  return 0;
}

int run_export_points(const RunConfig& cfg) {
  const ProblemSpec problem = build_problem(cfg);
  const CollocationSets sets =
      build_sets(problem.box, CollocationCounts::regular(problem.dim(), cfg.collocation_n));
  const std::string dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/points_n" + std::to_string(cfg.collocation_n) + ".csv";
  std::ofstream os(path);
  write_points_csv(sets, os);
  std::cout << sets.total() << " points written to " << path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"physics-informed training and a-posteriori error bounds for damped/semilinear waves"};
  app.require_subcommand(1);

  std::string config_path, preset, seeds, out_dir, mode, seed_json;
  int collocation_n = 0;
  app.add_option("--config", config_path, "run configuration JSON");
  app.add_option("--preset", preset, "named preset (fig5-small, fig5-accept, fig5-full)");
  app.add_option("--seeds", seeds, "seed range a..b or single seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--mode", mode, "bound mode: lemma|empirical");
  app.add_option("--n", collocation_n, "regular-grid cell count per axis");

  auto* train_cmd = app.add_subcommand("train", "train one collocation setting over seeds");
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep over training-set sizes, emit CSV");
  auto* bound_cmd = app.add_subcommand("bound", "recompute the bound from a seed checkpoint");
  bound_cmd->add_option("checkpoint", seed_json, "seed_<k>.json produced by train")->required();
  auto* theory_cmd = app.add_subcommand("theory", "evaluate width/rate formulas into tables");
  auto* export_cmd = app.add_subcommand("export-points", "write collocation grids as CSV");
  for (auto* cmd : {train_cmd, sweep_cmd, bound_cmd, theory_cmd, export_cmd})
    cmd->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    pinncert::RunConfig cfg = load_run_config(config_path, preset, seeds, out_dir, mode);
    if (collocation_n > 0) cfg.collocation_n = collocation_n;
    if (train_cmd->parsed()) return run_train(cfg);
    if (sweep_cmd->parsed()) return run_sweep(cfg, preset);
    if (bound_cmd->parsed()) return run_bound(seed_json, cfg);
    if (theory_cmd->parsed()) return run_theory(config_path, cfg.out_dir);
    if (export_cmd->parsed()) return run_export_points(cfg);
  } catch (const pinncert::ConfigError& e) {
    std::cerr << "[config] " << e.what() << '\n';
    return 2;
  } catch (const pinncert::HypothesisViolation& e) {
    std::cerr << "[hypothesis] " << e.what() << '\n';
    return 3;
  } catch (const pinncert::NumericalError& e) {
    std::cerr << "[numerical] " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "[error] " << e.what() << '\n';
    return 1;
  }
  return 0;
}
