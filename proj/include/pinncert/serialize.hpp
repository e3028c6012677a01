#pragma once

#include "pinncert/bounds.hpp"
#include "pinncert/network.hpp"
#include "pinncert/optimize.hpp"
#include "pinncert/residual.hpp"
#include "pinncert/theory.hpp"

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace pinncert {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// network parameters: {"architecture": {...}, "layers": [{weights, bias}]}
// with weights flattened row-major
// ---------------------------------------------------------------------------

inline Json to_json(const Architecture& arch) {
  Json j;
  j["widths"] = arch.widths;
  j["activation"] = arch.activation;
  if (std::isfinite(arch.weight_bound))
    j["weight_bound"] = arch.weight_bound;
  else
    j["weight_bound"] = "inf";
  return j;
}

inline Architecture architecture_from_json(const Json& j) {
  Architecture arch;
  arch.widths = j.at("widths").get<std::vector<int>>();
  arch.activation = j.value("activation", std::string("tanh"));
  const auto& wb = j.at("weight_bound");
  arch.weight_bound = wb.is_string() ? kInf : wb.get<double>();
  arch.validate();
  return arch;
}

inline Json to_json(const MlpParams& params) {
  Json j;
  j["architecture"] = to_json(params.arch);
  Json layers = Json::array();
  for (int k = 0; k < params.layer_count(); ++k) {
    Json layer;
    const Mat& w = params.weights[static_cast<size_t>(k)];
    std::vector<double> row_major;
    row_major.reserve(static_cast<size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) row_major.push_back(w(r, c));
    layer["weights"] = row_major;
    const Vec& b = params.biases[static_cast<size_t>(k)];
    layer["bias"] = std::vector<double>(b.data(), b.data() + b.size());
    layers.push_back(layer);
  }
  j["layers"] = layers;
  return j;
}

inline MlpParams params_from_json(const Json& j) {
  const Architecture arch = architecture_from_json(j.at("architecture"));
  MlpParams params = MlpParams::zeros(arch);
  const Json& layers = j.at("layers");
  if (layers.size() != static_cast<size_t>(params.layer_count()))
    throw ConfigError("params json: wrong layer count");
  for (int k = 0; k < params.layer_count(); ++k) {
    Mat& w = params.weights[static_cast<size_t>(k)];
    const auto rm = layers[static_cast<size_t>(k)].at("weights").get<std::vector<double>>();
    if (rm.size() != static_cast<size_t>(w.size()))
      throw ConfigError("params json: wrong weight count in layer " + std::to_string(k));
    size_t i = 0;
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rm[i++];
    const auto b = layers[static_cast<size_t>(k)].at("bias").get<std::vector<double>>();
    if (b.size() != static_cast<size_t>(params.biases[static_cast<size_t>(k)].size()))
      throw ConfigError("params json: wrong bias count in layer " + std::to_string(k));
    params.biases[static_cast<size_t>(k)] = Eigen::Map<const Vec>(b.data(), static_cast<Eigen::Index>(b.size()));
  }
  return params;
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

inline Json to_json(const TrainingErrorReport& r) {
  Json j;
  j["pde_sq"] = r.pde_sq;
  j["su_sq"] = r.su_sq;
  j["sut_sq"] = r.sut_sq;
  j["u0_sq"] = r.u0_sq;
  j["u1_sq"] = r.u1_sq;
  j["gradu_sq"] = r.gradu_sq;
  j["total_sq"] = r.total_sq();
  j["total"] = r.total();
  j["m_pde"] = r.m_pde;
  j["m_s"] = r.m_s;
  j["m_t"] = r.m_t;
  return j;
}

inline TrainingErrorReport training_error_from_json(const Json& j) {
  TrainingErrorReport r;
  r.pde_sq = j.at("pde_sq");
  r.su_sq = j.at("su_sq");
  r.sut_sq = j.at("sut_sq");
  r.u0_sq = j.at("u0_sq");
  r.u1_sq = j.at("u1_sq");
  r.gradu_sq = j.at("gradu_sq");
  r.m_pde = j.at("m_pde");
  r.m_s = j.at("m_s");
  r.m_t = j.at("m_t");
  return r;
}

inline Json to_json(const ConstantLedger& ledger) {
  Json j;
  j["c_pw"] = ledger.c_pw;
  j["trace_constant"] = ledger.trace;
  j["hat_c"] = ledger.hat_c;
  j["c1"] = ledger.c1;
  j["c2"] = ledger.c2;
  j["c3"] = ledger.c3;
  j["c4"] = ledger.c4;
  j["c5"] = ledger.c5;
  j["boundary_factor"] = ledger.boundary_factor;
  j["norm_source"] = ledger.norm_source;
  j["geometry"] = {{"c_omega", ledger.geom.c_omega},
                   {"c_omega_t", ledger.geom.c_omega_t},
                   {"c_boundary", ledger.geom.c_boundary}};
  j["inputs"] = {{"depth", ledger.depth},      {"width", ledger.width},
                 {"weight_bound", ledger.weight_bound}, {"u_c1", ledger.u_c1},
                 {"u_c2", ledger.u_c2},        {"u_c3", ledger.u_c3},
                 {"uhat_c1", ledger.uhat_c1}};
  return j;
}

inline Json to_json(const BoundReport& b) {
  Json j;
  j["c_of_m"] = b.c_of_m;
  j["gronwall_factor"] = b.gronwall;
  j["bound_value"] = b.bound_value;
  j["includes_nonlinearity"] = b.includes_nonlinearity;
  j["mode"] = b.mode;
  j["prefactor"] = b.prefactor;
  j["terms"] = {{"u1_deficit", b.term_u1_deficit},
                {"u1_train", b.term_u1_train},
                {"pde_deficit", b.term_pde_deficit},
                {"pde_train", b.term_pde_train},
                {"gradu_deficit", b.term_gradu_deficit},
                {"gradu_train", b.term_gradu_train},
                {"boundary_mixed", b.term_boundary_mixed},
                {"u0_deficit", b.term_u0_deficit},
                {"u0_train", b.term_u0_train}};
  return j;
}

/// Training record; long loss histories are thinned to at most ~4000 entries
/// (fixed stride, last entry kept) so reports stay reviewable.
inline Json to_json(const TrainRecord& rec, bool include_params = true) {
  Json j;
  j["iterations"] = rec.iterations;
  j["termination"] = rec.termination;
  j["final_loss"] = rec.loss_history.empty() ? 0.0 : rec.loss_history.back();
  const size_t n = rec.loss_history.size();
  const size_t stride = n > 4000 ? (n + 3999) / 4000 : 1;
  Json hist = Json::array();
  for (size_t i = 0; i < n; i += stride) hist.push_back(rec.loss_history[i]);
  if (stride > 1 && (n - 1) % stride != 0) hist.push_back(rec.loss_history[n - 1]);
  j["loss_history"] = hist;
  j["loss_history_stride"] = stride;
  j["training_error"] = to_json(rec.report);
  if (include_params) j["params"] = to_json(rec.params);
  j["timing"] = {{"seconds", rec.seconds}};
  return j;
}

inline Json to_json(const SizingPlan& plan) {
  Json j;
  j["epsilon"] = plan.epsilon;
  j["eta"] = plan.eta;
  j["N"] = plan.n_raw;
  j["N_exceeds_5"] = plan.n_exceeds_5;
  j["M_pde"] = plan.m_pde;
  j["M_t"] = plan.m_t;
  j["M_s"] = plan.m_s;
  j["R_min"] = plan.r_min;
  j["W_min_power"] = plan.w_min_power;
  j["W_min_symbol"] = plan.w_min_symbol;
  j["L_min"] = plan.l_min;
  j["printed_exponents"] = plan.printed_exponents;
  return j;
}

inline void write_json(const Json& j, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  os << j.dump(2) << '\n';
}

inline Json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open for reading: " + path);
  Json j;
  is >> j;
  return j;
}

/// Removes wall-clock fields at every level; used by determinism checks.
inline void strip_timing(Json& j) {
  if (j.is_object()) {
    j.erase("timing");
    j.erase("train_seconds");
    j.erase("seconds");
    for (auto& [key, value] : j.items()) strip_timing(value);
  } else if (j.is_array()) {
    for (auto& value : j) strip_timing(value);
  }
}

}  // namespace pinncert
