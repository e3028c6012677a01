#pragma once

#include "pinncert/activation.hpp"
#include "pinncert/common.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace pinncert {

/// Fully connected tanh network: L affine layers with widths l_0..l_L,
/// tanh after every layer except the last. Parameters of finite networks
/// live in [-R, R]^P when the weight bound R is finite.
struct Architecture {
  std::vector<int> widths;          // l_0 .. l_L
  double weight_bound = kInf;       // R; kInf means unconstrained
  std::string activation = "tanh";

  int depth() const { return static_cast<int>(widths.size()) - 1; }  // L
  int input_dim() const { return widths.front(); }                   // l_0 = d+1
  int output_dim() const { return widths.back(); }
  int max_width() const {
    int w = 0;
    for (int l : widths) w = std::max(w, l);
    return w;
  }
  int spatial_dim() const { return input_dim() - 1; }

  static Architecture mlp(int input_dim, const std::vector<int>& hidden,
                          double weight_bound = kInf) {
    Architecture a;
    a.widths.push_back(input_dim);
    for (int h : hidden) a.widths.push_back(h);
    a.widths.push_back(1);
    a.weight_bound = weight_bound;
    a.validate();
    return a;
  }

  void validate() const {
    if (widths.size() < 3) throw ConfigError("architecture needs depth L >= 2");
    for (int l : widths)
      if (l < 1) throw ConfigError("architecture widths must be positive");
    if (widths.back() != 1) throw ConfigError("scalar output layer required");
    if (!(weight_bound >= 0.0)) throw ConfigError("weight bound R must be nonnegative");
    if (activation != "tanh") throw ConfigError("unsupported activation: " + activation);
  }
};

/// Per-layer weights and biases. Immutable by convention: the trainer creates
/// updated copies through from_flat().
struct MlpParams {
  Architecture arch;
  std::vector<Mat> weights;  // W_k : l_k x l_{k-1}
  std::vector<Vec> biases;   // b_k : l_k

  int layer_count() const { return static_cast<int>(weights.size()); }

  Eigen::Index parameter_count() const {
    Eigen::Index n = 0;
    for (size_t k = 0; k < weights.size(); ++k) n += weights[k].size() + biases[k].size();
    return n;
  }

  double max_abs_entry() const {
    double m = 0.0;
    for (size_t k = 0; k < weights.size(); ++k) {
      m = std::max(m, weights[k].cwiseAbs().maxCoeff());
      m = std::max(m, biases[k].cwiseAbs().maxCoeff());
    }
    return m;
  }

  Vec to_flat() const {
    Vec flat(parameter_count());
    Eigen::Index off = 0;
    for (size_t k = 0; k < weights.size(); ++k) {
      const auto& w = weights[k];
      flat.segment(off, w.size()) = Eigen::Map<const Vec>(w.data(), w.size());
      off += w.size();
      flat.segment(off, biases[k].size()) = biases[k];
      off += biases[k].size();
    }
    return flat;
  }

  static MlpParams from_flat(const Architecture& arch, const Vec& flat) {
    MlpParams p = zeros(arch);
    if (flat.size() != p.parameter_count())
      throw ContractViolation("flat parameter vector has wrong length");
    Eigen::Index off = 0;
    for (size_t k = 0; k < p.weights.size(); ++k) {
      auto& w = p.weights[k];
      Eigen::Map<Vec>(w.data(), w.size()) = flat.segment(off, w.size());
      off += w.size();
      p.biases[k] = flat.segment(off, p.biases[k].size());
      off += p.biases[k].size();
    }
    return p;
  }

  static MlpParams zeros(const Architecture& arch) {
    arch.validate();
    MlpParams p;
    p.arch = arch;
    for (int k = 1; k <= arch.depth(); ++k) {
      p.weights.emplace_back(Mat::Zero(arch.widths[k], arch.widths[k - 1]));
      p.biases.emplace_back(Vec::Zero(arch.widths[k]));
    }
    return p;
  }
};

/// Deterministic initialization. Schemes:
///   uniform-fan-in : U[-s, s] with s = min(R, 1/sqrt(fan_in))
///   small-uniform  : U[-s, s] with s = min(R, scale)
inline MlpParams init_params(const Architecture& arch, std::uint64_t seed,
                             const std::string& scheme = "uniform-fan-in",
                             double scale = 0.1) {
  arch.validate();
  if (scheme != "uniform-fan-in" && scheme != "small-uniform")
    throw ConfigError("unknown init scheme: " + scheme);
  MlpParams p = MlpParams::zeros(arch);
  std::mt19937_64 rng(seed);
  for (int k = 0; k < p.layer_count(); ++k) {
    const int fan_in = arch.widths[static_cast<size_t>(k)];
    double s = scheme == "uniform-fan-in" ? 1.0 / std::sqrt(static_cast<double>(fan_in))
                                          : scale;
    s = std::min(s, arch.weight_bound);
    std::uniform_real_distribution<double> dist(-s, s);
    auto& w = p.weights[static_cast<size_t>(k)];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
    auto& b = p.biases[static_cast<size_t>(k)];
    for (Eigen::Index r = 0; r < b.size(); ++r) b(r) = dist(rng);
  }
  return p;
}

/// Network value at a space-time point (affine maps with tanh between,
/// final layer affine).
inline double forward(const MlpParams& params, const Vec& point) {
  if (point.size() != params.arch.input_dim())
    throw ContractViolation("forward: point dimension != input width");
  Vec h = point;
  const int depth = params.layer_count();
  for (int k = 0; k < depth; ++k) {
    h = (params.weights[static_cast<size_t>(k)] * h + params.biases[static_cast<size_t>(k)]).eval();
    if (k + 1 < depth) h = h.array().tanh().matrix();
  }
  return h(0);
}

/// C^n norm bound of a network with parameters in Theta_{L,W,R}:
///   16^L (d+1)^{2n} (e^2 n^4 W^3 R^n ||sigma||_{C^n})^{nL}.
inline double cn_norm_bound(int L, int d, int n, double W, double R,
                            const ActivationNormTable& act) {
  if (n < 1) throw ConfigError("cn_norm_bound requires n >= 1");
  if (L < 2 || W < 1.0) throw ConfigError("cn_norm_bound requires L >= 2 and W >= 1");
  if (!std::isfinite(R)) throw UnavailableError("cn_norm_bound needs a finite weight bound R");
  if (act.cn_norm < 1.0)
    throw ConfigError("cn_norm_bound requires ||sigma||_{C^n} >= 1");
  const double nn = n;
  const double base = std::exp(2.0) * std::pow(nn, 4) * std::pow(W, 3) *
                      std::pow(R, nn) * act.cn_norm;
  return std::pow(16.0, L) * std::pow(static_cast<double>(d) + 1.0, 2.0 * nn) *
         std::pow(base, nn * static_cast<double>(L));
}

inline double cn_norm_bound(const Architecture& arch, int d, int n,
                            const ActivationNormTable& act) {
  return cn_norm_bound(arch.depth(), d, n, arch.max_width(), arch.weight_bound, act);
}

/// C^0 norm bound R(W ||sigma||_{C^0} + 1).
inline double c0_norm_bound(double W, double R, const ActivationNormTable& act) {
  if (!std::isfinite(R)) throw UnavailableError("c0_norm_bound needs a finite weight bound R");
  if (act.sup(0) < 1.0) throw ConfigError("c0_norm_bound requires ||sigma||_{C^0} >= 1");
  return R * (W * act.sup(0) + 1.0);
}

inline double c0_norm_bound(const Architecture& arch, const ActivationNormTable& act) {
  return c0_norm_bound(arch.max_width(), arch.weight_bound, act);
}

}  // namespace pinncert
