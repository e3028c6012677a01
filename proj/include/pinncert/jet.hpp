#pragma once

#include "pinncert/common.hpp"
#include "pinncert/network.hpp"

#include <cmath>
#include <vector>

namespace pinncert {

/// Network value together with its first and pure second derivatives at a
/// space-time point: u, u_t, u_tt, grad_x u and the Laplacian.
struct Jet {
  double value = 0.0;
  double dt = 0.0;
  double dtt = 0.0;
  Vec grad_x;          // d entries
  double laplacian = 0.0;

  bool all_finite() const {
    return std::isfinite(value) && std::isfinite(dt) && std::isfinite(dtt) &&
           std::isfinite(laplacian) && grad_x.allFinite();
  }
};

/// Batched jet values: row n corresponds to input row n; column j of
/// `first`/`second` holds d/dz_j and d^2/dz_j^2 for input coordinate j
/// (spatial coordinates first, time last).
struct JetBatch {
  Vec value;
  Mat first;
  Mat second;  // empty when evaluated at order 1
};

/// Propagates degree-2 truncated Taylor coefficients (value, directional
/// first and second derivative) through the network, one stream per
/// requested input direction, and accumulates parameter gradients of any
/// scalar functional of the outputs by walking the recorded tape backwards.
///
/// All operations are batched over points so layer transforms are GEMMs.
class BatchJetEngine {
 public:
  struct Tape {
    std::vector<int> dirs;
    int order = 2;
    Mat X;
    std::vector<Mat> T;                  // tanh values per hidden layer
    std::vector<std::vector<Mat>> DZ;    // pre-activation 1st-derivative streams
    std::vector<std::vector<Mat>> SZ;    // pre-activation 2nd-derivative streams
  };

  explicit BatchJetEngine(const MlpParams& params) : p_(params) {}

  /// order 1: value + first derivatives along `dirs`; order 2: + pure seconds.
  JetBatch evaluate(const Mat& X, const std::vector<int>& dirs, int order,
                    Tape* tape = nullptr) const {
    const int in_dim = p_.arch.input_dim();
    if (X.cols() != in_dim) throw ContractViolation("jet: point dimension != input width");
    if (order != 1 && order != 2) throw ContractViolation("jet: order must be 1 or 2");
    for (int dj : dirs)
      if (dj < 0 || dj >= in_dim) throw ContractViolation("jet: direction out of range");

    const Eigen::Index n = X.rows();
    const int depth = p_.layer_count();
    const size_t nd = dirs.size();

    if (tape) {
      tape->dirs = dirs;
      tape->order = order;
      tape->X = X;
      tape->T.assign(static_cast<size_t>(depth - 1), Mat());
      tape->DZ.assign(static_cast<size_t>(depth - 1), {});
      tape->SZ.assign(static_cast<size_t>(depth - 1), {});
    }

    Mat V = X;
    std::vector<Mat> D(nd), S(nd);

    JetBatch out;
    for (int k = 0; k < depth; ++k) {
      const Mat& W = p_.weights[static_cast<size_t>(k)];
      const Vec& b = p_.biases[static_cast<size_t>(k)];

      Mat VZ(n, W.rows());
      VZ.noalias() = V * W.transpose();
      VZ.rowwise() += b.transpose();

      std::vector<Mat> DZ(nd), SZ(nd);
      for (size_t j = 0; j < nd; ++j) {
        if (k == 0) {
          DZ[j] = W.col(dirs[j]).transpose().replicate(n, 1);
          if (order == 2) SZ[j] = Mat::Zero(n, W.rows());
        } else {
          DZ[j].noalias() = D[j] * W.transpose();
          if (order == 2) SZ[j].noalias() = S[j] * W.transpose();
        }
      }

      if (k + 1 < depth) {
        Mat T = VZ.array().tanh().matrix();
        Mat G = (1.0 - T.array().square()).matrix();
        if (tape) {
          tape->T[static_cast<size_t>(k)] = T;
          tape->DZ[static_cast<size_t>(k)] = DZ;
          if (order == 2) tape->SZ[static_cast<size_t>(k)] = SZ;
        }
        V = std::move(T);
        for (size_t j = 0; j < nd; ++j) {
          D[j] = (G.array() * DZ[j].array()).matrix();
          if (order == 2)
            S[j] = (G.array() * SZ[j].array() -
                    2.0 * V.array() * G.array() * DZ[j].array().square())
                       .matrix();
        }
      } else {
        out.value = VZ.col(0);
        out.first = Mat::Zero(n, in_dim);
        if (order == 2) out.second = Mat::Zero(n, in_dim);
        for (size_t j = 0; j < nd; ++j) {
          out.first.col(dirs[j]) = DZ[j].col(0);
          if (order == 2) out.second.col(dirs[j]) = SZ[j].col(0);
        }
      }
    }
    return out;
  }

  /// Accumulates d(loss)/d(theta) into `grad` given output adjoints. The
  /// adjoint matrices use the same column convention as JetBatch; columns of
  /// directions that were not propagated are ignored.
  void reverse(const Tape& tape, const Vec& value_bar, const Mat& first_bar,
               const Mat& second_bar, MlpParams& grad) const {
    const int depth = p_.layer_count();
    const size_t nd = tape.dirs.size();
    const bool second_order = tape.order == 2;
    const Eigen::Index n = tape.X.rows();

    Mat VZbar = value_bar;
    std::vector<Mat> DZbar(nd), SZbar(nd);
    for (size_t j = 0; j < nd; ++j) {
      DZbar[j] = first_bar.col(tape.dirs[j]);
      if (second_order) SZbar[j] = second_bar.col(tape.dirs[j]);
    }

    for (int k = depth - 1; k >= 0; --k) {
      const Mat& W = p_.weights[static_cast<size_t>(k)];
      Mat& gW = grad.weights[static_cast<size_t>(k)];
      Vec& gb = grad.biases[static_cast<size_t>(k)];

      const Mat& Vin = k == 0 ? tape.X : tape.T[static_cast<size_t>(k - 1)];
      gW.noalias() += VZbar.transpose() * Vin;
      gb.noalias() += VZbar.colwise().sum().transpose();

      for (size_t j = 0; j < nd; ++j) {
        if (k == 0) {
          // first-layer derivative streams read column dirs[j] of W only
          gW.col(tape.dirs[j]).noalias() += DZbar[j].colwise().sum().transpose();
          // second-derivative streams vanish at the first layer
        } else {
          const Mat& Tprev = tape.T[static_cast<size_t>(k - 1)];
          const Mat& DZprev = tape.DZ[static_cast<size_t>(k - 1)][j];
          Mat Gprev = (1.0 - Tprev.array().square()).matrix();
          Mat Din = (Gprev.array() * DZprev.array()).matrix();
          gW.noalias() += DZbar[j].transpose() * Din;
          if (second_order) {
            const Mat& SZprev = tape.SZ[static_cast<size_t>(k - 1)][j];
            Mat Sin = (Gprev.array() * SZprev.array() -
                       2.0 * Tprev.array() * Gprev.array() * DZprev.array().square())
                          .matrix();
            gW.noalias() += SZbar[j].transpose() * Sin;
          }
        }
      }

      if (k == 0) break;

      // adjoints of the previous layer's post-activation streams
      Mat Vbar(n, W.cols());
      Vbar.noalias() = VZbar * W;
      std::vector<Mat> Dbar(nd), Sbar(nd);
      for (size_t j = 0; j < nd; ++j) {
        Dbar[j].noalias() = DZbar[j] * W;
        if (second_order) Sbar[j].noalias() = SZbar[j] * W;
      }

      // reverse through tanh at hidden layer k-1
      const Mat& T = tape.T[static_cast<size_t>(k - 1)];
      Mat G = (1.0 - T.array().square()).matrix();
      Mat Tbar = Vbar;
      for (size_t j = 0; j < nd; ++j) {
        const Mat& DZ = tape.DZ[static_cast<size_t>(k - 1)][j];
        Tbar.array() += Dbar[j].array() * (-2.0) * T.array() * DZ.array();
        if (second_order) {
          const Mat& SZ = tape.SZ[static_cast<size_t>(k - 1)][j];
          Tbar.array() += Sbar[j].array() *
                          (-2.0 * T.array() * SZ.array() -
                           2.0 * (G.array() - 2.0 * T.array().square()) * DZ.array().square());
        }
      }
      for (size_t j = 0; j < nd; ++j) {
        const Mat& DZ = tape.DZ[static_cast<size_t>(k - 1)][j];
        Mat new_DZbar = (Dbar[j].array() * G.array()).matrix();
        if (second_order) {
          new_DZbar.array() += -4.0 * Sbar[j].array() * T.array() * G.array() * DZ.array();
          SZbar[j] = (Sbar[j].array() * G.array()).matrix();
        }
        DZbar[j] = std::move(new_DZbar);
      }
      VZbar = (Tbar.array() * G.array()).matrix();
    }
  }

 private:
  const MlpParams& p_;
};

inline std::vector<int> all_directions(int in_dim) {
  std::vector<int> dirs(static_cast<size_t>(in_dim));
  for (int j = 0; j < in_dim; ++j) dirs[static_cast<size_t>(j)] = j;
  return dirs;
}

/// Exact (up to rounding) derivatives of `forward` at one space-time point.
inline Jet eval_jet(const MlpParams& params, const Vec& point) {
  const int in_dim = params.arch.input_dim();
  if (point.size() != in_dim) throw ContractViolation("eval_jet: point dimension != input width");
  BatchJetEngine engine(params);
  Mat X = point.transpose();
  JetBatch batch = engine.evaluate(X, all_directions(in_dim), 2);
  const int d = in_dim - 1;
  Jet jet;
  jet.value = batch.value(0);
  jet.dt = batch.first(0, d);
  jet.dtt = batch.second(0, d);
  jet.grad_x = batch.first.row(0).head(d).transpose();
  jet.laplacian = d > 0 ? batch.second.row(0).head(d).sum() : 0.0;
  return jet;
}

/// Central finite-difference cross-check of eval_jet. Relative errors use
/// denominator max(|analytic|, 1).
struct GradCheckReport {
  double step = 0.0;
  double max_rel_error = 0.0;
  std::vector<std::pair<std::string, double>> per_quantity;

  void add(const std::string& name, double analytic, double approx) {
    const double rel = std::abs(analytic - approx) / std::max(std::abs(analytic), 1.0);
    per_quantity.emplace_back(name, rel);
    max_rel_error = std::max(max_rel_error, rel);
  }
};

inline GradCheckReport fd_check_jet(const MlpParams& params, const Vec& point, double h) {
  if (!(h > 0.0)) throw ContractViolation("fd_check: step h must be positive");
  const int in_dim = params.arch.input_dim();
  const int d = in_dim - 1;
  const Jet jet = eval_jet(params, point);

  GradCheckReport report;
  report.step = h;
  auto value_at = [&](int axis, double offset) {
    Vec q = point;
    q(axis) += offset;
    return forward(params, q);
  };
  const double u0 = forward(params, point);
  for (int j = 0; j < in_dim; ++j) {
    const double up = value_at(j, h);
    const double um = value_at(j, -h);
    const double fd1 = (up - um) / (2.0 * h);
    const double fd2 = (up - 2.0 * u0 + um) / (h * h);
    if (j < d) {
      report.add("grad_x" + std::to_string(j), jet.grad_x(j), fd1);
    } else {
      report.add("dt", jet.dt, fd1);
      report.add("dtt", jet.dtt, fd2);
    }
  }
  if (d > 0) {
    double lap_fd = 0.0;
    for (int j = 0; j < d; ++j)
      lap_fd += (value_at(j, h) - 2.0 * u0 + value_at(j, -h)) / (h * h);
    report.add("laplacian", jet.laplacian, lap_fd);
  }
  return report;
}

}  // namespace pinncert
