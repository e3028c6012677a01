#pragma once

#include "pinncert/common.hpp"
#include "pinncert/jet.hpp"
#include "pinncert/problem.hpp"
#include "pinncert/quadrature.hpp"
#include "pinncert/residual.hpp"

#include <cmath>
#include <vector>

namespace pinncert {

/// Full-batch training loss E_T(theta, S)^2 with analytic parameter
/// gradients. Binds a problem and collocation sets once; data that does not
/// depend on the parameters (damping values, initial data, weights) is
/// cached up front. Points are processed in fixed-size chunks in a fixed
/// order, so results are bit-reproducible.
class CollocationLoss {
 public:
  CollocationLoss(const ProblemSpec& problem, const CollocationSets& sets,
                  Eigen::Index chunk = 16384)
      : problem_(problem), sets_(sets), chunk_(chunk) {
    const int d = problem.dim();
    a_vals_.resize(sets.interior.size());
    for (Eigen::Index i = 0; i < sets.interior.size(); ++i)
      a_vals_(i) = problem.damping(sets.interior.points.row(i).head(d).transpose());
    u0_vals_.resize(sets.initial.size());
    u1_vals_.resize(sets.initial.size());
    grad_u0_vals_.resize(sets.initial.size(), d);
    for (Eigen::Index i = 0; i < sets.initial.size(); ++i) {
      const Vec x = sets.initial.points.row(i).head(d).transpose();
      u0_vals_(i) = problem.u0(x);
      u1_vals_(i) = problem.u1(x);
      grad_u0_vals_.row(i) = problem.grad_u0(x).transpose();
    }
  }

  const ProblemSpec& problem() const { return problem_; }
  const CollocationSets& sets() const { return sets_; }

  /// E_T^2 and, if `grad` is non-null, its gradient with respect to every
  /// weight and bias entry (flat layout of MlpParams::to_flat).
  double value_and_gradient(const MlpParams& params, Vec* grad,
                            TrainingErrorReport* report = nullptr) const {
    const int d = problem_.dim();
    BatchJetEngine engine(params);
    MlpParams grad_acc = grad ? MlpParams::zeros(params.arch) : MlpParams();

    TrainingErrorReport rep;
    rep.m_pde = sets_.m_pde();
    rep.m_s = sets_.m_s();
    rep.m_t = sets_.m_t();

    const std::vector<int> dirs_all = all_directions(d + 1);
    const std::vector<int> dirs_time = {d};

    // interior: r = u_tt - Lap u + a u_t + f(x, u)
    for (Eigen::Index start = 0; start < sets_.interior.size(); start += chunk_) {
      const Eigen::Index n = std::min(chunk_, sets_.interior.size() - start);
      const Mat X = sets_.interior.points.middleRows(start, n);
      const Vec w = sets_.interior.weights.segment(start, n);
      const Vec a = a_vals_.segment(start, n);

      BatchJetEngine::Tape tape;
      const JetBatch jb = engine.evaluate(X, dirs_all, 2, grad ? &tape : nullptr);

      Vec r = jb.second.col(d);
      for (int j = 0; j < d; ++j) r -= jb.second.col(j);
      r += a.cwiseProduct(jb.first.col(d));
      Vec dfdu;
      if (problem_.has_nonlinearity) {
        dfdu.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          const Vec x = X.row(i).head(d).transpose();
          r(i) += problem_.f(x, jb.value(i));
          dfdu(i) = problem_.df_du(x, jb.value(i));
        }
      }
      for (Eigen::Index i = 0; i < n; ++i)
        if (!std::isfinite(r(i)))
          detail::throw_nonfinite(Stratum::Interior, X.row(i).transpose());

      rep.pde_sq += w.dot(r.cwiseProduct(r));

      if (grad) {
        const Vec wr2 = 2.0 * w.cwiseProduct(r);
        Vec value_bar = Vec::Zero(n);
        if (problem_.has_nonlinearity) value_bar = wr2.cwiseProduct(dfdu);
        Mat first_bar = Mat::Zero(n, d + 1);
        first_bar.col(d) = wr2.cwiseProduct(a);
        Mat second_bar(n, d + 1);
        second_bar.col(d) = wr2;
        for (int j = 0; j < d; ++j) second_bar.col(j) = -wr2;
        engine.reverse(tape, value_bar, first_bar, second_bar, grad_acc);
      }
    }

    // lateral boundary: r_su = u, r_sut = u_t
    for (Eigen::Index start = 0; start < sets_.boundary.size(); start += chunk_) {
      const Eigen::Index n = std::min(chunk_, sets_.boundary.size() - start);
      const Mat X = sets_.boundary.points.middleRows(start, n);
      const Vec w = sets_.boundary.weights.segment(start, n);

      BatchJetEngine::Tape tape;
      const JetBatch jb = engine.evaluate(X, dirs_time, 1, grad ? &tape : nullptr);
      const Vec& r_su = jb.value;
      const Vec r_sut = jb.first.col(d);
      for (Eigen::Index i = 0; i < n; ++i)
        if (!std::isfinite(r_su(i)) || !std::isfinite(r_sut(i)))
          detail::throw_nonfinite(Stratum::Boundary, X.row(i).transpose());

      rep.su_sq += w.dot(r_su.cwiseProduct(r_su));
      rep.sut_sq += w.dot(r_sut.cwiseProduct(r_sut));

      if (grad) {
        Vec value_bar = 2.0 * w.cwiseProduct(r_su);
        Mat first_bar = Mat::Zero(n, d + 1);
        first_bar.col(d) = 2.0 * w.cwiseProduct(r_sut);
        engine.reverse(tape, value_bar, first_bar, Mat(), grad_acc);
      }
    }

    // initial slice: r_u0 = u - u0, r_u1 = u_t - u1, r_grad = grad u - grad u0
    for (Eigen::Index start = 0; start < sets_.initial.size(); start += chunk_) {
      const Eigen::Index n = std::min(chunk_, sets_.initial.size() - start);
      const Mat X = sets_.initial.points.middleRows(start, n);
      const Vec w = sets_.initial.weights.segment(start, n);

      BatchJetEngine::Tape tape;
      const JetBatch jb = engine.evaluate(X, dirs_all, 1, grad ? &tape : nullptr);
      const Vec r_u0 = jb.value - u0_vals_.segment(start, n);
      const Vec r_u1 = jb.first.col(d) - u1_vals_.segment(start, n);
      const Mat r_grad = jb.first.leftCols(d) - grad_u0_vals_.middleRows(start, n);
      if (!r_u0.allFinite() || !r_u1.allFinite() || !r_grad.allFinite())
        for (Eigen::Index i = 0; i < n; ++i)
          if (!std::isfinite(r_u0(i)) || !std::isfinite(r_u1(i)) || !r_grad.row(i).allFinite())
            detail::throw_nonfinite(Stratum::Initial, X.row(i).transpose());

      rep.u0_sq += w.dot(r_u0.cwiseProduct(r_u0));
      rep.u1_sq += w.dot(r_u1.cwiseProduct(r_u1));
      rep.gradu_sq += w.dot(r_grad.rowwise().squaredNorm());

      if (grad) {
        Vec value_bar = 2.0 * w.cwiseProduct(r_u0);
        Mat first_bar(n, d + 1);
        first_bar.col(d) = 2.0 * w.cwiseProduct(r_u1);
        for (int j = 0; j < d; ++j) first_bar.col(j) = 2.0 * w.cwiseProduct(r_grad.col(j));
        engine.reverse(tape, value_bar, first_bar, Mat(), grad_acc);
      }
    }

    if (grad) *grad = grad_acc.to_flat();
    if (report) *report = rep;
    return rep.total_sq();
  }

  double value(const MlpParams& params, TrainingErrorReport* report = nullptr) const {
    return value_and_gradient(params, nullptr, report);
  }

 private:
  const ProblemSpec& problem_;
  const CollocationSets& sets_;
  Eigen::Index chunk_;
  Vec a_vals_;
  Vec u0_vals_;
  Vec u1_vals_;
  Mat grad_u0_vals_;
};

/// Batched training error for a network (same sums as the point-by-point
/// reference in residual.hpp).
inline TrainingErrorReport training_error(const MlpParams& params, const CollocationSets& sets,
                                          const ProblemSpec& problem) {
  CollocationLoss loss(problem, sets);
  TrainingErrorReport report;
  loss.value(params, &report);
  return report;
}

/// Gradient of E_T^2 with respect to all parameters (flat layout).
inline Vec loss_gradient(const MlpParams& params, const CollocationSets& sets,
                         const ProblemSpec& problem) {
  CollocationLoss loss(problem, sets);
  Vec grad;
  loss.value_and_gradient(params, &grad);
  return grad;
}

/// Training-error structure evaluated on a finer midpoint grid; the
/// computable stand-in for the generalization error of Eq. (15).
inline TrainingErrorReport generalization_error_estimate(const MlpParams& params,
                                                         const ProblemSpec& problem,
                                                         const CollocationCounts& fine_counts) {
  const CollocationSets fine = build_sets(problem.box, fine_counts);
  return training_error(params, fine, problem);
}

inline CollocationCounts refine_counts(const CollocationCounts& counts, int factor) {
  if (factor < 1) throw ConfigError("refine_counts: factor must be >= 1");
  CollocationCounts fine = counts;
  for (int& n : fine.interior_space) n *= factor;
  fine.interior_time *= factor;
  for (int& n : fine.boundary_tangential) n *= factor;
  fine.boundary_time *= factor;
  for (int& n : fine.initial_space) n *= factor;
  return fine;
}

/// Central finite-difference check of the loss gradient; relative errors use
/// denominator max(|analytic|, 1).
inline GradCheckReport fd_check_loss(const MlpParams& params, const CollocationSets& sets,
                                     const ProblemSpec& problem, double h) {
  if (!(h > 0.0)) throw ContractViolation("fd_check: step h must be positive");
  CollocationLoss loss(problem, sets);
  Vec grad;
  loss.value_and_gradient(params, &grad);

  GradCheckReport report;
  report.step = h;
  const Vec flat = params.to_flat();
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    const double hi = h * std::max(1.0, std::abs(flat(i)));
    Vec shifted = flat;
    shifted(i) = flat(i) + hi;
    const double fp = loss.value(MlpParams::from_flat(params.arch, shifted));
    shifted(i) = flat(i) - hi;
    const double fm = loss.value(MlpParams::from_flat(params.arch, shifted));
    report.add("theta" + std::to_string(i), grad(i), (fp - fm) / (2.0 * hi));
  }
  return report;
}

}  // namespace pinncert
