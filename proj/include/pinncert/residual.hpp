#pragma once

#include "pinncert/common.hpp"
#include "pinncert/jet.hpp"
#include "pinncert/problem.hpp"
#include "pinncert/quadrature.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace pinncert {

/// Evaluates the jet of some candidate function at a space-time point
/// (row layout: spatial coordinates, then time). Networks and exact
/// solutions both provide one.
using JetFn = std::function<Jet(const Vec& point)>;

inline JetFn jet_fn(const MlpParams& params) {
  return [&params](const Vec& point) { return eval_jet(params, point); };
}

inline JetFn jet_fn(const ProblemSpec& problem) {
  if (!problem.exact) throw UnavailableError("problem has no exact solution");
  const ExactSolution& exact = *problem.exact;
  const int d = problem.dim();
  return [&exact, d](const Vec& point) { return exact.jet_at(point.head(d), point(d)); };
}

/// Pointwise residuals of Eqs. (13)-(14): PDE defect in the interior,
/// value/time-derivative on the boundary, data mismatches on the initial
/// slice.
struct ResidualVector {
  double r_pde = 0.0;
  double r_su = 0.0;
  double r_sut = 0.0;
  double r_u0 = 0.0;
  double r_u1 = 0.0;
  Vec r_grad;  // d entries, initial stratum only
};

inline ResidualVector residual_at(const JetFn& field, const ProblemSpec& problem,
                                  const Vec& point, Stratum stratum) {
  const int d = problem.dim();
  if (point.size() != d + 1) throw ContractViolation("residual_at: bad point dimension");
  const Vec x = point.head(d);
  const double t = point(d);
  ResidualVector r;
  switch (stratum) {
    case Stratum::Interior: {
      const Jet j = field(point);
      r.r_pde = j.dtt - j.laplacian + problem.damping(x) * j.dt + problem.f_at(x, j.value);
      break;
    }
    case Stratum::Boundary: {
      bool on_face = false;
      for (int i = 0; i < d; ++i)
        on_face |= x(i) == problem.box.lower[static_cast<size_t>(i)] ||
                   x(i) == problem.box.upper[static_cast<size_t>(i)];
      if (!on_face) throw ContractViolation("residual_at: point not on the lateral boundary");
      const Jet j = field(point);
      r.r_su = j.value;
      r.r_sut = j.dt;
      break;
    }
    case Stratum::Initial: {
      if (t != 0.0) throw ContractViolation("residual_at: initial-slice point must have t = 0");
      const Jet j = field(point);
      r.r_u0 = j.value - problem.u0(x);
      r.r_u1 = j.dt - problem.u1(x);
      r.r_grad = j.grad_x - problem.grad_u0(x);
      break;
    }
  }
  return r;
}

/// Squared components of the training error (Eq. 16 / its quadrature form):
/// measure-weighted midpoint sums of squared residuals per stratum.
struct TrainingErrorReport {
  double pde_sq = 0.0;
  double su_sq = 0.0;
  double sut_sq = 0.0;
  double u0_sq = 0.0;
  double u1_sq = 0.0;
  double gradu_sq = 0.0;
  Eigen::Index m_pde = 0, m_s = 0, m_t = 0;

  double total_sq() const { return pde_sq + su_sq + sut_sq + u0_sq + u1_sq + gradu_sq; }
  double total() const { return std::sqrt(total_sq()); }
};

namespace detail {

[[noreturn]] inline void throw_nonfinite(Stratum stratum, const Vec& point) {
  std::ostringstream os;
  os << "non-finite residual on " << stratum_name(stratum) << " stratum at point (";
  for (Eigen::Index i = 0; i < point.size(); ++i) os << (i ? ", " : "") << point(i);
  os << ")";
  throw NumericalError(os.str());
}

}  // namespace detail

/// Reference (point-by-point) evaluation of the training error for any jet
/// field. The batched network path in loss.hpp computes the same sums; this
/// one also serves exact solutions and test fields.
inline TrainingErrorReport training_error(const JetFn& field, const CollocationSets& sets,
                                          const ProblemSpec& problem) {
  TrainingErrorReport report;
  report.m_pde = sets.m_pde();
  report.m_s = sets.m_s();
  report.m_t = sets.m_t();
  for (Eigen::Index i = 0; i < sets.interior.size(); ++i) {
    const Vec pt = sets.interior.points.row(i).transpose();
    const ResidualVector r = residual_at(field, problem, pt, Stratum::Interior);
    if (!std::isfinite(r.r_pde)) detail::throw_nonfinite(Stratum::Interior, pt);
    report.pde_sq += sets.interior.weights(i) * r.r_pde * r.r_pde;
  }
  for (Eigen::Index i = 0; i < sets.boundary.size(); ++i) {
    const Vec pt = sets.boundary.points.row(i).transpose();
    const ResidualVector r = residual_at(field, problem, pt, Stratum::Boundary);
    if (!std::isfinite(r.r_su) || !std::isfinite(r.r_sut))
      detail::throw_nonfinite(Stratum::Boundary, pt);
    report.su_sq += sets.boundary.weights(i) * r.r_su * r.r_su;
    report.sut_sq += sets.boundary.weights(i) * r.r_sut * r.r_sut;
  }
  for (Eigen::Index i = 0; i < sets.initial.size(); ++i) {
    const Vec pt = sets.initial.points.row(i).transpose();
    const ResidualVector r = residual_at(field, problem, pt, Stratum::Initial);
    if (!std::isfinite(r.r_u0) || !std::isfinite(r.r_u1) || !r.r_grad.allFinite())
      detail::throw_nonfinite(Stratum::Initial, pt);
    report.u0_sq += sets.initial.weights(i) * r.r_u0 * r.r_u0;
    report.u1_sq += sets.initial.weights(i) * r.r_u1 * r.r_u1;
    report.gradu_sq += sets.initial.weights(i) * r.r_grad.squaredNorm();
  }
  return report;
}

}  // namespace pinncert
