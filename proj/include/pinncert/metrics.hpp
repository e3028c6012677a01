#pragma once

#include "pinncert/common.hpp"
#include "pinncert/jet.hpp"
#include "pinncert/problem.hpp"
#include "pinncert/quadrature.hpp"

#include <cmath>
#include <ostream>

namespace pinncert {

/// Error energies against the exact solution over Omega x [0,T]:
///   l2_part = integral |u_theta - u|^2, dt_part = integral |u_theta_t - u_t|^2
/// and their sum, the H^1([0,T];L^2) quantity of the error bounds.
struct H1ErrorReport {
  double l2_part = 0.0;
  double dt_part = 0.0;
  double sum = 0.0;
  double l2_norm() const { return std::sqrt(l2_part); }
};

namespace detail {

/// Metric grid: interior midpoints at the given per-axis counts (finer than
/// and disjoint from any training grid by construction).
inline PointSet metric_grid(const BoxDomain& box, const std::vector<int>& space_counts,
                            int time_count) {
  CollocationCounts counts;
  counts.interior_space = space_counts;
  counts.interior_time = time_count;
  counts.boundary_tangential.assign(static_cast<size_t>(box.dim()), 1);
  counts.boundary_time = 1;
  counts.initial_space.assign(static_cast<size_t>(box.dim()), 1);
  return build_sets(box, counts).interior;
}

}  // namespace detail

inline H1ErrorReport total_error_h1(const MlpParams& params, const ProblemSpec& problem,
                                    const std::vector<int>& space_counts, int time_count) {
  if (!problem.exact) throw UnavailableError("total_error_h1: problem has no exact solution");
  const int d = problem.dim();
  const PointSet grid = detail::metric_grid(problem.box, space_counts, time_count);

  BatchJetEngine engine(params);
  const std::vector<int> dirs_time = {d};
  H1ErrorReport report;
  const Eigen::Index chunk = 65536;
  for (Eigen::Index start = 0; start < grid.size(); start += chunk) {
    const Eigen::Index n = std::min(chunk, grid.size() - start);
    const Mat X = grid.points.middleRows(start, n);
    const JetBatch jb = engine.evaluate(X, dirs_time, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec x = X.row(i).head(d).transpose();
      const double t = X(i, d);
      const double du = jb.value(i) - problem.exact->u(x, t);
      const double dut = jb.first(i, d) - problem.exact->u_t(x, t);
      report.l2_part += grid.weights(start + i) * du * du;
      report.dt_part += grid.weights(start + i) * dut * dut;
    }
  }
  report.sum = report.l2_part + report.dt_part;
  return report;
}

/// Total error in the L^2(Omega x [0,T]) norm.
inline double total_error_l2(const MlpParams& params, const ProblemSpec& problem,
                             const std::vector<int>& space_counts, int time_count) {
  return total_error_h1(params, problem, space_counts, time_count).l2_norm();
}

/// |u_theta - u| sampled on a spatial grid at a fixed time.
inline Mat pointwise_error_field(const MlpParams& params, const ProblemSpec& problem, double t,
                                 int nx, int ny) {
  if (!problem.exact) throw UnavailableError("pointwise_error_field: no exact solution");
  if (problem.dim() != 2) throw ContractViolation("pointwise_error_field: implemented for d = 2");
  if (t < 0.0 || t > problem.box.horizon)
    throw ContractViolation("pointwise_error_field: t outside [0, T]");
  Mat field(nx, ny);
  Mat X(static_cast<Eigen::Index>(nx) * ny, 3);
  Eigen::Index row = 0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j, ++row) {
      X(row, 0) = problem.box.lower[0] + (i + 0.5) * problem.box.edge(0) / nx;
      X(row, 1) = problem.box.lower[1] + (j + 0.5) * problem.box.edge(1) / ny;
      X(row, 2) = t;
    }
  BatchJetEngine engine(params);
  const JetBatch jb = engine.evaluate(X, {}, 1);
  row = 0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j, ++row) {
      const Vec x = X.row(row).head(2).transpose();
      field(i, j) = std::abs(jb.value(row) - problem.exact->u(x, t));
    }
  return field;
}

/// Row-major CSV matrix dump with a one-line grid header.
inline void write_field_csv(const Mat& field, const BoxDomain& box, double t, std::ostream& os) {
  os << "# grid " << field.rows() << "x" << field.cols() << " over ["
     << box.lower[0] << "," << box.upper[0] << "]x[" << box.lower[1] << "," << box.upper[1]
     << "] at t=" << t << '\n';
  os.precision(17);
  for (Eigen::Index i = 0; i < field.rows(); ++i) {
    for (Eigen::Index j = 0; j < field.cols(); ++j) os << (j ? "," : "") << field(i, j);
    os << '\n';
  }
}

}  // namespace pinncert
