#pragma once

#include "pinncert/activation.hpp"
#include "pinncert/common.hpp"
#include "pinncert/domain.hpp"
#include "pinncert/jet.hpp"
#include "pinncert/problem.hpp"
#include "pinncert/quadrature.hpp"
#include "pinncert/residual.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace pinncert {

/// Poincare-Wirtinger constant of a convex domain: diameter / pi.
inline double poincare_constant(const BoxDomain& box) { return box.diameter() / M_PI; }

/// Multiplicative trace-inequality constant of the space-time cylinder:
/// sqrt(2 max{2 h, d+1} / rho) with h its diameter and rho its inradius.
inline double trace_constant(const BoxDomain& box) {
  const double h = box.spacetime_diameter();
  const double rho = box.spacetime_inradius();
  const double d1 = static_cast<double>(box.dim()) + 1.0;
  return std::sqrt(2.0 * std::max(2.0 * h, d1) / rho);
}

/// Nonlinearity amplification constant
///   2^{r-1} c (||u||_{C^0}^r + ||u_hat||_{C^0}^r / (r+1));
/// zero for f = 0 (the damped linear case).
inline double hat_c(const ProblemSpec& problem, double u_c0, double uhat_c0) {
  if (!problem.has_nonlinearity || problem.growth_c == 0.0) return 0.0;
  const double r = problem.growth_r;
  return std::pow(2.0, r - 1.0) * problem.growth_c *
         (std::pow(u_c0, r) + std::pow(uhat_c0, r) / (r + 1.0));
}

/// Exponential amplification T exp(T max{1, 2 C_pw^2} (1 + C_hat + 2 sqrt(T)/C_pw^2)).
inline double gronwall_factor(const BoxDomain& box, double c_pw, double hat_c_value) {
  const double T = box.horizon;
  const double pref = std::max(1.0, 2.0 * c_pw * c_pw);
  return T * std::exp(T * pref * (1.0 + hat_c_value + 2.0 * std::sqrt(T) / (c_pw * c_pw)));
}

/// Geometry constants of the midpoint rule on the three integration domains
/// (Omega, Omega_T, dOmega x [0,T]). Not given numerically by the theory;
/// default 1, overridable from config.
struct GeometryConstants {
  double c_omega = 1.0;
  double c_omega_t = 1.0;
  double c_boundary = 1.0;
};

/// Every constant the a-posteriori bound needs, with its provenance.
/// c1..c5 multiply the quadrature-deficit powers of M (c4 enters under the
/// boundary square root already applied); boundary_factor is the C^1-norm
/// factor of the mixed boundary term.
struct ConstantLedger {
  double c_pw = 0.0;
  double trace = 0.0;
  double hat_c = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0;
  double c2_growth_term = 0.0;  // the nonlinearity's contribution inside c2
  double boundary_factor = 0.0;
  GeometryConstants geom;
  std::string norm_source;  // "lemma-based" | "empirical-sampled"

  // audit trail
  int depth = 0;
  double width = 0.0, weight_bound = 0.0;
  double u_c1 = 0.0, u_c2 = 0.0, u_c3 = 0.0;
  double uhat_c1 = 0.0;

  void check_finite() const {
    for (double v : {c_pw, trace, hat_c, c1, c2, c3, c4, c5, boundary_factor})
      if (!(v >= 0.0)) throw ConfigError("constant ledger: negative or NaN constant");
  }
};

/// Architecture-based constants C1..C5 of the a-posteriori theorem
/// (final displayed closed forms of the proof) plus the lemma-based
/// boundary C^1 factor. Needs a finite weight bound R and C^n-norm
/// estimates of the exact solution.
inline ConstantLedger lemma_constants(const Architecture& arch, const ProblemSpec& problem,
                                      const GeometryConstants& geom, double u_c1, double u_c2,
                                      double u_c3) {
  if (!std::isfinite(arch.weight_bound))
    throw UnavailableError("lemma constants need a finite weight bound R");
  if (!(u_c1 >= 0.0) || !(u_c2 >= 0.0) || !(u_c3 >= 0.0))
    throw ConfigError("lemma constants: supply nonnegative ||u||_{C^n} estimates");

  const double d = problem.dim();
  const double L = arch.depth();
  const double W = arch.max_width();
  const double R = arch.weight_bound;
  const ActivationNormTable act = tanh_norm_table(4);
  const double s0 = act.sup_norms[0];
  double sig[5];
  for (int n = 1; n <= 4; ++n) {
    double m = 0.0;
    for (int i = 0; i <= n; ++i) m = std::max(m, act.sup_norms[static_cast<size_t>(i)]);
    sig[n] = m;  // ||sigma||_{C^n}
  }
  const double e2 = std::exp(2.0);

  // squared C^3 / C^4 / C^2 network norm bounds
  const double net3_sq = std::pow(16.0, 2 * L) * std::pow(d + 1.0, 12) *
                         std::pow(e2 * 81.0 * std::pow(W, 3) * std::pow(R, 3) * sig[3], 6 * L);
  const double net4_term = std::pow(16.0, 2 * L) * std::pow(d + 1.0, 17) *
                           std::pow(e2 * 256.0 * std::pow(W, 3) * std::pow(R, 4) * sig[4], 8 * L);
  const double net2_sq = std::pow(16.0, 2 * L) * std::pow(d + 1.0, 8) *
                         std::pow(e2 * 16.0 * std::pow(W, 3) * std::pow(R, 2) * sig[2], 4 * L);

  const double c_pw = poincare_constant(problem.box);

  ConstantLedger ledger;
  ledger.c_pw = c_pw;
  ledger.trace = trace_constant(problem.box);
  ledger.geom = geom;
  ledger.norm_source = "lemma-based";
  ledger.depth = arch.depth();
  ledger.width = W;
  ledger.weight_bound = R;
  ledger.u_c1 = u_c1;
  ledger.u_c2 = u_c2;
  ledger.u_c3 = u_c3;

  ledger.c1 = 8.0 * geom.c_omega * (net3_sq + u_c3 * u_c3);
  double c2 = net4_term + 16.0 * problem.damping_c2_norm * problem.damping_c2_norm * net3_sq;
  if (problem.has_nonlinearity && problem.growth_c > 0.0) {
    const double r = problem.growth_r;
    ledger.c2_growth_term = problem.growth_c * problem.growth_c * std::pow(2.0, r) *
                            std::pow(R, r + 1.0) *
                            (std::pow(W, r + 1.0) * std::pow(s0, r + 1.0) + 1.0);
    c2 += ledger.c2_growth_term;
  }
  ledger.c2 = 16.0 * geom.c_omega_t * c2;
  ledger.c3 = 8.0 * d * geom.c_omega * (net3_sq + u_c3 * u_c3);
  ledger.c4 = 2.0 * std::sqrt(geom.c_boundary) * std::pow(16.0, L) * std::pow(d + 1.0, 6) *
              std::pow(e2 * 81.0 * std::pow(W, 3) * std::pow(R, 3) * sig[3], 3 * L);
  ledger.c5 = 16.0 * geom.c_omega / (c_pw * c_pw) * (net2_sq + u_c2 * u_c2);
  ledger.boundary_factor =
      std::pow(16.0, L) * std::pow(d + 1.0, 2) * std::pow(e2 * std::pow(W, 3) * R * sig[1], L) +
      u_c1;
  return ledger;
}

// ---------------------------------------------------------------------------
// Sampled sup norms (non-rigorous, flagged in the ledger)
// ---------------------------------------------------------------------------

namespace detail {

/// Central first difference along `axis`; shrinks that axis by 2.
inline void diff_grid(std::vector<double>& values, std::vector<int>& dims, int axis, double h) {
  std::vector<Eigen::Index> stride(dims.size());
  Eigen::Index s = 1;
  for (size_t a = dims.size(); a-- > 0;) {
    stride[a] = s;
    s *= dims[a];
  }
  std::vector<int> out_dims = dims;
  out_dims[static_cast<size_t>(axis)] -= 2;
  if (out_dims[static_cast<size_t>(axis)] < 1)
    throw ConfigError("cn-norm sampling: grid too coarse for requested order");

  std::vector<double> out;
  out.reserve(static_cast<size_t>([&] {
    Eigen::Index n = 1;
    for (int dmn : out_dims) n *= dmn;
    return n;
  }()));
  std::vector<int> idx(dims.size(), 0);
  bool done = false;
  while (!done) {
    Eigen::Index base = 0;
    for (size_t a = 0; a < dims.size(); ++a) {
      const int shift = static_cast<int>(a) == axis ? 1 : 0;  // skip low edge on axis
      base += (idx[a] + shift) * stride[a];
    }
    out.push_back((values[static_cast<size_t>(base + stride[static_cast<size_t>(axis)])] -
                   values[static_cast<size_t>(base - stride[static_cast<size_t>(axis)])]) /
                  (2.0 * h));
    int a = static_cast<int>(dims.size()) - 1;
    while (a >= 0 && ++idx[static_cast<size_t>(a)] == out_dims[static_cast<size_t>(a)]) {
      idx[static_cast<size_t>(a)] = 0;
      --a;
    }
    done = a < 0;
  }
  values = std::move(out);
  dims = out_dims;
}

inline double grid_sup(const std::vector<double>& values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace detail

/// max_{|alpha| <= order} sup |D^alpha f| estimated from grid samples by
/// repeated central differences. `values` is lexicographic with the last
/// axis fastest; `spacing` holds the per-axis node distances.
inline double grid_cn_sup(const std::vector<double>& values, const std::vector<int>& dims,
                          const std::vector<double>& spacing, int order) {
  if (order < 0 || order > 3) throw ConfigError("grid_cn_sup supports orders 0..3");
  double sup = detail::grid_sup(values);
  if (order == 0) return sup;
  // enumerate derivative multi-indices 1 <= |alpha| <= order
  const int m = static_cast<int>(dims.size());
  std::vector<int> alpha(static_cast<size_t>(m), 0);
  std::function<void(int, int)> walk = [&](int axis, int remaining) {
    if (axis == m) {
      int total = 0;
      for (int a : alpha) total += a;
      if (total == 0) return;
      std::vector<double> work = values;
      std::vector<int> work_dims = dims;
      for (int a = 0; a < m; ++a)
        for (int rep = 0; rep < alpha[static_cast<size_t>(a)]; ++rep)
          detail::diff_grid(work, work_dims, a, spacing[static_cast<size_t>(a)]);
      sup = std::max(sup, detail::grid_sup(work));
      return;
    }
    for (int a = 0; a <= remaining; ++a) {
      alpha[static_cast<size_t>(axis)] = a;
      walk(axis + 1, remaining - a);
    }
    alpha[static_cast<size_t>(axis)] = 0;
  };
  walk(0, order);
  return sup;
}

/// Sampled sup norm of |D^alpha f|, |alpha| <= order, over a box in R^m
/// (grid nodes include the box faces).
inline double empirical_cn_norm(const std::function<double(const Vec&)>& f, const Vec& lo,
                                const Vec& hi, const std::vector<int>& counts, int order) {
  const int m = static_cast<int>(lo.size());
  if (hi.size() != m || static_cast<int>(counts.size()) != m)
    throw ContractViolation("empirical_cn_norm: dimension mismatch");
  std::vector<double> spacing(static_cast<size_t>(m));
  Eigen::Index total = 1;
  for (int a = 0; a < m; ++a) {
    if (counts[static_cast<size_t>(a)] < 2 * order + 1)
      throw ConfigError("empirical_cn_norm: grid too coarse");
    spacing[static_cast<size_t>(a)] =
        (hi(a) - lo(a)) / (counts[static_cast<size_t>(a)] - 1.0);
    total *= counts[static_cast<size_t>(a)];
  }
  std::vector<double> values;
  values.reserve(static_cast<size_t>(total));
  std::vector<int> idx(static_cast<size_t>(m), 0);
  Vec x(m);
  bool done = false;
  while (!done) {
    for (int a = 0; a < m; ++a) x(a) = lo(a) + idx[static_cast<size_t>(a)] * spacing[static_cast<size_t>(a)];
    values.push_back(f(x));
    int a = m - 1;
    while (a >= 0 && ++idx[static_cast<size_t>(a)] == counts[static_cast<size_t>(a)]) {
      idx[static_cast<size_t>(a)] = 0;
      --a;
    }
    done = a < 0;
  }
  return grid_cn_sup(values, counts, spacing, order);
}

/// Sampling resolution for the empirical norms.
struct EmpiricalGrid {
  int space = 81;  // nodes per spatial axis
  int time = 41;   // nodes along t
};

/// Sampled C^2 norms of the squared residual fields of a trained network,
/// plus the sampled C^1 norm of the error u_theta - u. These feed the
/// empirical-norm variant of the a-posteriori bound.
struct EmpiricalNorms {
  double r_pde_sq_c2 = 0.0;
  double r_sut_sq_c2 = 0.0;
  double r_u0_sq_c2 = 0.0;
  double r_u1_sq_c2 = 0.0;
  double r_gradu_sq_c2 = 0.0;
  double uhat_c1 = 0.0;
  double u_c0 = 0.0;     // sampled sup |u| (for hat_c)
  double uhat_c0 = 0.0;  // sampled sup |u_theta - u|
};

inline EmpiricalNorms empirical_residual_norms(const MlpParams& params,
                                               const ProblemSpec& problem,
                                               const EmpiricalGrid& grid = {}) {
  const int d = problem.dim();
  const BoxDomain& box = problem.box;
  BatchJetEngine engine(params);
  EmpiricalNorms norms;

  auto linspace_node = [](double lo, double hi, int count, int i) {
    return lo + (hi - lo) * static_cast<double>(i) / (count - 1.0);
  };

  // interior space-time grid: PDE residual squared, and u_theta - u
  {
    std::vector<int> dims(static_cast<size_t>(d), grid.space);
    dims.push_back(grid.time);
    std::vector<double> spacing;
    for (int a = 0; a < d; ++a) spacing.push_back(box.edge(a) / (grid.space - 1.0));
    spacing.push_back(box.horizon / (grid.time - 1.0));

    Eigen::Index total = 1;
    for (int n : dims) total *= n;
    Mat X(total, d + 1);
    std::vector<int> idx(static_cast<size_t>(d) + 1, 0);
    for (Eigen::Index row = 0; row < total; ++row) {
      for (int a = 0; a < d; ++a)
        X(row, a) = linspace_node(box.lower[static_cast<size_t>(a)],
                                  box.upper[static_cast<size_t>(a)], grid.space,
                                  idx[static_cast<size_t>(a)]);
      X(row, d) = linspace_node(0.0, box.horizon, grid.time, idx[static_cast<size_t>(d)]);
      int a = d;
      while (a >= 0 && ++idx[static_cast<size_t>(a)] == dims[static_cast<size_t>(a)]) {
        idx[static_cast<size_t>(a)] = 0;
        --a;
      }
    }

    std::vector<double> pde_sq(static_cast<size_t>(total));
    std::vector<double> uhat(static_cast<size_t>(total));
    const Eigen::Index chunk = 65536;
    for (Eigen::Index start = 0; start < total; start += chunk) {
      const Eigen::Index n = std::min(chunk, total - start);
      const Mat Xc = X.middleRows(start, n);
      const JetBatch jb = engine.evaluate(Xc, all_directions(d + 1), 2);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Vec x = Xc.row(i).head(d).transpose();
        const double t = Xc(i, d);
        double lap = 0.0;
        for (int a = 0; a < d; ++a) lap += jb.second(i, a);
        const double r = jb.second(i, d) - lap + problem.damping(x) * jb.first(i, d) +
                         problem.f_at(x, jb.value(i));
        pde_sq[static_cast<size_t>(start + i)] = r * r;
        if (problem.exact) {
          uhat[static_cast<size_t>(start + i)] = jb.value(i) - problem.exact->u(x, t);
          norms.u_c0 = std::max(norms.u_c0, std::abs(problem.exact->u(x, t)));
        }
      }
    }
    norms.r_pde_sq_c2 = grid_cn_sup(pde_sq, dims, spacing, 2);
    if (problem.exact) {
      norms.uhat_c1 = grid_cn_sup(uhat, dims, spacing, 1);
      norms.uhat_c0 = detail::grid_sup(uhat);
    }
  }

  // initial slice: squared residual fields of u0, u1 and grad u0
  {
    std::vector<int> dims(static_cast<size_t>(d), grid.space);
    std::vector<double> spacing;
    for (int a = 0; a < d; ++a) spacing.push_back(box.edge(a) / (grid.space - 1.0));
    Eigen::Index total = 1;
    for (int n : dims) total *= n;
    Mat X(total, d + 1);
    std::vector<int> idx(static_cast<size_t>(d), 0);
    for (Eigen::Index row = 0; row < total; ++row) {
      for (int a = 0; a < d; ++a)
        X(row, a) = linspace_node(box.lower[static_cast<size_t>(a)],
                                  box.upper[static_cast<size_t>(a)], grid.space,
                                  idx[static_cast<size_t>(a)]);
      X(row, d) = 0.0;
      int a = d - 1;
      while (a >= 0 && ++idx[static_cast<size_t>(a)] == dims[static_cast<size_t>(a)]) {
        idx[static_cast<size_t>(a)] = 0;
        --a;
      }
    }
    const JetBatch jb = engine.evaluate(X, all_directions(d + 1), 1);
    std::vector<double> u0_sq(static_cast<size_t>(total)), u1_sq(static_cast<size_t>(total)),
        grad_sq(static_cast<size_t>(total));
    for (Eigen::Index i = 0; i < total; ++i) {
      const Vec x = X.row(i).head(d).transpose();
      const double r0 = jb.value(i) - problem.u0(x);
      const double r1 = jb.first(i, d) - problem.u1(x);
      const Vec rg = jb.first.row(i).head(d).transpose() - problem.grad_u0(x);
      u0_sq[static_cast<size_t>(i)] = r0 * r0;
      u1_sq[static_cast<size_t>(i)] = r1 * r1;
      grad_sq[static_cast<size_t>(i)] = rg.squaredNorm();
    }
    norms.r_u0_sq_c2 = grid_cn_sup(u0_sq, dims, spacing, 2);
    norms.r_u1_sq_c2 = grid_cn_sup(u1_sq, dims, spacing, 2);
    norms.r_gradu_sq_c2 = grid_cn_sup(grad_sq, dims, spacing, 2);
  }

  // lateral boundary, face by face: squared u_t residual over
  // (tangential coordinates) x time
  {
    double worst = 0.0;
    for (int axis = 0; axis < d; ++axis) {
      for (int side = 0; side < 2; ++side) {
        const double fixed =
            side == 0 ? box.lower[static_cast<size_t>(axis)] : box.upper[static_cast<size_t>(axis)];
        std::vector<int> dims;
        std::vector<double> spacing;
        std::vector<int> tangential;
        for (int a = 0; a < d; ++a)
          if (a != axis) {
            tangential.push_back(a);
            dims.push_back(grid.space);
            spacing.push_back(box.edge(a) / (grid.space - 1.0));
          }
        dims.push_back(grid.time);
        spacing.push_back(box.horizon / (grid.time - 1.0));

        Eigen::Index total = 1;
        for (int n : dims) total *= n;
        Mat X(total, d + 1);
        std::vector<int> idx(dims.size(), 0);
        for (Eigen::Index row = 0; row < total; ++row) {
          X(row, axis) = fixed;
          for (size_t ti = 0; ti < tangential.size(); ++ti) {
            const int a = tangential[ti];
            X(row, a) = linspace_node(box.lower[static_cast<size_t>(a)],
                                      box.upper[static_cast<size_t>(a)], grid.space,
                                      static_cast<int>(idx[ti]));
          }
          X(row, d) = linspace_node(0.0, box.horizon, grid.time,
                                    static_cast<int>(idx[dims.size() - 1]));
          int a = static_cast<int>(dims.size()) - 1;
          while (a >= 0 && ++idx[static_cast<size_t>(a)] == dims[static_cast<size_t>(a)]) {
            idx[static_cast<size_t>(a)] = 0;
            --a;
          }
        }
        const JetBatch jb = engine.evaluate(X, {d}, 1);
        std::vector<double> sut_sq(static_cast<size_t>(total));
        for (Eigen::Index i = 0; i < total; ++i)
          sut_sq[static_cast<size_t>(i)] = jb.first(i, d) * jb.first(i, d);
        worst = std::max(worst, grid_cn_sup(sut_sq, dims, spacing, 2));
      }
    }
    norms.r_sut_sq_c2 = worst;
  }

  return norms;
}

/// Constant ledger in empirical mode: quadrature-deficit coefficients from
/// sampled C^2 norms of the squared residual fields, boundary factor from
/// the sampled C^1 norm of the error.
inline ConstantLedger empirical_constants(const ProblemSpec& problem,
                                          const GeometryConstants& geom,
                                          const EmpiricalNorms& norms) {
  const double c_pw = poincare_constant(problem.box);
  ConstantLedger ledger;
  ledger.c_pw = c_pw;
  ledger.trace = trace_constant(problem.box);
  ledger.geom = geom;
  ledger.norm_source = "empirical-sampled";
  ledger.hat_c = hat_c(problem, norms.u_c0, norms.uhat_c0);
  ledger.c1 = geom.c_omega * norms.r_u1_sq_c2;
  ledger.c2 = geom.c_omega_t * norms.r_pde_sq_c2;
  ledger.c3 = geom.c_omega * norms.r_gradu_sq_c2;
  ledger.c4 = std::sqrt(geom.c_boundary * norms.r_sut_sq_c2);
  ledger.c5 = 2.0 * geom.c_omega / (c_pw * c_pw) * norms.r_u0_sq_c2;
  ledger.boundary_factor = norms.uhat_c1;
  ledger.uhat_c1 = norms.uhat_c1;
  return ledger;
}

/// C(M), the Groenwall factor and their product, with the per-term
/// decomposition of C(M).
struct BoundReport {
  double c_of_m = 0.0;
  double gronwall = 0.0;
  double bound_value = 0.0;
  bool includes_nonlinearity = false;
  std::string mode;

  double prefactor = 0.0;  // max{1, 2 C_pw^2}
  double term_u1_deficit = 0.0, term_u1_train = 0.0;
  double term_pde_deficit = 0.0, term_pde_train = 0.0;
  double term_gradu_deficit = 0.0, term_gradu_train = 0.0;
  double term_boundary_mixed = 0.0;
  double term_u0_deficit = 0.0, term_u0_train = 0.0;
};

/// A-posteriori bound on int |u_hat|^2 + int |u_hat_t|^2 from the training
/// error and the training-set sizes.
inline BoundReport posterior_bound(const TrainingErrorReport& report, const CollocationSets& sets,
                                   const ConstantLedger& ledger, const BoxDomain& box,
                                   bool include_nonlinearity) {
  if (report.m_pde != sets.m_pde() || report.m_s != sets.m_s() || report.m_t != sets.m_t())
    throw ContractViolation("posterior_bound: report and sets disagree on M counts");
  ledger.check_finite();

  const double d = static_cast<double>(box.dim());
  const double mt = std::pow(static_cast<double>(sets.m_t()), -2.0 / d);
  const double mpde = std::pow(static_cast<double>(sets.m_pde()), -2.0 / (d + 1.0));
  const double ms = std::pow(static_cast<double>(sets.m_s()), -1.0 / d);
  const double c_pw2 = ledger.c_pw * ledger.c_pw;

  BoundReport out;
  out.includes_nonlinearity = include_nonlinearity;
  out.mode = ledger.norm_source;
  out.prefactor = std::max(1.0, 2.0 * c_pw2);
  out.term_u1_deficit = ledger.c1 * mt;
  out.term_u1_train = report.u1_sq;
  out.term_pde_deficit = ledger.c2 * mpde;
  out.term_pde_train = report.pde_sq;
  out.term_gradu_deficit = ledger.c3 * mt;
  out.term_gradu_train = report.gradu_sq;
  out.term_boundary_mixed = 2.0 * std::sqrt(box.horizon * box.boundary_measure()) *
                            ledger.boundary_factor *
                            (ledger.c4 * ms + std::sqrt(report.sut_sq));
  out.term_u0_deficit = ledger.c5 * mt;
  out.term_u0_train = 2.0 / c_pw2 * report.u0_sq;

  out.c_of_m = out.prefactor *
               (out.term_u1_deficit + out.term_u1_train + out.term_pde_deficit +
                out.term_pde_train + out.term_gradu_deficit + out.term_gradu_train +
                out.term_boundary_mixed + out.term_u0_deficit + out.term_u0_train);
  out.gronwall = gronwall_factor(box, ledger.c_pw, include_nonlinearity ? ledger.hat_c : 0.0);
  out.bound_value = out.c_of_m * out.gronwall;
  return out;
}

/// Residual L^2 norms (not squared) for the residual-based bound.
struct ResidualL2Norms {
  double pde = 0.0, su = 0.0, sut = 0.0, u0 = 0.0, u1 = 0.0, gradu = 0.0;

  static ResidualL2Norms from_report(const TrainingErrorReport& r) {
    ResidualL2Norms n;
    n.pde = std::sqrt(r.pde_sq);
    n.su = std::sqrt(r.su_sq);
    n.sut = std::sqrt(r.sut_sq);
    n.u0 = std::sqrt(r.u0_sq);
    n.u1 = std::sqrt(r.u1_sq);
    n.gradu = std::sqrt(r.gradu_sq);
    return n;
  }
};

/// Residual-based bound on int |u_hat|^2 + int |u_hat_t|^2 (the
/// generalization-error form): C * T exp(...) with
/// C = max{1,2C_pw^2}(||R_u1||^2 + ||R_PDE||^2 + ||R_grad u||^2
///     + 2 sqrt(T |dOmega|) ||u_hat||_{C^1} ||R_s,ut|| + 2/C_pw^2 ||R_u0||^2).
inline double residual_bound(const ResidualL2Norms& norms, const ConstantLedger& ledger,
                             const BoxDomain& box, double uhat_c1,
                             bool include_nonlinearity = false) {
  const double c_pw2 = ledger.c_pw * ledger.c_pw;
  const double pref = std::max(1.0, 2.0 * c_pw2);
  const double c = pref * (norms.u1 * norms.u1 + norms.pde * norms.pde +
                           norms.gradu * norms.gradu +
                           2.0 * std::sqrt(box.horizon * box.boundary_measure()) * uhat_c1 *
                               norms.sut +
                           2.0 / c_pw2 * norms.u0 * norms.u0);
  return c * gronwall_factor(box, ledger.c_pw, include_nonlinearity ? ledger.hat_c : 0.0);
}

/// Sampled C^n norm of the exact solution over the closed space-time
/// cylinder (order <= 3).
inline double sampled_exact_cn_norm(const ProblemSpec& problem, int order,
                                    const EmpiricalGrid& grid = {}) {
  if (!problem.exact) throw UnavailableError("sampled_exact_cn_norm: no exact solution");
  const int d = problem.dim();
  Vec lo(d + 1), hi(d + 1);
  std::vector<int> counts;
  for (int a = 0; a < d; ++a) {
    lo(a) = problem.box.lower[static_cast<size_t>(a)];
    hi(a) = problem.box.upper[static_cast<size_t>(a)];
    counts.push_back(grid.space);
  }
  lo(d) = 0.0;
  hi(d) = problem.box.horizon;
  counts.push_back(grid.time);
  const ExactSolution& exact = *problem.exact;
  return empirical_cn_norm(
      [&](const Vec& z) { return exact.u(z.head(d), z(d)); }, lo, hi, counts, order);
}

}  // namespace pinncert
