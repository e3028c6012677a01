#pragma once

#include "pinncert/common.hpp"
#include "pinncert/domain.hpp"
#include "pinncert/jet.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>

namespace pinncert {

/// Closed-form reference solution. `jet` is optional; when absent,
/// derivative quantities fall back to central differences of `u`.
struct ExactSolution {
  std::function<double(const Vec&, double)> u;    // u(x, t)
  std::function<double(const Vec&, double)> u_t;  // du/dt(x, t)
  std::function<Jet(const Vec&, double)> jet;     // may be empty

  Jet jet_at(const Vec& x, double t, double h = 1e-4) const {
    if (jet) return jet(x, t);
    Jet j;
    const int d = static_cast<int>(x.size());
    j.value = u(x, t);
    j.dt = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
    j.dtt = (u(x, t + h) - 2.0 * j.value + u(x, t - h)) / (h * h);
    j.grad_x = Vec::Zero(d);
    j.laplacian = 0.0;
    for (int i = 0; i < d; ++i) {
      Vec xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      j.grad_x(i) = (u(xp, t) - u(xm, t)) / (2.0 * h);
      j.laplacian += (u(xp, t) - 2.0 * j.value + u(xm, t)) / (h * h);
    }
    return j;
  }
};

/// Semilinear wave problem u_tt - Lap u + a(x) u_t + f(x,u) = 0 with
/// homogeneous Dirichlet data, initial data (u0, u1) and growth data (c, r)
/// for the nonlinearity.
struct ProblemSpec {
  std::string name;
  BoxDomain box;

  std::function<double(const Vec&)> damping;  // a(x) >= 0
  double damping_c2_norm = 0.0;               // ||a||_{C^2} estimate

  bool has_nonlinearity = false;
  std::function<double(const Vec&, double)> f;      // f(x, u)
  std::function<double(const Vec&, double)> df_du;  // d f / d u
  double growth_c = 0.0;                            // c in assumption A2
  double growth_r = 1.0;                            // r in assumption A2

  std::function<double(const Vec&)> u0;
  std::function<double(const Vec&)> u1;
  std::function<Vec(const Vec&)> grad_u0;

  std::optional<ExactSolution> exact;

  int dim() const { return box.dim(); }

  double f_at(const Vec& x, double u) const { return has_nonlinearity ? f(x, u) : 0.0; }
  double df_du_at(const Vec& x, double u) const {
    return has_nonlinearity ? df_du(x, u) : 0.0;
  }
};

/// The damped wave benchmark: a = 2*pi, f = 0, Omega = [-0.5,0.5]^2,
/// T = 0.5, solved by u = e^{-pi t} (cos(pi t) + sin(pi t)) cos(pi x) cos(pi y).
inline ProblemSpec damped_wave_problem() {
  ProblemSpec p;
  p.name = "damped-wave";
  p.box = BoxDomain::unit_square(0.5);
  p.damping = [](const Vec&) { return 2.0 * M_PI; };
  p.damping_c2_norm = 2.0 * M_PI;
  p.has_nonlinearity = false;
  p.growth_c = 0.0;
  p.growth_r = 1.0;
  p.u0 = [](const Vec& x) { return std::cos(M_PI * x(0)) * std::cos(M_PI * x(1)); };
  p.u1 = [](const Vec&) { return 0.0; };
  p.grad_u0 = [](const Vec& x) {
    Vec g(2);
    g(0) = -M_PI * std::sin(M_PI * x(0)) * std::cos(M_PI * x(1));
    g(1) = -M_PI * std::cos(M_PI * x(0)) * std::sin(M_PI * x(1));
    return g;
  };

  ExactSolution exact;
  exact.u = [](const Vec& x, double t) {
    return std::exp(-M_PI * t) * (std::cos(M_PI * t) + std::sin(M_PI * t)) *
           std::cos(M_PI * x(0)) * std::cos(M_PI * x(1));
  };
  exact.u_t = [](const Vec& x, double t) {
    return -2.0 * M_PI * std::exp(-M_PI * t) * std::sin(M_PI * t) *
           std::cos(M_PI * x(0)) * std::cos(M_PI * x(1));
  };
  exact.jet = [](const Vec& x, double t) {
    const double cx = std::cos(M_PI * x(0));
    const double cy = std::cos(M_PI * x(1));
    const double sx = std::sin(M_PI * x(0));
    const double sy = std::sin(M_PI * x(1));
    const double et = std::exp(-M_PI * t);
    const double osc = std::cos(M_PI * t) + std::sin(M_PI * t);
    Jet j;
    j.value = et * osc * cx * cy;
    j.dt = -2.0 * M_PI * et * std::sin(M_PI * t) * cx * cy;
    j.dtt = -2.0 * M_PI * M_PI * et * (std::cos(M_PI * t) - std::sin(M_PI * t)) * cx * cy;
    j.grad_x = Vec(2);
    j.grad_x(0) = -M_PI * et * osc * sx * cy;
    j.grad_x(1) = -M_PI * et * osc * cx * sy;
    j.laplacian = -2.0 * M_PI * M_PI * j.value;
    return j;
  };
  p.exact = std::move(exact);
  return p;
}

/// Power nonlinearity f(x,u) = |u|^p u with growth data r = p, c = p + 1
/// (so |df/du| = c |u|^r with equality). No exact solution attached.
inline ProblemSpec semilinear_power_problem(double p, const BoxDomain& box,
                                            std::function<double(const Vec&)> damping,
                                            double damping_c2_norm,
                                            std::function<double(const Vec&)> u0,
                                            std::function<double(const Vec&)> u1,
                                            std::function<Vec(const Vec&)> grad_u0) {
  if (p < 0.0) throw ConfigError("semilinear power: exponent p must be >= 0");
  const int d = box.dim();
  const double r = p;
  // A2 growth-range caps for the spatial dimension
  if (d > 2 && d <= 4 && !(r < (d + 2.0) / (d - 2.0)))
    throw ConfigError("semilinear power: r = p violates A2 range for 2 < d <= 4");
  if (d == 5 && !(r < 2.0))
    throw ConfigError("semilinear power: r = p violates A2 range for d = 5");
  if (d > 5) throw ConfigError("semilinear power: d <= 5 required");

  ProblemSpec spec;
  spec.name = "semilinear-power";
  spec.box = box;
  spec.damping = std::move(damping);
  spec.damping_c2_norm = damping_c2_norm;
  spec.has_nonlinearity = true;
  spec.f = [p](const Vec&, double u) { return std::pow(std::abs(u), p) * u; };
  spec.df_du = [p](const Vec&, double u) { return (p + 1.0) * std::pow(std::abs(u), p); };
  spec.growth_c = p + 1.0;
  spec.growth_r = r;
  spec.u0 = std::move(u0);
  spec.u1 = std::move(u1);
  spec.grad_u0 = std::move(grad_u0);
  return spec;
}

/// PDE residual of the problem's exact solution at one point; vanishes for a
/// correct closed form.
inline double exact_pde_check(const ProblemSpec& problem, const Vec& x, double t) {
  if (!problem.exact) throw UnavailableError("exact_pde_check: problem has no exact solution");
  const Jet j = problem.exact->jet_at(x, t);
  return j.dtt - j.laplacian + problem.damping(x) * j.dt + problem.f_at(x, j.value);
}

/// Sampled check of the structural assumptions A1/A2: nonnegativity of the
/// damping and the growth bounds |f| <= c|u|^{r+1}, |df/du| <= c|u|^r.
struct AssumptionReport {
  double damping_min = 0.0;
  double worst_f_ratio = 0.0;   // max |f| / (c |u|^{r+1})
  double worst_df_ratio = 0.0;  // max |df/du| / (c |u|^r)
  bool damping_ok = true;
  bool growth_ok = true;
};

inline AssumptionReport validate_assumptions(const ProblemSpec& problem,
                                             int spatial_samples_per_axis = 17,
                                             int u_samples = 33, double u_range = 4.0) {
  AssumptionReport report;
  report.damping_min = kInf;
  const int d = problem.dim();
  std::vector<int> idx(static_cast<size_t>(d), 0);
  bool done = false;
  while (!done) {
    Vec x(d);
    for (int i = 0; i < d; ++i)
      x(i) = problem.box.lower[static_cast<size_t>(i)] +
             (static_cast<double>(idx[static_cast<size_t>(i)]) + 0.5) * problem.box.edge(i) /
                 spatial_samples_per_axis;
    report.damping_min = std::min(report.damping_min, problem.damping(x));
    if (problem.has_nonlinearity && problem.growth_c > 0.0) {
      for (int iu = 0; iu < u_samples; ++iu) {
        const double u = -u_range + 2.0 * u_range * iu / (u_samples - 1.0);
        if (u == 0.0) continue;
        const double denom_f = problem.growth_c * std::pow(std::abs(u), problem.growth_r + 1.0);
        const double denom_df = problem.growth_c * std::pow(std::abs(u), problem.growth_r);
        report.worst_f_ratio =
            std::max(report.worst_f_ratio, std::abs(problem.f(x, u)) / denom_f);
        report.worst_df_ratio =
            std::max(report.worst_df_ratio, std::abs(problem.df_du(x, u)) / denom_df);
      }
    }
    int j = d - 1;
    while (j >= 0 && ++idx[static_cast<size_t>(j)] == spatial_samples_per_axis) {
      idx[static_cast<size_t>(j)] = 0;
      --j;
    }
    done = j < 0;
  }
  report.damping_ok = report.damping_min >= 0.0;
  report.growth_ok = report.worst_f_ratio <= 1.0 + 1e-12 && report.worst_df_ratio <= 1.0 + 1e-12;
  return report;
}

}  // namespace pinncert
