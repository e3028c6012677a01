#pragma once

#include "pinncert/common.hpp"
#include "pinncert/loss.hpp"
#include "pinncert/network.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace pinncert {

/// Objective callback: returns f(x) and fills the gradient.
using Objective = std::function<double(const Vec&, Vec&)>;

/// Two-loop recursion over (s, y) pairs, oldest first. With no history this
/// is steepest descent with unit scaling.
inline Vec lbfgs_direction(const std::vector<std::pair<Vec, Vec>>& history, const Vec& grad) {
  const auto m = history.size();
  Vec q = grad;
  std::vector<double> alpha(m, 0.0), rho(m, 0.0);
  for (size_t i = m; i-- > 0;) {
    const auto& [s, y] = history[i];
    rho[i] = 1.0 / y.dot(s);
    alpha[i] = rho[i] * s.dot(q);
    q -= alpha[i] * y;
  }
  double gamma = 1.0;
  if (m > 0) {
    const auto& [s, y] = history.back();
    gamma = s.dot(y) / y.dot(y);
  }
  Vec r = gamma * q;
  for (size_t i = 0; i < m; ++i) {
    const auto& [s, y] = history[i];
    const double beta = rho[i] * y.dot(r);
    r += (alpha[i] - beta) * s;
  }
  return -r;
}

struct LineSearchResult {
  bool ok = false;
  double alpha = 0.0;
  double f = 0.0;
  Vec x;
  Vec grad;
  int evaluations = 0;
};

/// Strong Wolfe line search (bracket + zoom with safeguarded cubic
/// interpolation); gives up after a bounded number of evaluations.
inline LineSearchResult wolfe_line_search(const Objective& objective, const Vec& x0, double f0,
                                          const Vec& g0, const Vec& direction, double c1 = 1e-4,
                                          double c2 = 0.9, double alpha_init = 1.0,
                                          int max_evaluations = 60) {
  const double dphi0 = g0.dot(direction);
  if (!(dphi0 < 0.0))
    throw ContractViolation("wolfe_line_search: not a descent direction");

  LineSearchResult result;
  Vec g_trial;
  auto phi = [&](double a, double& dphi) {
    result.evaluations += 1;
    result.x = x0 + a * direction;
    result.f = objective(result.x, g_trial);
    result.grad = g_trial;
    dphi = g_trial.dot(direction);
    return result.f;
  };

  auto zoom = [&](double lo, double f_lo, double dphi_lo, double hi, double f_hi) {
    while (result.evaluations < max_evaluations) {
      // quadratic trial safeguarded into the middle 80% of the bracket,
      // bisection otherwise (invariants follow Nocedal & Wright)
      double a = 0.5 * (lo + hi);
      const double width = hi - lo;
      if (dphi_lo != 0.0) {
        const double quad =
            lo - 0.5 * dphi_lo * width * width / (f_hi - f_lo - dphi_lo * width);
        if (std::isfinite(quad) && quad > std::min(lo, hi) + 0.1 * std::abs(width) &&
            quad < std::max(lo, hi) - 0.1 * std::abs(width))
          a = quad;
      }
      double dphi_a = 0.0;
      const double f_a = phi(a, dphi_a);
      if (!std::isfinite(f_a) || f_a > f0 + c1 * a * dphi0 || f_a >= f_lo) {
        hi = a;
        f_hi = f_a;
      } else {
        if (std::abs(dphi_a) <= -c2 * dphi0) {
          result.ok = true;
          result.alpha = a;
          return;
        }
        if (dphi_a * (hi - lo) >= 0.0) {
          hi = lo;
          f_hi = f_lo;
        }
        lo = a;
        f_lo = f_a;
        dphi_lo = dphi_a;
      }
      if (std::abs(hi - lo) < 1e-16 * std::max(1.0, std::abs(lo))) break;
    }
    result.ok = false;
  };

  double a_prev = 0.0, f_prev = f0, dphi_prev = dphi0;
  double a = alpha_init;
  const double a_max = 1e8;
  bool first = true;
  while (result.evaluations < max_evaluations) {
    double dphi_a = 0.0;
    const double f_a = phi(a, dphi_a);
    if (!std::isfinite(f_a) || f_a > f0 + c1 * a * dphi0 || (!first && f_a >= f_prev)) {
      zoom(a_prev, f_prev, dphi_prev, a, f_a);
      return result;
    }
    if (std::abs(dphi_a) <= -c2 * dphi0) {
      result.ok = true;
      result.alpha = a;
      return result;
    }
    if (dphi_a >= 0.0) {
      zoom(a, f_a, dphi_a, a_prev, f_prev);
      return result;
    }
    a_prev = a;
    f_prev = f_a;
    dphi_prev = dphi_a;
    a = std::min(2.0 * a, a_max);
    first = false;
  }
  result.ok = false;
  return result;
}

struct TrainConfig {
  int max_iterations = 50000;
  int memory = 10;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  double grad_tolerance = 1e-9;   // max-norm of the gradient
  double loss_tolerance = 1e-12;  // relative decrease over the window
  int stagnation_window = 10;
  std::uint64_t seed = 0;
  std::string init_scheme = "uniform-fan-in";
  double init_scale = 0.1;

  void validate() const {
    if (!(0.0 < wolfe_c1 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0))
      throw ConfigError("train config: need 0 < c1 < c2 < 1");
    if (memory < 1) throw ConfigError("train config: memory must be >= 1");
    if (max_iterations < 0) throw ConfigError("train config: max_iterations must be >= 0");
  }
};

struct MinimizeResult {
  Vec x;
  double f = 0.0;
  Vec grad;
  int iterations = 0;
  std::vector<double> loss_history;  // f0 followed by every accepted iterate
  std::string termination;
};

/// L-BFGS with strong Wolfe steps. Accepted iterates strictly decrease f;
/// termination is by gradient tolerance, loss stagnation, iteration cap or
/// (after one steepest-descent restart) line-search failure.
inline MinimizeResult minimize(const Objective& objective, const Vec& x0, const TrainConfig& cfg) {
  cfg.validate();
  MinimizeResult out;
  out.x = x0;
  out.grad.resize(x0.size());
  out.f = objective(out.x, out.grad);
  if (!std::isfinite(out.f)) throw NumericalError("minimize: objective not finite at start");
  out.loss_history.push_back(out.f);
  out.termination = "iteration-cap";

  std::vector<std::pair<Vec, Vec>> history;
  const double curvature_floor = 1e-12;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    if (out.grad.cwiseAbs().maxCoeff() <= cfg.grad_tolerance) {
      out.termination = "gradient-tolerance";
      break;
    }

    Vec p = lbfgs_direction(history, out.grad);
    if (!(p.dot(out.grad) < 0.0)) {
      history.clear();
      p = -out.grad;
    }
    double alpha_init = history.empty() ? 1.0 / std::max(1.0, out.grad.cwiseAbs().maxCoeff()) : 1.0;

    LineSearchResult ls =
        wolfe_line_search(objective, out.x, out.f, out.grad, p, cfg.wolfe_c1, cfg.wolfe_c2, alpha_init);
    if (!ls.ok && !history.empty()) {
      // restart: drop curvature pairs and retry along steepest descent
      history.clear();
      p = -out.grad;
      alpha_init = 1.0 / std::max(1.0, out.grad.cwiseAbs().maxCoeff());
      ls = wolfe_line_search(objective, out.x, out.f, out.grad, p, cfg.wolfe_c1, cfg.wolfe_c2,
                             alpha_init);
    }
    if (!ls.ok) {
      out.termination = "line-search-failure";
      break;
    }

    Vec s = ls.x - out.x;
    Vec y = ls.grad - out.grad;
    if (y.dot(s) > curvature_floor * s.norm() * y.norm()) {
      history.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(history.size()) > cfg.memory) history.erase(history.begin());
    }

    out.x = std::move(ls.x);
    out.f = ls.f;
    out.grad = std::move(ls.grad);
    out.iterations = iter;
    out.loss_history.push_back(out.f);

    const auto n = out.loss_history.size();
    if (static_cast<int>(n) > cfg.stagnation_window) {
      const double f_old = out.loss_history[n - 1 - static_cast<size_t>(cfg.stagnation_window)];
      if (f_old - out.f <= cfg.loss_tolerance * std::max(std::abs(f_old), 1.0)) {
        out.termination = "loss-stagnation";
        break;
      }
    }
  }
  return out;
}

struct TrainRecord {
  MlpParams params;
  int iterations = 0;
  std::vector<double> loss_history;
  std::string termination;
  double seconds = 0.0;
  TrainingErrorReport report;
};

/// Full-batch minimization of E_T(theta, S)^2 (Eq. 17).
inline TrainRecord train(const MlpParams& params0, const CollocationSets& sets,
                         const ProblemSpec& problem, const TrainConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const CollocationLoss loss(problem, sets);
  const Architecture arch = params0.arch;

  Objective objective = [&](const Vec& x, Vec& grad) {
    const MlpParams p = MlpParams::from_flat(arch, x);
    return loss.value_and_gradient(p, &grad);
  };

  MinimizeResult res = minimize(objective, params0.to_flat(), cfg);

  TrainRecord record;
  record.params = MlpParams::from_flat(arch, res.x);
  record.iterations = res.iterations;
  record.loss_history = std::move(res.loss_history);
  record.termination = res.termination;
  loss.value(record.params, &record.report);
  record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return record;
}

}  // namespace pinncert
