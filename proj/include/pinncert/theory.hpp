#pragma once

#include "pinncert/bounds.hpp"
#include "pinncert/common.hpp"
#include "pinncert/domain.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace pinncert {

/// Inputs of the width/rate formulas. The enclosing integer box
/// [a_i, b_i]^d strictly contains Omega; seminorm/norm entries are
/// user-supplied (they are properties of u - u_theta that the theory takes
/// as given).
struct TheoryInputs {
  int d = 2;
  int k = 4;          // Sobolev regularity index, k > 3
  int n = 2;          // Taylor order of the approximation construction
  double T = 0.5;
  std::vector<int> hat_lower;  // integers a_i
  std::vector<int> hat_upper;  // integers b_i
  double delta = 1.0;

  double gamma = 0.0;          // r = 4 gamma / (d+1-4 gamma)
  double growth_c = 0.0;
  double h_seminorm = -1.0;            // |u - u_theta|_{H^{k+1}}
  std::vector<double> w_linf = {};     // ||u - u_theta||_{W^{l,inf}}, l = 0,1,2
  double gn_constant = -1.0;           // Gagliardo-Nirenberg constant (mandatory for the f-term)
  double u_h2 = 0.0, u_l2 = 0.0;       // norms of u entering the f-term

  double r() const { return 4.0 * gamma / (d + 1.0 - 4.0 * gamma); }

  double box_edge_sum() const {
    double s = 0.0;
    for (size_t i = 0; i < hat_lower.size(); ++i) s += hat_upper[i] - hat_lower[i];
    return s;
  }
  double box_edge_product() const {
    double p = 1.0;
    for (size_t i = 0; i < hat_lower.size(); ++i) p *= hat_upper[i] - hat_lower[i];
    return p;
  }

  void validate() const {
    if (k <= 3) throw HypothesisViolation("theory: k > 3 required (assumption A2)");
    if (n < 2) throw HypothesisViolation("theory: n >= 2 required");
    if (d < 1 || d > 5) throw HypothesisViolation("theory: 1 <= d < 6 required");
    if (hat_lower.size() != static_cast<size_t>(d) || hat_upper.size() != static_cast<size_t>(d))
      throw ConfigError("theory: enclosing box needs d integer intervals");
    for (size_t i = 0; i < hat_lower.size(); ++i)
      if (!(hat_lower[i] < hat_upper[i])) throw ConfigError("theory: a_i < b_i required");
    if (delta <= 0.0) throw ConfigError("theory: delta > 0 required");
    if (gamma < 0.0 || gamma >= 1.0) throw ConfigError("theory: gamma in [0,1) required");
    if (!(T > 0.0)) throw ConfigError("theory: T > 0 required");
  }
};

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// Hidden-layer widths of the approximating tanh network:
///   width1 = 3 ceil((k+n-1)/2) C(d+k+1, k) + ceil((N-1)(T + sum(b_i - a_i)))
///   width2 = 3 (d+3) N^{d+1} ceil((d+n+1)/2) ceil(T prod(b_i - a_i)).
inline std::pair<long long, long long> q1_widths(const TheoryInputs& in, int N) {
  in.validate();
  if (N <= 5) throw HypothesisViolation("q1_widths: N > 5 required");
  const double w1 = 3.0 * std::ceil((in.k + in.n - 1) / 2.0) * binomial(in.d + in.k + 1, in.k) +
                    std::ceil((N - 1) * (in.T + in.box_edge_sum()));
  const double w2 = 3.0 * (in.d + 3) * std::pow(static_cast<double>(N), in.d + 1) *
                    std::ceil((in.d + in.n + 1) / 2.0) * std::ceil(in.T * in.box_edge_product());
  return {static_cast<long long>(std::llround(w1)), static_cast<long long>(std::llround(w2))};
}

struct LambdaBeta {
  double lambda = 0.0;
  double beta = 0.0;
  double c_l = 0.0;
};

/// lambda_l(N) = 2^l 3^{d+1} (1+delta) ln^l(beta_{l,delta} N^{d+k+4}) and its
/// ingredients. Computed through logarithms so large k stay representable.
inline LambdaBeta lambda_beta(const TheoryInputs& in, int l, int N) {
  in.validate();
  if (l < 0 || l > 2) throw ConfigError("lambda_beta: l in {0,1,2}");
  if (N <= 5) throw HypothesisViolation("lambda_beta: N > 5 required");
  if (in.h_seminorm < 0.0)
    throw ConfigError("lambda_beta: supply the H^{k+1} seminorm of u - u_theta");
  if (static_cast<int>(in.w_linf.size()) <= l)
    throw ConfigError("lambda_beta: supply ||u - u_theta||_{W^{l,inf}} for l = 0..2");

  // C_l = max_{0<=i<=l} C(d+i, i)^{1/2} ((k+1-i)!)^{1/2} /
  //       (ceil((k+1-i)/(d+1))!)^{(d+1)/2} (3 sqrt(d+1)/pi)^{k+1-i} |u-u_theta|_{H^{k+1}}
  double log_cl = -kInf;
  for (int i = 0; i <= l; ++i) {
    const double m = in.k + 1 - i;
    const double lg = 0.5 * std::log(binomial(in.d + i, i)) + 0.5 * std::lgamma(m + 1.0) -
                      0.5 * (in.d + 1.0) * std::lgamma(std::ceil(m / (in.d + 1.0)) + 1.0) +
                      m * std::log(3.0 * std::sqrt(in.d + 1.0) / M_PI);
    log_cl = std::max(log_cl, lg);
  }
  log_cl += std::log(in.h_seminorm);

  LambdaBeta out;
  out.c_l = std::exp(log_cl);
  const double log_num = l * (in.d + 1.0) * std::log(2.0) + std::log(5.0) +
                         std::log(std::max(in.T * in.box_edge_product(), in.d + 1.0)) +
                         std::log(std::max(in.w_linf[static_cast<size_t>(l)], 1.0));
  const double log_den =
      (in.d + 1.0) * std::log(3.0) + std::log(in.delta) + std::min(0.0, log_cl);
  const double log_beta = log_num - log_den;
  out.beta = std::exp(log_beta);
  const double ln_arg = log_beta + (in.d + in.k + 4.0) * std::log(static_cast<double>(N));
  out.lambda = std::pow(2.0, l) * std::pow(3.0, in.d + 1.0) * (1.0 + in.delta) *
               std::pow(ln_arg, l);
  return out;
}

/// The six residual bounds of the width theorem at a given N.
struct ResidualBounds {
  double pde = 0.0;
  double su = 0.0;
  double sut = 0.0;
  double u0 = 0.0;
  double u1 = 0.0;
  double gradu = 0.0;
  double sum() const { return pde + su + sut + u0 + u1 + gradu; }
};

inline ResidualBounds q1_residual_bounds(const TheoryInputs& in, int N, const BoxDomain& omega,
                                         double a_linf) {
  in.validate();
  const LambdaBeta l0 = lambda_beta(in, 0, N);
  const LambdaBeta l1 = lambda_beta(in, 1, N);
  const LambdaBeta l2 = lambda_beta(in, 2, N);
  const double trace = trace_constant(omega);
  const double sd = std::sqrt(static_cast<double>(in.d));
  const double Nk1 = std::pow(static_cast<double>(N), -(in.k - 1.0));
  const double Nk = std::pow(static_cast<double>(N), -static_cast<double>(in.k));
  const double Nk1m = std::pow(static_cast<double>(N), -(in.k + 1.0));

  ResidualBounds out;
  out.pde = (l2.c_l + sd) * l2.lambda * Nk1 + a_linf * l1.c_l * l1.lambda * Nk;
  if (in.growth_c > 0.0) {
    if (in.gn_constant <= 0.0)
      throw ConfigError("q1_residual_bounds: semilinear term needs the Gagliardo-Nirenberg constant");
    const double r = in.r();
    const double g = in.gamma;
    const double e2 = l2.c_l * l2.lambda * Nk1;   // H^2 approximation error bound
    const double e0 = l0.c_l * l0.lambda * Nk1m;  // L^2 approximation error bound
    const double c_tilde =
        in.growth_c * in.growth_c * std::pow(2.0, 2.0 * r - 1.0) * in.gn_constant *
        in.gn_constant *
        (std::pow(in.u_h2, 2.0 * r * g) * std::pow(in.u_l2, 2.0 * r * (1.0 - g)) +
         std::pow(e2, 2.0 * r * g) * std::pow(e0, 2.0 * r * (1.0 - g)) /
             ((r + 1.0) * (r + 1.0)));
    out.pde += c_tilde * std::pow(e2, g) * std::pow(e0, 1.0 - g);
  }
  out.su = trace * l1.c_l * l1.lambda * Nk;
  out.sut = trace * l2.c_l * l2.lambda * Nk1;
  out.u0 = trace * l1.c_l * l1.lambda * Nk;
  out.u1 = trace * l2.c_l * l2.lambda * Nk1;
  out.gradu = sd * trace * l2.c_l * l2.lambda * Nk1;
  return out;
}

/// One row of the rate tables: the generalization-rate of the width theorem
/// and the training-rate with the regular-grid training-set sizes
/// M_PDE = N^{d+1}, M_t = N^d, M_s = 2 d N^d.
struct RateRow {
  int N = 0;
  double gen_bound = 0.0;      // sum of the six residual bounds
  double gen_rate = 0.0;       // ln^2(N) N^{-k+1}
  long long m_pde = 0, m_t = 0, m_s = 0;
  double train_rate = 0.0;     // ln^4(N) N^{2(-k+1)} + M_s^{-2/d} + M_t^{-2/d} + M_PDE^{-2/(d+1)}
};

inline std::vector<RateRow> rate_curves(const TheoryInputs& in, const BoxDomain& omega,
                                        double a_linf, const std::vector<int>& n_values) {
  std::vector<RateRow> rows;
  rows.reserve(n_values.size());
  for (int N : n_values) {
    RateRow row;
    row.N = N;
    row.gen_bound = q1_residual_bounds(in, N, omega, a_linf).sum();
    const double lnN = std::log(static_cast<double>(N));
    row.gen_rate = lnN * lnN * std::pow(static_cast<double>(N), -(in.k - 1.0));
    row.m_pde = static_cast<long long>(std::pow(static_cast<double>(N), in.d + 1));
    row.m_t = static_cast<long long>(std::pow(static_cast<double>(N), in.d));
    row.m_s = 2LL * in.d * row.m_t;
    row.train_rate = std::pow(lnN, 4) * std::pow(static_cast<double>(N), 2.0 * (-in.k + 1.0)) +
                     std::pow(static_cast<double>(row.m_s), -2.0 / in.d) +
                     std::pow(static_cast<double>(row.m_t), -2.0 / in.d) +
                     std::pow(static_cast<double>(row.m_pde), -2.0 / (in.d + 1.0));
    rows.push_back(row);
  }
  return rows;
}

/// A-priori sizing of hypothesis space and training set for a target
/// accuracy. Exponents are evaluated so every threshold grows as the target
/// shrinks; the printed forms are carried verbatim for audit.
struct SizingPlan {
  double epsilon = 0.0;
  double eta = 0.0;        // 2(18d + 55)
  double n_raw = 0.0;      // epsilon^{-1/(k-eta)}
  bool n_exceeds_5 = false;
  double m_pde = 0.0;
  double m_t = 0.0;
  double m_s = 0.0;
  double r_min = 0.0;              // epsilon^{-1/(k-eta)} ln(1/epsilon)
  double w_min_power = 0.0;        // epsilon^{-(d+1)/(k-eta)}; multiply by C of the width theorem
  int l_min = 3;
  std::string w_min_symbol;
  std::vector<std::string> printed_exponents;
};

inline SizingPlan apriori_sizes(double epsilon, int d, double k) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ConfigError("apriori_sizes: epsilon in (0,1) required");
  if (d < 1) throw ConfigError("apriori_sizes: d >= 1 required");
  SizingPlan plan;
  plan.epsilon = epsilon;
  plan.eta = 2.0 * (18.0 * d + 55.0);
  if (!(k > plan.eta)) throw HypothesisViolation("apriori_sizes: k > eta = 2(18d+55) required");
  const double km = k - plan.eta;
  const double inv_eps = 1.0 / epsilon;

  plan.n_raw = std::pow(inv_eps, 1.0 / km);
  plan.n_exceeds_5 = plan.n_raw > 5.0;
  plan.m_pde = std::ceil(std::pow(inv_eps, (d + 1.0) * (plan.eta - 1.0) / km));
  plan.m_t = std::ceil(std::pow(inv_eps, d * (plan.eta - 1.0) / km));
  plan.m_s = std::ceil(std::pow(inv_eps, 2.0 * d * (plan.eta - 1.0) / km));
  plan.r_min = std::pow(inv_eps, 1.0 / km) * std::log(inv_eps);
  plan.w_min_power = std::pow(inv_eps, (d + 1.0) / km);
  plan.w_min_symbol = "C * eps^(-(d+1)/(k-eta)) with C from the width theorem";
  plan.printed_exponents = {
      "M_PDE >= eps^(-(-(d+1)(eta-1))/(k-eta))  [as printed]",
      "M_t   >= eps^(-(-d(eta-1))/(k-eta))  [as printed]",
      "M_s   >= eps^(-(-2d(eta-1))/(k-eta))  [as printed]",
  };
  return plan;
}

}  // namespace pinncert
