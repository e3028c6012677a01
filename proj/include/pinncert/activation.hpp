#pragma once

#include "pinncert/common.hpp"

#include <cmath>
#include <vector>

namespace pinncert {

/// Sup norms sup|sigma^(i)| of an activation and its derivatives up to
/// order n, plus the C^n norm max_i sup|sigma^(i)|.
struct ActivationNormTable {
  int order = 0;
  std::vector<double> sup_norms;  // index i = derivative order
  double cn_norm = 0.0;

  double sup(int i) const { return sup_norms.at(static_cast<size_t>(i)); }
};

namespace detail {

// Derivatives of tanh expressed through t = tanh(z).
inline double tanh_derivative_from_value(int order, double t) {
  const double g = 1.0 - t * t;
  switch (order) {
    case 0: return t;
    case 1: return g;
    case 2: return -2.0 * t * g;
    case 3: return -2.0 * g * (1.0 - 3.0 * t * t);
    case 4: return 8.0 * t * g * (2.0 - 3.0 * t * t);
    default:
      throw ConfigError("tanh derivative order > 4 not supported");
  }
}

}  // namespace detail

/// Sup norms of tanh and its first n derivatives, obtained by a dense scan
/// of [-20, 20] (the derivatives decay to 0 beyond that) together with the
/// |z| -> inf limits of tanh itself.
inline ActivationNormTable tanh_norm_table(int n) {
  if (n < 0 || n > 4) throw ConfigError("tanh norm table supports orders 0..4");
  static const std::vector<double> kSup = [] {
    std::vector<double> sup(5, 0.0);
    sup[0] = 1.0;  // lim_{z->inf} tanh(z)
    const double half = 20.0;
    const double step = 1e-5;
    const auto samples = static_cast<long>(half / step);
    for (long i = 0; i <= samples; ++i) {
      const double t = std::tanh(static_cast<double>(i) * step);  // odd symmetry
      for (int ord = 1; ord <= 4; ++ord) {
        const double v = std::abs(detail::tanh_derivative_from_value(ord, t));
        if (v > sup[static_cast<size_t>(ord)]) sup[static_cast<size_t>(ord)] = v;
      }
    }
    return sup;
  }();

  ActivationNormTable table;
  table.order = n;
  table.sup_norms.assign(kSup.begin(), kSup.begin() + n + 1);
  table.cn_norm = 0.0;
  for (double v : table.sup_norms) table.cn_norm = std::max(table.cn_norm, v);
  return table;
}

}  // namespace pinncert
