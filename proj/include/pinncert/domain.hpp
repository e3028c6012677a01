#pragma once

#include "pinncert/common.hpp"

#include <cmath>
#include <vector>

namespace pinncert {

/// Axis-aligned spatial box Omega = prod_i [lower_i, upper_i] with time
/// horizon T; all geometric quantities of the space-time cylinder
/// Omega_T = Omega x [0,T] are closed forms.
struct BoxDomain {
  std::vector<double> lower;
  std::vector<double> upper;
  double horizon = 0.0;  // T

  BoxDomain() = default;
  BoxDomain(std::vector<double> lo, std::vector<double> hi, double T)
      : lower(std::move(lo)), upper(std::move(hi)), horizon(T) {
    validate();
  }

  void validate() const {
    if (lower.empty() || lower.size() != upper.size())
      throw ConfigError("box: lower/upper must be nonempty and equally sized");
    for (size_t i = 0; i < lower.size(); ++i)
      if (!(lower[i] < upper[i])) throw ConfigError("box: lower_i < upper_i required");
    if (!(horizon > 0.0)) throw ConfigError("box: horizon T must be positive");
  }

  int dim() const { return static_cast<int>(lower.size()); }
  double edge(int i) const { return upper[static_cast<size_t>(i)] - lower[static_cast<size_t>(i)]; }

  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= edge(i);
    return v;
  }

  /// |dOmega| = sum over axes of 2 * (volume / edge_i).
  double boundary_measure() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += 2.0 * volume() / edge(i);
    return s;
  }

  double diameter_sq() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += edge(i) * edge(i);
    return s;
  }

  double diameter() const { return std::sqrt(diameter_sq()); }

  double min_edge() const {
    double m = edge(0);
    for (int i = 1; i < dim(); ++i) m = std::min(m, edge(i));
    return m;
  }

  double inradius() const { return 0.5 * min_edge(); }

  /// Diameter h of Omega x [0,T].
  double spacetime_diameter() const {
    return std::sqrt(diameter_sq() + horizon * horizon);
  }

  /// Radius of the largest (d+1)-ball inscribed in Omega x [0,T].
  double spacetime_inradius() const { return 0.5 * std::min(min_edge(), horizon); }

  static BoxDomain unit_square(double T) { return BoxDomain({-0.5, -0.5}, {0.5, 0.5}, T); }
};

}  // namespace pinncert
