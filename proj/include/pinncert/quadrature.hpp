#pragma once

#include "pinncert/common.hpp"
#include "pinncert/domain.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace pinncert {

enum class Stratum { Interior, Boundary, Initial };

inline const char* stratum_name(Stratum s) {
  switch (s) {
    case Stratum::Interior: return "interior";
    case Stratum::Boundary: return "boundary";
    default: return "initial";
  }
}

/// Weighted point set on one stratum. Rows of `points` are space-time
/// coordinates (d spatial columns, then time); initial-slice points carry
/// t = 0 exactly and boundary points sit exactly on a face.
struct PointSet {
  Mat points;
  Vec weights;
  Eigen::Index size() const { return points.rows(); }
};

/// Per-axis cell counts for the three midpoint grids.
struct CollocationCounts {
  std::vector<int> interior_space;     // d entries
  int interior_time = 1;
  std::vector<int> boundary_tangential;  // count along axis j when tangential
  int boundary_time = 1;
  std::vector<int> initial_space;      // d entries

  /// The regular family used by the damped-wave experiment: n cells per
  /// spatial axis on every stratum and n time cells (total n^3 + 5n^2 points
  /// in d = 2, e.g. n = 4 -> 144 and n = 25 -> 18750).
  static CollocationCounts regular(int d, int n) {
    if (n < 1) throw ConfigError("collocation: cell count must be >= 1");
    CollocationCounts c;
    c.interior_space.assign(static_cast<size_t>(d), n);
    c.interior_time = n;
    c.boundary_tangential.assign(static_cast<size_t>(d), n);
    c.boundary_time = n;
    c.initial_space.assign(static_cast<size_t>(d), n);
    return c;
  }

  void validate(int d) const {
    auto check_axes = [&](const std::vector<int>& v, const char* what) {
      if (static_cast<int>(v.size()) != d)
        throw ConfigError(std::string("collocation: ") + what + " needs one count per axis");
      for (int n : v)
        if (n < 1) throw ConfigError(std::string("collocation: ") + what + " counts must be >= 1");
    };
    check_axes(interior_space, "interior");
    check_axes(boundary_tangential, "boundary");
    check_axes(initial_space, "initial");
    if (interior_time < 1 || boundary_time < 1)
      throw ConfigError("collocation: time cell counts must be >= 1");
  }
};

/// Midpoint collocation grids S_PDE, S_s, S_t with measure-carrying weights:
/// interior weights sum to |Omega| T, boundary weights to |dOmega| T and
/// initial weights to |Omega|.
struct CollocationSets {
  BoxDomain box;
  PointSet interior;  // S_PDE
  PointSet boundary;  // S_s
  PointSet initial;   // S_t
  Eigen::Index m_pde() const { return interior.size(); }
  Eigen::Index m_s() const { return boundary.size(); }
  Eigen::Index m_t() const { return initial.size(); }
  Eigen::Index total() const { return m_pde() + m_s() + m_t(); }
};

namespace detail {

inline double midpoint(double lo, double hi, int cells, int idx) {
  return lo + (static_cast<double>(idx) + 0.5) * (hi - lo) / static_cast<double>(cells);
}

}  // namespace detail

inline CollocationSets build_sets(const BoxDomain& box, const CollocationCounts& counts) {
  box.validate();
  const int d = box.dim();
  counts.validate(d);

  CollocationSets sets;
  sets.box = box;

  // interior: tensor grid of cell midpoints in Omega x (0,T)
  {
    Eigen::Index m = counts.interior_time;
    for (int n : counts.interior_space) m *= n;
    sets.interior.points.resize(m, d + 1);
    sets.interior.weights = Vec::Constant(m, box.volume() * box.horizon / static_cast<double>(m));
    std::vector<int> idx(static_cast<size_t>(d), 0);
    Eigen::Index row = 0;
    // spatial indices outer, time fastest
    bool done = false;
    while (!done) {
      for (int it = 0; it < counts.interior_time; ++it, ++row) {
        for (int j = 0; j < d; ++j)
          sets.interior.points(row, j) = detail::midpoint(
              box.lower[static_cast<size_t>(j)], box.upper[static_cast<size_t>(j)],
              counts.interior_space[static_cast<size_t>(j)], idx[static_cast<size_t>(j)]);
        sets.interior.points(row, d) = detail::midpoint(0.0, box.horizon, counts.interior_time, it);
      }
      int j = d - 1;
      while (j >= 0 && ++idx[static_cast<size_t>(j)] == counts.interior_space[static_cast<size_t>(j)]) {
        idx[static_cast<size_t>(j)] = 0;
        --j;
      }
      done = j < 0;
    }
  }

  // boundary: for each axis i and each of its two faces, midpoint grid over
  // the tangential axes and time
  {
    Eigen::Index m = 0;
    for (int i = 0; i < d; ++i) {
      Eigen::Index face = counts.boundary_time;
      for (int j = 0; j < d; ++j)
        if (j != i) face *= counts.boundary_tangential[static_cast<size_t>(j)];
      m += 2 * face;
    }
    sets.boundary.points.resize(m, d + 1);
    sets.boundary.weights.resize(m);
    Eigen::Index row = 0;
    for (int i = 0; i < d; ++i) {
      Eigen::Index face_pts = counts.boundary_time;
      double face_measure = box.horizon;
      for (int j = 0; j < d; ++j)
        if (j != i) {
          face_pts *= counts.boundary_tangential[static_cast<size_t>(j)];
          face_measure *= box.edge(j);
        }
      const double w = face_measure / static_cast<double>(face_pts);
      for (int side = 0; side < 2; ++side) {
        const double fixed = side == 0 ? box.lower[static_cast<size_t>(i)]
                                       : box.upper[static_cast<size_t>(i)];
        std::vector<int> idx(static_cast<size_t>(d), 0);
        bool done = false;
        while (!done) {
          for (int it = 0; it < counts.boundary_time; ++it, ++row) {
            for (int j = 0; j < d; ++j)
              sets.boundary.points(row, j) =
                  j == i ? fixed
                         : detail::midpoint(box.lower[static_cast<size_t>(j)],
                                            box.upper[static_cast<size_t>(j)],
                                            counts.boundary_tangential[static_cast<size_t>(j)],
                                            idx[static_cast<size_t>(j)]);
            sets.boundary.points(row, d) = detail::midpoint(0.0, box.horizon, counts.boundary_time, it);
            sets.boundary.weights(row) = w;
          }
          int j = d - 1;
          while (j >= 0 &&
                 (j == i || ++idx[static_cast<size_t>(j)] ==
                                counts.boundary_tangential[static_cast<size_t>(j)])) {
            if (j != i) idx[static_cast<size_t>(j)] = 0;
            --j;
          }
          done = j < 0;
        }
      }
    }
  }

  // initial slice: spatial midpoints at t = 0
  {
    Eigen::Index m = 1;
    for (int n : counts.initial_space) m *= n;
    sets.initial.points.resize(m, d + 1);
    sets.initial.weights = Vec::Constant(m, box.volume() / static_cast<double>(m));
    std::vector<int> idx(static_cast<size_t>(d), 0);
    for (Eigen::Index row = 0; row < m; ++row) {
      for (int j = 0; j < d; ++j)
        sets.initial.points(row, j) = detail::midpoint(
            box.lower[static_cast<size_t>(j)], box.upper[static_cast<size_t>(j)],
            counts.initial_space[static_cast<size_t>(j)], idx[static_cast<size_t>(j)]);
      sets.initial.points(row, d) = 0.0;
      int j = d - 1;
      while (j >= 0 && ++idx[static_cast<size_t>(j)] == counts.initial_space[static_cast<size_t>(j)]) {
        idx[static_cast<size_t>(j)] = 0;
        --j;
      }
    }
  }

  return sets;
}

/// Measure-weighted midpoint quadrature sum w_m f(y_m).
inline double midpoint_integrate(const Vec& values, const Vec& weights) {
  if (values.size() != weights.size())
    throw ContractViolation("midpoint_integrate: values/weights length mismatch");
  if (!values.allFinite()) throw NumericalError("midpoint_integrate: non-finite value");
  return values.dot(weights);
}

/// Midpoint-rule accuracy bound C_geom ||f||_{C^2} M^{-2/dim}.
inline double quadrature_error_bound(double c_geom, double f_c2_norm, Eigen::Index m, int dim) {
  if (c_geom <= 0.0 || f_c2_norm < 0.0 || m < 1 || dim < 1)
    throw ConfigError("quadrature_error_bound: inputs must be positive");
  return c_geom * f_c2_norm * std::pow(static_cast<double>(m), -2.0 / static_cast<double>(dim));
}

/// CSV export of all three strata (columns: stratum, coordinates, weight).
inline void write_points_csv(const CollocationSets& sets, std::ostream& os) {
  const int d = sets.box.dim();
  os << "stratum";
  for (int j = 0; j < d; ++j) os << ",x" << j;
  os << ",t,weight\n";
  os.precision(17);
  auto dump = [&](const PointSet& ps, const char* name) {
    for (Eigen::Index r = 0; r < ps.size(); ++r) {
      os << name;
      for (int j = 0; j <= d; ++j) os << ',' << ps.points(r, j);
      os << ',' << ps.weights(r) << '\n';
    }
  };
  dump(sets.interior, "interior");
  dump(sets.boundary, "boundary");
  dump(sets.initial, "initial");
}

}  // namespace pinncert
