#pragma once

#include <cstddef>
#include <vector>

#include "qcc/common.hpp"

namespace qcc {

/// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on the
/// three-term recurrence.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * pp * pp);
  }
}

/// Product quadrature on the unit disk for the normalized area measure
/// dA = (1/pi) dx dy: Gauss-Legendre radial nodes against the weight 2r dr
/// and angular nodes summing to weight one. Total weight is exactly 1.
struct DiskQuadrature {
  std::vector<double> radial_nodes;     // in (0,1)
  std::vector<double> radial_weights;   // carry the 2r dr factor, sum to 1
  std::vector<double> angular_nodes;    // in [0, 2pi)
  std::vector<double> angular_weights;  // normalized dtheta/(2pi), sum to 1
  std::vector<complexd> angular_units;  // exp(i*angular_nodes)

  std::size_t n_radial() const { return radial_nodes.size(); }
  std::size_t n_angles() const { return angular_nodes.size(); }
  std::size_t size() const { return n_radial() * n_angles(); }

  // flat index k = i * n_angles + j
  complexd node(std::size_t k) const {
    return radial_nodes[k / n_angles()] * angular_units[k % n_angles()];
  }
  double weight(std::size_t k) const {
    return radial_weights[k / n_angles()] * angular_weights[k % n_angles()];
  }

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(complexd{}) * 1.0);
    R acc{};
    for (std::size_t i = 0; i < n_radial(); ++i)
      for (std::size_t j = 0; j < n_angles(); ++j)
        acc += radial_weights[i] * angular_weights[j] * f(radial_nodes[i] * angular_units[j]);
    return acc;
  }
};

namespace detail {
inline void fill_radial(DiskQuadrature& q, int n_radial) {
  std::vector<double> x, w;
  gauss_legendre(n_radial, x, w);
  q.radial_nodes.resize(n_radial);
  q.radial_weights.resize(n_radial);
  double total = 0.0;
  for (int i = 0; i < n_radial; ++i) {
    double r = 0.5 * (x[i] + 1.0);
    q.radial_nodes[i] = r;
    q.radial_weights[i] = w[i] * 0.5 * 2.0 * r;  // 2r dr on [0,1]
    total += q.radial_weights[i];
  }
  for (double& v : q.radial_weights) v /= total;  // pin integral of 1 to 1
}

inline void fill_units(DiskQuadrature& q) {
  q.angular_units.resize(q.angular_nodes.size());
  for (std::size_t j = 0; j < q.angular_nodes.size(); ++j)
    q.angular_units[j] = unit_dir(q.angular_nodes[j]);
}
}  // namespace detail

/// Uniform angular nodes; exact for r^{2k} e^{i m theta} with k < n_radial
/// and |m| < n_angles.
inline DiskQuadrature build_quadrature(int n_radial, int n_angles) {
  if (n_radial < 4) throw ParameterError("build_quadrature: n_radial must be >= 4");
  if (n_angles < 8) throw ParameterError("build_quadrature: n_angles must be >= 8");
  DiskQuadrature q;
  detail::fill_radial(q, n_radial);
  q.angular_nodes.resize(n_angles);
  q.angular_weights.assign(n_angles, 1.0 / n_angles);
  for (int j = 0; j < n_angles; ++j) q.angular_nodes[j] = two_pi * j / n_angles;
  detail::fill_units(q);
  return q;
}

/// Angular nodes laid out as per-panel Gauss-Legendre rules between the given
/// breakpoints (radians). Used when the integrand is only piecewise smooth in
/// the angle, e.g. for piecewise-linear shear symbols.
inline DiskQuadrature build_quadrature_panels(int n_radial, std::vector<double> breakpoints,
                                              int nodes_per_panel) {
  if (n_radial < 4) throw ParameterError("build_quadrature_panels: n_radial must be >= 4");
  if (nodes_per_panel < 2) throw ParameterError("build_quadrature_panels: nodes_per_panel must be >= 2");
  for (double& b : breakpoints) b = wrap_angle(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                    breakpoints.end());
  if (breakpoints.empty()) breakpoints.push_back(0.0);

  DiskQuadrature q;
  detail::fill_radial(q, n_radial);
  std::vector<double> x, w;
  gauss_legendre(nodes_per_panel, x, w);
  for (std::size_t p = 0; p < breakpoints.size(); ++p) {
    double a = breakpoints[p];
    double b = (p + 1 < breakpoints.size()) ? breakpoints[p + 1] : breakpoints[0] + two_pi;
    double half = 0.5 * (b - a);
    for (int i = 0; i < nodes_per_panel; ++i) {
      q.angular_nodes.push_back(wrap_angle(a + half * (x[i] + 1.0)));
      q.angular_weights.push_back(w[i] * half / two_pi);
    }
  }
  detail::fill_units(q);
  return q;
}

}  // namespace qcc
