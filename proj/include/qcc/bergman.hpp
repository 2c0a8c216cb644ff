#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "qcc/common.hpp"
#include "qcc/geometry.hpp"
#include "qcc/qcmap.hpp"
#include "qcc/quadrature.hpp"

namespace qcc {

struct SingularKernel : NumericalError { using NumericalError::NumericalError; };

/// Function sampled at the nodes of a DiskQuadrature (flat layout
/// k = i * n_angles + j). The quadrature is always passed alongside.
struct GridFunction {
  std::vector<complexd> values;
  std::string description;
};

template <class F>
GridFunction grid_function(const DiskQuadrature& q, F&& f, std::string description = {}) {
  GridFunction g;
  g.values.resize(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) g.values[k] = f(q.node(k));
  g.description = std::move(description);
  return g;
}

enum class MatrixMeaning { gram_CstarC, toeplitz_TJ, kernel_Pphi };

struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  int basis_degree = 0;
  MatrixMeaning meaning = MatrixMeaning::gram_CstarC;
};

/// Orthonormal monomial basis of the Bergman space under normalized area
/// measure: e_n(z) = sqrt(n+1) z^n.
inline complexd bergman_basis(int n, complexd z) {
  if (n < 0) throw DomainError("bergman_basis: n must be >= 0");
  return std::sqrt(n + 1.0) * std::pow(z, n);
}

namespace detail {

/// Accumulates G += V^H diag(scale) V over node chunks, where row k of V is
/// (e_0(u_k), ..., e_N(u_k)).
inline Eigen::MatrixXcd weighted_basis_gram(const std::vector<complexd>& points,
                                            const std::vector<double>& scales, int N) {
  const int cols = N + 1;
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(cols, cols);
  const std::size_t chunk = 4096;
  Eigen::MatrixXcd V(std::min(chunk, points.size()), cols);
  for (std::size_t base = 0; base < points.size(); base += chunk) {
    std::size_t rows = std::min(chunk, points.size() - base);
    if (static_cast<std::size_t>(V.rows()) != rows) V.resize(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      double s = std::sqrt(scales[base + r]);
      complexd u = points[base + r];
      complexd p = s;  // sqrt(scale) * u^n, scaled into the basis below
      for (int n = 0; n < cols; ++n) {
        V(r, n) = std::sqrt(n + 1.0) * p;
        p *= u;
      }
    }
    G.noalias() += V.adjoint() * V;
  }
  return G;
}

}  // namespace detail

/// Gram matrix of {e_n o phi} in L^2(D): the matrix of C_phi^* C_phi in the
/// basis e_n, assembled on the z side by G_mn = int e_n(phi) conj(e_m(phi)) dA.
inline OperatorMatrix composition_gram(const QcMap& map, int N, const DiskQuadrature& q) {
  if (N < 1) throw ParameterError("composition_gram: basis degree must be >= 1");
  std::vector<complexd> pts(q.size());
  std::vector<double> ws(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    pts[k] = map.evaluate(q.node(k));
    ws[k] = q.weight(k);
  }
  return {detail::weighted_basis_gram(pts, ws, N), N, MatrixMeaning::gram_CstarC};
}

/// The same operator assembled on the w side as the Toeplitz matrix of the
/// inverse Jacobian: (T_J)_mn = int e_n conj(e_m) J(., phi^{-1}) dA.
inline OperatorMatrix toeplitz_direct(const QcMap& map, int N, const DiskQuadrature& q,
                                      double jacobian_cap = 1e12) {
  if (N < 1) throw ParameterError("toeplitz_direct: basis degree must be >= 1");
  QcMap inv = map.inverse();
  std::vector<complexd> pts(q.size());
  std::vector<double> ws(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    complexd w = q.node(k);
    double J = inv.jacobian(w);
    if (!(J < jacobian_cap))
      throw NumericalError("toeplitz_direct: inverse Jacobian exceeds the configured cap");
    pts[k] = w;
    ws[k] = q.weight(k) * J;
  }
  return {detail::weighted_basis_gram(pts, ws, N), N, MatrixMeaning::toeplitz_TJ};
}

/// Spectral norm sqrt(lambda_max) of a Hermitian PSD operator matrix.
inline double operator_norm(const OperatorMatrix& m) {
  Eigen::MatrixXcd H = 0.5 * (m.entries + m.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("operator_norm: eigensolver failed to converge");
  double lam = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(lam, 0.0));
}

/// ||C_phi f||_{L^2} for the normalized reproducing-kernel test function
/// f(w) = (1-|a|^2)/(1-conj(a) w)^2 at a = phi(z0); a certified lower bound
/// for ||C_phi|| up to quadrature error.
inline double test_kernel_lower_bound(const QcMap& map, complexd z0, const DiskQuadrature& q) {
  if (!(std::abs(z0) < 1.0)) throw DomainError("test_kernel_lower_bound: |z0| must be < 1");
  complexd a = map.evaluate(z0);
  double na = 1.0 - std::norm(a);
  double acc = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    complexd den = 1.0 - std::conj(a) * map.evaluate(q.node(k));
    acc += q.weight(k) * sq(na / std::norm(den));
  }
  return std::sqrt(acc);
}

struct EssentialNormProxy {
  double proxy_norm = 0.0;         // ||C_phi (I - P_{n_cut})|| proxy from the Gram tail block
  double geometric_quantity = 0.0; // sup of N_phi(z)/log(1/|z|) on the refinement grid
};

/// Tail-block proxy for the essential norm together with the geometric
/// counting-function quantity it is compared against.
inline EssentialNormProxy essential_norm_proxy(const QcMap& map, int N, int n_cut,
                                               const DiskQuadrature& q) {
  if (n_cut < 0 || n_cut > N / 2)
    throw ParameterError("essential_norm_proxy: require 0 <= n_cut <= N/2");
  OperatorMatrix G = composition_gram(map, N, q);
  int tail = N - n_cut;
  OperatorMatrix block{G.entries.bottomRightCorner(tail, tail), N, MatrixMeaning::gram_CstarC};

  // sup of N_phi / log(1/|z|) on the refinement grid r = 1 - 2^{-j}. The
  // modulus of every zoo member is radial, so the deep tail is evaluated
  // through the exact gap identity N = -log1p(-preimage_gap); the angular
  // sweep through counting_N stops where |r e^{i a}| still carries the
  // radius to better than the comparison tolerance.
  double geo = 0.0;
  for (int j = 8; j <= 40; ++j) {
    double g = std::ldexp(1.0, -j);
    double denom = -std::log1p(-g);  // log(1/r) without cancellation
    geo = std::max(geo, -std::log1p(-map.preimage_gap(g)) / denom);
    if (j <= 16) {
      for (int a = 0; a < 64; ++a) {
        complexd z = (1.0 - g) * unit_dir(two_pi * a / 64.0);
        geo = std::max(geo, map.counting_N(z) / denom);
      }
    }
  }
  return {operator_norm(block), geo};
}

/// Discretized singular operator
///   (P_phi f)(z) = int f(w) / (1 - phi(z) conj(phi(w)))^2 dA(w)
/// evaluated at every node of q. Nodes never collide, so the kernel diagonal
/// is large but finite; an optional floor on |1-phi phi|^2 exists for stress
/// tests. Zero entries of f are skipped.
inline GridFunction apply_P_phi(const QcMap& map, const GridFunction& f, const DiskQuadrature& q,
                                double regularization = 0.0) {
  if (f.values.size() != q.size()) throw ParameterError("apply_P_phi: grid size mismatch");
  std::vector<complexd> u(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) u[k] = map.evaluate(q.node(k));

  std::vector<std::size_t> support;
  std::vector<complexd> wf;
  for (std::size_t k = 0; k < q.size(); ++k)
    if (f.values[k] != complexd{}) {
      support.push_back(k);
      wf.push_back(q.weight(k) * f.values[k]);
    }

  GridFunction out;
  out.values.assign(q.size(), complexd{});
  out.description = "P_phi[" + f.description + "]";
  for (std::size_t i = 0; i < q.size(); ++i) {
    complexd acc{};
    for (std::size_t s = 0; s < support.size(); ++s) {
      complexd d = 1.0 - u[i] * std::conj(u[support[s]]);
      double mag2 = std::norm(d);
      if (mag2 < 1e-14) {
        if (regularization <= 0.0)
          throw SingularKernel("apply_P_phi: kernel denominator below 1e-14");
        if (mag2 < regularization) d *= std::sqrt(regularization / mag2);
      } else if (regularization > 0.0 && mag2 < regularization) {
        d *= std::sqrt(regularization / mag2);
      }
      acc += wf[s] / (d * d);
    }
    out.values[i] = acc;
  }
  return out;
}

struct PPhiPlusSplit {
  GridFunction near_part;
  GridFunction far_part;
  GridFunction total;
};

/// Absolute-kernel companion P^+_phi with the kernel split at
/// |1 - phi(z) conj(phi(w))| = r0 into near and far parts.
inline PPhiPlusSplit apply_P_phi_plus(const QcMap& map, const GridFunction& f,
                                      const DiskQuadrature& q, double r0) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw ParameterError("apply_P_phi_plus: r0 must lie in (0,1)");
  if (f.values.size() != q.size()) throw ParameterError("apply_P_phi_plus: grid size mismatch");
  std::vector<complexd> u(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) u[k] = map.evaluate(q.node(k));

  std::vector<std::size_t> support;
  std::vector<double> wf;
  for (std::size_t k = 0; k < q.size(); ++k)
    if (f.values[k] != complexd{}) {
      support.push_back(k);
      wf.push_back(q.weight(k) * std::abs(f.values[k]));
    }

  PPhiPlusSplit out;
  out.near_part.values.assign(q.size(), complexd{});
  out.far_part.values.assign(q.size(), complexd{});
  out.total.values.assign(q.size(), complexd{});
  out.near_part.description = "P_phi_plus_near[" + f.description + "]";
  out.far_part.description = "P_phi_plus_far[" + f.description + "]";
  out.total.description = "P_phi_plus[" + f.description + "]";
  for (std::size_t i = 0; i < q.size(); ++i) {
    double near = 0.0, far = 0.0;
    for (std::size_t s = 0; s < support.size(); ++s) {
      double mag2 = std::norm(1.0 - u[i] * std::conj(u[support[s]]));
      if (mag2 < 1e-14) throw SingularKernel("apply_P_phi_plus: kernel denominator below 1e-14");
      double term = wf[s] / mag2;
      (mag2 >= r0 * r0 ? far : near) += term;
    }
    out.near_part.values[i] = near;
    out.far_part.values[i] = far;
    out.total.values[i] = near + far;
  }
  return out;
}

/// Right-hand side of the dyadic domination bound: the two shifted Carleson
/// box systems truncated at max_level, summed as chi(z) chi(w) / |Q_I|.
inline double dyadic_box_kernel_sum(complexd z, complexd w, int max_level) {
  double gz = 1.0 - std::abs(z), gw = 1.0 - std::abs(w);
  double fz = wrap_angle(std::arg(z)) / two_pi, fw = wrap_angle(std::arg(w)) / two_pi;
  double sum = 0.0;
  for (double beta : {0.0, 1.0 / 3.0}) {
    DyadicGrid grid(beta, max_level);
    for (int j = 0; j <= max_level; ++j) {
      double t = std::ldexp(1.0, -j);
      if (gz > t || gw > t) continue;  // box depth 1-t <= |.|
      if (grid.index_containing(j, fz) != grid.index_containing(j, fw)) continue;
      sum += 1.0 / box_area(t);
    }
  }
  return sum;
}

inline double l1_norm(const GridFunction& f, const DiskQuadrature& q) {
  double acc = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) acc += q.weight(k) * std::abs(f.values[k]);
  return acc;
}

/// Quadrature L^p norm (quasi-norm for p < 1).
inline double lp_norm(const GridFunction& f, double p, const DiskQuadrature& q) {
  if (!(p > 0.0)) throw ParameterError("lp_norm: p must be positive");
  double acc = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k)
    acc += q.weight(k) * std::pow(std::abs(f.values[k]), p);
  return std::pow(acc, 1.0 / p);
}

/// sup over the alpha grid of alpha |{ |P_phi f| > alpha }| / ||f||_1.
inline double weak11_ratio(const QcMap& map, const GridFunction& f, const DiskQuadrature& q,
                           const std::vector<double>& alphas) {
  double n1 = l1_norm(f, q);
  if (!(n1 > 0.0)) throw ParameterError("weak11_ratio: ||f||_1 must be positive");
  GridFunction Pf = apply_P_phi(map, f, q);
  double best = 0.0;
  for (double alpha : alphas) {
    double meas = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k)
      if (std::abs(Pf.values[k]) > alpha) meas += q.weight(k);
    best = std::max(best, alpha * meas / n1);
  }
  return best;
}

/// Kolmogorov-type diagnostic behind the p < 1 estimates:
/// ||P_phi f||_p / ||f||_1. This is the quotient a weak-(1,1) operator keeps
/// bounded; the reversed pairing ||P f||_1 / ||f||_p blows up like 1/||f||_p
/// under concentration for every symbol, so it carries no information.
inline double lp_to_l1_check(const QcMap& map, const GridFunction& f, double p,
                             const DiskQuadrature& q) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("lp_to_l1_check: p must lie in (0,1)");
  GridFunction Pf = apply_P_phi(map, f, q);
  return lp_norm(Pf, p, q) / l1_norm(f, q);
}

/// I_phi f(z) = int f(w) / (1 - z conj(phi(w)))^2 dA(w) on an arbitrary
/// evaluation grid; composing with phi reproduces P_phi.
inline std::vector<complexd> apply_I_phi(const QcMap& map, const GridFunction& f,
                                         const DiskQuadrature& q,
                                         const std::vector<complexd>& z_grid) {
  if (f.values.size() != q.size()) throw ParameterError("apply_I_phi: grid size mismatch");
  std::vector<complexd> u;
  std::vector<complexd> wf;
  for (std::size_t k = 0; k < q.size(); ++k)
    if (f.values[k] != complexd{}) {
      u.push_back(map.evaluate(q.node(k)));
      wf.push_back(q.weight(k) * f.values[k]);
    }
  std::vector<complexd> out(z_grid.size());
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    if (!(std::abs(z_grid[i]) < 1.0)) throw DomainError("apply_I_phi: |z| must be < 1");
    complexd acc{};
    for (std::size_t s = 0; s < u.size(); ++s) {
      complexd d = 1.0 - z_grid[i] * std::conj(u[s]);
      acc += wf[s] / (d * d);
    }
    out[i] = acc;
  }
  return out;
}

struct IctRow {
  complexd z;
  double value = 0.0;
  double normalized = 0.0;  // value * (1-|z|^2)^c
  bool well_resolved = true;
};

/// I_{c,t}(z) = int (1-|w|^2)^t / |1 - z conj(w)|^{2+t+c} dA(w); the
/// normalized column should stabilize as |z| -> 1. Rows whose z outruns the
/// radial resolution are flagged rather than rejected.
inline std::vector<IctRow> integral_estimate_Ict(double c, double t,
                                                 const std::vector<complexd>& z_list,
                                                 const DiskQuadrature& q) {
  if (!(c > 0.0)) throw DomainError("integral_estimate_Ict: c must be positive");
  if (!(t > -1.0)) throw DomainError("integral_estimate_Ict: t must exceed -1");
  std::vector<IctRow> rows;
  rows.reserve(z_list.size());
  double r_resolved = 1.0 - 2.0 / static_cast<double>(q.n_radial());
  for (complexd z : z_list) {
    if (!(std::abs(z) < 1.0)) throw DomainError("integral_estimate_Ict: |z| must be < 1");
    double acc = 0.0;
    for (std::size_t i = 0; i < q.n_radial(); ++i) {
      double rw = q.radial_weights[i];
      double base = std::pow(1.0 - sq(q.radial_nodes[i]), t);
      for (std::size_t j = 0; j < q.n_angles(); ++j) {
        complexd w = q.radial_nodes[i] * q.angular_units[j];
        acc += rw * q.angular_weights[j] * base /
               std::pow(std::abs(1.0 - z * std::conj(w)), 2.0 + t + c);
      }
    }
    rows.push_back({z, acc, acc * std::pow(1.0 - std::norm(z), c), std::abs(z) <= r_resolved});
  }
  return rows;
}

/// Circle mean of f o phi at radius r divided by the sup over t of circle
/// means of f; for subharmonic f this is reported against 4/(1-psi_K(r)).
inline double subordination_ratio(const QcMap& map, const std::function<double(complexd)>& f,
                                  double r, int n_theta = 512) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("subordination_ratio: r must lie in (0,1)");
  auto circle_mean = [&](double rho, const std::function<double(complexd)>& g) {
    double acc = 0.0;
    for (int j = 0; j < n_theta; ++j) acc += g(rho * unit_dir(two_pi * (j + 0.5) / n_theta));
    return acc / n_theta;
  };
  double num = circle_mean(r, [&](complexd z) { return f(map.evaluate(z)); });
  double sup = 0.0;
  for (int i = 1; i <= 48; ++i) sup = std::max(sup, circle_mean(i / 50.0, f));
  for (int j = 6; j <= 24; ++j)
    sup = std::max(sup, circle_mean(1.0 - std::ldexp(1.0, -j), f));
  return num / sup;
}

struct SchattenResult {
  double integral = 0.0;
  bool diverged = false;
  std::vector<double> partial_sums;  // cumulative over refinement levels
};

/// Quadrature of (N_phi(z)/log(1/|z|))^p against the Mobius-invariant measure
/// dlambda = (1-|z|^2)^{-2} dA over r_inner < |z| < 1, accumulated on annuli
/// reaching 1 - 2^{-levels}. Divergence is flagged when the last partial-sum
/// ratio exceeds 1.5 (a finite computation cannot certify divergence; the
/// cross-level ratio test is the documented heuristic).
inline SchattenResult schatten_criterion(const QcMap& map, double p, double r_inner,
                                         int levels = 16, int radial_per_level = 16,
                                         int n_angles = 64) {
  if (!(p > 0.0)) throw ParameterError("schatten_criterion: p must be positive");
  if (!(r_inner > 0.0 && r_inner < 1.0))
    throw ParameterError("schatten_criterion: r_inner must lie in (0,1)");
  if (levels < 3) throw ParameterError("schatten_criterion: need at least 3 levels");

  std::vector<double> breaks{r_inner};
  for (int j = 1; j <= levels; ++j) {
    double b = 1.0 - std::ldexp(1.0, -j);
    if (b > r_inner) breaks.push_back(b);
  }
  std::vector<double> gx, gw;
  gauss_legendre(radial_per_level, gx, gw);

  SchattenResult out;
  double cum = 0.0;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    double a = breaks[s], b = breaks[s + 1];
    double seg = 0.0;
    for (int i = 0; i < radial_per_level; ++i) {
      double r = 0.5 * (a + b) + 0.5 * (b - a) * gx[i];
      double wr = 0.5 * (b - a) * gw[i];
      double logr = std::log(1.0 / r);
      double ang = 0.0;
      for (int j = 0; j < n_angles; ++j) {
        complexd z = r * unit_dir(two_pi * (j + 0.5) / n_angles);
        ang += std::pow(map.counting_N(z) / logr, p);
      }
      seg += wr * 2.0 * r / sq(1.0 - r * r) * (ang / n_angles);
    }
    cum += seg;
    out.partial_sums.push_back(cum);
  }
  out.integral = cum;
  std::size_t n = out.partial_sums.size();
  if (n >= 2 && out.partial_sums[n - 2] > 0.0)
    out.diverged = out.partial_sums[n - 1] / out.partial_sums[n - 2] > 1.5;
  return out;
}

/// Closed-form lambda measure of the annulus a < |z| < b.
inline double lambda_annulus_measure(double a, double b) {
  return 1.0 / (1.0 - b * b) - 1.0 / (1.0 - a * a);
}

}  // namespace qcc
