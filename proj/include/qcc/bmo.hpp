#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qcc/bergman.hpp"
#include "qcc/common.hpp"
#include "qcc/qcmap.hpp"
#include "qcc/quadrature.hpp"

namespace qcc {

struct EmptyRegion : Error { using Error::Error; };

enum class BmoFlavor : int {
  H,  // truncated Euclidean balls D^h(z,r) = {w in D : |z-w| < r}
  C,  // Euclidean cubes contained in D
  B,  // Euclidean balls contained in D
};

struct Region {
  BmoFlavor flavor;
  complexd center;
  double size;  // radius, or half side length for cubes
};

struct BmoEstimate {
  BmoFlavor flavor;
  double value = 0.0;
  int n_regions = 0;
  uint64_t seed = 0;
};

using DiskFunction = std::function<complexd(complexd)>;

namespace detail {

struct LocalRule {
  std::vector<complexd> points;
  std::vector<double> weights;
};

/// 32x32 rule on the region; H-flavor regions keep only nodes inside the
/// disk (their weight mass plays the role of the truncated area).
inline LocalRule region_rule(const Region& reg) {
  static const auto gl = [] {
    std::vector<double> x, w;
    gauss_legendre(32, x, w);
    return std::pair(x, w);
  }();
  const auto& [gx, gw] = gl;

  LocalRule rule;
  if (reg.flavor == BmoFlavor::C) {
    double s = reg.size;
    for (int i = 0; i < 32; ++i)
      for (int j = 0; j < 32; ++j) {
        complexd p = reg.center + complexd(s * gx[i], s * gx[j]);
        if (std::abs(p) >= 1.0)
          throw PreconditionError("mean_oscillation: cube not contained in the disk");
        rule.points.push_back(p);
        rule.weights.push_back(gw[i] * gw[j]);
      }
    return rule;
  }
  bool truncate = reg.flavor == BmoFlavor::H;
  if (!truncate && std::abs(reg.center) + reg.size >= 1.0)
    throw PreconditionError("mean_oscillation: ball not contained in the disk");
  for (int i = 0; i < 32; ++i) {
    double rho = 0.5 * (gx[i] + 1.0);
    double wr = gw[i] * 0.5 * rho;
    for (int j = 0; j < 32; ++j) {
      complexd p = reg.center + reg.size * rho * unit_dir(two_pi * (j + 0.5) / 32.0);
      if (truncate && std::abs(p) >= 1.0) continue;
      rule.points.push_back(p);
      rule.weights.push_back(wr);
    }
  }
  return rule;
}

}  // namespace detail

/// E(|f - E(f)|) over the region, both means against the same local rule.
inline double mean_oscillation(const DiskFunction& f, const Region& reg) {
  auto rule = detail::region_rule(reg);
  double mass = 0.0;
  complexd mean{};
  std::vector<complexd> vals(rule.points.size());
  for (std::size_t k = 0; k < rule.points.size(); ++k) {
    vals[k] = f(rule.points[k]);
    mean += rule.weights[k] * vals[k];
    mass += rule.weights[k];
  }
  if (!(mass > 1e-12)) throw EmptyRegion("mean_oscillation: region barely meets the disk");
  mean /= mass;
  double osc = 0.0;
  for (std::size_t k = 0; k < rule.points.size(); ++k)
    osc += rule.weights[k] * std::abs(vals[k] - mean);
  return osc / mass;
}

/// The seeded sampling family shared by every flavor: centers alternate
/// between quasi-uniform and boundary-accumulating (1-|c| = 2^{-j}), scales
/// log-uniform down to 2^{-12}; C/B regions are shrunk to fit inside the
/// disk. Region i depends on (seed, i) only, so families are nested.
inline Region sample_region(BmoFlavor flavor, uint64_t seed, int index) {
  auto rng = seeded_rng(seed, 0xB310 + static_cast<uint64_t>(index));
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  complexd c;
  if (index % 2 == 0) {
    c = random_disk_point(rng, 0.999);
  } else {
    double gap = std::ldexp(1.0, -(1 + index % 12));
    c = (1.0 - gap) * unit_dir(two_pi * uni(rng));
  }
  double lo = std::log(std::ldexp(1.0, -12)), hi = std::log(0.5);
  double s = std::exp(lo + uni(rng) * (hi - lo));
  if (flavor == BmoFlavor::C) s = std::min(s, 0.99 * (1.0 - std::abs(c)) / std::sqrt(2.0));
  if (flavor == BmoFlavor::B) s = std::min(s, 0.99 * (1.0 - std::abs(c)));
  return {flavor, c, s};
}

/// Sampled BMO seminorm: the max mean oscillation over the seeded family.
inline BmoEstimate bmo_seminorm(const DiskFunction& f, BmoFlavor flavor, int n_regions,
                                uint64_t seed) {
  if (n_regions < 100) throw ParameterError("bmo_seminorm: need at least 100 regions");
  BmoEstimate est{flavor, 0.0, n_regions, seed};
  for (int i = 0; i < n_regions; ++i)
    est.value = std::max(est.value, mean_oscillation(f, sample_region(flavor, seed, i)));
  return est;
}

/// Bloch seminorm sup (1-|z|^2) |f'(z)| sampled on a boundary-refined grid
/// (n_samples angles per radius).
inline double bloch_seminorm(const DiskFunction& f_derivative, int n_samples = 256) {
  std::vector<double> radii{0.0};
  for (int i = 1; i <= 64; ++i) radii.push_back(0.5 * i / 64.0);
  for (int j = 1; j <= 40; ++j) radii.push_back(1.0 - std::ldexp(1.0, -j));
  double sup = 0.0;
  for (double r : radii)
    for (int a = 0; a < n_samples; ++a) {
      complexd z = r * unit_dir(two_pi * a / n_samples);
      sup = std::max(sup, (1.0 - std::norm(z)) * std::abs(f_derivative(z)));
    }
  return sup;
}

/// || f o phi ||_BMO_C / || f ||_BMO_C with a shared sampling seed.
inline double reimann_composition_ratio(const QcMap& map, const DiskFunction& f, int n_regions,
                                        uint64_t seed) {
  auto composed = [&map, &f](complexd z) { return f(map.evaluate(z)); };
  double num = bmo_seminorm(composed, BmoFlavor::C, n_regions, seed).value;
  double den = bmo_seminorm(f, BmoFlavor::C, n_regions, seed).value;
  if (!(den > 1e-15))
    throw DomainError("reimann_composition_ratio: f has vanishing BMO_C estimate");
  return num / den;
}

/// Radius inside which an n_radial x n_angles rule still represents the
/// Bergman-type kernels pointwise: beyond it the first aliasing band
/// |x|^n_angles is no longer negligible.
inline double kernel_resolution_radius(const DiskQuadrature& q) {
  double m = std::min<double>(static_cast<double>(q.n_angles()), 2.0 * q.n_radial());
  return 1.0 - 25.0 / m;
}

/// BMO_H estimate of P_phi f for bounded f (||f||_inf <= 1 caller-normalized):
/// P_phi f is evaluated on each region's local rule directly from the global
/// quadrature discretization of f. Regions outrunning the kernel resolution
/// radius of q are skipped (the grid cannot represent the kernel there); the
/// first n_regions admissible members of the seeded family are used, so
/// families remain nested under growing n_regions.
inline BmoEstimate pphi_linf_to_bmo(const QcMap& map, const DiskFunction& f_bounded,
                                    int n_regions, const DiskQuadrature& q, uint64_t seed = 1) {
  std::vector<complexd> u(q.size());
  std::vector<complexd> coef(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    complexd w = q.node(k);
    u[k] = map.evaluate(w);
    coef[k] = q.weight(k) * f_bounded(w);
  }
  DiskFunction Pf = [&map, &u, &coef](complexd x) {
    complexd fx = map.evaluate(x);
    complexd acc{};
    for (std::size_t k = 0; k < u.size(); ++k) {
      complexd d = 1.0 - fx * std::conj(u[k]);
      acc += coef[k] / (d * d);
    }
    return acc;
  };
  double r_res = kernel_resolution_radius(q);
  BmoEstimate est{BmoFlavor::H, 0.0, n_regions, seed};
  int used = 0;
  for (int i = 0; used < n_regions && i < 64 * n_regions; ++i) {
    Region reg = sample_region(BmoFlavor::H, seed, i);
    if (std::abs(reg.center) + reg.size > r_res) continue;
    ++used;
    est.value = std::max(est.value, mean_oscillation(Pf, reg));
  }
  return est;
}

/// Sign step mollified at the given scale; keeps region quadrature honest.
inline double smoothed_sign(double x, double scale = std::ldexp(1.0, -8)) {
  return std::clamp(x / scale, -1.0, 1.0);
}

}  // namespace qcc
