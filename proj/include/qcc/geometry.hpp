#pragma once

#include <optional>
#include <vector>

#include "qcc/common.hpp"
#include "qcc/distortion.hpp"
#include "qcc/qcmap.hpp"

namespace qcc {

struct CoverNotFound : Error { using Error::Error; };
struct ConstructionFailed : Error { using Error::Error; };

inline complexd mobius_tau(complexd a, complexd z) {
  return (a - z) / (1.0 - std::conj(a) * z);
}

/// D^{ph}(a, r) = { z : |tau_a(z)| < r }; a Euclidean disk with closed-form
/// center and radius.
struct PseudoHyperbolicDisk {
  complexd center;  // a, |a| < 1
  double radius;    // r in (0,1)

  PseudoHyperbolicDisk(complexd a, double r) : center(a), radius(r) {
    if (!(std::abs(a) < 1.0)) throw DomainError("PseudoHyperbolicDisk: |a| must be < 1");
    if (!(r > 0.0) || !(r < 1.0)) throw DomainError("PseudoHyperbolicDisk: r must lie in (0,1)");
  }

  complexd euclidean_center() const {
    double a2 = std::norm(center);
    return (1.0 - radius * radius) / (1.0 - radius * radius * a2) * center;
  }
  double euclidean_radius() const {
    double a2 = std::norm(center);
    return (1.0 - a2) * radius / (1.0 - radius * radius * a2);
  }
  /// Normalized area = (euclidean radius)^2.
  double normalized_area() const { return sq(euclidean_radius()); }

  bool contains(complexd z) const {
    if (!(std::abs(z) < 1.0)) throw DomainError("PseudoHyperbolicDisk: |z| must be < 1");
    return std::abs(mobius_tau(center, z)) < radius;
  }
  bool contains_euclidean(complexd z) const {
    return std::abs(z - euclidean_center()) < euclidean_radius();
  }
  /// Point with |tau_a| = radius at pseudohyperbolic angle parameter s.
  complexd boundary_point(double s) const {
    return euclidean_center() + euclidean_radius() * unit_dir(s);
  }
};

/// Arc on the circle in normalized units: lo in [0,1), length in (0,1].
struct CircleInterval {
  double lo;
  double len;

  double mid() const { return lo + 0.5 * len; }
  bool contains_frac(double x) const {
    double d = x - lo - std::floor(x - lo);
    return d < len;
  }
  bool contains_interval(const CircleInterval& other) const {
    if (other.len > len) return false;
    double d = other.lo - lo - std::floor(other.lo - lo);
    return d + other.len <= len + 1e-15;
  }
};

/// Carleson box over a boundary arc of normalized length t:
/// Q_I = { z : 1-t <= |z| < 1, z/|z| in I }. Normalized area t^2(2-t).
struct CarlesonBox {
  double theta_center;  // radians
  double length;        // t = |I| in (0,1]

  CarlesonBox(double theta, double t) : theta_center(wrap_angle(theta)), length(t) {
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("CarlesonBox: length must lie in (0,1]");
  }

  double area() const { return length * length * (2.0 - length); }
  complexd center_point() const { return (1.0 - 0.5 * length) * unit_dir(theta_center); }
  CircleInterval interval() const {
    return {wrap_angle(theta_center - pi * length) / two_pi, length};
  }
  bool contains(complexd z) const {
    double gap = 1.0 - std::abs(z);
    if (gap > length || gap <= 0.0) return false;
    if (length >= 1.0) return true;
    return angle_dist(std::arg(z), theta_center) <= pi * length + 1e-15;
  }
  static CarlesonBox from_interval(const CircleInterval& I) {
    return CarlesonBox(two_pi * (I.lo + 0.5 * I.len), I.len);
  }
};

inline double box_area(double t) {
  if (!(t > 0.0) || !(t <= 1.0)) throw DomainError("box_area: t must lie in (0,1]");
  return t * t * (2.0 - t);
}
inline bool box_contains(const CarlesonBox& b, complexd z) { return b.contains(z); }
inline complexd box_center(const CarlesonBox& b) { return b.center_point(); }

/// One of the two shifted dyadic systems on the circle (shift 0 or 1/3 of the
/// full turn); level-j intervals have normalized length 2^{-j}.
struct DyadicGrid {
  double shift;  // 0 or 1/3
  int max_level;

  DyadicGrid(double beta, int levels) : shift(beta), max_level(levels) {
    if (!(beta == 0.0 || std::abs(beta - 1.0 / 3.0) < 1e-15))
      throw ParameterError("DyadicGrid: shift must be 0 or 1/3");
    if (levels < 0) throw ParameterError("DyadicGrid: max_level must be >= 0");
  }

  CircleInterval interval(int level, long index) const {
    double len = std::ldexp(1.0, -level);
    double lo = index * len + shift;
    return {lo - std::floor(lo), len};
  }
  long index_containing(int level, double frac) const {
    double len = std::ldexp(1.0, -level);
    double x = frac - shift;
    x -= std::floor(x);
    long m = static_cast<long>(std::floor(x / len));
    long count = 1L << level;
    return std::clamp(m, 0L, count - 1);
  }
  CircleInterval interval_containing(int level, double frac) const {
    return interval(level, index_containing(level, frac));
  }
};

struct MeiCover {
  CircleInterval interval;
  double grid_shift;
  int level;
};

/// Finds an interval of one of the two shifted grids containing J with
/// |I'| <= 6 |J| (Mei's covering property). Levels descend from the finest
/// that could contain J to the coarsest admissible one
/// j0 = ceil(log2(1/(6|J|))), so the returned interval is the tightest cover
/// the grids offer.
inline MeiCover mei_cover(const CircleInterval& J) {
  if (!(J.len > 0.0) || J.len > 1.0 / 6.0)
    throw PreconditionError("mei_cover: interval length must lie in (0, 1/6]");
  int j0 = std::max(0, static_cast<int>(std::ceil(std::log2(1.0 / (6.0 * J.len)))));
  int j_hi = static_cast<int>(std::floor(std::log2(1.0 / J.len) + 1e-12));
  for (int j = j_hi; j >= j0; --j) {
    for (double beta : {0.0, 1.0 / 3.0}) {
      DyadicGrid grid(beta, j);
      CircleInterval cand = grid.interval_containing(j, J.mid());
      if (cand.contains_interval(J)) return {cand, beta, j};
    }
  }
  throw CoverNotFound("mei_cover: no covering grid interval found");
}

/// Constructs a Carleson box containing z and w whose area is comparable to
/// |1 - z conj(w)|^2 with the two-sided constants (1/16, 8). The candidate
/// family is t = 2^k |1 - z conj(w)| for k = -3..3, clamped to (0,1],
/// smallest t first; the first candidate that both contains the points and
/// satisfies the double inequality wins.
inline CarlesonBox containing_box_for_pair(complexd z, complexd w) {
  if (!(std::abs(z) < 1.0) || !(std::abs(w) < 1.0))
    throw DomainError("containing_box_for_pair: points must lie in the open disk");
  double d = std::abs(1.0 - z * std::conj(w));
  double d2 = d * d;
  double az = std::arg(z == complexd{} ? complexd{1.0, 0.0} : z);
  double aw = std::arg(w == complexd{} ? complexd{1.0, 0.0} : w);
  double theta = az + 0.5 * angle_diff(aw, az);
  for (int k = -3; k <= 3; ++k) {
    double t = std::min(1.0, std::ldexp(d, k));
    if (!(t > 0.0)) continue;
    CarlesonBox box(theta, t);
    if (!box.contains(z) || !box.contains(w)) continue;
    double area = box.area();
    if (area / 16.0 <= d2 && d2 <= 8.0 * area) return box;
  }
  throw ConstructionFailed("containing_box_for_pair: no candidate satisfied the area bounds");
}

inline std::pair<double, double> rengel_bounds(double t) {
  if (!(t > 0.0) || !(t < 1.0)) throw DomainError("rengel_bounds: t must lie in (0,1)");
  return {1.0 / (pi * (2.0 - t)), (2.0 - t) / (4.0 * pi * sq(1.0 - t))};
}

/// Extremal side lengths of the box as a quadrilateral: the shortest arc
/// joining the radial sides and the shortest arc joining the circular sides.
inline std::pair<double, double> side_lengths(double t) {
  if (!(t > 0.0) || !(t < 1.0)) throw DomainError("side_lengths: t must lie in (0,1)");
  return {two_pi * t * (1.0 - t), t};
}

struct SandwichCounts {
  int outer_violations = 0;
  int inner_violations = 0;
};

/// Samples the inclusion
///   D^{ph}(phi(a), psi_{1/K}(r))  subset  phi[D^{ph}(a, r)]  subset
///   D^{ph}(phi(a), psi_K(r)).
/// Boundary samples of the source disk are mapped forward and tested against
/// the outer disk; samples of the inner disk are pulled back and tested
/// against the source disk. Membership tolerance 1e-9.
inline SandwichCounts ph_image_sandwich(const QcMap& map, const PseudoHyperbolicDisk& d,
                                        int n_samples, uint64_t seed = 1) {
  DistortionEvaluator de;
  double K = map.dilatation_bound();
  double psi_out = de.psi(K, d.radius);
  double psi_in = de.psi(1.0 / K, d.radius);
  complexd fa = map.evaluate(d.center);

  SandwichCounts counts;
  for (int i = 0; i < n_samples; ++i) {
    complexd p = d.boundary_point(two_pi * i / n_samples);
    complexd q = map.evaluate(p);
    if (std::abs(mobius_tau(fa, q)) > psi_out + 1e-9) ++counts.outer_violations;
  }
  PseudoHyperbolicDisk inner(fa, psi_in);
  complexd ic = inner.euclidean_center();
  double ir = inner.euclidean_radius();
  auto rng = seeded_rng(seed, 0xD15C);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < n_samples; ++i) {
    complexd w = ic + ir * std::sqrt(uni(rng)) * unit_dir(two_pi * uni(rng));
    complexd back = map.inverse_evaluate(w);
    if (std::abs(mobius_tau(d.center, back)) > d.radius + 1e-9) ++counts.inner_violations;
  }
  return counts;
}

struct AreaBoundsCheck {
  double estimate = 0.0;
  double sigma = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Monte Carlo estimate of |phi(D^{ph}(a,r))| (membership counting over the
/// whole disk) against the closed-form two-sided area bounds.
inline AreaBoundsCheck ph_area_bounds_check(const QcMap& map, const PseudoHyperbolicDisk& d,
                                            int n_samples, uint64_t seed = 1) {
  DistortionEvaluator de;
  double K = map.dilatation_bound();
  double fz = std::abs(map.evaluate(d.center));
  auto bound = [&](double psir) {
    return sq(psir) * sq(1.0 - fz * fz) / sq(1.0 - sq(psir) * fz * fz);
  };
  AreaBoundsCheck out;
  out.lower = bound(de.psi(1.0 / K, d.radius));
  out.upper = bound(de.psi(K, d.radius));

  auto rng = seeded_rng(seed, 0xA2EA);
  long hits = 0;
  for (int i = 0; i < n_samples; ++i) {
    complexd u = random_disk_point(rng);
    if (d.contains(map.inverse_evaluate(u))) ++hits;
  }
  double p = double(hits) / n_samples;
  out.estimate = p;
  out.sigma = std::sqrt(std::max(p * (1.0 - p), 1.0 / n_samples) / n_samples);
  return out;
}

struct ImageBoxAnalysis {
  CarlesonBox bounding_box{0.0, 1.0};
  double area_ratio = 0.0;
  double diameter_estimate = 0.0;
};

struct ImageBoxOptions {
  double t0 = 0.125;           // admissible box size threshold
  int boundary_samples = 256;  // per side
  int mc_samples = 100000;
  uint64_t seed = 1;
};

/// Pulls a Carleson box back through the map and measures how tightly the
/// smallest aligned Carleson box encloses the preimage: samples the box
/// boundary through phi^{-1}, encloses the image in a box centered on the
/// pulled-back midpoint angle, and estimates |phi^{-1}(Q_I)| by Monte Carlo
/// integration of the inverse Jacobian over the box.
inline ImageBoxAnalysis image_box_analysis(const QcMap& map, const CarlesonBox& box,
                                           const ImageBoxOptions& opts = {}) {
  if (box.length > opts.t0)
    throw PreconditionError("image_box_analysis: box length exceeds the configured t0");
  double lip = map.boundary_lipschitz_estimate(QcMap::Direction::inverse);
  if (!(lip < 1e6))
    throw PreconditionError("image_box_analysis: inverse boundary map not Lipschitz-stable");

  double t = box.length;
  double th_lo = box.theta_center - pi * t;
  double th_hi = box.theta_center + pi * t;
  int n = opts.boundary_samples;

  std::vector<complexd> img;
  img.reserve(3 * n + 2);
  for (int i = 0; i <= n; ++i) {  // inner arc, |z| = 1-t
    double th = th_lo + (th_hi - th_lo) * i / n;
    img.push_back(map.inverse_evaluate((1.0 - t) * unit_dir(th)));
  }
  for (int i = 0; i < n; ++i) {  // radial sides up to 1e-9 below the circle
    double r = (1.0 - t) + (t - 1e-9) * (i + 0.5) / n;
    img.push_back(map.inverse_evaluate(r * unit_dir(th_lo)));
    img.push_back(map.inverse_evaluate(r * unit_dir(th_hi)));
  }

  double theta_J = map.inverse_boundary_lift(box.theta_center);
  double tj = 0.0;
  for (const complexd& w : img) {
    tj = std::max(tj, 1.0 - std::abs(w));
    tj = std::max(tj, angle_dist(std::arg(w), theta_J) / pi);
  }
  // the arc of Q_I on the circle maps to the arc between the pulled-back
  // endpoint angles
  for (double th : {th_lo, th_hi})
    tj = std::max(tj, angle_dist(map.inverse_boundary_lift(th), theta_J) / pi);
  CarlesonBox qj(theta_J, std::min(1.0, tj * (1.0 + 1e-12)));

  double diam = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i)
    for (std::size_t j = i + 1; j < img.size(); ++j)
      diam = std::max(diam, std::abs(img[i] - img[j]));

  QcMap inv = map.inverse();
  auto rng = seeded_rng(opts.seed, 0xB0C5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double acc = 0.0;
  double r_in2 = sq(1.0 - t);
  for (int i = 0; i < opts.mc_samples; ++i) {
    double r = std::sqrt(r_in2 + uni(rng) * (1.0 - r_in2));
    double th = th_lo + (th_hi - th_lo) * uni(rng);
    acc += inv.jacobian(r * unit_dir(th));
  }
  double area = box.area() * acc / opts.mc_samples;

  return {qj, qj.area() / area, diam};
}

}  // namespace qcc
