#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "qcc/common.hpp"
#include "qcc/quadrature.hpp"

namespace qcc {

/// Piecewise-linear circle homeomorphism, stored as a monotone lift:
/// knots in [0,2pi), strictly increasing lift values, total increase 2pi.
/// All slopes are positive, so the inverse is piecewise linear as well.
struct ShearProfile {
  std::vector<double> knots;
  std::vector<double> values;

  ShearProfile() : knots{0.0}, values{0.0} {}
  ShearProfile(std::vector<double> k, std::vector<double> v)
      : knots(std::move(k)), values(std::move(v)) {
    validate();
  }

  void validate() const {
    if (knots.empty() || knots.size() != values.size())
      throw ParameterError("ShearProfile: knots/values size mismatch");
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
      if (!(knots[i + 1] > knots[i]) || !(values[i + 1] > values[i]))
        throw ParameterError("ShearProfile: knots and values must be strictly increasing");
    if (!(knots.front() >= 0.0) || !(knots.back() < two_pi))
      throw ParameterError("ShearProfile: knots must lie in [0, 2pi)");
    if (!(values.back() < values.front() + two_pi))
      throw ParameterError("ShearProfile: total increase must be 2pi");
  }

  std::size_t segments() const { return knots.size(); }

  double slope(std::size_t i) const {
    double dk = (i + 1 < knots.size() ? knots[i + 1] : knots.front() + two_pi) - knots[i];
    double dv = (i + 1 < values.size() ? values[i + 1] : values.front() + two_pi) - values[i];
    return dv / dk;
  }

  /// Monotone lift: forward(theta + 2pi) = forward(theta) + 2pi.
  double forward(double theta) const { return eval(knots, values, theta); }
  double inverse(double psi) const { return eval(values, knots, psi); }

  /// Slope of the lift at theta (right-continuous at knots).
  double slope_at(double theta) const {
    double base = knots.front();
    double t = theta - two_pi * std::floor((theta - base) / two_pi);
    std::size_t i = segment_index(knots, t);
    return slope(i);
  }

  ShearProfile inverted() const {
    std::vector<double> k = values, v = knots;
    // renormalize so the first knot lies in [0, 2pi); values shift with it
    double shift = two_pi * std::floor(k.front() / two_pi);
    for (double& x : k) x -= shift;
    return ShearProfile(std::move(k), std::move(v));
  }

  double max_slope() const {
    double s = 0.0;
    for (std::size_t i = 0; i < segments(); ++i) s = std::max(s, slope(i));
    return s;
  }
  double min_slope() const {
    double s = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < segments(); ++i) s = std::min(s, slope(i));
    return s;
  }

  /// Two-arc profile with slopes s_low then s_high, arcs sized so the total
  /// increase is 2pi. Requires s_low < 1 < s_high.
  static ShearProfile two_slope(double s_low, double s_high) {
    if (!(s_low > 0.0) || !(s_high > s_low) || !(s_low < 1.0) || !(s_high > 1.0))
      throw ParameterError("ShearProfile::two_slope: need 0 < s_low < 1 < s_high");
    double a = two_pi * (1.0 - s_high) / (s_low - s_high);
    return ShearProfile({0.0, a}, {0.0, s_low * a});
  }

 private:
  static std::size_t segment_index(const std::vector<double>& k, double t) {
    auto it = std::upper_bound(k.begin(), k.end(), t);
    return (it == k.begin()) ? k.size() - 1 : std::size_t(it - k.begin()) - 1;
  }
  static double eval(const std::vector<double>& k, const std::vector<double>& v, double t) {
    double base = k.front();
    double n = std::floor((t - base) / two_pi);
    double t0 = t - two_pi * n;
    if (t0 < base) { t0 += two_pi; n -= 1.0; }  // fp guard
    std::size_t i = segment_index(k, t0);
    double ki = k[i], vi = v[i];
    double dk = (i + 1 < k.size() ? k[i + 1] : k.front() + two_pi) - ki;
    double dv = (i + 1 < v.size() ? v[i + 1] : v.front() + two_pi) - vi;
    return vi + dv / dk * (t0 - ki) + two_pi * n;
  }
};

struct BoundaryMap {
  std::function<double(double)> forward;  // monotone lift of the boundary trace
  double sampled_lipschitz = 1.0;
  double sampled_inverse_lipschitz = 1.0;
};

struct KoskelaRecord {
  double diameter_of_image = 0.0;
  double line_integral_of_a_phi = 0.0;
  double ratio = 0.0;
};

/// A quasiconformal self-map of the unit disk from a closed zoo of
/// closed-form families. Every member fixes the origin, has an exactly known
/// maximal dilatation bound, a closed-form inverse, and a modulus |phi(z)|
/// that depends on |z| only, which the gap-based helpers exploit for
/// cancellation-free work near the boundary. Instances are immutable.
class QcMap {
 public:
  enum class Kind { identity, rotation, radial_stretch, spiral, angular_shear, composition };

  static QcMap identity() { return QcMap(Kind::identity); }

  static QcMap rotation(double angle) {
    QcMap m(Kind::rotation);
    m.angle_ = angle;
    return m;
  }

  /// phi(z) = z |z|^{1/K - 1}; any K > 0 is allowed, the dilatation bound is
  /// max(K, 1/K).
  static QcMap radial_stretch(double K) {
    if (!(K > 0.0)) throw ParameterError("radial_stretch: K must be positive");
    QcMap m(Kind::radial_stretch);
    m.param_k_ = K;
    m.k_bound_ = std::max(K, 1.0 / K);
    return m;
  }

  /// phi(z) = z |z|^{1/K - 1 + i twist}, a logarithmic spiral stretch. The
  /// dilatation bound follows from the Wirtinger derivatives of |z|^{2 gamma}.
  static QcMap spiral(double K, double twist) {
    if (!(K > 0.0)) throw ParameterError("spiral: K must be positive");
    QcMap m(Kind::spiral);
    m.param_k_ = K;
    m.twist_ = twist;
    double alpha = 1.0 / K;
    double k = std::hypot(1.0 - alpha, twist) / std::hypot(1.0 + alpha, twist);
    m.k_bound_ = (1.0 + k) / (1.0 - k);
    return m;
  }

  static QcMap angular_shear(ShearProfile profile) {
    QcMap m(Kind::angular_shear);
    m.profile_ = std::move(profile);
    double s = std::max(m.profile_.max_slope(), 1.0 / m.profile_.min_slope());
    m.k_bound_ = s;
    return m;
  }

  /// Applies maps.front() first. The dilatation bound is the product of the
  /// factors' bounds.
  static QcMap composition(std::vector<QcMap> maps) {
    if (maps.empty()) throw ParameterError("composition: empty factor list");
    QcMap m(Kind::composition);
    m.k_bound_ = 1.0;
    for (const QcMap& c : maps) m.k_bound_ *= c.k_bound_;
    m.children_ = std::move(maps);
    return m;
  }

  Kind kind() const { return kind_; }
  double dilatation_bound() const { return k_bound_; }
  const ShearProfile& profile() const { return profile_; }
  const std::vector<QcMap>& factors() const { return children_; }

  complexd evaluate(complexd z) const {
    double r = std::abs(z);
    if (r >= 1.0) throw DomainError("QcMap::evaluate: |z| must be < 1");
    switch (kind_) {
      case Kind::identity: return z;
      case Kind::rotation: return unit_dir(angle_) * z;
      case Kind::radial_stretch:
        return (r == 0.0) ? complexd{} : z * std::pow(r, 1.0 / param_k_ - 1.0);
      case Kind::spiral: {
        if (r == 0.0) return {};
        double lr = std::log(r);
        return z * std::exp(lr * (1.0 / param_k_ - 1.0)) * unit_dir(twist_ * lr);
      }
      case Kind::angular_shear: {
        if (r == 0.0) return {};
        return r * unit_dir(profile_.forward(std::arg(z)));
      }
      case Kind::composition: {
        complexd w = z;
        for (const QcMap& c : children_) w = c.evaluate(w);
        return w;
      }
    }
    return z;
  }

  complexd inverse_evaluate(complexd w) const {
    double r = std::abs(w);
    if (r >= 1.0) throw DomainError("QcMap::inverse_evaluate: |w| must be < 1");
    switch (kind_) {
      case Kind::identity: return w;
      case Kind::rotation: return unit_dir(-angle_) * w;
      case Kind::radial_stretch:
        return (r == 0.0) ? complexd{} : w * std::pow(r, param_k_ - 1.0);
      case Kind::spiral: {
        if (r == 0.0) return {};
        double lr = std::log(r);
        return w * std::exp(lr * (param_k_ - 1.0)) * unit_dir(-twist_ * param_k_ * lr);
      }
      case Kind::angular_shear: {
        if (r == 0.0) return {};
        return r * unit_dir(profile_.inverse(std::arg(w)));
      }
      case Kind::composition: {
        complexd z = w;
        for (auto it = children_.rbegin(); it != children_.rend(); ++it)
          z = it->inverse_evaluate(z);
        return z;
      }
    }
    return w;
  }

  /// Closed-form inverse map.
  QcMap inverse() const {
    switch (kind_) {
      case Kind::identity: return identity();
      case Kind::rotation: return rotation(-angle_);
      case Kind::radial_stretch: return radial_stretch(1.0 / param_k_);
      case Kind::spiral: return spiral(1.0 / param_k_, -twist_ * param_k_);
      case Kind::angular_shear: return angular_shear(profile_.inverted());
      case Kind::composition: {
        std::vector<QcMap> inv;
        inv.reserve(children_.size());
        for (auto it = children_.rbegin(); it != children_.rend(); ++it)
          inv.push_back(it->inverse());
        return composition(std::move(inv));
      }
    }
    return identity();
  }

  bool singular_at_origin() const {
    switch (kind_) {
      case Kind::identity:
      case Kind::rotation: return false;
      case Kind::radial_stretch:
      case Kind::spiral: return param_k_ != 1.0 || twist_ != 0.0;
      case Kind::angular_shear: return true;
      case Kind::composition:
        for (const QcMap& c : children_)
          if (c.singular_at_origin()) return true;
        return false;
    }
    return false;
  }

  /// Wirtinger derivatives (d/dz, d/dzbar); closed forms for the built-in
  /// families, Richardson-extrapolated central differences (base step 1e-6)
  /// for compositions.
  void wirtinger(complexd z, complexd& dz, complexd& dzbar) const {
    double r = std::abs(z);
    if (r >= 1.0) throw DomainError("QcMap::wirtinger: |z| must be < 1");
    if (r == 0.0 && singular_at_origin())
      throw DomainError("QcMap::wirtinger: map is not differentiable at 0");
    switch (kind_) {
      case Kind::identity: dz = 1.0; dzbar = 0.0; return;
      case Kind::rotation: dz = unit_dir(angle_); dzbar = 0.0; return;
      case Kind::radial_stretch: {
        double alpha = 1.0 / param_k_;
        double p = std::pow(r, alpha - 1.0);
        dz = 0.5 * (alpha + 1.0) * p;
        dzbar = 0.5 * (alpha - 1.0) * p * (z * z) / (r * r);
        return;
      }
      case Kind::spiral: {
        double alpha = 1.0 / param_k_;
        complexd gamma = 0.5 * complexd(alpha - 1.0, twist_);
        complexd p = std::exp(2.0 * gamma * std::log(r));  // |z|^{2 gamma}
        dz = p * (1.0 + gamma);
        dzbar = gamma * p * (z * z) / (r * r);
        return;
      }
      case Kind::angular_shear: {
        double theta = std::arg(z);
        double h = profile_.forward(theta);
        double hp = profile_.slope_at(theta);
        dz = 0.5 * (1.0 + hp) * unit_dir(h - theta);
        dzbar = 0.5 * (1.0 - hp) * unit_dir(h + theta);
        return;
      }
      case Kind::composition: {
        finite_difference_wirtinger(z, dz, dzbar);
        return;
      }
    }
  }

  /// Jacobian |d_z phi|^2 - |d_zbar phi|^2 > 0.
  double jacobian(complexd z) const {
    complexd dz, dzb;
    wirtinger(z, dz, dzb);
    double J = std::norm(dz) - std::norm(dzb);
    if (!(J > 0.0)) throw NumericalError("QcMap::jacobian: nonpositive Jacobian");
    return J;
  }

  /// log J(z, phi); closed forms avoid overflow of |z|^{2 alpha - 2} near 0.
  double log_jacobian(complexd z) const {
    double r = std::abs(z);
    switch (kind_) {
      case Kind::identity:
      case Kind::rotation: return 0.0;
      case Kind::radial_stretch:
      case Kind::spiral: {
        if (r == 0.0) throw DomainError("QcMap::log_jacobian: z = 0");
        double alpha = 1.0 / param_k_;
        return std::log(alpha) + (2.0 * alpha - 2.0) * std::log(r);
      }
      case Kind::angular_shear: {
        if (r == 0.0) throw DomainError("QcMap::log_jacobian: z = 0");
        return std::log(profile_.slope_at(std::arg(z)));
      }
      case Kind::composition: return std::log(jacobian(z));
    }
    return 0.0;
  }

  /// Beltrami coefficient d_zbar phi / d_z phi.
  complexd beltrami(complexd z) const {
    complexd dz, dzb;
    wirtinger(z, dz, dzb);
    if (dz == complexd{}) throw NumericalError("QcMap::beltrami: vanishing d_z phi");
    return dzb / dz;
  }

  /// 1-|phi(z)| as a function of the boundary gap 1-|z|. Exact for the whole
  /// zoo since every factor's modulus is a radial function; evaluated through
  /// expm1/log1p so gaps down to 1e-300 keep full relative accuracy.
  double image_gap(double gap) const {
    switch (kind_) {
      case Kind::identity:
      case Kind::rotation:
      case Kind::angular_shear: return gap;
      case Kind::radial_stretch:
      case Kind::spiral: return -std::expm1(std::log1p(-gap) / param_k_);
      case Kind::composition: {
        double g = gap;
        for (const QcMap& c : children_) g = c.image_gap(g);
        return g;
      }
    }
    return gap;
  }

  double preimage_gap(double gap) const { return inverse().image_gap(gap); }

  /// m_phi(z) = (1-|z|) / (1-|phi(z)|).
  double m_ratio(complexd z) const {
    double r = std::abs(z);
    if (r >= 1.0) throw DomainError("QcMap::m_ratio: |z| must be < 1");
    double gap = 1.0 - r;
    return gap / image_gap(gap);
  }

  /// Sampled sup of m_phi over the refinement grid r = 1 - 2^{-j}, j = 1..40,
  /// by 256 angles, followed by three golden-section refinement rounds around
  /// the radial argmax (bracket extends to r = 0 when the argmax is first).
  double sup_m_ratio() const {
    auto m_of_r = [this](double r) { return m_ratio(complexd(r, 0.0)); };
    std::vector<double> rs;
    rs.push_back(0.0);
    for (int j = 1; j <= 40; ++j) rs.push_back(1.0 - std::ldexp(1.0, -j));
    double best = 0.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      for (int a = 0; a < 256; ++a) {
        double v = m_ratio(rs[i] * unit_dir(two_pi * a / 256.0));
        if (v > best) { best = v; best_i = i; }
      }
    }
    double lo = best_i == 0 ? 0.0 : rs[best_i - 1];
    double hi = best_i + 1 < rs.size() ? rs[best_i + 1] : rs.back();
    for (int round = 0; round < 3; ++round) {
      auto [x, fx] = golden_max(m_of_r, lo, hi, 80);
      best = std::max(best, fx);
      double w = 0.02 * (hi - lo);
      lo = std::max(lo, x - w);
      hi = std::min(hi, x + w);
      if (!(hi > lo)) break;
    }
    return best;
  }

  /// a_phi(z) = exp( (1/2) mean of log J over B_z ), B_z the Euclidean disk
  /// about z of radius (1-|z|)/2, via a 64x64 polar rule on B_z.
  double a_phi(complexd z) const {
    double R = 0.5 * (1.0 - std::abs(z));
    if (!(R > 0.0)) throw DomainError("QcMap::a_phi: |z| must be < 1");
    static const auto rule = [] {
      std::vector<double> x, w;
      gauss_legendre(64, x, w);
      // nodes/weights for mean over the disk: rho in (0,1), weight 2 rho drho
      std::vector<std::pair<double, double>> nw(64);
      double tot = 0.0;
      for (int i = 0; i < 64; ++i) {
        double rho = 0.5 * (x[i] + 1.0);
        nw[i] = {rho, w[i] * rho};
        tot += w[i] * rho;
      }
      for (auto& p : nw) p.second /= tot;
      return nw;
    }();
    double mean = 0.0;
    for (const auto& [rho, wr] : rule)
      for (int a = 0; a < 64; ++a) {
        complexd w = z + R * rho * unit_dir(two_pi * (a + 0.5) / 64.0);
        mean += wr / 64.0 * log_jacobian(w);
      }
    return std::exp(0.5 * mean);
  }

  /// Counting function N_phi(z) = log(1/|phi^{-1}(z)|), z != 0; evaluated via
  /// the inverse radial gap so values at r = 1 - 2^{-40} remain exact.
  double counting_N(complexd z) const {
    double r = std::abs(z);
    if (r == 0.0) throw DomainError("QcMap::counting_N: z = 0");
    if (r >= 1.0) throw DomainError("QcMap::counting_N: |z| must be < 1");
    return -std::log1p(-preimage_gap(1.0 - r));
  }

  /// Monotone lift of the boundary trace (lift of tilde phi).
  double boundary_lift(double theta) const {
    switch (kind_) {
      case Kind::identity:
      case Kind::radial_stretch: return theta;
      case Kind::spiral: return theta;  // twist vanishes at |z| = 1
      case Kind::rotation: return theta + angle_;
      case Kind::angular_shear: return profile_.forward(theta);
      case Kind::composition: {
        double t = theta;
        for (const QcMap& c : children_) t = c.boundary_lift(t);
        return t;
      }
    }
    return theta;
  }

  double inverse_boundary_lift(double theta) const {
    switch (kind_) {
      case Kind::identity:
      case Kind::radial_stretch:
      case Kind::spiral: return theta;
      case Kind::rotation: return theta - angle_;
      case Kind::angular_shear: return profile_.inverse(theta);
      case Kind::composition: {
        double t = theta;
        for (auto it = children_.rbegin(); it != children_.rend(); ++it)
          t = it->inverse_boundary_lift(t);
        return t;
      }
    }
    return theta;
  }

  enum class Direction { forward, inverse };

  /// Max difference quotient of the boundary lift over 4096 point pairs at
  /// dyadic separations 2pi 2^{-j}, j = 1..16.
  double boundary_lipschitz_estimate(Direction dir) const {
    double best = 0.0;
    for (int j = 1; j <= 16; ++j) {
      double delta = two_pi * std::ldexp(1.0, -j);
      for (int i = 0; i < 256; ++i) {
        double th = two_pi * i / 256.0;
        double d = (dir == Direction::forward)
                       ? boundary_lift(th + delta) - boundary_lift(th)
                       : inverse_boundary_lift(th + delta) - inverse_boundary_lift(th);
        best = std::max(best, d / delta);
      }
    }
    return best;
  }

  BoundaryMap boundary() const {
    BoundaryMap b;
    b.forward = [self = *this](double th) { return self.boundary_lift(th); };
    b.sampled_lipschitz = boundary_lipschitz_estimate(Direction::forward);
    b.sampled_inverse_lipschitz = boundary_lipschitz_estimate(Direction::inverse);
    return b;
  }

  /// Evaluates both sides of the Koskela diameter inequality
  /// diam(phi(gamma)) <= c int_gamma a_phi |dz| for a polyline arc whose
  /// length is at least its distance to the unit circle.
  KoskelaRecord koskela_diameter_check(const std::vector<complexd>& arc,
                                       int n_samples = 400) const {
    if (arc.size() < 2) throw PreconditionError("koskela_diameter_check: need a polyline");
    double length = 0.0;
    for (std::size_t i = 0; i + 1 < arc.size(); ++i) length += std::abs(arc[i + 1] - arc[i]);
    if (!(length > 0.0)) throw PreconditionError("koskela_diameter_check: degenerate arc");

    // uniform arclength resample
    std::vector<complexd> pts(n_samples);
    {
      std::size_t seg = 0;
      double seg_start = 0.0, seg_len = std::abs(arc[1] - arc[0]);
      for (int i = 0; i < n_samples; ++i) {
        double s = length * i / (n_samples - 1.0);
        while (s > seg_start + seg_len && seg + 2 < arc.size()) {
          seg_start += seg_len;
          ++seg;
          seg_len = std::abs(arc[seg + 1] - arc[seg]);
        }
        double t = seg_len > 0.0 ? std::clamp((s - seg_start) / seg_len, 0.0, 1.0) : 0.0;
        pts[i] = arc[seg] + t * (arc[seg + 1] - arc[seg]);
      }
    }
    double dist = 1.0;
    for (const complexd& p : pts) dist = std::min(dist, 1.0 - std::abs(p));
    if (length < dist - 1e-12)
      throw PreconditionError("koskela_diameter_check: arc shorter than its boundary distance");

    std::vector<complexd> img(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) img[i] = evaluate(pts[i]);
    double diam = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i)
      for (std::size_t j = i + 1; j < img.size(); ++j)
        diam = std::max(diam, std::abs(img[i] - img[j]));

    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      integral += a_phi(0.5 * (pts[i] + pts[i + 1])) * std::abs(pts[i + 1] - pts[i]);

    return {diam, integral, diam / integral};
  }

  /// Angles at which the map (or its inverse) fails to be smooth in theta;
  /// pulled back through earlier factors for compositions. Used to panelize
  /// angular quadrature.
  std::vector<double> angular_breakpoints(bool of_inverse = false) const {
    std::vector<double> out;
    collect_breakpoints(of_inverse, out);
    for (double& b : out) b = wrap_angle(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              out.end());
    return out;
  }

 private:
  explicit QcMap(Kind k) : kind_(k) {}

  void collect_breakpoints(bool of_inverse, std::vector<double>& out) const {
    if (kind_ == Kind::angular_shear) {
      const auto& ks = of_inverse ? profile_.values : profile_.knots;
      out.insert(out.end(), ks.begin(), ks.end());
    } else if (kind_ == Kind::composition) {
      if (!of_inverse) {
        // factor i's breakpoints pulled back through factors 0..i-1
        for (std::size_t i = 0; i < children_.size(); ++i) {
          std::vector<double> bs;
          children_[i].collect_breakpoints(false, bs);
          for (double b : bs) {
            double t = b;
            for (std::size_t j = i; j-- > 0;) t = children_[j].inverse_boundary_lift(t);
            out.push_back(t);
          }
        }
      } else {
        for (std::size_t i = 0; i < children_.size(); ++i) {
          std::vector<double> bs;
          children_[i].collect_breakpoints(true, bs);
          for (double b : bs) {
            double t = b;
            for (std::size_t j = i + 1; j < children_.size(); ++j) t = children_[j].boundary_lift(t);
            out.push_back(t);
          }
        }
      }
    }
  }

  void finite_difference_wirtinger(complexd z, complexd& dz, complexd& dzbar) const {
    double room = 1.0 - std::abs(z);
    double h = std::min(1e-6, 0.25 * room);
    if (!(h > 0.0)) throw DomainError("QcMap::wirtinger: too close to the boundary");
    auto diff = [&](double step) {
      complexd fx = (evaluate(z + step) - evaluate(z - step)) / (2.0 * step);
      complexd fy = (evaluate(z + complexd(0.0, step)) - evaluate(z - complexd(0.0, step))) /
                    (2.0 * step);
      return std::pair{0.5 * (fx - complexd(0.0, 1.0) * fy), 0.5 * (fx + complexd(0.0, 1.0) * fy)};
    };
    auto [dz1, db1] = diff(h);
    auto [dz2, db2] = diff(0.5 * h);
    dz = (4.0 * dz2 - dz1) / 3.0;
    dzbar = (4.0 * db2 - db1) / 3.0;
    double scale = std::abs(dz) + std::abs(dzbar) + 1e-300;
    if (std::abs(dz2 - dz1) / scale > 1e-3)
      throw NumericalError("QcMap::wirtinger: finite differences ill-conditioned here");
  }

  static std::pair<double, double> golden_max(const std::function<double(double)>& f, double a,
                                              double b, int iters) {
    const double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    double bx = c, bf = fc;
    if (fd > bf) { bx = d; bf = fd; }
    for (int i = 0; i < iters; ++i) {
      if (fc >= fd) {
        b = d; d = c; fd = fc;
        c = b - invphi * (b - a);
        fc = f(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + invphi * (b - a);
        fd = f(d);
      }
      if (fc > bf) { bx = c; bf = fc; }
      if (fd > bf) { bx = d; bf = fd; }
    }
    double fa = f(a), fb2 = f(b);
    if (fa > bf) { bx = a; bf = fa; }
    if (fb2 > bf) { bx = b; bf = fb2; }
    return {bx, bf};
  }

  Kind kind_;
  double param_k_ = 1.0;
  double angle_ = 0.0;
  double twist_ = 0.0;
  ShearProfile profile_;
  std::vector<QcMap> children_;
  double k_bound_ = 1.0;
};

}  // namespace qcc
