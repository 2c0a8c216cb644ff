#pragma once

#include <algorithm>
#include <cmath>

#include "qcc/common.hpp"

namespace qcc {

/// Evaluator for the extremal distortion function psi_K and the machinery
/// behind it: the arithmetic-geometric mean, complete elliptic integrals of
/// the first kind, and the Grotzsch ring modulus mu.
///
/// psi_K(r) is realized constructively as mu^{-1}(mu(r)/K), which is the
/// standard representation through the Grotzsch modulus
///     mu(r) = (pi/2) K(sqrt(1-r^2)) / K(r),
/// itself evaluated by AGM. All operations are pure and thread-safe.
class DistortionEvaluator {
 public:
  double tolerance = 1e-12;  // absolute error target
  int max_iterations = 64;

  /// Arithmetic-geometric mean of two positive numbers.
  double agm(double a, double b) const {
    if (!(a > 0.0) || !(b > 0.0))
      throw DomainError("agm: arguments must be positive");
    // Quadratic convergence; iterate to machine accuracy or the requested
    // tolerance, whichever is coarser.
    for (int i = 0; i < max_iterations; ++i) {
      double am = 0.5 * (a + b);
      double gm = std::sqrt(a * b);
      a = am;
      b = gm;
      if (std::abs(a - b) <= std::min(tolerance, 0.5e-15 * a)) break;
      if (std::abs(a - b) <= 2e-16 * a) break;
    }
    return 0.5 * (a + b);
  }

  /// Complete elliptic integral of the first kind, modulus convention:
  /// K(r) = int_0^{pi/2} dt / sqrt(1 - r^2 sin^2 t) = pi / (2 agm(1, r')).
  double complete_elliptic_k(double r) const {
    if (r < 0.0 || r >= 1.0)
      throw DomainError("complete_elliptic_k: modulus must lie in [0,1)");
    double rp = std::sqrt((1.0 - r) * (1.0 + r));
    return pi / (2.0 * agm(1.0, rp));
  }

  /// Module of the Grotzsch ring, mu(r) = (pi/2) K(r')/K(r), strictly
  /// decreasing from +inf to 0 on (0,1).
  double grotzsch_mu(double r) const {
    if (!(r > 0.0) || !(r < 1.0))
      throw DomainError("grotzsch_mu: argument must lie in (0,1)");
    double rp = std::sqrt((1.0 - r) * (1.0 + r));
    // mu(r) = (pi/2) agm(1, r') / agm(1, r); one K cancellation avoided.
    return (pi / 2.0) * agm(1.0, rp) / agm(1.0, r);
  }

  /// d mu / d r = -pi^2 / (4 r (1-r^2) K(r)^2); used to accelerate inversion.
  double grotzsch_mu_derivative(double r) const {
    double K = complete_elliptic_k(r);
    return -pi * pi / (4.0 * r * (1.0 - r * r) * K * K);
  }

  /// Solves mu(r) = m for r in (0,1). Bracketed Newton seeded with the
  /// small-r asymptotic mu(r) ~ log(4/r) and its reflection through
  /// mu(r) mu(r') = (pi/2)^2.
  double grotzsch_mu_inverse(double m) const {
    if (!(m > 0.0)) throw DomainError("grotzsch_mu_inverse: target must be positive");
    // Asymptotic regimes. Beyond |log| ~ 18 the root sits within ~1e-14 of an
    // endpoint and bracketed iteration has no representable room left; the
    // truncation of the log(4/r) law is ~1e-14 relative there.
    if (m > 18.0) return 4.0 * std::exp(-m);
    const double quarter_pi2 = sq(pi / 2.0);
    if (m < quarter_pi2 / 18.0) {
      double s = 4.0 * std::exp(-quarter_pi2 / m);
      return std::sqrt((1.0 - s) * (1.0 + s));
    }

    double lo = 1e-9, hi = 1.0 - 1e-15;  // brackets mu in [0.135, 22.1]
    double r = (m >= pi / 2.0) ? 4.0 * std::exp(-m)
                               : std::sqrt(std::max(1.0 - sq(4.0 * std::exp(-quarter_pi2 / m)), 0.25));
    r = std::clamp(r, lo, hi);
    for (int i = 0; i < max_iterations; ++i) {
      double f = grotzsch_mu(r) - m;
      if (f > 0.0) lo = r; else hi = r;  // mu decreasing
      if (std::abs(f) <= tolerance * std::max(1.0, m)) return r;
      double step = -f / grotzsch_mu_derivative(r);
      double next = r + step;
      if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - r) <= 1e-16 * r) return next;
      r = next;
    }
    throw ConvergenceError("grotzsch_mu_inverse: no convergence within max_iterations");
  }

  /// Extremal distortion function psi_K(r) = mu^{-1}(mu(r)/K), extended to
  /// 0 < K < 1 where psi_K is the inverse function of psi_{1/K}; the single
  /// formula mu^{-1}(mu(r)/K) covers both ranges. Endpoints map to themselves.
  double psi(double K, double r) const {
    if (!(K > 0.0)) throw DomainError("psi: K must be positive");
    if (r < 0.0 || r > 1.0) throw DomainError("psi: r must lie in [0,1]");
    if (r == 0.0 || r == 1.0) return r;
    if (K == 1.0) return r;
    // Near-endpoint policy: closed asymptotics, clamped. Toward r = 0 the
    // mu route itself is cancellation-free, so the power law is only an
    // underflow guard; its truncation error scales with the output r^{1/K},
    // which at r ~ 1e-12 would already exceed the 1e-10 budget for large K.
    if (r < 1e-30)
      return std::clamp(std::pow(4.0, 1.0 - 1.0 / K) * std::pow(r, 1.0 / K), 0.0, 1.0);
    if (r > 1.0 - 1e-12)
      return std::clamp(1.0 - std::pow(8.0, 1.0 - K) * std::pow(1.0 - r, K), 0.0, 1.0);
    // For r very close to 1 the direct route loses digits; reflect through
    // psi_K(r)^2 + psi_{1/K}(r')^2 = 1 into the small-argument regime.
    if (r > 0.99) {
      double rp = std::sqrt((1.0 - r) * (1.0 + r));
      double s = psi(1.0 / K, rp);
      return std::sqrt(std::max((1.0 - s) * (1.0 + s), 0.0));
    }
    return grotzsch_mu_inverse(grotzsch_mu(r) / K);
  }

  /// Inverse of psi_K in its second argument; identical to psi_{1/K}.
  double psi_inverse(double K, double s) const {
    if (!(K > 0.0)) throw DomainError("psi_inverse: K must be positive");
    return psi(1.0 / K, s);
  }
};

}  // namespace qcc
