#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace qcc {

using complexd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

/// Base class for all qcc exceptions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };        // argument outside documented domain
struct ConvergenceError : Error { using Error::Error; };   // iteration failed to reach tolerance
struct NumericalError : Error { using Error::Error; };     // invalid or ill-conditioned intermediate value
struct PreconditionError : Error { using Error::Error; };  // operation precondition violated
struct ParameterError : Error { using Error::Error; };     // bad discretization/config parameter
struct ConfigError : Error { using Error::Error; };        // malformed experiment configuration

inline complexd unit_dir(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, two_pi);
  return t < 0 ? t + two_pi : t;
}

/// Shortest signed angular difference a-b, in (-pi, pi].
inline double angle_diff(double a, double b) {
  double d = std::fmod(a - b, two_pi);
  if (d <= -pi) d += two_pi;
  if (d > pi) d -= two_pi;
  return d;
}

inline double angle_dist(double a, double b) { return std::abs(angle_diff(a, b)); }

inline double sq(double x) { return x * x; }

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Deterministic per-stream engine: identical (seed, stream) pairs give
/// identical sequences regardless of call order elsewhere.
inline std::mt19937_64 seeded_rng(uint64_t seed, uint64_t stream = 0) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 0x1234567u)));
}

/// Uniform point in the open unit disk w.r.t. normalized area measure.
inline complexd random_disk_point(std::mt19937_64& rng, double r_max = 1.0) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double r = r_max * std::sqrt(uni(rng));
  double th = two_pi * uni(rng);
  return r * unit_dir(th);
}

}  // namespace qcc
