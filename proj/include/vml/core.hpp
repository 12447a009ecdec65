#pragma once
// Small fixed-size vector algebra, deterministic reductions and finite
// difference stencils shared by every module of the library.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vml {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;

inline constexpr double pi = std::numbers::pi;

// ---- Vec3 algebra ---------------------------------------------------------

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline Vec3 operator*(const Vec3& a, double s) { return s * a; }
inline Vec3 operator/(const Vec3& a, double s) { return (1.0 / s) * a; }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) { a = a + b; return a; }
inline Vec3& operator-=(Vec3& a, const Vec3& b) { a = a - b; return a; }

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1],
          a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double norm2(const Vec3& a) { return dot(a, a); }

inline Vec4 operator+(const Vec4& a, const Vec4& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline Vec4 operator-(const Vec4& a, const Vec4& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
inline Vec4 operator*(double s, const Vec4& a) {
  return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

// Japanese bracket <s> = sqrt(1+s^2); for vectors, sqrt(1+|a|^2).
inline double jbracket(double s) { return std::sqrt(1.0 + s * s); }
inline double jbracket(const Vec3& a) { return std::sqrt(1.0 + norm2(a)); }

// ---- Deterministic reductions --------------------------------------------

// Pairwise summation: reduction order depends only on the element count, so
// parallel producers that fill the buffer in index order get bitwise
// reproducible totals.
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

// ---- Finite differences ---------------------------------------------------

// 4th order central first derivative of a scalar callable.
template <class F>
double fd_derivative(F&& f, double x, double h) {
  return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) /
         (12.0 * h);
}

// Default step policy: h = eps_rel * (1 + |t| + |x|).
inline double fd_step(double t, const Vec3& x, double eps_rel = 1e-4) {
  return eps_rel * (1.0 + std::abs(t) + norm(x));
}

// ---- Smooth cutoffs -------------------------------------------------------

// C^inf transition T with T(u)=1 for u<=0, T(u)=0 for u>=1, built from the
// standard exp(-1/s) glue. Monotone decreasing on [0,1].
inline double smooth_transition(double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - u));
  const double b = std::exp(-1.0 / u);
  return a / (a + b);
}

// Derivative of smooth_transition (analytic, not FD).
inline double smooth_transition_prime(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double s = 1.0 - u;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / u);
  const double da = -a / (s * s);        // d/du exp(-1/(1-u))
  const double db = b / (u * u);         // d/du exp(-1/u)
  const double denom = a + b;
  return (da * denom - a * (da + db)) / (denom * denom);
}

// Cutoff equal to 1 for s <= lo, 0 for s >= hi, smooth in between.
struct Cutoff {
  double lo = -2.0;
  double hi = -1.0;
  double operator()(double s) const {
    return smooth_transition((s - lo) / (hi - lo));
  }
  double prime(double s) const {
    return smooth_transition_prime((s - lo) / (hi - lo)) / (hi - lo);
  }
};

// ---- RNG ------------------------------------------------------------------

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(gen);
  }
  Vec3 uniform_vec3(double a, double b) {
    return {uniform(a, b), uniform(a, b), uniform(a, b)};
  }
  // Uniform point on the unit sphere.
  Vec3 sphere() {
    const double c = uniform(-1.0, 1.0);
    const double ph = uniform(0.0, 2.0 * pi);
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    return {s * std::cos(ph), s * std::sin(ph), c};
  }
};

struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vml
