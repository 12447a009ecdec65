#pragma once
// Relativistic momentum utilities: the subluminal-velocity inverse map, null
// components of momenta along the light-cone frame, and the change-of-variables
// Jacobian behind every velocity-average formula.

#include <tuple>
#include <vector>

#include "vml/core.hpp"

namespace vml {

struct Momentum {
  Vec3 v{0.0, 0.0, 0.0};

  double v0() const { return jbracket(v); }
  Vec3 vhat() const { return v / v0(); }
};

struct Event {
  double t = 0.0;
  Vec3 x{0.0, 0.0, 0.0};

  double r() const { return norm(x); }
  double u() const { return t - r(); }
  double ubar() const { return t + r(); }
  bool has_frame() const { return r() > 0.0; }
  Vec3 omega() const {
    if (!has_frame()) throw domain_error("angular frame undefined at origin");
    return x / r();
  }
};

struct NullMomentum {
  double vL = 0.0;
  double vLbar = 0.0;
  Vec2 vslash{0.0, 0.0};  // components along (e_theta, e_phi)
};

// Orthonormal angular frame (e_theta, e_phi) at direction omega, standard
// spherical coordinates. Rejected at the poles where phi is degenerate.
struct AngularFrame {
  Vec3 omega, e_theta, e_phi;
  double theta, phi;
};

inline AngularFrame angular_frame(const Vec3& x) {
  const double r = norm(x);
  if (r == 0.0) throw domain_error("angular frame undefined at origin");
  const Vec3 w = x / r;
  const double sin_th = std::sqrt(w[0] * w[0] + w[1] * w[1]);
  if (sin_th < 1e-14)
    throw domain_error("angular frame undefined at poles");
  const double theta = std::atan2(sin_th, w[2]);
  const double phi = std::atan2(w[1], w[0]);
  const double ct = w[2], st = sin_th;
  const double cp = w[0] / st, sp = w[1] / st;
  return {w,
          {cp * ct, sp * ct, -st},
          {-sp, cp, 0.0},
          theta,
          phi};
}

// Inverse of the relativistic speed map v -> v/v0.
inline Momentum check(const Vec3& y) {
  const double y2 = norm2(y);
  if (y2 >= 1.0) throw domain_error("not a subluminal velocity");
  return Momentum{y / std::sqrt(1.0 - y2)};
}

// Jacobian determinant of v -> x - t*vhat(v): equals -t^3 / <v>^5.
inline double momentum_jacobian(double t, const Momentum& m) {
  if (t <= 0.0) throw domain_error("momentum_jacobian requires t > 0");
  const double v0 = m.v0();
  return -(t * t * t) / (v0 * v0 * v0 * v0 * v0);
}

// FD 3x3 determinant of the same map, as an oracle.
inline double momentum_jacobian_fd(double t, const Momentum& m, double h) {
  double J[3][3];
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      auto comp = [&](double vj) {
        Vec3 v = m.v;
        v[j] = vj;
        return -t * Momentum{v}.vhat()[i];  // x-part drops out of derivatives
      };
      J[i][j] = fd_derivative(comp, m.v[j], h);
    }
  }
  return J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
         J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
         J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
}

// Null components of the four-momentum at spatial position x.
inline NullMomentum null_momentum(const Vec3& x, const Momentum& m) {
  const AngularFrame fr = angular_frame(x);
  const double v0 = m.v0();
  const double wr = dot(fr.omega, m.v);
  return {0.5 * (v0 + wr),
          0.5 * (v0 - wr),
          {dot(fr.e_theta, m.v), dot(fr.e_phi, m.v)}};
}

// The three weight inequalities tying null momentum components to the
// spacetime location; returned as (lhs, rhs) pairs with the constants folded
// into rhs so that lhs <= rhs must hold.
struct WeightReport {
  std::array<std::pair<double, double>, 3> pairs;
};

inline WeightReport weight_report(double t, const Vec3& x, const Momentum& m) {
  const NullMomentum nm = null_momentum(x, m);
  const double v0 = m.v0();
  const double vhat_Lbar = nm.vLbar / v0;
  const Vec2 vs = nm.vslash;
  const double vslash2 = vs[0] * vs[0] + vs[1] * vs[1];
  const double vhat_slash = std::sqrt(vslash2) / v0;
  const double r = norm(x);
  const double zt = jbracket(norm(x - t * m.vhat()));  // <x - t vhat>
  const double ub = jbracket(t + r);                   // <t + |x|>
  const double tm = std::max(t - r, 1.0);
  // 1 + |vslash|^2 <= 4 <v>^2 vhat^{Lbar}
  // vhat^{Lbar} <= 4 (max(t-r,1)/<t+r>) <x-t vhat>
  // |vhat_slash| <= 4 <x-t vhat>/<t+r>
  return {{{std::pair{1.0 + vslash2, 4.0 * v0 * v0 * vhat_Lbar},
            std::pair{vhat_Lbar, 4.0 * (tm / ub) * zt},
            std::pair{vhat_slash, 4.0 * zt / ub}}}};
}

}  // namespace vml
