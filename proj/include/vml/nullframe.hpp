#pragma once
// Faraday 2-forms, their null decomposition along the light-cone frame
// (L, Lbar, e_theta, e_phi), Hodge duality (epsilon_{0123} = +1, so the dual
// maps (E,B) -> (-B,E)), energy-momentum contractions, conformal-weighted
// energy densities, Lie derivatives along the symmetry fields, and residuals
// of the field equations written in the null frame.

#include <functional>
#include <utility>

#include "vml/kinematics.hpp"
#include "vml/quadrature.hpp"

namespace vml {

struct Faraday {
  // E = (F_{01}, F_{02}, F_{03}); B_i = -1/2 eps_{ijk} F_{jk}.
  Vec3 E{0.0, 0.0, 0.0};
  Vec3 B{0.0, 0.0, 0.0};

  double operator()(int mu, int nu) const {
    if (mu == nu) return 0.0;
    if (mu > nu) return -(*this)(nu, mu);
    if (mu == 0) return E[nu - 1];
    // spatial pair, mu < nu: F_{12}=-B3, F_{13}=B2, F_{23}=-B1
    if (mu == 1 && nu == 2) return -B[2];
    if (mu == 1 && nu == 3) return B[1];
    return -B[0];  // (2,3)
  }

  Faraday& operator+=(const Faraday& o) { E += o.E; B += o.B; return *this; }
};

inline Faraday operator+(Faraday a, const Faraday& b) { return a += b; }
inline Faraday operator-(const Faraday& a, const Faraday& b) {
  return {a.E - b.E, a.B - b.B};
}
inline Faraday operator*(double s, const Faraday& a) { return {s * a.E, s * a.B}; }

// Frobenius-type norm squared: sum over mu<nu of F_{mu nu}^2 = |E|^2 + |B|^2.
inline double fnorm2(const Faraday& F) { return norm2(F.E) + norm2(F.B); }

struct NullComponents {
  Vec2 alpha{0.0, 0.0};     // components along (e_theta, e_phi)
  Vec2 alphabar{0.0, 0.0};
  double rho = 0.0;
  double sigma = 0.0;
};

inline NullComponents null_decompose(const Faraday& F, const Vec3& x) {
  const AngularFrame fr = angular_frame(x);
  const double Eth = dot(F.E, fr.e_theta), Eph = dot(F.E, fr.e_phi);
  const double Bth = dot(F.B, fr.e_theta), Bph = dot(F.B, fr.e_phi);
  return {{dot(F.B, fr.e_phi) - Eth, -Bth - Eph},
          {-Bph - Eth, Bth - Eph},
          dot(F.E, fr.omega),
          -dot(F.B, fr.omega)};
}

inline Faraday hodge_dual(const Faraday& F) { return {-F.B, F.E}; }

// Inverse of null_decompose: rebuild the 2-form from its null components at
// direction omega_dir.
inline Faraday faraday_from_null(const NullComponents& nc,
                                 const Vec3& omega_dir) {
  const AngularFrame fr = angular_frame(omega_dir);
  const double Eth = -(nc.alpha[0] + nc.alphabar[0]) / 2.0;
  const double Eph = -(nc.alpha[1] + nc.alphabar[1]) / 2.0;
  const double Bph = (nc.alpha[0] - nc.alphabar[0]) / 2.0;
  const double Bth = (nc.alphabar[1] - nc.alpha[1]) / 2.0;
  return {nc.rho * fr.omega + Eth * fr.e_theta + Eph * fr.e_phi,
          -nc.sigma * fr.omega + Bth * fr.e_theta + Bph * fr.e_phi};
}

// (T_LL, T_LbarLbar, T_LLbar, T_00) of the energy-momentum tensor.
inline std::array<double, 4> energy_momentum_contraction(const Faraday& F,
                                                         const Vec3& x) {
  const NullComponents nc = null_decompose(F, x);
  const double a2 = nc.alpha[0] * nc.alpha[0] + nc.alpha[1] * nc.alpha[1];
  const double ab2 =
      nc.alphabar[0] * nc.alphabar[0] + nc.alphabar[1] * nc.alphabar[1];
  const double rs = nc.rho * nc.rho + nc.sigma * nc.sigma;
  return {a2, ab2, rs, 0.5 * (a2 + ab2) + rs};
}

// Conformal-Morawetz energy density with optional interior weight exponent a.
inline double morawetz_density(const Faraday& F, double t, const Vec3& x,
                               double a = 0.0) {
  const auto T = energy_momentum_contraction(F, x);
  const double r = norm(x);
  const double wp = jbracket(t + r), wm = jbracket(t - r);
  double d = wp * wp * T[0] + wm * wm * T[1] + (wp * wp + wm * wm) * T[2];
  if (a != 0.0) d *= std::pow(std::max(t - r, 1.0), 2.0 * a);
  return d;
}

using FieldSampler = std::function<Faraday(double, const Vec3&)>;
using FourCurrent = std::function<Vec4(double, const Vec3&)>;  // covariant J_nu

// ---- Symmetry vector fields ----------------------------------------------

enum class VectorFieldId {
  d_t, d_x1, d_x2, d_x3,        // translations
  rot_12, rot_23, rot_31,       // rotations Omega_ij
  boost_01, boost_02, boost_03, // Lorentz boosts Omega_0k
  scaling                       // S (last, per ordering convention)
};

// Coefficients Z^lambda(t,x), index 0 = time.
inline Vec4 vf_coeffs(VectorFieldId id, double t, const Vec3& x) {
  switch (id) {
    case VectorFieldId::d_t: return {1, 0, 0, 0};
    case VectorFieldId::d_x1: return {0, 1, 0, 0};
    case VectorFieldId::d_x2: return {0, 0, 1, 0};
    case VectorFieldId::d_x3: return {0, 0, 0, 1};
    case VectorFieldId::rot_12: return {0, -x[1], x[0], 0};
    case VectorFieldId::rot_23: return {0, 0, -x[2], x[1]};
    case VectorFieldId::rot_31: return {0, x[2], 0, -x[0]};
    case VectorFieldId::boost_01: return {x[0], t, 0, 0};
    case VectorFieldId::boost_02: return {x[1], 0, t, 0};
    case VectorFieldId::boost_03: return {x[2], 0, 0, t};
    case VectorFieldId::scaling: return {t, x[0], x[1], x[2]};
  }
  return {0, 0, 0, 0};
}

// Constant gradient matrix dZ[mu][lambda] = d_{x^mu} Z^lambda.
inline std::array<std::array<double, 4>, 4> vf_grad(VectorFieldId id) {
  std::array<std::array<double, 4>, 4> g{};
  auto set = [&](int mu, int lam, double val) { g[mu][lam] = val; };
  switch (id) {
    case VectorFieldId::rot_12: set(1, 2, 1); set(2, 1, -1); break;
    case VectorFieldId::rot_23: set(2, 3, 1); set(3, 2, -1); break;
    case VectorFieldId::rot_31: set(3, 1, 1); set(1, 3, -1); break;
    case VectorFieldId::boost_01: set(0, 1, 1); set(1, 0, 1); break;
    case VectorFieldId::boost_02: set(0, 2, 1); set(2, 0, 1); break;
    case VectorFieldId::boost_03: set(0, 3, 1); set(3, 0, 1); break;
    case VectorFieldId::scaling:
      for (int m = 0; m < 4; ++m) set(m, m, 1);
      break;
    default: break;  // translations: zero gradient
  }
  return g;
}

// Lie derivative (L_Z F)_{mu nu} = Z(F_{mu nu}) + d_mu(Z^l) F_{l nu}
//                                 + d_nu(Z^l) F_{mu l}, with Z(.) by 4th
// order central differences of step h (default policy fd_step).
inline Faraday lie_derivative(const FieldSampler& sample, VectorFieldId id,
                              double t, const Vec3& x, double h = -1.0) {
  if (h <= 0.0) h = fd_step(t, x);
  const Vec4 Z = vf_coeffs(id, t, x);
  const auto dZ = vf_grad(id);

  auto along = [&](double s) {
    return sample(t + s * Z[0], {x[0] + s * Z[1], x[1] + s * Z[2],
                                 x[2] + s * Z[3]});
  };
  // Directional derivative term, component by component.
  double dir[4][4] = {};
  {
    const Faraday fp = along(h), fm = along(-h), fp2 = along(2 * h),
                  fm2 = along(-2 * h);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu)
        dir[mu][nu] =
            (8.0 * (fp(mu, nu) - fm(mu, nu)) - (fp2(mu, nu) - fm2(mu, nu))) /
            (12.0 * h);
  }
  const Faraday F0 = sample(t, x);
  double out[4][4] = {};
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      double val = dir[mu][nu];
      for (int lam = 0; lam < 4; ++lam)
        val += dZ[mu][lam] * F0(lam, nu) + dZ[nu][lam] * F0(mu, lam);
      out[mu][nu] = val;
    }
  return {{out[0][1], out[0][2], out[0][3]},
          {-out[2][3], out[1][3], -out[1][2]}};
}

// ---- Null-frame field equations -------------------------------------------

// Residuals of the six equations satisfied by a 2-form with electric current
// J and magnetic current Jt, evaluated by 2nd-order central differences so
// refinement studies see clean O(h^2) behavior. The two tangential equations
// are reported as euclidean norms over their (theta, phi) slots.
inline std::array<double, 6> null_maxwell_residual(
    const FieldSampler& sample, const FourCurrent& J, const FourCurrent& Jt,
    double t, const Vec3& x, double h) {
  const AngularFrame fr = angular_frame(x);
  const double r = norm(x);

  auto comps_at = [&](double tt, double rr, double th, double ph) {
    const Vec3 w = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                    std::cos(th)};
    return null_decompose(sample(tt, rr * w), rr * w);
  };
  const double th0 = fr.theta, ph0 = fr.phi;

  // Radial null derivatives of weighted components, 2nd order central.
  auto dL = [&](auto&& g) { return (g(h, h) - g(-h, -h)) / (2.0 * h); };
  auto dLbar = [&](auto&& g) { return (g(h, -h) - g(-h, h)) / (2.0 * h); };
  // g(dt, dr) evaluates the weighted component at (t+dt, r+dr).

  auto w_alpha = [&](int A) {
    return [&, A](double dt, double dr) {
      const auto nc = comps_at(t + dt, r + dr, th0, ph0);
      return (r + dr) * nc.alpha[A];
    };
  };
  auto w_alphabar = [&](int A) {
    return [&, A](double dt, double dr) {
      const auto nc = comps_at(t + dt, r + dr, th0, ph0);
      return (r + dr) * nc.alphabar[A];
    };
  };
  auto w_rho = [&](double dt, double dr) {
    const auto nc = comps_at(t + dt, r + dr, th0, ph0);
    return (r + dr) * (r + dr) * nc.rho;
  };
  auto w_sigma = [&](double dt, double dr) {
    const auto nc = comps_at(t + dt, r + dr, th0, ph0);
    return (r + dr) * (r + dr) * nc.sigma;
  };

  // Angular derivatives at fixed (t, r), 2nd order central; steps scaled so
  // arc length matches h.
  const double hth = h / r, hph = h / (r * std::sin(th0));
  auto d_th = [&](auto&& comp) {
    return (comp(comps_at(t, r, th0 + hth, ph0)) -
            comp(comps_at(t, r, th0 - hth, ph0))) /
           (2.0 * hth);
  };
  auto d_ph = [&](auto&& comp) {
    return (comp(comps_at(t, r, th0, ph0 + hph)) -
            comp(comps_at(t, r, th0, ph0 - hph))) /
           (2.0 * hph);
  };

  const NullComponents nc0 = comps_at(t, r, th0, ph0);
  const double cot = std::cos(th0) / std::sin(th0);
  const double csc = 1.0 / std::sin(th0);

  // Sphere operators at radius r (physical scale carries the 1/r).
  auto sdiv = [&](auto&& beta_th, auto&& beta_ph, const Vec2& b0) {
    return (d_th(beta_th) + cot * b0[0] + csc * d_ph(beta_ph)) / r;
  };
  auto scurl = [&](auto&& beta_th, auto&& beta_ph, const Vec2& b0) {
    // curl beta = div(*beta) with (*b)_th = b_ph, (*b)_ph = -b_th.
    return (d_th(beta_ph) + cot * b0[1] - csc * d_ph(beta_th)) / r;
  };
  auto grad_th = [&](auto&& comp) { return d_th(comp) / r; };
  auto grad_ph = [&](auto&& comp) { return csc * d_ph(comp) / r; };

  auto a_th = [](const NullComponents& c) { return c.alpha[0]; };
  auto a_ph = [](const NullComponents& c) { return c.alpha[1]; };
  auto ab_th = [](const NullComponents& c) { return c.alphabar[0]; };
  auto ab_ph = [](const NullComponents& c) { return c.alphabar[1]; };
  auto c_rho = [](const NullComponents& c) { return c.rho; };
  auto c_sigma = [](const NullComponents& c) { return c.sigma; };

  const Vec4 Jv = J(t, x), Jtv = Jt(t, x);
  auto comp_of = [&](const Vec4& j, const Vec3& dir3) {
    return j[1] * dir3[0] + j[2] * dir3[1] + j[3] * dir3[2];
  };
  const double J_th = comp_of(Jv, fr.e_theta), J_ph = comp_of(Jv, fr.e_phi);
  const double Jt_th = comp_of(Jtv, fr.e_theta), Jt_ph = comp_of(Jtv, fr.e_phi);
  const double J_L = Jv[0] + comp_of(Jv, fr.omega);
  const double J_Lbar = Jv[0] - comp_of(Jv, fr.omega);
  const double Jt_L = Jtv[0] + comp_of(Jtv, fr.omega);
  const double Jt_Lbar = Jtv[0] - comp_of(Jtv, fr.omega);

  // Equation 1: (1/r) D_Lbar(r alpha)_A - grad_A rho - eps^{AB} grad_B sigma
  //             = J_A + eps^{AB} Jt_B.
  const double n1_th = dLbar(w_alpha(0)) / r - grad_th(c_rho) -
                       grad_ph(c_sigma) - (J_th + Jt_ph);
  const double n1_ph = dLbar(w_alpha(1)) / r - grad_ph(c_rho) +
                       grad_th(c_sigma) - (J_ph - Jt_th);
  // Equation 2: (1/r) D_L(r alphabar)_A + grad_A rho - eps^{AB} grad_B sigma
  //             = J_A - eps^{AB} Jt_B.
  const double n2_th = dL(w_alphabar(0)) / r + grad_th(c_rho) -
                       grad_ph(c_sigma) - (J_th - Jt_ph);
  const double n2_ph = dL(w_alphabar(1)) / r + grad_ph(c_rho) +
                       grad_th(c_sigma) - (J_ph + Jt_th);
  // Equations 3-6.
  const double n3 = dLbar(w_rho) / (r * r) +
                    sdiv(ab_th, ab_ph, nc0.alphabar) - J_Lbar;
  const double n4 = dLbar(w_sigma) / (r * r) +
                    scurl(ab_th, ab_ph, nc0.alphabar) - Jt_Lbar;
  const double n5 = -dL(w_rho) / (r * r) + sdiv(a_th, a_ph, nc0.alpha) - J_L;
  const double n6 =
      -dL(w_sigma) / (r * r) - scurl(a_th, a_ph, nc0.alpha) - Jt_L;

  return {std::hypot(n1_th, n1_ph), std::hypot(n2_th, n2_ph), n3, n4, n5, n6};
}

// ---- Complete lifts on phase space ---------------------------------------

using KineticSampler = std::function<double(double, const Vec3&, const Vec3&)>;

// Applies the complete lift of the symmetry field to a kinetic function
// h(t,x,v) by 4th-order central differences. The scaling lift includes the
// +3 zeroth-order term (matching the asymptotic-lift convention).
inline double lifted_apply(const KineticSampler& h, VectorFieldId id, double t,
                           const Vec3& x, const Vec3& v, double step = -1.0) {
  if (step <= 0.0) step = fd_step(t, x);
  const Vec4 Z = vf_coeffs(id, t, x);
  Vec3 Zv{0.0, 0.0, 0.0};
  const double v0 = jbracket(v);
  switch (id) {
    case VectorFieldId::rot_12: Zv = {-v[1], v[0], 0.0}; break;
    case VectorFieldId::rot_23: Zv = {0.0, -v[2], v[1]}; break;
    case VectorFieldId::rot_31: Zv = {v[2], 0.0, -v[0]}; break;
    case VectorFieldId::boost_01: Zv = {v0, 0.0, 0.0}; break;
    case VectorFieldId::boost_02: Zv = {0.0, v0, 0.0}; break;
    case VectorFieldId::boost_03: Zv = {0.0, 0.0, v0}; break;
    default: break;
  }
  auto along = [&](double s) {
    return h(t + s * Z[0],
             {x[0] + s * Z[1], x[1] + s * Z[2], x[2] + s * Z[3]},
             {v[0] + s * Zv[0], v[1] + s * Zv[1], v[2] + s * Zv[2]});
  };
  double out = (8.0 * (along(step) - along(-step)) -
                (along(2 * step) - along(-2 * step))) /
               (12.0 * step);
  if (id == VectorFieldId::scaling) out += 3.0 * h(t, x, v);
  return out;
}

// ---- Energy integrals ------------------------------------------------------

struct RadialGrid {
  double r_min = 0.0;
  double r_max = 10.0;
  int n_r = 48;
  int n_theta = 16;
  int n_phi = 32;
};

enum class EnergyWeight { plain, morawetz };

// Integral over the shell r in [r_min, r_max] of either |F|^2 (plain) or the
// conformal-Morawetz density with interior exponent a.
inline double energy_integral(const FieldSampler& sample, double t,
                              const RadialGrid& grid, double a = 0.0,
                              EnergyWeight w = EnergyWeight::morawetz) {
  const SphereRule sph(grid.n_theta, grid.n_phi);
  auto shell = [&](double r) {
    return r * r * integrate_sphere(
                       [&](const Vec3& omega) {
                         const Vec3 xx = r * omega;
                         const Faraday F = sample(t, xx);
                         if (!std::isfinite(fnorm2(F)))
                           throw domain_error("non-finite field sample");
                         return w == EnergyWeight::plain
                                    ? fnorm2(F)
                                    : morawetz_density(F, t, xx, a);
                       },
                       sph);
  };
  return integrate_segment(shell, grid.r_min, grid.r_max, grid.n_r);
}

}  // namespace vml
