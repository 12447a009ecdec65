#pragma once
// Scattering-state validation: spherical differential operators (with two
// independent formulas and the duality relation), vacuum null-structure
// checks, the asymptotic constraint identities relating radiation data to the
// limiting 2-form, rho/sigma limit extraction, and energy bookkeeping.

#include <complex>

#include "vml/characteristics.hpp"

namespace vml {

// ---- Spherical operators ---------------------------------------------------

// Tangential 1-form beta(omega) in the (e_theta, e_phi) basis.
using SphericalOneForm = std::function<Vec2(const Vec3&)>;

namespace detail {
inline Vec3 sphere_point(double th, double ph) {
  return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
          std::cos(th)};
}
}  // namespace detail

// (div, curl) at omega via the coordinate formula
// div beta = d_theta beta_theta + cot(theta) beta_theta
//            + csc(theta) d_phi beta_phi,   curl beta = div(*beta).
inline Vec2 sph_div_curl(const SphericalOneForm& beta, const Vec3& omega,
                         double h = 1e-5) {
  const AngularFrame fr = angular_frame(omega);
  if (std::sin(fr.theta) < 1e-6)
    throw domain_error("spherical operators rejected near poles");
  auto comp = [&](double th, double ph, int A) {
    return beta(detail::sphere_point(th, ph))[A];
  };
  const double th = fr.theta, ph = fr.phi;
  const double cot = std::cos(th) / std::sin(th);
  const double csc = 1.0 / std::sin(th);
  const double dth0 = (comp(th + h, ph, 0) - comp(th - h, ph, 0)) / (2 * h);
  const double dth1 = (comp(th + h, ph, 1) - comp(th - h, ph, 1)) / (2 * h);
  const double dph0 = (comp(th, ph + h, 0) - comp(th, ph - h, 0)) / (2 * h);
  const double dph1 = (comp(th, ph + h, 1) - comp(th, ph - h, 1)) / (2 * h);
  const Vec2 b = beta(omega);
  return {dth0 + cot * b[0] + csc * dph1, dth1 + cot * b[1] - csc * dph0};
}

// Cross-check formula: div beta = sum_{i<j} of the derivative of the
// rotation-contracted scalar along the rotation flow.
inline double sph_div_rotation_frame(const SphericalOneForm& beta,
                                     const Vec3& omega, double h = 1e-4) {
  const AngularFrame fr = angular_frame(omega);
  double total = 0.0;
  for (const auto [i, j] :
       std::array<std::pair<int, int>, 3>{{{0, 1}, {1, 2}, {2, 0}}}) {
    auto scalar = [&](const Vec3& w) {
      const AngularFrame f2 = angular_frame(w);
      // Rotation generator as a tangent vector at w.
      Vec3 V{0, 0, 0};
      V[j] += w[i];
      V[i] -= w[j];
      const Vec2 b = beta(w);
      return b[0] * dot(f2.e_theta, V) + b[1] * dot(f2.e_phi, V);
    };
    auto rotate = [&](const Vec3& w, double ang) {
      Vec3 out = w;
      const double c = std::cos(ang), s = std::sin(ang);
      out[i] = c * w[i] - s * w[j];
      out[j] = s * w[i] + c * w[j];
      return out;
    };
    total +=
        (scalar(rotate(fr.omega, h)) - scalar(rotate(fr.omega, -h))) / (2 * h);
  }
  return total;
}

// Duality partner: *beta = (beta_phi, -beta_theta); curl beta = div(*beta).
inline SphericalOneForm hodge_rotate(const SphericalOneForm& beta) {
  return [beta](const Vec3& w) {
    const Vec2 b = beta(w);
    return Vec2{b[1], -b[0]};
  };
}

// Lattice variant used on extracted radiation data: FD in theta, spectral
// (full-ring discrete Fourier) derivative in phi.
inline Vec2 sph_div_curl_ring(
    const std::function<Vec2(double, double)>& beta_tp, double th, double ph,
    int n_phi = 16, double h_th = 1e-3) {
  if (std::sin(th) < 1e-6)
    throw domain_error("spherical operators rejected near poles");
  const double cot = std::cos(th) / std::sin(th);
  const double csc = 1.0 / std::sin(th);
  const Vec2 b = beta_tp(th, ph);
  const double dth0 =
      (beta_tp(th + h_th, ph)[0] - beta_tp(th - h_th, ph)[0]) / (2 * h_th);
  const double dth1 =
      (beta_tp(th + h_th, ph)[1] - beta_tp(th - h_th, ph)[1]) / (2 * h_th);
  // Spectral d/dphi of both components from one uniform ring through ph.
  std::vector<Vec2> ring(n_phi);
  for (int j = 0; j < n_phi; ++j)
    ring[j] = beta_tp(th, ph + 2.0 * pi * j / n_phi);
  Vec2 dph{0.0, 0.0};
  for (int k = 1; k <= n_phi / 2 - 1; ++k) {
    std::complex<double> c0{0.0, 0.0}, c1{0.0, 0.0};
    for (int j = 0; j < n_phi; ++j) {
      const std::complex<double> e =
          std::exp(std::complex<double>(0.0, -2.0 * pi * k * j / n_phi));
      c0 += ring[j][0] * e;
      c1 += ring[j][1] * e;
    }
    // derivative at offset 0 of sum_k (2/n) Re(c_k e^{ik phi}).
    dph[0] += 2.0 / n_phi * std::real(std::complex<double>(0.0, k) * c0);
    dph[1] += 2.0 / n_phi * std::real(std::complex<double>(0.0, k) * c1);
  }
  return {dth0 + cot * b[0] + csc * dph[1], dth1 + cot * b[1] - csc * dph[0]};
}

// ---- Vacuum null structure --------------------------------------------------

// Sup residuals of omega.E = 0, omega.B = 0, E + omega x B = 0,
// B - omega x E = 0 over a (u, omega) probe lattice.
struct VacuumStateReport {
  double radial_E = 0.0, radial_B = 0.0, plus_comb = 0.0, minus_comb = 0.0;
  double scale = 0.0;  // sup |E| + |B|, for relative reading
};

inline VacuumStateReport validate_vacuum_state(
    const std::function<Vec3(double, const Vec3&)>& Einf,
    const std::function<Vec3(double, const Vec3&)>& Binf,
    const std::vector<double>& u_grid, const SphereRule& sph) {
  VacuumStateReport r;
  for (double u : u_grid)
    for (const auto& node : sph.nodes) {
      const Vec3 E = Einf(u, node.omega), B = Binf(u, node.omega);
      r.radial_E = std::max(r.radial_E, std::abs(dot(node.omega, E)));
      r.radial_B = std::max(r.radial_B, std::abs(dot(node.omega, B)));
      r.plus_comb = std::max(r.plus_comb, norm(E + cross(node.omega, B)));
      r.minus_comb = std::max(r.minus_comb, norm(B - cross(node.omega, E)));
      r.scale = std::max(r.scale, norm(E) + norm(B));
    }
  return r;
}

// ---- Asymptotic constraints -------------------------------------------------

// alphabar of the limiting 2-form read as a field over v-space, at v = tau w,
// as a tangential 1-form of w; spherical operators at the physical radius tau.
inline Vec2 limit_field_alphabar_div_curl(
    const std::function<Faraday(const Vec3&)>& limit, double tau,
    const Vec3& omega, double h = 1e-5) {
  auto beta = [&](const Vec3& w) {
    return null_decompose(limit(tau * w), w).alphabar;
  };
  const Vec2 dc = sph_div_curl(beta, omega, h);
  return {dc[0] / tau, dc[1] / tau};
}

// Right-hand sides of the two constraint identities at direction omega:
//   div:  (1/2pi) iint (f(x,v) - f(x,|v| omega)) dv dx
//         - int_0^inf (2 tau^2/(<tau>+tau)) div alphabar(limit)(tau omega)
//           dtau/<tau>^3,
//   curl: only the tau-integral, with the curl.
struct ConstraintRhs {
  double div = 0.0, curl = 0.0;
  double profile_term = 0.0, tau_term_div = 0.0, tau_term_curl = 0.0;
};

inline ConstraintRhs constraint_rhs(
    const DistributionProfile& p,
    const std::function<Faraday(const Vec3&)>& limit, const Vec3& omega,
    int n_box = 24, double tau_max = 12.0, int n_tau = 48) {
  ConstraintRhs out;
  // Profile term: the second integrand freezes the direction of v at omega
  // but keeps the full dv measure.
  const Vec3 Lz{p.z_extent, p.z_extent, p.z_extent};
  const Vec3 Lv{p.v_extent, p.v_extent, p.v_extent};
  auto inner = [&](const Vec3& x) {
    return integrate_box(
        [&](const Vec3& v) {
          return p.eval(x, v) - p.eval(x, norm(v) * omega);
        },
        -1.0 * Lv, Lv, n_box);
  };
  out.profile_term =
      integrate_box(inner, -1.0 * Lz, Lz, n_box) / (2.0 * pi);
  auto tau_int = [&](int which) {
    return integrate_segment(
        [&](double tau) {
          const double jt = jbracket(tau);
          const double w = 2.0 * tau * tau / (jt + tau) / (jt * jt * jt);
          return w * limit_field_alphabar_div_curl(limit, tau, omega)[which];
        },
        1e-6, tau_max, n_tau);
  };
  out.tau_term_div = tau_int(0);
  out.tau_term_curl = tau_int(1);
  out.div = out.profile_term - out.tau_term_div;
  out.curl = -out.tau_term_curl;
  return out;
}

// Left-hand sides: u-integrals of the spherical divergence and curl of the
// extracted radiation field of F, with a simple error budget from the
// Richardson discrepancy and u-grid refinement.
struct ConstraintReport {
  double lhs_div = 0.0, lhs_curl = 0.0;
  double rhs_div = 0.0, rhs_curl = 0.0;
  double resid_div = 0.0, resid_curl = 0.0;
  double refine = 0.0;          // u-grid refinement discrepancy
  double extraction_err = 0.0;  // raw last-two-radii scatter of r alphabar
  double budget = 0.0;
  bool within_budget = false;
};

inline ConstraintReport constraint_residual(
    const FieldSampler& F, const DistributionProfile& p,
    const std::function<Faraday(const Vec3&)>& limit, const Vec3& omega,
    double u_min = -10.0, double u_max = 10.0, int n_u = 21,
    const std::vector<double>& radii = {50.0, 100.0, 200.0, 400.0},
    int n_phi_ring = 8, double h_th = 0.1, int n_box = 24) {
  const AngularFrame fr = angular_frame(omega);
  auto beta_tp = [&](double u) {
    return [&, u](double th, double ph) {
      return radiation_extract(F, u, detail::sphere_point(th, ph), radii)
          .alphabar;
    };
  };
  // Trapezoid in u on the uniform grid; budget from half-resolution rerun
  // plus the extraction discrepancy at the probe direction.
  auto integrate_u = [&](int n, double* extraction_err) {
    double sdiv = 0.0, scurl = 0.0;
    const double du = (u_max - u_min) / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double u = u_min + i * du;
      const Vec2 dc = sph_div_curl_ring(beta_tp(u), fr.theta, fr.phi,
                                        n_phi_ring, h_th);
      const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      sdiv += w * du * dc[0];
      scurl += w * du * dc[1];
      if (extraction_err) {
        // Discrepancy between the last two radii pairs of the raw sequence.
        const Vec3 x1 = radii[radii.size() - 2] * omega;
        const Vec3 x2 = radii.back() * omega;
        const NullComponents a =
            null_decompose(F(radii[radii.size() - 2] + u, x1), x1);
        const NullComponents b =
            null_decompose(F(radii.back() + u, x2), x2);
        const double d =
            std::hypot(radii[radii.size() - 2] * a.alphabar[0] -
                           radii.back() * b.alphabar[0],
                       radii[radii.size() - 2] * a.alphabar[1] -
                           radii.back() * b.alphabar[1]);
        *extraction_err = std::max(*extraction_err, d);
      }
    }
    return Vec2{sdiv, scurl};
  };
  double extraction_err = 0.0;
  const Vec2 fine = integrate_u(n_u, &extraction_err);
  const Vec2 coarse = integrate_u(n_u / 2 + 1, nullptr);

  ConstraintReport rep;
  rep.lhs_div = fine[0];
  rep.lhs_curl = fine[1];
  const ConstraintRhs rhs = constraint_rhs(p, limit, omega, n_box);
  rep.rhs_div = rhs.div;
  rep.rhs_curl = rhs.curl;
  rep.resid_div = std::abs(rep.lhs_div - rep.rhs_div);
  rep.resid_curl = std::abs(rep.lhs_curl - rep.rhs_curl);
  // Budget = u-refinement difference plus the extraction scatter propagated
  // through the angular derivatives: the unconverged part of r alphabar (of
  // size <= the last-two-radii scatter, amplified by up to 5x through the two
  // Richardson levels with weights {2,-1} and {4/3,-1/3}) enters div/curl
  // through the theta difference quotient (factor 1/h_th) and is then
  // integrated over the u-range.  Factor 2 safety margin on top.
  rep.refine = std::hypot(fine[0] - coarse[0], fine[1] - coarse[1]);
  rep.extraction_err = extraction_err;
  rep.budget =
      2.0 * (rep.refine +
             5.0 * extraction_err * (u_max - u_min) / h_th + 1e-8);
  rep.within_budget =
      rep.resid_div <= rep.budget && rep.resid_curl <= rep.budget;
  return rep;
}

// ---- rho / sigma limits -----------------------------------------------------

struct RhoSigmaReport {
  std::vector<double> u;
  std::vector<double> rho, sigma;  // extracted r^2-weighted limits
  double rho_minus_inf = 0.0, sigma_minus_inf = 0.0;  // earliest grid point
};

inline RhoSigmaReport rho_sigma_limits(
    const FieldSampler& F, const Vec3& omega, const std::vector<double>& u_grid,
    const std::vector<double>& radii = {50.0, 100.0, 200.0, 400.0}) {
  RhoSigmaReport rep;
  for (double u : u_grid) {
    const RadiationLimits lim = radiation_extract(F, u, omega, radii);
    rep.u.push_back(u);
    rep.rho.push_back(lim.rho);
    rep.sigma.push_back(lim.sigma);
  }
  if (!rep.u.empty()) {
    rep.rho_minus_inf = rep.rho.front();
    rep.sigma_minus_inf = rep.sigma.front();
  }
  return rep;
}

// ---- Energy bookkeeping -----------------------------------------------------

struct EnergyReport {
  double kinetic = 0.0;
  double field = 0.0;
  double total = 0.0;
};

// E_tot(t) = iint <v> f dv dx + (1/2) int |E|^2 + |B|^2 dx over the given
// boxes / radial grid.
inline EnergyReport energy_accounts_finite(
    const KineticSampler& f, const FieldSampler& F, double t, double x_extent,
    double v_extent, int n_box, const RadialGrid& field_grid) {
  EnergyReport rep;
  const Vec3 Lx{x_extent, x_extent, x_extent};
  const Vec3 Lv{v_extent, v_extent, v_extent};
  rep.kinetic = integrate_box(
      [&](const Vec3& x) {
        return integrate_box(
            [&](const Vec3& v) { return jbracket(v) * f(t, x, v); },
            -1.0 * Lv, Lv, n_box);
      },
      -1.0 * Lx, Lx, n_box);
  rep.field =
      0.5 * energy_integral(F, t, field_grid, 0.0, EnergyWeight::plain);
  rep.total = rep.kinetic + rep.field;
  return rep;
}

// E_inf = iint <v> f_inf dz dv
//         + (1/4) int_u int_omega |E-omega x B|^2 + |B+omega x E|^2.
inline EnergyReport energy_accounts_scattering(
    const DistributionProfile& f_inf,
    const std::function<Vec3(double, const Vec3&)>& Einf,
    const std::function<Vec3(double, const Vec3&)>& Binf, double u_min,
    double u_max, int n_u, const SphereRule& sph) {
  EnergyReport rep;
  const Vec3 Lz{f_inf.z_extent, f_inf.z_extent, f_inf.z_extent};
  const Vec3 Lv{f_inf.v_extent, f_inf.v_extent, f_inf.v_extent};
  rep.kinetic = integrate_box(
      [&](const Vec3& z) {
        return integrate_box(
            [&](const Vec3& v) { return jbracket(v) * f_inf.eval(z, v); },
            -1.0 * Lv, Lv, 24);
      },
      -1.0 * Lz, Lz, 24);
  rep.field = 0.25 * integrate_segment(
                         [&](double u) {
                           return integrate_sphere(
                               [&](const Vec3& w) {
                                 const Vec3 E = Einf(u, w), B = Binf(u, w);
                                 return norm2(E - cross(w, B)) +
                                        norm2(B + cross(w, E));
                               },
                               sph);
                         },
                         u_min, u_max, n_u);
  rep.total = rep.kinetic + rep.field;
  return rep;
}

}  // namespace vml
