#pragma once
// Asymptotic data: distribution profiles on (z, v) phase space represented as
// finite sums of separable terms g(z)*h(v) with analytic gradients, radiation
// profiles on null infinity, velocity moments, free transport, the linear
// current, and the time-reversal involution.
//
// The separable representation is what keeps the cone quadratures affordable:
// every lifted derivative used here maps separable sums to separable sums, so
// z-moments reduce to cached scalars (one 3D quadrature per term, ever).

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

#include "vml/nullframe.hpp"

namespace vml {

// ---- Scalar fields with analytic gradients --------------------------------

struct ScalarField3 {
  std::function<double(const Vec3&)> val;
  std::function<Vec3(const Vec3&)> grad;
};

inline ScalarField3 sf_fd_grad(std::function<double(const Vec3&)> f,
                               double h = 1e-5) {
  auto g = [f, h](const Vec3& x) {
    Vec3 out;
    for (int k = 0; k < 3; ++k) {
      auto fk = [&](double s) {
        Vec3 y = x;
        y[k] = s;
        return f(y);
      };
      out[k] = fd_derivative(fk, x[k], h);
    }
    return out;
  };
  return {f, g};
}

inline ScalarField3 sf_scale(double s, const ScalarField3& f) {
  return {[s, f = f.val](const Vec3& x) { return s * f(x); },
          [s, g = f.grad](const Vec3& x) { return s * g(x); }};
}

inline ScalarField3 sf_add(const ScalarField3& a, const ScalarField3& b) {
  return {[fa = a.val, fb = b.val](const Vec3& x) { return fa(x) + fb(x); },
          [ga = a.grad, gb = b.grad](const Vec3& x) { return ga(x) + gb(x); }};
}

// x_k * f
inline ScalarField3 sf_mul_coord(int k, const ScalarField3& f) {
  return {[k, fv = f.val](const Vec3& x) { return x[k] * fv(x); },
          [k, fv = f.val, fg = f.grad](const Vec3& x) {
            Vec3 g = x[k] * fg(x);
            g[k] += fv(x);
            return g;
          }};
}

// d/dx_k f ; its own gradient falls back to finite differences.
inline ScalarField3 sf_partial(const ScalarField3& f, int k) {
  auto val = [k, g = f.grad](const Vec3& x) { return g(x)[k]; };
  return sf_fd_grad(val);
}

// vhat_j * h  (vhat = v/<v>)
inline ScalarField3 sf_mul_vhat(int j, const ScalarField3& h) {
  return {[j, hv = h.val](const Vec3& v) { return v[j] / jbracket(v) * hv(v); },
          [j, hv = h.val, hg = h.grad](const Vec3& v) {
            const double b = jbracket(v), f = hv(v);
            Vec3 g = (v[j] / b) * hg(v);
            for (int i = 0; i < 3; ++i)
              g[i] += ((i == j ? 1.0 / b : 0.0) - v[j] * v[i] / (b * b * b)) * f;
            return g;
          }};
}

// <v>^p * h, integer p (possibly negative)
inline ScalarField3 sf_mul_bracket(const ScalarField3& h, int p) {
  return {[p, hv = h.val](const Vec3& v) {
            return std::pow(jbracket(v), p) * hv(v);
          },
          [p, hv = h.val, hg = h.grad](const Vec3& v) {
            const double b = jbracket(v);
            const double bp = std::pow(b, p);
            Vec3 g = bp * hg(v);
            const double f = hv(v);
            for (int i = 0; i < 3; ++i)
              g[i] += p * std::pow(b, p - 2) * v[i] * f;
            return g;
          }};
}

// ---- Distribution profiles -------------------------------------------------

struct ProfileTerm {
  ScalarField3 z;  // spatial factor g
  ScalarField3 v;  // momentum factor h
};

enum class LiftedDerivativeId {
  dt_inf,        // -vhat . grad_z
  dz1, dz2, dz3, // plain z-derivatives
  rot_12, rot_23, rot_31,          // rotations acting on z and v
  boost_01, boost_02, boost_03,    // -z^k vhat.grad_z + v0 d_{v^k}
  scaling,                         // z.grad_z + 3
  comp_Dt,                         // -Boost_i(v^i v0 h) - h
  comp_Dx1, comp_Dx2, comp_Dx3     // Boost_k(<v>^2 h) + Rot_{ki}(v^i v0 h)
};

class DistributionProfile {
 public:
  std::vector<ProfileTerm> terms;
  double z_extent = 8.0;  // quadrature half-width certified by the decay
  double v_extent = 6.0;
  bool isotropic = false;
  std::optional<double> total_integral;  // analytic, when known

  double eval(const Vec3& z, const Vec3& v) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.z.val(z) * t.v.val(v);
    return s;
  }
  Vec3 grad_z(const Vec3& z, const Vec3& v) const {
    Vec3 s{0, 0, 0};
    for (const auto& t : terms) s += t.v.val(v) * t.z.grad(z);
    return s;
  }
  Vec3 grad_v(const Vec3& z, const Vec3& v) const {
    Vec3 s{0, 0, 0};
    for (const auto& t : terms) s += t.z.val(z) * t.v.grad(v);
    return s;
  }

  // Cached z-integrals per term (one box quadrature each, ever).
  double term_z_integral(std::size_t i, int n_gl = 40) const {
    if (cache_.size() != terms.size()) cache_.assign(terms.size(), {});
    auto& slot = cache_[i];
    if (!slot) {
      const Vec3 L{z_extent, z_extent, z_extent};
      slot = integrate_box(terms[i].z.val, -1.0 * L, L, n_gl);
    }
    return *slot;
  }

 private:
  mutable std::vector<std::optional<double>> cache_;
};

// f(z,v) = A exp(-|z-cz|^2/sz^2) exp(-|v-cv|^2/sv^2).
inline DistributionProfile gaussian_profile(double A, double sigma_z,
                                            double sigma_v,
                                            const Vec3& center_z = {0, 0, 0},
                                            const Vec3& center_v = {0, 0, 0},
                                            const Vec3& sigma_v_axes = {0, 0,
                                                                        0}) {
  if (sigma_z <= 0.0 || sigma_v <= 0.0)
    throw domain_error("gaussian_profile requires positive widths");
  auto gauss = [](const Vec3& c, const Vec3& s) {
    return ScalarField3{
        [c, s](const Vec3& x) {
          double q = 0.0;
          for (int i = 0; i < 3; ++i) {
            const double d = (x[i] - c[i]) / s[i];
            q += d * d;
          }
          return std::exp(-q);
        },
        [c, s](const Vec3& x) {
          double q = 0.0;
          for (int i = 0; i < 3; ++i) {
            const double d = (x[i] - c[i]) / s[i];
            q += d * d;
          }
          const double f = std::exp(-q);
          Vec3 g;
          for (int i = 0; i < 3; ++i)
            g[i] = -2.0 * (x[i] - c[i]) / (s[i] * s[i]) * f;
          return g;
        }};
  };
  const Vec3 sz{sigma_z, sigma_z, sigma_z};
  Vec3 sv{sigma_v, sigma_v, sigma_v};
  double vol_v = 1.0;
  for (int i = 0; i < 3; ++i) {
    if (sigma_v_axes[i] > 0.0) sv[i] = sigma_v_axes[i];
    vol_v *= sv[i];
  }
  DistributionProfile p;
  p.terms.push_back({sf_scale(A, gauss(center_z, sz)), gauss(center_v, sv)});
  p.z_extent = std::max(6.0, norm(center_z) + 7.0 * sigma_z);
  p.v_extent = std::max(4.0, norm(center_v) + 7.0 * (*std::max_element(
                                                  sv.begin(), sv.end())));
  p.isotropic = norm(center_z) == 0.0 && norm(center_v) == 0.0 &&
                sv[0] == sv[1] && sv[1] == sv[2];
  const double spi = std::sqrt(pi);
  p.total_integral =
      A * (spi * sigma_z) * (spi * sigma_z) * (spi * sigma_z) *
      (spi * spi * spi * vol_v);
  return p;
}

// Compactly supported polynomial bump: A prod_i (1 - ((x_i-c_i)/R_i)^2)_+^4.
inline DistributionProfile bump_profile(double A, double Rz, double Rv,
                                        const Vec3& center_z = {0, 0, 0},
                                        const Vec3& center_v = {0, 0, 0}) {
  if (Rz <= 0.0 || Rv <= 0.0)
    throw domain_error("bump_profile requires positive radii");
  auto bump = [](const Vec3& c, double R) {
    return ScalarField3{
        [c, R](const Vec3& x) {
          double f = 1.0;
          for (int i = 0; i < 3; ++i) {
            const double s = (x[i] - c[i]) / R;
            const double q = 1.0 - s * s;
            if (q <= 0.0) return 0.0;
            f *= q * q * q * q;
          }
          return f;
        },
        [c, R](const Vec3& x) {
          double fac[3], dfac[3];
          for (int i = 0; i < 3; ++i) {
            const double s = (x[i] - c[i]) / R;
            const double q = 1.0 - s * s;
            if (q <= 0.0) return Vec3{0, 0, 0};
            fac[i] = q * q * q * q;
            dfac[i] = -8.0 * s / R * q * q * q;
          }
          return Vec3{dfac[0] * fac[1] * fac[2], fac[0] * dfac[1] * fac[2],
                      fac[0] * fac[1] * dfac[2]};
        }};
  };
  DistributionProfile p;
  p.terms.push_back({sf_scale(A, bump(center_z, Rz)), bump(center_v, Rv)});
  p.z_extent = norm(center_z) + Rz + 0.5;
  p.v_extent = norm(center_v) + Rv + 0.5;
  p.isotropic = false;  // product bump is not rotation invariant
  // 1D integral of (1-s^2)^4 over [-1,1] is 256/315.
  const double I1 = 256.0 / 315.0;
  p.total_integral = A * std::pow(I1 * Rz, 3) * std::pow(I1 * Rv, 3);
  return p;
}

// sup over a probe lattice of <z>^4 <v>^7 |f|; the finite decay certificate.
inline double decay_certificate(const DistributionProfile& p, int n = 9) {
  double sup = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double rz = p.z_extent * a / (n - 1.0);
          const double rv = p.v_extent * b / (n - 1.0);
          const double th = pi * c / (n - 1.0);
          const double ph = 2.0 * pi * d / n;
          const Vec3 z = {rz * std::sin(th) * std::cos(ph),
                          rz * std::sin(th) * std::sin(ph), rz * std::cos(th)};
          const Vec3 v = {rv * std::sin(ph) * std::cos(th),
                          rv * std::sin(ph) * std::sin(th), rv * std::cos(ph)};
          const double w = std::pow(jbracket(z), 4) * std::pow(jbracket(v), 7);
          sup = std::max(sup, w * std::abs(p.eval(z, v)));
        }
  return sup;
}

// ---- Lifted derivatives ----------------------------------------------------

namespace detail {
// v^i <v> h with analytic gradient.
inline ScalarField3 sf_mul_vi_v0(int i, const ScalarField3& h) {
  ScalarField3 vh = sf_mul_bracket(h, 1);  // <v> h
  return {[i, f = vh.val](const Vec3& v) { return v[i] * f(v); },
          [i, f = vh.val, g = vh.grad](const Vec3& v) {
            Vec3 out = v[i] * g(v);
            out[i] += f(v);
            return out;
          }};
}
}  // namespace detail

inline DistributionProfile lifted_profile(const DistributionProfile& p,
                                          LiftedDerivativeId id);

namespace detail {

inline void lift_boost(const DistributionProfile& p, int k,
                       DistributionProfile& out) {
  // -z^k vhat.grad_z + v0 d_{v^k} on each separable term.
  for (const auto& t : p.terms) {
    for (int j = 0; j < 3; ++j)
      out.terms.push_back({sf_scale(-1.0, sf_mul_coord(k, sf_partial(t.z, j))),
                           sf_mul_vhat(j, t.v)});
    out.terms.push_back({t.z, sf_mul_bracket(sf_partial(t.v, k), 1)});
  }
}

inline void lift_rot(const DistributionProfile& p, int i, int j,
                     DistributionProfile& out) {
  // (z^i d_{z^j} - z^j d_{z^i}) in z plus the same rotation in v.
  for (const auto& t : p.terms) {
    out.terms.push_back(
        {sf_add(sf_mul_coord(i, sf_partial(t.z, j)),
                sf_scale(-1.0, sf_mul_coord(j, sf_partial(t.z, i)))),
         t.v});
    out.terms.push_back(
        {t.z, sf_add(sf_mul_coord(i, sf_partial(t.v, j)),
                     sf_scale(-1.0, sf_mul_coord(j, sf_partial(t.v, i))))});
  }
}

}  // namespace detail

inline DistributionProfile lifted_profile(const DistributionProfile& p,
                                          LiftedDerivativeId id) {
  DistributionProfile out;
  out.z_extent = p.z_extent;
  out.v_extent = p.v_extent;
  out.isotropic = false;
  using L = LiftedDerivativeId;
  switch (id) {
    case L::dt_inf:
      for (const auto& t : p.terms)
        for (int j = 0; j < 3; ++j)
          out.terms.push_back(
              {sf_scale(-1.0, sf_partial(t.z, j)), sf_mul_vhat(j, t.v)});
      break;
    case L::dz1:
    case L::dz2:
    case L::dz3: {
      const int k = static_cast<int>(id) - static_cast<int>(L::dz1);
      for (const auto& t : p.terms)
        out.terms.push_back({sf_partial(t.z, k), t.v});
      break;
    }
    case L::rot_12: detail::lift_rot(p, 0, 1, out); break;
    case L::rot_23: detail::lift_rot(p, 1, 2, out); break;
    case L::rot_31: detail::lift_rot(p, 2, 0, out); break;
    case L::boost_01: detail::lift_boost(p, 0, out); break;
    case L::boost_02: detail::lift_boost(p, 1, out); break;
    case L::boost_03: detail::lift_boost(p, 2, out); break;
    case L::scaling:
      for (const auto& t : p.terms) {
        ScalarField3 zg = sf_scale(3.0, t.z);
        for (int j = 0; j < 3; ++j)
          zg = sf_add(zg, sf_mul_coord(j, sf_partial(t.z, j)));
        out.terms.push_back({zg, t.v});
      }
      break;
    case L::comp_Dt: {
      // -Boost_i(v^i v0 h) - h
      for (int i = 0; i < 3; ++i) {
        DistributionProfile q;
        q.z_extent = p.z_extent;
        q.v_extent = p.v_extent;
        for (const auto& t : p.terms)
          q.terms.push_back({t.z, detail::sf_mul_vi_v0(i, t.v)});
        DistributionProfile b = lifted_profile(
            q, static_cast<L>(static_cast<int>(L::boost_01) + i));
        for (auto& t : b.terms)
          out.terms.push_back({sf_scale(-1.0, t.z), t.v});
      }
      for (const auto& t : p.terms)
        out.terms.push_back({sf_scale(-1.0, t.z), t.v});
      break;
    }
    case L::comp_Dx1:
    case L::comp_Dx2:
    case L::comp_Dx3: {
      const int k = static_cast<int>(id) - static_cast<int>(L::comp_Dx1);
      DistributionProfile q;
      q.z_extent = p.z_extent;
      q.v_extent = p.v_extent;
      for (const auto& t : p.terms)
        q.terms.push_back({t.z, sf_mul_bracket(t.v, 2)});
      DistributionProfile b = lifted_profile(
          q, static_cast<L>(static_cast<int>(L::boost_01) + k));
      out.terms = std::move(b.terms);
      for (int i = 0; i < 3; ++i) {
        if (i == k) continue;
        DistributionProfile r;
        r.z_extent = p.z_extent;
        r.v_extent = p.v_extent;
        for (const auto& t : p.terms)
          r.terms.push_back({t.z, detail::sf_mul_vi_v0(i, t.v)});
        // Rot_{ki}: rotation with index pair (k, i).
        static constexpr LiftedDerivativeId rot_of[3][3] = {
            {L::rot_12, L::rot_12, L::rot_31},   // placeholder diagonal unused
            {L::rot_12, L::rot_12, L::rot_23},
            {L::rot_31, L::rot_23, L::rot_23}};
        DistributionProfile rr = lifted_profile(r, rot_of[k][i]);
        // Orientation: rot_of gives Omega_{min,max} in cyclic convention;
        // flip sign when (k,i) is reversed relative to the stored pair.
        const bool flip = (k == 1 && i == 0) || (k == 2 && i == 1) ||
                          (k == 0 && i == 2);
        for (auto& t : rr.terms)
          out.terms.push_back({flip ? sf_scale(-1.0, t.z) : t.z, t.v});
      }
      break;
    }
  }
  return out;
}

// int_z [<v>^p (op f)](z,v) dz via the cached separable z-integrals.
inline double spatial_moment(const DistributionProfile& p, int pw,
                             const Vec3& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.terms.size(); ++i)
    s += p.term_z_integral(i) * p.terms[i].v.val(v);
  return std::pow(jbracket(v), pw) * s;
}

inline double spatial_moment(const DistributionProfile& p, int pw,
                             const Vec3& v, LiftedDerivativeId op) {
  return spatial_moment(lifted_profile(p, op), pw, v);
}

// ---- Free transport and the linear current --------------------------------

// f1(t,x,v) = f_inf(x - t vhat, v).
inline KineticSampler free_transport(const DistributionProfile& p) {
  auto sp = std::make_shared<DistributionProfile>(p);
  return [sp](double t, const Vec3& x, const Vec3& v) {
    return sp->eval(x - (t / jbracket(v)) * v, v);
  };
}

// Covariant four-current J(f1)_nu = (-int f1 dv, int vhat_i f1 dv). The
// v-integral is evaluated after the change of variables v -> y = x - t vhat
// (volume factor <v>^5 s^2 / t^3) in spherical coordinates y = x + s omega,
// with the radial extent stopped at the light cone s = t and at the spatial
// decay radius of the profile, so the integrand stays smooth at every time.
// Very small times use the direct v-box quadrature instead.
inline Vec4 linear_current(const DistributionProfile& p, double t,
                           const Vec3& x, int n_gl = 32, int n_th = 16,
                           int n_ph = 32) {
  Vec4 out{0, 0, 0, 0};
  std::array<std::vector<double>, 4> acc;
  auto add = [&](const Vec3& v, double f, double w) {
    const double b = jbracket(v);
    acc[0].push_back(-w * f);
    for (int i = 0; i < 3; ++i) acc[i + 1].push_back(w * (v[i] / b) * f);
  };
  if (t < 0.05) {
    const auto& g = gl_rule(n_gl);
    const double L = p.v_extent;
    for (std::size_t a = 0; a < g.node.size(); ++a)
      for (std::size_t b = 0; b < g.node.size(); ++b)
        for (std::size_t c = 0; c < g.node.size(); ++c) {
          const Vec3 v = {L * g.node[a], L * g.node[b], L * g.node[c]};
          const double w =
              L * L * L * g.weight[a] * g.weight[b] * g.weight[c];
          add(v, p.eval(x - (t / jbracket(v)) * v, v), w);
        }
  } else if (t > norm(x) + 1.7320508075688772 * p.z_extent) {
    // The cone |x - y| < t contains the whole spatial support: the y-box
    // integrand has no kink and the box rule converges spectrally.
    const auto& g = gl_rule(n_gl);
    const double L = p.z_extent;
    for (std::size_t a = 0; a < g.node.size(); ++a)
      for (std::size_t b = 0; b < g.node.size(); ++b)
        for (std::size_t c = 0; c < g.node.size(); ++c) {
          const Vec3 y = {L * g.node[a], L * g.node[b], L * g.node[c]};
          const Vec3 w3 = (x - y) / t;
          if (norm2(w3) >= 1.0 - 1e-12) continue;
          const Momentum m = check(w3);
          const double b0 = m.v0();
          const double jac = b0 * b0 * b0 * b0 * b0 / (t * t * t);
          const double w =
              L * L * L * g.weight[a] * g.weight[b] * g.weight[c] * jac;
          add(m.v, p.eval(y, m.v), w);
        }
  } else {
    const auto& g = gl_rule(n_gl);
    const SphereRule sph(n_th, n_ph);
    const double s_max = std::min(t * (1.0 - 1e-9),
                                  norm(x) + 1.7320508075688772 * p.z_extent);
    for (const auto& node : sph.nodes)
      for (std::size_t q = 0; q < g.node.size(); ++q) {
        const double s = 0.5 * s_max * (1.0 + g.node[q]);
        const Vec3 y = x + s * node.omega;
        const Vec3 w3 = (-s / t) * node.omega;
        if (norm2(w3) >= 1.0 - 1e-12) continue;
        const Momentum m = check(w3);
        const double b0 = m.v0();
        const double f = p.eval(y, m.v);
        if (f == 0.0) continue;
        const double jac = b0 * b0 * b0 * b0 * b0 * s * s / (t * t * t);
        add(m.v, f, 0.5 * s_max * g.weight[q] * node.weight * jac);
      }
  }
  for (int nu = 0; nu < 4; ++nu) out[nu] = pairwise_sum(acc[nu]);
  return out;
}

// ---- Radiation profiles ----------------------------------------------------

// Real spherical harmonics (l <= 2) and tangential gradients on S^2.
struct SphereHarmonic {
  int l = 1, m = 0;
  double eval(double th, double ph) const {
    const double c = std::cos(th), s = std::sin(th);
    switch (l * 10 + (m + l)) {  // compact dispatch: key = 10 l + (m+l)
      case 0: return 1.0;                                        // (0,0)
      case 10: return s * std::sin(ph);                          // (1,-1)
      case 11: return c;                                         // (1,0)
      case 12: return s * std::cos(ph);                          // (1,1)
      case 20: return s * s * std::sin(2 * ph);                  // (2,-2)
      case 21: return s * c * std::sin(ph);                      // (2,-1)
      case 22: return 3 * c * c - 1;                             // (2,0)
      case 23: return s * c * std::cos(ph);                      // (2,1)
      case 24: return s * s * std::cos(2 * ph);                  // (2,2)
    }
    throw domain_error("sphere mode out of range (l <= 2)");
  }
  // (e_theta, e_phi) components of the tangential gradient:
  // (d_theta Y, (1/sin) d_phi Y).
  Vec2 grad(double th, double ph) const {
    const double h = 1e-6;
    const double dth =
        (eval(th + h, ph) - eval(th - h, ph)) / (2 * h);
    const double dph =
        (eval(th, ph + h) - eval(th, ph - h)) / (2 * h) / std::sin(th);
    return {dth, dph};
  }
  double laplace_eigenvalue() const { return -double(l * (l + 1)); }
};

struct RadiationProfile {
  // alphabar(u, omega) in the (e_theta, e_phi) basis.
  std::function<Vec2(double, const Vec3&)> alphabar;
  // Cumulative scalars rhoI, sigmaI (integrals from u = -infinity).
  std::function<double(double, const Vec3&)> rhoI;
  std::function<double(double, const Vec3&)> sigmaI;
  double u_decay_scale = 1.0;  // |alphabar| negligible for |u| >> scale
};

// Separable profile psi(u) * (mode pattern on S^2); kind "grad" produces a
// curl-free pattern, "curl" a divergence-free one. psi is a Gaussian
// A exp(-((u-c)/s)^2) with analytic antiderivative.
inline RadiationProfile separable_radiation(double A, double u_center,
                                            double u_width, int l, int m,
                                            bool curl_kind) {
  SphereHarmonic Y{l, m};
  auto psi = [A, u_center, u_width](double u) {
    const double s = (u - u_center) / u_width;
    return A * std::exp(-s * s);
  };
  auto Psi = [A, u_center, u_width](double u) {  // int_{-inf}^u psi
    return A * u_width * 0.5 * std::sqrt(pi) *
           (1.0 + std::erf((u - u_center) / u_width));
  };
  const double lam = -Y.laplace_eigenvalue();  // l(l+1) >= 0
  RadiationProfile rp;
  rp.u_decay_scale = std::abs(u_center) + 6.0 * u_width;
  rp.alphabar = [psi, Y, curl_kind](double u, const Vec3& omega) {
    const AngularFrame fr = angular_frame(omega);
    const Vec2 g = Y.grad(fr.theta, fr.phi);
    const double p = psi(u);
    if (!curl_kind) return Vec2{p * g[0], p * g[1]};
    return Vec2{p * g[1], -p * g[0]};  // *grad: (b_th,b_ph)->(b_ph,-b_th)
  };
  if (!curl_kind) {
    // div alphabar = psi * lap Y = -lam psi Y; rhoI = (lam/2) Psi Y; sigmaI=0.
    rp.rhoI = [Psi, Y, lam](double u, const Vec3& omega) {
      const AngularFrame fr = angular_frame(omega);
      return 0.5 * lam * Psi(u) * Y.eval(fr.theta, fr.phi);
    };
    rp.sigmaI = [](double, const Vec3&) { return 0.0; };
  } else {
    rp.rhoI = [](double, const Vec3&) { return 0.0; };
    // curl(*grad Y) = +lam Y, so sigmaI = -(lam/2) Psi Y.
    rp.sigmaI = [Psi, Y, lam](double u, const Vec3& omega) {
      const AngularFrame fr = angular_frame(omega);
      return -0.5 * lam * Psi(u) * Y.eval(fr.theta, fr.phi);
    };
  }
  return rp;
}

// Generic construction: rhoI, sigmaI by u-quadrature of the spherical
// divergence / curl (angular derivatives by central differences).
inline RadiationProfile radiation_profile(
    std::function<Vec2(double, const Vec3&)> alphabar, double u_min,
    double u_decay_scale, int n_u = 200) {
  RadiationProfile rp;
  rp.alphabar = alphabar;
  rp.u_decay_scale = u_decay_scale;
  auto divcurl = [alphabar](double u, const Vec3& omega) -> Vec2 {
    const AngularFrame fr = angular_frame(omega);
    const double h = 1e-5;
    auto comp = [&](double th, double ph, int A) {
      const Vec3 w = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                      std::cos(th)};
      return alphabar(u, w)[A];
    };
    const double th = fr.theta, ph = fr.phi;
    const double cot = std::cos(th) / std::sin(th);
    const double csc = 1.0 / std::sin(th);
    const double dth0 = (comp(th + h, ph, 0) - comp(th - h, ph, 0)) / (2 * h);
    const double dth1 = (comp(th + h, ph, 1) - comp(th - h, ph, 1)) / (2 * h);
    const double dph0 = (comp(th, ph + h, 0) - comp(th, ph - h, 0)) / (2 * h);
    const double dph1 = (comp(th, ph + h, 1) - comp(th, ph - h, 1)) / (2 * h);
    const Vec2 b = alphabar(u, omega);
    return {dth0 + cot * b[0] + csc * dph1,   // divergence
            dth1 + cot * b[1] - csc * dph0};  // curl
  };
  rp.rhoI = [divcurl, u_min, n_u](double u, const Vec3& omega) {
    if (u <= u_min) return 0.0;
    return -0.5 * integrate_segment(
                      [&](double s) { return divcurl(s, omega)[0]; }, u_min, u,
                      std::min(n_u, 64));
  };
  rp.sigmaI = [divcurl, u_min, n_u](double u, const Vec3& omega) {
    if (u <= u_min) return 0.0;
    return -0.5 * integrate_segment(
                      [&](double s) { return divcurl(s, omega)[1]; }, u_min, u,
                      std::min(n_u, 64));
  };
  return rp;
}

// ---- Time reversal ---------------------------------------------------------

// Reflected profile: f~(z, v) = f(z, -v) composed with z -> z (profiles carry
// no time), realized on samplers as f~(t,x,v) = f(-t,x,-v).
inline KineticSampler time_reversal(const KineticSampler& f) {
  return [f](double t, const Vec3& x, const Vec3& v) { return f(-t, x, -v); };
}

// Field reflection (E,B)(t,x) -> (E,-B)(-t,x).
inline FieldSampler time_reversal(const FieldSampler& F) {
  return [F](double t, const Vec3& x) {
    const Faraday G = F(-t, x);
    return Faraday{G.E, -G.B};
  };
}

inline DistributionProfile time_reversal(const DistributionProfile& p) {
  DistributionProfile out = p;
  out.terms.clear();
  for (const auto& t : p.terms) {
    ScalarField3 hv{
        [f = t.v.val](const Vec3& v) { return f(-v); },
        [g = t.v.grad](const Vec3& v) { return -1.0 * g(-v); }};
    out.terms.push_back({t.z, hv});
  }
  return out;
}

}  // namespace vml
