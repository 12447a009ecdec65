#pragma once
// Asymptotic source and field of the free flow: interaction kernels, the
// late-time current and its conserved charge, the limiting electromagnetic
// 2-form evaluated by three independent formulas, a tabulated sampler with
// binary (de)serialization, and the external pure-charge field.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <thread>

#include "vml/profiles.hpp"

namespace vml {

// ---- Two-form packing ------------------------------------------------------

// Antisymmetric pairs in the fixed order (01),(02),(03),(12),(13),(23).
inline constexpr std::array<std::pair<int, int>, 6> two_form_pairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline Faraday pack_two_form(const std::array<double, 6>& w) {
  return {{w[0], w[1], w[2]}, {-w[5], w[4], -w[3]}};
}

// ---- Interaction kernels ---------------------------------------------------

// Kernel of the light-cone integral for the source part of the field:
// pair (0k): (omega_k + vhat_k) / (<v>^2 (1 + omega.vhat)^2),
// pair (ij): (omega_i vhat_j - omega_j vhat_i) / (<v>^2 (1 + omega.vhat)^2).
inline Faraday transport_kernel(const Vec3& omega, const Momentum& m) {
  const double v0 = m.v0();
  const Vec3 vh = m.vhat();
  const double d = 1.0 + dot(omega, vh);
  const double denom = v0 * v0 * d * d;
  std::array<double, 6> w;
  for (int k = 0; k < 3; ++k) w[k] = (omega[k] + vh[k]) / denom;
  auto sp = [&](int i, int j) {
    return (omega[i] * vh[j] - omega[j] * vh[i]) / denom;
  };
  w[3] = sp(0, 1);
  w[4] = sp(0, 2);
  w[5] = sp(1, 2);
  return pack_two_form(w);
}

// Kernel of the sphere-average (initial-sphere) contribution, already
// contracted with the direction: sigma_l a^l_{mu nu}(sigma, v) with
//   a^l_{0k} = delta^l_k - ((sigma_k + vhat_k)/(1 + sigma.vhat)) vhat^l,
//   a^l_{ij} = vhat_j delta^l_i - vhat_i delta^l_j
//              + ((vhat_i sigma_j - vhat_j sigma_i)/(1 + sigma.vhat)) vhat^l.
inline Faraday sphere_kernel(const Vec3& sigma, const Momentum& m) {
  const Vec3 vh = m.vhat();
  const double c = dot(sigma, vh);
  std::array<double, 6> w;
  for (int k = 0; k < 3; ++k)
    w[k] = sigma[k] - (sigma[k] + vh[k]) / (1.0 + c) * c;
  auto sp = [&](int i, int j) {
    return vh[j] * sigma[i] - vh[i] * sigma[j] +
           (vh[i] * sigma[j] - vh[j] * sigma[i]) / (1.0 + c) * c;
  };
  w[3] = sp(0, 1);
  w[4] = sp(0, 2);
  w[5] = sp(1, 2);
  return pack_two_form(w);
}

// Derivative kernels of the light-cone integral, indexed by the spatial
// direction k of the derivative. Built from the bare numerators
// w_{0i} = omega_i + vhat_i, w_{ij} = omega_i vhat_j - omega_j vhat_i and the
// lowered four-velocity direction (vhat_0, vhat_i) = (-1, vhat_i).
enum class DerivativeKernelFamily { a, b, c, d };

inline Faraday derivative_kernel(DerivativeKernelFamily fam, int k,
                                 const Vec3& omega, const Momentum& m) {
  const double v0 = m.v0();
  const Vec3 vh = m.vhat();
  const double d = 1.0 + dot(omega, vh);
  const double v02 = v0 * v0;
  const Vec4 vl{-1.0, vh[0], vh[1], vh[2]};  // lowered vhat_mu
  std::array<double, 6> out;
  for (int q = 0; q < 6; ++q) {
    const auto [mu, nu] = two_form_pairs[q];
    const double w = (mu == 0) ? omega[nu - 1] + vh[nu - 1]
                               : omega[mu - 1] * vh[nu - 1] -
                                     omega[nu - 1] * vh[mu - 1];
    const double T = (k + 1 == mu ? vl[nu] : 0.0) -
                     (k + 1 == nu ? vl[mu] : 0.0);
    switch (fam) {
      case DerivativeKernelFamily::a:
        out[q] = -3.0 * w * omega[k] / (v02 * v02 * d * d * d * d) -
                 3.0 * w * vh[k] / (v02 * d * d * d) + T / (v02 * d * d);
        break;
      case DerivativeKernelFamily::b:
        out[q] = 3.0 * w * omega[k] / (v02 * d * d * d) -
                 2.0 * w * vh[k] / (d * d) - T / d;
        break;
      case DerivativeKernelFamily::c:
        out[q] = omega[k] * w / (d * d);
        break;
      case DerivativeKernelFamily::d:
        out[q] = omega[k] * w / (v02 * d * d * d);
        break;
    }
  }
  return pack_two_form(out);
}

// ---- Late-time current -----------------------------------------------------

// Covariant components: J_nu(t,x) = (1/t^3)(x_nu/t) M5(check(x/t)) inside the
// light cone |x| < t (with x_0 = -t), zero outside. M5 is the fifth-power
// velocity moment of the profile.
inline Vec4 j_asymp(const DistributionProfile& p, double t, const Vec3& x) {
  if (t <= 0.0) throw domain_error("j_asymp requires t > 0");
  const double r = norm(x);
  if (r >= t) return {0.0, 0.0, 0.0, 0.0};
  const Momentum w = check(x / t);
  const double s = spatial_moment(p, 5, w.v) / (t * t * t);
  return {-s, (x[0] / t) * s, (x[1] / t) * s, (x[2] / t) * s};
}

// Total charge int J_0 dx at time tau; equals -integral of the profile over
// all of phase space, independently of tau.
inline double j_asymp_charge(const DistributionProfile& p, double tau,
                             int n_r = 64, int n_th = 16, int n_ph = 32) {
  if (p.isotropic) {
    auto f = [&](double rr) {
      return 4.0 * pi * rr * rr * j_asymp(p, tau, {0.0, 0.0, rr})[0];
    };
    return integrate_segment(f, 0.0, tau, n_r);
  }
  const SphereRule sph(n_th, n_ph);
  auto f = [&](double rr) {
    return rr * rr * integrate_sphere(
                         [&](const Vec3& w) { return j_asymp(p, tau, rr * w)[0]; },
                         sph);
  };
  return integrate_segment(f, 0.0, tau, n_r);
}

// ---- Limiting electromagnetic 2-form ---------------------------------------

// Limiting rescaled field t^2 F(t, t vhat) of the retarded solution driven by
// the late-time current (physical 1/4pi normalization of the wave kernel).
// Three algebraically equivalent quadrature formulas:
//   kernel  - transport kernel against the fifth moment, measure dr/(1-r)^3;
//   parts   - integrated by parts onto lifted derivatives of the profile,
//             measure r dr/(1-r)^4 with the pair-dependent sign;
//   moment  - same as parts with the z-integrals carried out in closed form,
//             leaving only the zeroth moment and its v-gradient (cheapest).
enum class AsympFieldForm { kernel, parts, moment };

namespace detail {

// Gradient of the zeroth spatial moment H(v) = int f dz.
inline Vec3 spatial_moment_grad(const DistributionProfile& p, const Vec3& v) {
  Vec3 g{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < p.terms.size(); ++i)
    g += p.term_z_integral(i) * p.terms[i].v.grad(v);
  return g;
}

}  // namespace detail

inline Faraday f_asymp(const DistributionProfile& p, const Vec3& v,
                       AsympFieldForm form = AsympFieldForm::moment,
                       int n_r = 40, int n_th = 32, int n_ph = 64) {
  const Momentum mv{v};
  const Vec3 vh = mv.vhat();
  const double one_minus_vh2 = 1.0 - norm2(vh);

  // Lifted profiles (pair order) for the integration-by-parts form. The
  // (1,3) rotation is the reverse of the stored (3,1) generator.
  std::vector<DistributionProfile> lifted;
  std::array<double, 6> lift_sign{-1.0, -1.0, -1.0, 1.0, 1.0, 1.0};
  if (form == AsympFieldForm::parts) {
    using L = LiftedDerivativeId;
    lifted.push_back(lifted_profile(p, L::boost_01));
    lifted.push_back(lifted_profile(p, L::boost_02));
    lifted.push_back(lifted_profile(p, L::boost_03));
    lifted.push_back(lifted_profile(p, L::rot_12));
    lifted.push_back(lifted_profile(p, L::rot_31));  // pair (1,3) = -(3,1)
    lift_sign[4] = -lift_sign[4];
    lifted.push_back(lifted_profile(p, L::rot_23));
  }

  const SphereRule sph(n_th, n_ph);
  const auto& gl = gl_rule(n_r);
  std::array<std::vector<double>, 6> acc;
  for (auto& a : acc) a.reserve(sph.nodes.size() * gl.node.size());

  for (const auto& node : sph.nodes) {
    // Exact radial extent of the domain |r omega + vhat| < 1 - r.
    const double rstar =
        one_minus_vh2 / (2.0 * (1.0 + dot(node.omega, vh)));
    const double mid = 0.5 * rstar, half = 0.5 * rstar;
    for (std::size_t q = 0; q < gl.node.size(); ++q) {
      const double r = mid + half * gl.node[q];
      const Vec3 wvel = (r * node.omega + vh) / (1.0 - r);
      if (norm2(wvel) >= 1.0 - 1e-12) {
        for (int c = 0; c < 6; ++c) acc[c].push_back(0.0);
        continue;
      }
      const Momentum u = check(wvel);
      const double base = node.weight * half * gl.weight[q];
      const double omr = 1.0 - r;
      std::array<double, 6> val{};
      switch (form) {
        case AsympFieldForm::kernel: {
          const Faraday K = transport_kernel(node.omega, u);
          const double M5 = spatial_moment(p, 5, u.v);
          const double wgt = -M5 / (omr * omr * omr);
          for (int c = 0; c < 6; ++c) {
            const auto [mu, nu] = two_form_pairs[c];
            val[c] = K(mu, nu) * wgt;
          }
          break;
        }
        case AsympFieldForm::parts: {
          const double wgt = r / (omr * omr * omr * omr);
          for (int c = 0; c < 6; ++c)
            val[c] = lift_sign[c] * spatial_moment(lifted[c], 5, u.v) * wgt;
          break;
        }
        case AsympFieldForm::moment: {
          const double wgt = r / (omr * omr * omr * omr);
          const double H = spatial_moment(p, 0, u.v);
          const Vec3 gH = detail::spatial_moment_grad(p, u.v);
          const double b0 = u.v0();
          const double b5 = b0 * b0 * b0 * b0 * b0;
          const Vec3 uh = u.vhat();
          for (int k = 0; k < 3; ++k)  // pairs (0k): -Q^k
            val[k] = -(b5 * uh[k] * H + b5 * b0 * gH[k]) * wgt;
          auto qij = [&](int i, int j) {  // pairs (ij): +Q^{ij}
            return b5 * (u.v[i] * gH[j] - u.v[j] * gH[i]) * wgt;
          };
          val[3] = qij(0, 1);
          val[4] = qij(0, 2);
          val[5] = qij(1, 2);
          break;
        }
      }
      for (int c = 0; c < 6; ++c) acc[c].push_back(base * val[c]);
    }
  }
  std::array<double, 6> tot;
  for (int c = 0; c < 6; ++c) tot[c] = pairwise_sum(acc[c]) / (4.0 * pi);
  return pack_two_form(tot);
}

// Asymptotic Lorentz force combination G(v) = E + vhat x B of the limiting
// field, feeding the trajectory correction.
inline Vec3 asymp_force(const Faraday& F, const Vec3& v) {
  const Vec3 vh = v / jbracket(v);
  return F.E + cross(vh, F.B);
}

// ---- Tabulated sampler -----------------------------------------------------

// Uniform Cartesian v-grid of the limiting field with clamped tricubic
// (Catmull-Rom) interpolation. Binary format: magic "VMSCAT01", int64 nodes
// per axis, double half-width, then n^3 * 6 doubles in (E,B) component-major
// node order.
struct AsympFieldTable {
  double v_max = 3.0;
  int n = 33;
  std::vector<std::array<double, 6>> data;  // index ((i*n)+j)*n+k for v1,v2,v3

  double spacing() const { return 2.0 * v_max / (n - 1); }

  static AsympFieldTable build(const DistributionProfile& p, double v_max,
                               int n, AsympFieldForm form = AsympFieldForm::moment,
                               int n_threads = 1, int n_r = 32, int n_th = 24,
                               int n_ph = 48) {
    AsympFieldTable t;
    t.v_max = v_max;
    t.n = n;
    t.data.assign(static_cast<std::size_t>(n) * n * n, {});
    for (std::size_t i = 0; i < p.terms.size(); ++i)
      p.term_z_integral(i);  // prewarm the shared cache before threading
    const double h = t.spacing();
    auto slab = [&](int i0, int i1) {
      for (int i = i0; i < i1; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            const Vec3 v = {-v_max + i * h, -v_max + j * h, -v_max + k * h};
            const Faraday F = f_asymp(p, v, form, n_r, n_th, n_ph);
            t.data[(static_cast<std::size_t>(i) * n + j) * n + k] = {
                F.E[0], F.E[1], F.E[2], F.B[0], F.B[1], F.B[2]};
          }
    };
    if (n_threads <= 1) {
      slab(0, n);
    } else {
      std::vector<std::thread> pool;
      const int per = (n + n_threads - 1) / n_threads;
      for (int w = 0; w < n_threads; ++w) {
        const int i0 = w * per, i1 = std::min(n, i0 + per);
        if (i0 < i1) pool.emplace_back(slab, i0, i1);
      }
      for (auto& th : pool) th.join();
    }
    return t;
  }

  Faraday operator()(const Vec3& v) const {
    const double h = spacing();
    std::array<double, 6> out{};
    // Per-axis fractional index, clamped into the grid.
    double fi[3];
    int base[3];
    for (int a = 0; a < 3; ++a) {
      double s = (std::clamp(v[a], -v_max, v_max) + v_max) / h;
      base[a] = static_cast<int>(std::floor(s));
      base[a] = std::clamp(base[a], 0, n - 2);
      fi[a] = s - base[a];
    }
    auto at = [&](int i, int j, int k, int c) {
      i = std::clamp(i, 0, n - 1);
      j = std::clamp(j, 0, n - 1);
      k = std::clamp(k, 0, n - 1);
      return data[(static_cast<std::size_t>(i) * n + j) * n + k][c];
    };
    auto cr = [](double p0, double p1, double p2, double p3, double s) {
      return 0.5 * (2.0 * p1 + (-p0 + p2) * s +
                    (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * s * s +
                    (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * s * s * s);
    };
    for (int c = 0; c < 6; ++c) {
      double plane[4];
      for (int di = -1; di <= 2; ++di) {
        double line[4];
        for (int dj = -1; dj <= 2; ++dj) {
          double pt[4];
          for (int dk = -1; dk <= 2; ++dk)
            pt[dk + 1] =
                at(base[0] + di, base[1] + dj, base[2] + dk, c);
          line[dj + 1] = cr(pt[0], pt[1], pt[2], pt[3], fi[2]);
        }
        plane[di + 1] = cr(line[0], line[1], line[2], line[3], fi[1]);
      }
      out[c] = cr(plane[0], plane[1], plane[2], plane[3], fi[0]);
    }
    return {{out[0], out[1], out[2]}, {out[3], out[4], out[5]}};
  }

  void save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw domain_error("cannot open table file for writing: " + path);
    os.write("VMSCAT01", 8);
    const std::int64_t nn = n;
    os.write(reinterpret_cast<const char*>(&nn), sizeof nn);
    os.write(reinterpret_cast<const char*>(&v_max), sizeof v_max);
    os.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size() * sizeof(data[0])));
  }

  static AsympFieldTable load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw domain_error("cannot open table file: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, "VMSCAT01", 8) != 0)
      throw domain_error("bad table file magic: " + path);
    AsympFieldTable t;
    std::int64_t nn = 0;
    is.read(reinterpret_cast<char*>(&nn), sizeof nn);
    is.read(reinterpret_cast<char*>(&t.v_max), sizeof t.v_max);
    if (!is || nn < 2 || nn > 4096) throw domain_error("bad table header");
    t.n = static_cast<int>(nn);
    t.data.resize(static_cast<std::size_t>(t.n) * t.n * t.n);
    is.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(t.data.size() * sizeof(t.data[0])));
    if (!is) throw domain_error("truncated table file: " + path);
    return t;
  }
};

// ---- Pure charge -----------------------------------------------------------

// Static Coulomb field of total charge Q switched on by the retarded cutoff
// (1 for t - r <= -2, 0 for t - r >= -1), its wave-compatible regularization,
// and the covariant four-current supporting it.
struct PureCharge {
  double Q = 1.0;
  Cutoff chi{-2.0, -1.0};

  Faraday field(double t, const Vec3& x) const {
    const double r = norm(x);
    if (r == 0.0) throw domain_error("pure-charge field singular at origin");
    return {(chi(t - r) * Q / (4.0 * pi * r * r)) * (x / r), {0.0, 0.0, 0.0}};
  }

  // Adds the (Q / 4 pi r) chi'(t - r) radial term; each Cartesian component
  // then solves the homogeneous wave equation away from the origin.
  Faraday regularized(double t, const Vec3& x) const {
    const double r = norm(x);
    if (r == 0.0) throw domain_error("pure-charge field singular at origin");
    const double amp = Q / (4.0 * pi) *
                       (chi(t - r) / (r * r) + chi.prime(t - r) / r);
    return {amp * (x / r), {0.0, 0.0, 0.0}};
  }

  // Covariant J_nu with J_0 = Q chi'(t-r) / (4 pi r^2), spatial part radial.
  Vec4 current(double t, const Vec3& x) const {
    const double r = norm(x);
    if (r == 0.0) return {0.0, 0.0, 0.0, 0.0};
    const double f = Q * chi.prime(t - r) / (4.0 * pi * r * r);
    return {f, -f * x[0] / r, -f * x[1] / r, -f * x[2] / r};
  }
};

}  // namespace vml
