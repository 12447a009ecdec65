#pragma once
// Trajectory machinery for the late-time regime: the logarithmic position
// correction built from the limiting field, the drift equations for the
// corrected and uncorrected comoving position, an adaptive Dormand-Prince
// integrator, a fast tabulated radial field for long runs, the backward
// transport of the limiting distribution, and convergence-rate diagnostics.

#include <memory>
#include <thread>

#include "vml/field_solver.hpp"

namespace vml {

// ---- Tabulated radial field ------------------------------------------------

// For an isotropic profile the full field is radial-electric; sampled on a
// (log t, r/t) grid with bicubic interpolation. Beyond rho_max the amplitude
// is the static Coulomb tail of the total charge.
struct RadialFieldTable {
  double log_t_min = std::log(2.0), log_t_max = std::log(1000.0);
  int n_t = 64;
  double rho_max = 1.5;
  int n_rho = 96;
  double coulomb = 0.0;  // e(r) = coulomb / r^2 outside the grid
  std::vector<double> data;  // amplitude e at (it, irho), row-major in it

  static RadialFieldTable build(const AsympField& F, double t_min, double t_max,
                                int n_t = 64, int n_rho = 96,
                                double rho_max = 1.5, int n_threads = 1,
                                int n_s = 24, int n_th = 16, int n_ph = 32) {
    RadialFieldTable tb;
    tb.log_t_min = std::log(t_min);
    tb.log_t_max = std::log(t_max);
    tb.n_t = n_t;
    tb.n_rho = n_rho;
    tb.rho_max = rho_max;
    // Total charge of the density; Gauss tail e = m_tot / r^2.
    double total = 0.0;
    if (F.p->total_integral) {
      total = *F.p->total_integral;
    } else {
      for (std::size_t i = 0; i < F.p->terms.size(); ++i)
        total += F.p->term_z_integral(i) *
                 integrate_box(F.p->terms[i].v.val,
                               {-F.p->v_extent, -F.p->v_extent, -F.p->v_extent},
                               {F.p->v_extent, F.p->v_extent, F.p->v_extent},
                               32);
    }
    tb.coulomb = total / (4.0 * pi);
    for (std::size_t i = 0; i < F.p->terms.size(); ++i)
      F.p->term_z_integral(i);  // prewarm shared cache before threading
    tb.data.assign(static_cast<std::size_t>(n_t) * n_rho, 0.0);
    AsympField Fl = F;
    Fl.n_s = n_s;
    Fl.n_th = n_th;
    Fl.n_ph = n_ph;
    auto rows = [&](int i0, int i1) {
      for (int it = i0; it < i1; ++it) {
        const double lt =
            tb.log_t_min + (tb.log_t_max - tb.log_t_min) * it / (n_t - 1.0);
        const double t = std::exp(lt);
        for (int ir = 0; ir < n_rho; ++ir) {
          const double rho = rho_max * ir / (n_rho - 1.0);
          const double r = std::max(rho * t, 1e-9);
          const Faraday f = Fl(t, {0.0, 0.0, r});
          tb.data[static_cast<std::size_t>(it) * n_rho + ir] = f.E[2];
        }
      }
    };
    if (n_threads <= 1) {
      rows(0, n_t);
    } else {
      std::vector<std::thread> pool;
      const int per = (n_t + n_threads - 1) / n_threads;
      for (int w = 0; w < n_threads; ++w) {
        const int i0 = w * per, i1 = std::min(n_t, i0 + per);
        if (i0 < i1) pool.emplace_back(rows, i0, i1);
      }
      for (auto& th : pool) th.join();
    }
    return tb;
  }

  double amplitude(double t, double r) const {
    const double rho = r / t;
    if (rho > rho_max) return coulomb / (r * r);
    const double lt = std::clamp(std::log(t), log_t_min, log_t_max);
    const double si = (lt - log_t_min) / (log_t_max - log_t_min) * (n_t - 1);
    const double sj = rho / rho_max * (n_rho - 1);
    int bi = std::clamp(static_cast<int>(std::floor(si)), 0, n_t - 2);
    int bj = std::clamp(static_cast<int>(std::floor(sj)), 0, n_rho - 2);
    const double fi = si - bi, fj = sj - bj;
    auto at = [&](int i, int j) {
      i = std::clamp(i, 0, n_t - 1);
      j = std::clamp(j, 0, n_rho - 1);
      return data[static_cast<std::size_t>(i) * n_rho + j];
    };
    auto cr = [](double p0, double p1, double p2, double p3, double s) {
      return 0.5 * (2.0 * p1 + (-p0 + p2) * s +
                    (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * s * s +
                    (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * s * s * s);
    };
    double col[4];
    for (int di = -1; di <= 2; ++di) {
      double row[4];
      for (int dj = -1; dj <= 2; ++dj) row[dj + 1] = at(bi + di, bj + dj);
      col[di + 1] = cr(row[0], row[1], row[2], row[3], fj);
    }
    return cr(col[0], col[1], col[2], col[3], fi);
  }

  Faraday operator()(double t, const Vec3& x) const {
    const double r = norm(x);
    if (r < 1e-12) return {};
    return {(amplitude(t, r) / r) * x, {0.0, 0.0, 0.0}};
  }
  FieldSampler sampler() const {
    auto sp = std::make_shared<RadialFieldTable>(*this);
    return [sp](double t, const Vec3& x) { return (*sp)(t, x); };
  }
};

// ---- Modified coordinates --------------------------------------------------

// Correction C(t,v) = -(log t / v0) (G - vhat (vhat.G)) with G the Lorentz
// force combination of the limiting field at v; the corrected position is
// X = z + t vhat + C.
struct ModifiedCoordinates {
  std::function<Faraday(const Vec3&)> limit_field;  // v -> limiting 2-form
  double fd_rel = 1e-4;

  Vec3 correction(double t, const Vec3& v) const {
    const double v0 = jbracket(v);
    const Vec3 vh = v / v0;
    const Vec3 G = asymp_force(limit_field(v), v);
    const Vec3 P = G - dot(vh, G) * vh;
    return (-std::log(t) / v0) * P;
  }

  // Columns d C^i / d v^j by central differences.
  std::array<Vec3, 3> correction_jacobian(double t, const Vec3& v) const {
    const double h = fd_rel * (1.0 + norm(v));
    std::array<Vec3, 3> J;  // J[j] = dC/dv^j
    for (int j = 0; j < 3; ++j) {
      Vec3 a = v, b = v;
      a[j] += h;
      b[j] -= h;
      J[j] = (1.0 / (2.0 * h)) * (correction(t, a) - correction(t, b));
    }
    return J;
  }

  Vec3 position(double t, const Vec3& z, const Vec3& v) const {
    return z + (t / jbracket(v)) * v + correction(t, v);
  }
};

// ---- Characteristic flow ---------------------------------------------------

struct TrajectoryOptions {
  double t_start = 2.0;
  double t_end = 1000.0;
  double rtol = 1e-8;
  double atol = 1e-10;
  bool corrected = true;
};

struct TrajectoryPoint {
  double t = 0.0;
  Vec3 Z{0, 0, 0}, V{0, 0, 0}, X{0, 0, 0};
};

struct CharacteristicFlow {
  FieldSampler field;                               // F(t, x)
  std::function<Faraday(const Vec3&)> limit_field;  // limiting 2-form in v

  ModifiedCoordinates coords() const { return {limit_field}; }

  // Right-hand side of the comoving system. State y = (Z, V).
  void rhs(double t, const std::array<double, 6>& y, bool corrected,
           std::array<double, 6>& dy) const {
    const Vec3 Z{y[0], y[1], y[2]}, V{y[3], y[4], y[5]};
    const double v0 = jbracket(V);
    const Vec3 vh = V / v0;
    Vec3 C{0, 0, 0};
    std::array<Vec3, 3> dC{Vec3{0, 0, 0}, Vec3{0, 0, 0}, Vec3{0, 0, 0}};
    if (corrected) {
      const ModifiedCoordinates mc = coords();
      C = mc.correction(t, V);
      dC = mc.correction_jacobian(t, V);
    }
    const Vec3 X = Z + t * vh + C;
    const Faraday F = field(t, X);
    const Vec3 G = F.E + cross(vh, F.B);  // vhat^mu F_{mu j}
    Vec3 az;
    if (corrected) {
      const Vec3 Ginf = asymp_force(limit_field(V), V);
      const Vec3 D = t * t * G - Ginf;
      const Vec3 P = D - dot(vh, D) * vh;
      az = (-1.0 / (t * v0)) * P;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) az[i] -= G[j] * dC[j][i];
    } else {
      const Vec3 P = G - dot(vh, G) * vh;
      az = (-t / v0) * P;
    }
    dy = {az[0], az[1], az[2], G[0], G[1], G[2]};
  }

  // Adaptive Dormand-Prince 5(4). Optionally records the state at the given
  // sorted sample times.
  TrajectoryPoint integrate(const Vec3& z, const Vec3& v,
                            const TrajectoryOptions& opt,
                            const std::vector<double>* sample_times = nullptr,
                            std::vector<TrajectoryPoint>* samples = nullptr)
      const {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (opt.t_start < 2.0)
      throw domain_error("comoving flow is defined for t >= 2");
    std::array<double, 6> y{z[0], z[1], z[2], v[0], v[1], v[2]};
    double t = opt.t_start;
    double h = 0.05 * (1.0 + t);
    std::size_t next_sample = 0;
    auto maybe_record = [&](double t_lo, double t_hi,
                            const std::array<double, 6>& y_hi) {
      if (!sample_times || !samples) return;
      while (next_sample < sample_times->size() &&
             (*sample_times)[next_sample] <= t_hi + 1e-12) {
        if ((*sample_times)[next_sample] >= t_lo - 1e-12) {
          TrajectoryPoint pt;
          pt.t = (*sample_times)[next_sample];
          pt.Z = {y_hi[0], y_hi[1], y_hi[2]};
          pt.V = {y_hi[3], y_hi[4], y_hi[5]};
          pt.X = opt.corrected
                     ? coords().position(pt.t, pt.Z, pt.V)
                     : pt.Z + (pt.t / jbracket(pt.V)) * pt.V;
          samples->push_back(pt);
        }
        ++next_sample;
      }
    };

    std::array<double, 6> k1, k2, k3, k4, k5, k6, k7, yt, y5;
    rhs(t, y, opt.corrected, k1);
    int rejected_in_a_row = 0;
    while (t < opt.t_end) {
      if (t + h > opt.t_end) h = opt.t_end - t;
      // Land exactly on pending sample times so recorded states are exact.
      if (sample_times && next_sample < sample_times->size()) {
        const double ts = (*sample_times)[next_sample];
        if (ts > t + 1e-12 && t + h > ts) h = ts - t;
      }
      auto stage = [&](double cs, std::initializer_list<
                                      std::pair<const std::array<double, 6>*,
                                                double>> terms,
                       std::array<double, 6>& k) {
        for (int i = 0; i < 6; ++i) {
          double s = y[i];
          for (const auto& [kp, a] : terms) s += h * a * (*kp)[i];
          yt[i] = s;
        }
        rhs(t + cs * h, yt, opt.corrected, k);
      };
      stage(c2, {{&k1, a21}}, k2);
      stage(c3, {{&k1, a31}, {&k2, a32}}, k3);
      stage(c4, {{&k1, a41}, {&k2, a42}, {&k3, a43}}, k4);
      stage(c5, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}}, k5);
      stage(1.0, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}},
            k6);
      for (int i = 0; i < 6; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
      rhs(t + h, y5, opt.corrected, k7);
      double err = 0.0;
      for (int i = 0; i < 6; ++i) {
        const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                               e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc =
            opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(ei) / sc);
      }
      if (err <= 1.0 || rejected_in_a_row > 12) {
        maybe_record(t, t + h, y5);
        t += h;
        y = y5;
        k1 = k7;  // first-same-as-last
        rejected_in_a_row = 0;
      } else {
        ++rejected_in_a_row;
      }
      const double fac =
          std::clamp(0.9 * std::pow(std::max(err, 1e-12), -0.2), 0.2, 5.0);
      h = std::min(h * fac, 0.25 * (1.0 + t));
    }
    TrajectoryPoint out;
    out.t = t;
    out.Z = {y[0], y[1], y[2]};
    out.V = {y[3], y[4], y[5]};
    out.X = opt.corrected ? coords().position(t, out.Z, out.V)
                          : out.Z + (t / jbracket(out.V)) * out.V;
    return out;
  }
};

// ---- Backward distribution and diagnostics ---------------------------------

// g(t, z, v) = f_inf(Z_inf, V_inf): push (z, v) forward from t to the far
// horizon and evaluate the limiting profile there.
inline double backward_distribution(const CharacteristicFlow& flow,
                                    const DistributionProfile& f_inf, double t,
                                    const Vec3& z, const Vec3& v,
                                    double t_horizon = 1000.0,
                                    bool corrected = true) {
  if (t < 2.0) throw domain_error("backward map requires t >= 2");
  TrajectoryOptions opt;
  opt.t_start = t;
  opt.t_end = t_horizon;
  opt.corrected = corrected;
  const TrajectoryPoint end = flow.integrate(z, v, opt);
  return f_inf.eval(end.Z, end.V);
}

// Sup over the seed set of |Z(t) - Z(horizon)| at each checkpoint, for the
// corrected or uncorrected comoving position.
inline std::vector<double> convergence_profile(
    const CharacteristicFlow& flow, const std::vector<std::pair<Vec3, Vec3>>&
                                        seeds,
    const std::vector<double>& checkpoints, bool corrected,
    double t_horizon = 1000.0) {
  std::vector<double> sup(checkpoints.size(), 0.0);
  for (const auto& [z, v] : seeds) {
    TrajectoryOptions opt;
    opt.corrected = corrected;
    opt.t_end = t_horizon;
    std::vector<TrajectoryPoint> pts;
    const TrajectoryPoint end =
        flow.integrate(z, v, opt, &checkpoints, &pts);
    for (std::size_t i = 0; i < pts.size() && i < sup.size(); ++i)
      sup[i] = std::max(sup[i], norm(pts[i].Z - end.Z));
  }
  return sup;
}

// Sup over the seed set of |g(t,z,v) - f_inf(z,v)|: how far one Picard sweep
// of the backward map is from its fixed point at time t.
inline double picard_deviation(const CharacteristicFlow& flow,
                               const DistributionProfile& f_inf, double t,
                               const std::vector<std::pair<Vec3, Vec3>>& seeds,
                               double t_horizon = 1000.0,
                               bool corrected = true) {
  double sup = 0.0;
  for (const auto& [z, v] : seeds) {
    const double g =
        backward_distribution(flow, f_inf, t, z, v, t_horizon, corrected);
    sup = std::max(sup, std::abs(g - f_inf.eval(z, v)));
  }
  return sup;
}

}  // namespace vml
