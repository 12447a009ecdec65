#pragma once
// Experiment orchestration: JSON configuration, deterministic CSV emission,
// and the runners behind the command-line tool (field maps, ray traces,
// characteristic studies, constraint audits, energy audits, a single Picard
// diagnostic step, and the assertion suite).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vml/scattering.hpp"

namespace vml::harness {

inline constexpr const char* tool_version = "vmlab 0.1.0";

// ---- Plumbing ---------------------------------------------------------------

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct RunContext {
  std::filesystem::path out_dir = ".";
  int threads = 1;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

inline std::string header_comment(const RunContext& ctx) {
  std::ostringstream os;
  os << "# " << tool_version << " config_hash=" << std::hex << ctx.config_hash
     << std::dec << " seed=" << ctx.seed << "\n";
  return os.str();
}

// Deterministic formatting, locale independent.
inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline std::ofstream open_output(const RunContext& ctx,
                                 const std::string& name) {
  std::filesystem::create_directories(ctx.out_dir);
  std::ofstream os(ctx.out_dir / name, std::ios::binary);
  if (!os) throw domain_error("cannot open output file " + name);
  os << header_comment(ctx);
  return os;
}

// ---- JSON configuration -----------------------------------------------------

inline Vec3 vec3_from(const nlohmann::json& j, const Vec3& fallback = {0, 0,
                                                                       0}) {
  if (j.is_null()) return fallback;
  if (!j.is_array() || j.size() != 3)
    throw domain_error("expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline DistributionProfile profile_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") {
    DistributionProfile p;
    p.z_extent = p.v_extent = 1.0;
    p.isotropic = true;
    p.total_integral = 0.0;
    return p;
  }
  const Vec3 cz = vec3_from(j.value("center_z", nlohmann::json()));
  const Vec3 cv = vec3_from(j.value("center_v", nlohmann::json()));
  if (type == "gaussian")
    return gaussian_profile(j.value("A", 1.0), j.at("sigma_z").get<double>(),
                            j.at("sigma_v").get<double>(), cz, cv);
  if (type == "bump")
    return bump_profile(j.value("A", 1.0), j.at("Rz").get<double>(),
                        j.at("Rv").get<double>(), cz, cv);
  throw domain_error("unknown profile type '" + type + "'");
}

inline RadiationProfile radiation_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") {
    RadiationProfile rp;
    rp.alphabar = [](double, const Vec3&) { return Vec2{0.0, 0.0}; };
    rp.rhoI = [](double, const Vec3&) { return 0.0; };
    rp.sigmaI = [](double, const Vec3&) { return 0.0; };
    return rp;
  }
  if (type != "separable")
    throw domain_error("unknown radiation type '" + type + "'");
  const auto& mode = j.at("sphere_mode");
  const std::string kind = mode.at("kind").get<std::string>();
  if (kind != "grad" && kind != "curl")
    throw domain_error("sphere_mode.kind must be 'grad' or 'curl'");
  const auto& up = j.at("u_profile");
  return separable_radiation(up.value("A", 1.0), up.value("center", 0.0),
                             up.value("width", 1.0), mode.at("l").get<int>(),
                             mode.at("m").get<int>(), kind == "curl");
}

// ---- Isotropic limit-field table -------------------------------------------

// For rotation-invariant profiles the limiting 2-form is a radial electric
// field in v; a 1D table in |v| replaces the full Cartesian grid.
struct IsotropicLimitField {
  double v_max = 3.0;
  std::vector<double> e;  // E(v) . vhat at |v| = i * v_max / (n-1)

  static IsotropicLimitField build(const DistributionProfile& p, double v_max,
                                   int n = 33,
                                   AsympFieldForm form = AsympFieldForm::moment,
                                   int n_r = 32, int n_th = 24, int n_ph = 48) {
    if (!p.isotropic)
      throw domain_error("isotropic limit table requires an isotropic profile");
    IsotropicLimitField t;
    t.v_max = v_max;
    t.e.resize(n);
    for (std::size_t i = 0; i < p.terms.size(); ++i) p.term_z_integral(i);
    for (int i = 0; i < n; ++i) {
      const double s = v_max * i / (n - 1);
      t.e[i] = i == 0 ? 0.0
                      : f_asymp(p, {0.0, 0.0, s}, form, n_r, n_th, n_ph).E[2];
    }
    return t;
  }

  Faraday operator()(const Vec3& v) const {
    const double s = norm(v);
    if (s < 1e-12) return {};
    const int n = static_cast<int>(e.size());
    const double h = v_max / (n - 1);
    const double q = std::min(s, v_max) / h;
    const int i = std::clamp(static_cast<int>(q), 0, n - 2);
    const double x = q - i;
    auto at = [&](int k) { return e[std::clamp(k, 0, n - 1)]; };
    // Catmull-Rom in the radial amplitude.
    const double a0 = at(i - 1), a1 = at(i), a2 = at(i + 1), a3 = at(i + 2);
    double amp =
        a1 + 0.5 * x *
                 (a2 - a0 +
                  x * (2 * a0 - 5 * a1 + 4 * a2 - a3 +
                       x * (3 * (a1 - a2) + a3 - a0)));
    if (s > v_max) amp = e.back() * (v_max * v_max) / (s * s);  // Coulomb tail
    return {(amp / s) * v, {0.0, 0.0, 0.0}};
  }

  std::function<Faraday(const Vec3&)> sampler() const {
    return [t = *this](const Vec3& v) { return t(v); };
  }
};

// ---- Field CSV schema -------------------------------------------------------

inline const char* field_csv_header() {
  return "t,x1,x2,x3,F01,F02,F03,F23,F31,F12,alpha_th,alpha_ph,albar_th,"
         "albar_ph,rho,sigma\n";
}

inline void write_field_row(std::ostream& os, double t, const Vec3& x,
                            const Faraday& F) {
  NullComponents nc;
  if (norm(x) > 1e-12) nc = null_decompose(F, x);
  os << fmt(t) << ',' << fmt(x[0]) << ',' << fmt(x[1]) << ',' << fmt(x[2]);
  for (int i = 0; i < 3; ++i) os << ',' << fmt(F.E[i]);  // F_{0i}
  for (int i = 0; i < 3; ++i) os << ',' << fmt(-F.B[i]);  // F_{23},F_{31},F_{12}
  os << ',' << fmt(nc.alpha[0]) << ',' << fmt(nc.alpha[1]) << ','
     << fmt(nc.alphabar[0]) << ',' << fmt(nc.alphabar[1]) << ',' << fmt(nc.rho)
     << ',' << fmt(nc.sigma) << '\n';
}

// ---- Runners ---------------------------------------------------------------

inline FieldSampler field_from_config(const nlohmann::json& cfg) {
  const std::string kind = cfg.value("field", "asymp");
  if (kind == "asymp") {
    const AsympField F = AsympField::make(profile_from_json(cfg.at("profile")),
                                          cfg.value("t0", 1.0));
    return F.sampler();
  }
  if (kind == "lead") {
    LeadingField L;
    L.rp = radiation_from_json(cfg.at("radiation"));
    return L.sampler();
  }
  if (kind == "pure_charge") {
    PureCharge pc{cfg.value("Q", 1.0)};
    const bool reg = cfg.value("regularized", true);
    return [pc, reg](double t, const Vec3& x) {
      return reg ? pc.regularized(t, x) : pc.field(t, x);
    };
  }
  throw domain_error("unknown field kind '" + kind + "'");
}

inline int run_field_map(const nlohmann::json& cfg, const RunContext& ctx) {
  const FieldSampler F = field_from_config(cfg);
  std::ofstream os = open_output(ctx, cfg.value("output", "field_map.csv"));
  os << field_csv_header();
  for (const auto& jt : cfg.at("times"))
    for (const auto& jx : cfg.at("points")) {
      const double t = jt.get<double>();
      const Vec3 x = vec3_from(jx);
      write_field_row(os, t, x, F(t, x));
    }
  return 0;
}

inline int run_ray_trace(const nlohmann::json& cfg, const RunContext& ctx) {
  const DistributionProfile p = profile_from_json(cfg.at("profile"));
  const AsympField F = AsympField::make(p, cfg.value("t0", 1.0));
  const Vec3 v = vec3_from(cfg.at("v"));
  const Vec3 vh = v / jbracket(v);
  std::ofstream os = open_output(ctx, cfg.value("output", "ray_trace.csv"));
  os << field_csv_header();
  for (const auto& jt : cfg.at("times")) {
    const double t = jt.get<double>();
    write_field_row(os, t, t * vh, F(t, t * vh));
  }
  return 0;
}

// Shared setup for the characteristic flow of an isotropic profile.
struct FlowBundle {
  std::shared_ptr<RadialFieldTable> field_tab;
  std::shared_ptr<IsotropicLimitField> limit_tab;
  CharacteristicFlow flow;
};

inline FlowBundle make_flow(const DistributionProfile& p, double t0,
                            double t_horizon, int threads) {
  FlowBundle b;
  const AsympField F = AsympField::make(p, t0);
  b.field_tab = std::make_shared<RadialFieldTable>(
      RadialFieldTable::build(F, 2.0, t_horizon, 64, 96, 1.5, threads));
  b.limit_tab = std::make_shared<IsotropicLimitField>(
      IsotropicLimitField::build(p, 3.0));
  b.flow.field = [tb = b.field_tab](double t, const Vec3& x) {
    return (*tb)(t, x);
  };
  b.flow.limit_field = [lt = b.limit_tab](const Vec3& v) { return (*lt)(v); };
  return b;
}

inline int run_characteristics(const nlohmann::json& cfg,
                               const RunContext& ctx) {
  const DistributionProfile p = profile_from_json(cfg.at("profile"));
  const double t_horizon = cfg.value("T_max", 1000.0);
  const FlowBundle b =
      make_flow(p, cfg.value("t0", 1.0), t_horizon, ctx.threads);

  std::vector<double> checkpoints;
  for (const auto& jt : cfg.at("checkpoints"))
    checkpoints.push_back(jt.get<double>());
  Rng rng(ctx.seed);
  std::vector<std::pair<Vec3, Vec3>> seeds;
  const int n_seeds = cfg.value("n_seeds", 8);
  for (int i = 0; i < n_seeds; ++i)
    seeds.emplace_back(rng.uniform_vec3(-1.0, 1.0), rng.uniform_vec3(-1.0, 1.0));

  // Trajectory of the first seed, sampled at the checkpoints.
  {
    TrajectoryOptions opt;
    opt.t_end = t_horizon;
    std::vector<TrajectoryPoint> pts;
    b.flow.integrate(seeds[0].first, seeds[0].second, opt, &checkpoints, &pts);
    std::ofstream os = open_output(ctx, cfg.value("trajectory_output",
                                                  "trajectory.csv"));
    os << "t,Z1,Z2,Z3,V1,V2,V3,X1,X2,X3\n";
    for (const auto& q : pts) {
      os << fmt(q.t);
      for (int i = 0; i < 3; ++i) os << ',' << fmt(q.Z[i]);
      for (int i = 0; i < 3; ++i) os << ',' << fmt(q.V[i]);
      for (int i = 0; i < 3; ++i) os << ',' << fmt(q.X[i]);
      os << '\n';
    }
  }

  // Convergence diagnostics: corrected and uncorrected comoving positions,
  // plus a tail estimate |Z(T/2) - Z(T)| of what the finite horizon misses.
  std::vector<double> aug = checkpoints;
  aug.push_back(t_horizon / 2.0);
  std::sort(aug.begin(), aug.end());
  const std::vector<double> sup_c =
      convergence_profile(b.flow, seeds, aug, true, t_horizon);
  const std::vector<double> sup_u =
      convergence_profile(b.flow, seeds, aug, false, t_horizon);
  double tail = 0.0;
  for (std::size_t i = 0; i < aug.size(); ++i)
    if (aug[i] == t_horizon / 2.0) tail = sup_c[i];
  std::ofstream os = open_output(ctx, cfg.value("diagnostics_output",
                                                "diagnostics.csv"));
  os << "t,sup_err_corrected,sup_err_uncorrected,tail_estimate\n";
  for (std::size_t i = 0; i < aug.size(); ++i) {
    if (aug[i] == t_horizon / 2.0 &&
        std::find(checkpoints.begin(), checkpoints.end(), aug[i]) ==
            checkpoints.end())
      continue;
    os << fmt(aug[i]) << ',' << fmt(sup_c[i]) << ',' << fmt(sup_u[i]) << ','
       << fmt(tail) << '\n';
  }
  return 0;
}

inline int run_constraints(const nlohmann::json& cfg, const RunContext& ctx) {
  const DistributionProfile p = profile_from_json(cfg.at("profile"));
  const AsympField F = AsympField::make(p, cfg.value("t0", 1.0));
  const FieldSampler Fs = F.sampler();
  std::function<Faraday(const Vec3&)> limit;
  if (p.isotropic) {
    limit = IsotropicLimitField::build(p, 3.0).sampler();
  } else {
    limit = [p](const Vec3& v) { return f_asymp(p, v); };
  }
  const double u_max = cfg.value("u_max", 10.0);
  const int n_u = cfg.value("n_u", 21);
  std::ofstream os = open_output(ctx, cfg.value("output", "constraints.csv"));
  os << "omega_th,omega_ph,lhs_div,rhs_div,resid_div,lhs_curl,rhs_curl,"
        "resid_curl,budget\n";
  bool ok = true;
  for (const auto& jo : cfg.at("omegas")) {
    const double th = jo[0].get<double>(), ph = jo[1].get<double>();
    const Vec3 omega = detail::sphere_point(th, ph);
    const ConstraintReport r = constraint_residual(
        Fs, p, limit, omega, -u_max, u_max, n_u);
    os << fmt(th) << ',' << fmt(ph) << ',' << fmt(r.lhs_div) << ','
       << fmt(r.rhs_div) << ',' << fmt(r.resid_div) << ',' << fmt(r.lhs_curl)
       << ',' << fmt(r.rhs_curl) << ',' << fmt(r.resid_curl) << ','
       << fmt(r.budget) << '\n';
    ok = ok && r.within_budget;
  }
  return ok ? 0 : 1;
}

inline int run_energy_audit(const nlohmann::json& cfg, const RunContext& ctx) {
  const DistributionProfile p = profile_from_json(cfg.at("profile"));
  const double t = cfg.value("t", 0.0);
  const KineticSampler f = free_transport(p);
  FieldSampler F = [](double, const Vec3&) { return Faraday{}; };
  std::function<Vec3(double, const Vec3&)> Einf =
      [](double, const Vec3&) { return Vec3{0, 0, 0}; };
  auto Binf = Einf;
  const RadialGrid grid{0.0, p.z_extent + t + 2.0, 128};
  const EnergyReport tot =
      energy_accounts_finite(f, F, t, p.z_extent + t + 1.0, p.v_extent, 24,
                             grid);
  const EnergyReport inf = energy_accounts_scattering(
      p, Einf, Binf, -10.0, 10.0, 40, SphereRule(12, 24));
  std::ofstream os = open_output(ctx, cfg.value("output", "energy.csv"));
  os << "quantity,kinetic,field,total\n";
  os << "E_tot," << fmt(tot.kinetic) << ',' << fmt(tot.field) << ','
     << fmt(tot.total) << '\n';
  os << "E_inf," << fmt(inf.kinetic) << ',' << fmt(inf.field) << ','
     << fmt(inf.total) << '\n';
  return 0;
}

inline int run_picard_step(const nlohmann::json& cfg, const RunContext& ctx) {
  const DistributionProfile p = profile_from_json(cfg.at("profile"));
  const double t_horizon = cfg.value("T_max", 1000.0);
  FlowBundle b = make_flow(p, cfg.value("t0", 1.0), t_horizon, ctx.threads);

  // First-iterate field: the tabulated limit field plus, when a radiation
  // difference is configured, the leading-order field of that difference.
  // The difference is zero when the prescribed radiation equals the one the
  // profile emits, which is the default.
  FieldSampler F1 = b.flow.field;
  if (cfg.contains("radiation_difference")) {
    LeadingField L;
    L.rp = radiation_from_json(cfg.at("radiation_difference"));
    F1 = [base = b.flow.field, L](double t, const Vec3& x) {
      const Faraday a = base(t, x), c = L(t, x);
      return Faraday{a.E + c.E, a.B + c.B};
    };
  }
  CharacteristicFlow flow1;
  flow1.field = F1;
  flow1.limit_field = b.flow.limit_field;

  Rng rng(ctx.seed);
  std::vector<std::pair<Vec3, Vec3>> seeds;
  const int n_seeds = cfg.value("n_seeds", 8);
  for (int i = 0; i < n_seeds; ++i)
    seeds.emplace_back(rng.uniform_vec3(-1.0, 1.0), rng.uniform_vec3(-1.0, 1.0));

  // Field-difference energy between the first-iterate field and the base
  // field at the first diagnostic time.
  std::vector<double> t_list;
  for (const auto& jt : cfg.at("t_list")) t_list.push_back(jt.get<double>());
  FieldSampler Fdiff = [F1, base = b.flow.field](double t, const Vec3& x) {
    const Faraday a = F1(t, x), c = base(t, x);
    return Faraday{a.E - c.E, a.B - c.B};
  };
  const double ediff = t_list.empty()
                           ? 0.0
                           : energy_integral(Fdiff, t_list.front(),
                                             RadialGrid{0.0, 2.0 * t_list.front(),
                                                        96},
                                             0.0, EnergyWeight::plain);

  std::ofstream os = open_output(ctx, cfg.value("output", "picard.csv"));
  os << "t,sup_diff,l2_diff,field_energy_diff\n";
  for (double t : t_list) {
    double sup = 0.0, l2 = 0.0;
    for (const auto& [z, v] : seeds) {
      const double g2 = backward_distribution(flow1, p, t, z, v, t_horizon);
      const double d = g2 - p.eval(z, v);  // g1 is the fixed point itself
      sup = std::max(sup, std::abs(d));
      l2 += d * d;
    }
    l2 = std::sqrt(l2 / seeds.size());
    os << fmt(t) << ',' << fmt(sup) << ',' << fmt(l2) << ',' << fmt(ediff)
       << '\n';
  }
  return 0;
}

// ---- Assertion suite --------------------------------------------------------

struct AssertionResult {
  std::string id;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

inline AssertionResult eval_assertion(const nlohmann::json& a,
                                      const RunContext& ctx) {
  AssertionResult r;
  r.id = a.at("id").get<std::string>();
  r.threshold = a.at("threshold").get<double>();
  const std::string type = a.at("type").get<std::string>();
  Rng rng(ctx.seed);

  if (type == "jacobian_roundtrip") {
    const int n = a.value("samples", 1000);
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = rng.uniform(0.5, 10.0);
      const Momentum m{rng.uniform_vec3(-2.0, 2.0)};
      const double ja = momentum_jacobian(t, m);
      const double jf = momentum_jacobian_fd(t, m, 1e-5);
      sup = std::max(sup, std::abs(ja - jf) / std::abs(ja));
    }
    r.value = sup;
  } else if (type == "null_roundtrip") {
    const int n = a.value("samples", 1000);
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vec3 x = 5.0 * rng.sphere() + Vec3{0, 0, 0.1};
      const Faraday F{rng.uniform_vec3(-1, 1), rng.uniform_vec3(-1, 1)};
      const NullComponents nc = null_decompose(F, x);
      const Faraday G = faraday_from_null(nc, x / norm(x));
      sup = std::max({sup, norm(F.E - G.E), norm(F.B - G.B)});
    }
    r.value = sup;
  } else if (type == "kernel_moment_zero") {
    const SphereRule sph(64, 128);
    double sup = 0.0;
    for (int s = 0; s < a.value("samples", 8); ++s) {
      const Momentum m = check(0.95 * rng.uniform(0.1, 1.0) * rng.sphere());
      for (int k = 0; k < 3; ++k) {
        Faraday acc{};
        for (const auto& node : sph.nodes) {
          const Faraday w =
              derivative_kernel(DerivativeKernelFamily::a, k, node.omega, m);
          acc.E += node.weight * w.E;
          acc.B += node.weight * w.B;
        }
        sup = std::max({sup, norm(acc.E), norm(acc.B)});
      }
    }
    r.value = sup;
  } else if (type == "kernel_bound") {
    double sup = 0.0;
    for (int s = 0; s < a.value("samples", 200); ++s) {
      const Momentum m = check(0.99 * rng.uniform(0.0, 1.0) * rng.sphere());
      const Vec3 omega = rng.sphere();
      const Faraday w = transport_kernel(omega, m);
      const double mag = std::sqrt(norm2(w.E) + norm2(w.B));
      sup = std::max(sup, mag / (4.0 * m.v0()));
    }
    r.value = sup;
  } else if (type == "charge") {
    const DistributionProfile p = profile_from_json(a.at("profile"));
    const double q = j_asymp_charge(p, a.value("tau", 1.0));
    const double expect = a.at("expected").get<double>();
    r.value = std::abs(q - expect) / std::max(1e-300, std::abs(expect));
  } else if (type == "limit_origin") {
    const DistributionProfile p = profile_from_json(a.at("profile"));
    const Faraday F = f_asymp(p, {0, 0, 0});
    r.value = std::sqrt(norm2(F.E) + norm2(F.B));
  } else if (type == "ray_exactness") {
    const DistributionProfile p = profile_from_json(a.at("profile"));
    const Vec3 v = vec3_from(a.at("v"));
    const double t = 4.0 * (1.0 + norm2(v)) + 1.0;
    const Vec3 x = (t / jbracket(v)) * v;
    const Faraday num = f_gs_T(p, t, x, 1.0);
    const Faraday ref = f_asymp(p, v);
    r.value = std::max(norm(t * t * num.E - ref.E),
                       norm(t * t * num.B - ref.B));
  } else {
    throw domain_error("unknown assertion type '" + type + "'");
  }
  r.pass = r.value <= r.threshold;
  return r;
}

inline int run_suite(const nlohmann::json& manifest, const RunContext& ctx) {
  nlohmann::json report = nlohmann::json::array();
  bool all_pass = true;
  for (const auto& a : manifest.value("assertions", nlohmann::json::array())) {
    const AssertionResult r = eval_assertion(a, ctx);
    report.push_back({{"assertion_id", r.id},
                      {"value", r.value},
                      {"threshold", r.threshold},
                      {"pass", r.pass}});
    all_pass = all_pass && r.pass;
  }
  std::filesystem::create_directories(ctx.out_dir);
  std::ofstream os(ctx.out_dir / manifest.value("report", "report.json"),
                   std::ios::binary);
  os << report.dump(2) << '\n';
  return all_pass ? 0 : 1;
}

}  // namespace vml::harness
