#include <catch2/catch_amalgamated.hpp>

#include "vml/profiles.hpp"
#include "vml/scattering.hpp"

using namespace vml;

TEST_CASE("gaussian profile normalization and evaluation") {
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  REQUIRE(p.total_integral.has_value());
  CHECK(*p.total_integral == Catch::Approx(pi * pi * pi).epsilon(1e-12));
  CHECK(p.eval({0, 0, 0}, {0, 0, 0}) == Catch::Approx(1.0));
  CHECK(p.isotropic);
  // Numeric cross-check of the closed-form phase-space integral.
  const double num = integrate_box(
      [&](const Vec3& z) {
        return integrate_box(
            [&](const Vec3& v) { return p.eval(z, v); },
            {-6, -6, -6}, {6, 6, 6}, 24);
      },
      {-6, -6, -6}, {6, 6, 6}, 24);
  CHECK(num == Catch::Approx(pi * pi * pi).epsilon(1e-5));
}

TEST_CASE("bump profile is compactly supported with the stated integral") {
  const DistributionProfile p = bump_profile(2.0, 1.5, 0.8);
  CHECK(p.eval({1.6, 0, 0}, {0, 0, 0}) == 0.0);
  CHECK(p.eval({0, 0, 0}, {0, 0.81, 0}) == 0.0);
  const double num = integrate_box(
      [&](const Vec3& z) {
        return integrate_box(
            [&](const Vec3& v) { return p.eval(z, v); },
            {-1, -1, -1}, {1, 1, 1}, 20);
      },
      {-2, -2, -2}, {2, 2, 2}, 20);
  CHECK(num == Catch::Approx(*p.total_integral).epsilon(1e-6));
}

TEST_CASE("spatial moments use the cached separable integrals") {
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  // At v = 0 the fifth-power moment is the plain z-integral of the profile.
  CHECK(spatial_moment(p, 5, {0, 0, 0}) ==
        Catch::Approx(std::pow(pi, 1.5)).epsilon(1e-10));
  const Vec3 v{0.4, -0.2, 0.7};
  const double direct =
      integrate_box([&](const Vec3& z) { return p.eval(z, v); },
                    {-6, -6, -6}, {6, 6, 6}, 24);
  CHECK(spatial_moment(p, 0, v) == Catch::Approx(direct).epsilon(1e-5));
}

TEST_CASE("rotation lifts annihilate isotropic profiles") {
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  for (auto op : {LiftedDerivativeId::rot_12, LiftedDerivativeId::rot_23,
                  LiftedDerivativeId::rot_31}) {
    const DistributionProfile lp = lifted_profile(p, op);
    const Vec3 v{0.3, -0.5, 0.2};
    CHECK(std::abs(spatial_moment(lp, 0, v)) < 1e-10);
  }
}

TEST_CASE("lifted z-derivatives match finite differences of the moment") {
  const DistributionProfile p = gaussian_profile(1.0, 1.2, 0.9, {0.2, 0, 0});
  const Vec3 v{0.3, 0.1, -0.2};
  // int dz of d_{z1} f is zero by integration in z1.
  CHECK(std::abs(spatial_moment(p, 0, v, LiftedDerivativeId::dz1)) < 1e-10);
  // d_t^inf lift integrates to zero in z as well (it is -vhat . grad_z).
  CHECK(std::abs(spatial_moment(p, 0, v, LiftedDerivativeId::dt_inf)) < 1e-10);
}

TEST_CASE("free transport propagates the profile along straight rays") {
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  const KineticSampler f = free_transport(p);
  const Vec3 v{0.5, 0.2, -0.1};
  const Vec3 vh = Momentum{v}.vhat();
  const Vec3 z{0.3, -0.2, 0.4};
  CHECK(f(7.0, z + 7.0 * vh, v) == Catch::Approx(p.eval(z, v)).epsilon(1e-12));
}

TEST_CASE("linear current paths agree at the regime boundaries") {
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  const Vec3 x{0.4, 0.1, -0.3};
  // Cone-contains-support switch.
  const double tb = norm(x) + std::sqrt(3.0) * p.z_extent;
  const Vec4 below = linear_current(p, tb - 1e-3, x, 48, 32, 64);
  const Vec4 above = linear_current(p, tb + 1e-3, x, 48);
  for (int i = 0; i < 4; ++i)
    CHECK(below[i] == Catch::Approx(above[i]).margin(1e-5));
  // Small-time switch to the direct v-box rule.
  const Vec4 b2 = linear_current(p, 0.05 - 1e-5, x, 48, 32, 64);
  const Vec4 a2 = linear_current(p, 0.05 + 1e-5, x, 48, 32, 64);
  for (int i = 0; i < 4; ++i)
    CHECK(b2[i] == Catch::Approx(a2[i]).margin(1e-4));
}

TEST_CASE("decay certificate is positive and monotone under amplitude") {
  const DistributionProfile p1 = gaussian_profile(1.0, 1.0, 1.0);
  const DistributionProfile p2 = gaussian_profile(2.0, 1.0, 1.0);
  CHECK(decay_certificate(p1) > 0.0);
  CHECK(decay_certificate(p2) == Catch::Approx(2.0 * decay_certificate(p1)));
}

TEST_CASE("separable radiation satisfies the cumulative-scalar relations") {
  // grad kind: 2 d_u rhoI = -div alphabar; sigmaI = 0.
  const RadiationProfile rp = separable_radiation(1.0, 0.0, 1.0, 2, 1, false);
  const Vec3 omega = Vec3{0.3, 0.5, 0.8} / norm(Vec3{0.3, 0.5, 0.8});
  for (double u : {-1.0, 0.0, 0.7}) {
    const double lhs =
        2.0 * fd_derivative([&](double s) { return rp.rhoI(s, omega); }, u,
                            1e-3);
    auto beta = [&](const Vec3& w) { return rp.alphabar(u, w); };
    const Vec2 dc = sph_div_curl(beta, omega);
    CHECK(lhs == Catch::Approx(-dc[0]).margin(5e-6));
    CHECK(rp.sigmaI(u, omega) == 0.0);
    // grad kind is curl free.
    CHECK(std::abs(dc[1]) < 5e-6);
  }
  // curl kind: dual pattern, divergence free.
  const RadiationProfile rc = separable_radiation(1.0, 0.0, 1.0, 2, 1, true);
  for (double u : {-0.5, 0.4}) {
    auto beta = [&](const Vec3& w) { return rc.alphabar(u, w); };
    const Vec2 dc = sph_div_curl(beta, omega);
    CHECK(std::abs(dc[0]) < 5e-6);
    const double lhs =
        2.0 * fd_derivative([&](double s) { return rc.sigmaI(s, omega); }, u,
                            1e-3);
    CHECK(lhs == Catch::Approx(-dc[1]).margin(5e-6));
  }
}

TEST_CASE("generic radiation profile reproduces the separable one") {
  const RadiationProfile rs = separable_radiation(1.0, 0.0, 1.0, 1, 0, false);
  const RadiationProfile rg =
      radiation_profile(rs.alphabar, -8.0, rs.u_decay_scale);
  const Vec3 omega = Vec3{0.1, -0.4, 0.9} / norm(Vec3{0.1, -0.4, 0.9});
  for (double u : {-1.0, 0.5, 2.0})
    CHECK(rg.rhoI(u, omega) ==
          Catch::Approx(rs.rhoI(u, omega)).margin(2e-4));
}

TEST_CASE("time reversal is an involution") {
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0, {0.3, 0, 0},
                                                 {0.0, 0.2, 0.0});
  const DistributionProfile q = time_reversal(time_reversal(p));
  const Vec3 z{0.2, -0.1, 0.5}, v{0.3, 0.4, -0.2};
  CHECK(q.eval(z, v) == Catch::Approx(p.eval(z, v)).epsilon(1e-12));
}
