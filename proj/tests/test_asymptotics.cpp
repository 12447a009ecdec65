#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "vml/asymptotics.hpp"

using namespace vml;

TEST_CASE("transport kernel obeys the uniform bound") {
  Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    const Momentum m = check(0.999 * rng.uniform(0.0, 1.0) * rng.sphere());
    const Vec3 omega = rng.sphere();
    const Faraday w = transport_kernel(omega, m);
    CHECK(std::sqrt(fnorm2(w)) <= 4.0 * m.v0() * (1.0 + 1e-12));
  }
}

TEST_CASE("first derivative kernel family integrates to zero on the sphere") {
  const SphereRule sph(64, 128);
  Rng rng(37);
  for (int s = 0; s < 4; ++s) {
    const Momentum m = check(0.9 * rng.uniform(0.1, 1.0) * rng.sphere());
    for (int k = 0; k < 3; ++k) {
      Faraday acc{};
      for (const auto& node : sph.nodes) {
        const Faraday w =
            derivative_kernel(DerivativeKernelFamily::a, k, node.omega, m);
        acc.E += node.weight * w.E;
        acc.B += node.weight * w.B;
      }
      CHECK(std::sqrt(fnorm2(acc)) < 1e-10);
    }
  }
}

TEST_CASE("late-time current lives inside the light cone") {
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  const Vec4 outside = j_asymp(p, 2.0, {2.5, 0, 0});
  for (int i = 0; i < 4; ++i) CHECK(outside[i] == 0.0);
  const Vec4 inside = j_asymp(p, 2.0, {1.0, 0, 0});
  CHECK(inside[0] < 0.0);  // covariant J_0 = -density
  CHECK(inside[1] > 0.0);  // outward flux
}

TEST_CASE("total charge of the late-time current is minus the phase-space mass") {
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  for (double tau : {1.0, 3.0})
    CHECK(j_asymp_charge(p, tau) ==
          Catch::Approx(-pi * pi * pi).epsilon(1e-4));
}

TEST_CASE("limit field of an isotropic profile is radial in v") {
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  const Vec3 v{0.0, 0.0, 0.8};
  const Faraday F = f_asymp(p, v);
  CHECK(std::abs(F.E[0]) < 1e-6);
  CHECK(std::abs(F.E[1]) < 1e-6);
  CHECK(norm(F.B) < 1e-6);
  // Rotation covariance: the same speed along x gives the same amplitude.
  const Faraday G = f_asymp(p, {0.8, 0.0, 0.0});
  CHECK(G.E[0] == Catch::Approx(F.E[2]).margin(1e-6));
}

TEST_CASE("field table interpolates the limit field and round-trips to disk") {
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  const AsympFieldTable tab = AsympFieldTable::build(
      p, 1.0, 9, AsympFieldForm::moment, 2, 48, 36, 72);
  const Vec3 v{0.41, -0.13, 0.22};
  const Faraday ti = tab(v);
  const Faraday di = f_asymp(p, v, AsympFieldForm::moment, 48, 36, 72);
  CHECK(norm(ti.E - di.E) < 5e-3);

  const std::string path = "asymp_table_test.bin";
  tab.save(path);
  const AsympFieldTable back = AsympFieldTable::load(path);
  REQUIRE(back.n == tab.n);
  CHECK(back.v_max == tab.v_max);
  CHECK(back.data == tab.data);
  std::remove(path.c_str());
}

TEST_CASE("pure charge field is coulomb in the far past region and cut off") {
  PureCharge pc{2.0};
  // Deep inside u = t - r <= -2 the cutoff is 1: exact Coulomb.
  const Vec3 x{3.0, 0.0, 0.0};
  const Faraday F = pc.field(0.5, x);
  CHECK(F.E[0] == Catch::Approx(2.0 / (4.0 * pi * 9.0)).epsilon(1e-12));
  CHECK(norm(F.B) == 0.0);
  // Past the cutoff the field vanishes.
  const Faraday G = pc.field(4.0, x);
  CHECK(fnorm2(G) == 0.0);
  // Gauss's law against the smeared charge: FD divergence of E equals the
  // density -J_0 inside the cutoff transition.
  const double t = 1.6;  // u = -1.4, inside the transition
  double divE = 0.0;
  const double h = 1e-4;
  for (int i = 0; i < 3; ++i) {
    Vec3 xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    divE += (pc.field(t, xp).E[i] - pc.field(t, xm).E[i]) / (2.0 * h);
  }
  CHECK(divE == Catch::Approx(-pc.current(t, x)[0]).margin(1e-5));
}
