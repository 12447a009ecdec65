#include <catch2/catch_amalgamated.hpp>

#include "vml/kinematics.hpp"

using namespace vml;

TEST_CASE("check map inverts the relativistic speed map") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const Vec3 y = 0.99 * rng.uniform(0.0, 1.0) * rng.sphere();
    const Momentum m = check(y);
    const Vec3 back = m.vhat();
    CHECK(norm(back - y) < 1e-12);
  }
  CHECK_THROWS_AS(check(Vec3{1.0, 0.0, 0.0}), domain_error);
}

TEST_CASE("analytic momentum jacobian matches finite differences") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform(0.5, 20.0);
    const Momentum m{rng.uniform_vec3(-2.0, 2.0)};
    const double ja = momentum_jacobian(t, m);
    const double jf = momentum_jacobian_fd(t, m, 1e-5);
    CHECK(std::abs(ja - jf) / std::abs(ja) < 1e-6);
  }
  CHECK_THROWS_AS(momentum_jacobian(0.0, Momentum{}), domain_error);
}

TEST_CASE("angular frame is orthonormal and right-handed") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vec3 x = rng.uniform(0.5, 5.0) * rng.sphere();
    if (std::sqrt(x[0] * x[0] + x[1] * x[1]) < 1e-10 * norm(x)) continue;
    const AngularFrame fr = angular_frame(x);
    CHECK(norm(fr.e_theta) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(norm(fr.e_phi) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(dot(fr.e_theta, fr.e_phi)) < 1e-12);
    CHECK(std::abs(dot(fr.omega, fr.e_theta)) < 1e-12);
    CHECK(norm(cross(fr.e_theta, fr.e_phi) - fr.omega) < 1e-12);
  }
  CHECK_THROWS_AS(angular_frame(Vec3{0, 0, 0}), domain_error);
  CHECK_THROWS_AS(angular_frame(Vec3{0, 0, 1}), domain_error);
}

TEST_CASE("null momentum components satisfy the mass-shell identity") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Vec3 x{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    if (std::sqrt(x[0] * x[0] + x[1] * x[1]) < 1e-6) continue;
    const Momentum m{rng.uniform_vec3(-2, 2)};
    const NullMomentum nm = null_momentum(x, m);
    const double vslash2 = nm.vslash[0] * nm.vslash[0] +
                           nm.vslash[1] * nm.vslash[1];
    // 4 vL vLbar = v0^2 - (omega.v)^2 = 1 + |vslash|^2.
    CHECK(4.0 * nm.vL * nm.vLbar ==
          Catch::Approx(1.0 + vslash2).epsilon(1e-12));
    CHECK(nm.vL + nm.vLbar == Catch::Approx(m.v0()).epsilon(1e-12));
  }
}

TEST_CASE("weight inequalities hold on random probes") {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const double t = rng.uniform(0.0, 20.0);
    const Vec3 x{rng.uniform(-10, 10), rng.uniform(-10, 10),
                 rng.uniform(-10, 10)};
    if (std::sqrt(x[0] * x[0] + x[1] * x[1]) < 1e-6) continue;
    const Momentum m{rng.uniform_vec3(-3, 3)};
    const WeightReport rep = weight_report(t, x, m);
    for (const auto& [lhs, rhs] : rep.pairs) CHECK(lhs <= rhs * (1 + 1e-12));
  }
}
