#include <catch2/catch_amalgamated.hpp>

#include "vml/nullframe.hpp"

using namespace vml;

TEST_CASE("null decomposition round-trips and preserves the field norm") {
  Rng rng(19);
  for (int i = 0; i < 500; ++i) {
    Vec3 x = rng.uniform(0.5, 5.0) * rng.sphere();
    if (std::sqrt(x[0] * x[0] + x[1] * x[1]) < 1e-8) continue;
    const Faraday F{rng.uniform_vec3(-1, 1), rng.uniform_vec3(-1, 1)};
    const NullComponents nc = null_decompose(F, x);
    const Faraday G = faraday_from_null(nc, x / norm(x));
    CHECK(norm(F.E - G.E) < 1e-14);
    CHECK(norm(F.B - G.B) < 1e-14);
    const double null_norm =
        0.5 * (nc.alpha[0] * nc.alpha[0] + nc.alpha[1] * nc.alpha[1] +
               nc.alphabar[0] * nc.alphabar[0] +
               nc.alphabar[1] * nc.alphabar[1]) +
        nc.rho * nc.rho + nc.sigma * nc.sigma;
    CHECK(null_norm == Catch::Approx(fnorm2(F)).epsilon(1e-12));
  }
}

TEST_CASE("hodge dual squares to minus the identity and preserves the norm") {
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    const Faraday F{rng.uniform_vec3(-1, 1), rng.uniform_vec3(-1, 1)};
    const Faraday FF = hodge_dual(hodge_dual(F));
    CHECK(norm(FF.E + F.E) < 1e-15);
    CHECK(norm(FF.B + F.B) < 1e-15);
    CHECK(fnorm2(hodge_dual(F)) == Catch::Approx(fnorm2(F)));
  }
}

TEST_CASE("lie derivative along a rotation kills rotationally invariant fields") {
  // Radial electric field E = x g(|x|^2), B = 0 is invariant under rotations.
  FieldSampler F = [](double, const Vec3& x) {
    return Faraday{std::exp(-norm2(x)) * x, {0, 0, 0}};
  };
  for (auto id :
       {VectorFieldId::rot_12, VectorFieldId::rot_23, VectorFieldId::rot_31}) {
    const Faraday L = lie_derivative(F, id, 1.0, {0.3, -0.4, 0.7});
    CHECK(norm(L.E) < 1e-8);
    CHECK(norm(L.B) < 1e-8);
  }
}

TEST_CASE("null maxwell residual vanishes on a vacuum plane wave") {
  // E = e1 cos(z - t), B = e2 cos(z - t) solves source-free Maxwell.
  FieldSampler F = [](double t, const Vec3& x) {
    const double c = std::cos(x[2] - t);
    return Faraday{{c, 0, 0}, {0, c, 0}};
  };
  FourCurrent zero = [](double, const Vec3&) { return Vec4{0, 0, 0, 0}; };
  const Vec3 x{1.2, 0.7, -0.4};
  const auto res = null_maxwell_residual(F, zero, zero, 2.0, x, 1e-3);
  for (double r : res) CHECK(std::abs(r) < 1e-5);
}

TEST_CASE("lifted scaling applies the +3 zeroth order term") {
  KineticSampler h = [](double t, const Vec3&, const Vec3&) { return t; };
  const double out =
      lifted_apply(h, VectorFieldId::scaling, 2.0, {1, 0, 0}, {0.1, 0, 0});
  CHECK(out == Catch::Approx(2.0 + 3.0 * 2.0).margin(1e-6));
}

TEST_CASE("plain energy integral of an inverse-square field") {
  FieldSampler F = [](double, const Vec3& x) {
    const double r = norm(x);
    return Faraday{x / (r * r * r), {0, 0, 0}};
  };
  const double e =
      energy_integral(F, 1.0, RadialGrid{1.0, 2.0, 64}, 0.0,
                      EnergyWeight::plain);
  CHECK(e == Catch::Approx(4.0 * pi * 0.5).epsilon(1e-6));
}

TEST_CASE("energy momentum null contractions recombine to the field norm") {
  const Faraday F{{1, 2, 3}, {-1, 0, 2}};
  const Vec3 x{0.4, -1.1, 0.8};
  const auto T = energy_momentum_contraction(F, x);
  CHECK(T[3] == Catch::Approx(fnorm2(F)).epsilon(1e-12));
  CHECK(T[3] == Catch::Approx(0.5 * (T[0] + T[1]) + T[2]).epsilon(1e-12));
  // Morawetz density is nonnegative and dominates the plain density at t = 0.
  CHECK(morawetz_density(F, 0.0, x) >= T[3]);
}
