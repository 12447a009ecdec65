#include <catch2/catch_amalgamated.hpp>

#include "vml/core.hpp"
#include "vml/quadrature.hpp"

using namespace vml;

TEST_CASE("vector algebra basics") {
  const Vec3 a{1, 2, 3}, b{-2, 0.5, 4};
  CHECK(dot(a, b) == Catch::Approx(1 * -2 + 2 * 0.5 + 3 * 4));
  CHECK(norm(cross(a, a)) == 0.0);
  CHECK(dot(cross(a, b), a) == Catch::Approx(0.0).margin(1e-14));
  CHECK(jbracket(Vec3{0, 0, 0}) == 1.0);
  CHECK(jbracket(3.0) == Catch::Approx(std::sqrt(10.0)));
}

TEST_CASE("pairwise summation matches naive sum on benign data") {
  std::vector<double> xs(1000);
  double naive = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = std::sin(0.1 * i);
    naive += xs[i];
  }
  CHECK(pairwise_sum(xs) == Catch::Approx(naive).epsilon(1e-13));
}

TEST_CASE("fd_derivative is 4th order on smooth functions") {
  auto f = [](double x) { return std::sin(x); };
  const double d = fd_derivative(f, 0.7, 1e-2);
  CHECK(d == Catch::Approx(std::cos(0.7)).margin(1e-9));
}

TEST_CASE("cutoff transition values and derivative consistency") {
  Cutoff chi{-2.0, -1.0};
  CHECK(chi(-3.0) == 1.0);
  CHECK(chi(-0.5) == 0.0);
  const double mid = chi(-1.5);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  // chi' matches an FD derivative of chi inside the transition.
  auto f = [&](double s) { return chi(s); };
  CHECK(chi.prime(-1.5) == Catch::Approx(fd_derivative(f, -1.5, 1e-3))
                               .margin(1e-8));
}

TEST_CASE("rng reproducibility") {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i)
    CHECK(a.uniform(0.0, 1.0) == b.uniform(0.0, 1.0));
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const double got = integrate_segment(
      [](double x) { return 3 * x * x * x * x * x - x * x + 2; }, -1.0, 2.0,
      8);
  // int of 3x^5 - x^2 + 2 over [-1,2] = (x^6/2 - x^3/3 + 2x)
  const double ref = (32.0 - 8.0 / 3.0 + 4.0) - (0.5 + 1.0 / 3.0 - 2.0);
  CHECK(got == Catch::Approx(ref).epsilon(1e-14));
}

TEST_CASE("box integral of a separable gaussian") {
  const double got = integrate_box(
      [](const Vec3& x) { return std::exp(-norm2(x)); }, {-6, -6, -6},
      {6, 6, 6}, 32);
  CHECK(got == Catch::Approx(std::pow(pi, 1.5)).epsilon(1e-10));
}

TEST_CASE("sphere rule integrates constants and spherical harmonics") {
  const SphereRule sph(16, 32);
  CHECK(integrate_sphere([](const Vec3&) { return 1.0; }, sph) ==
        Catch::Approx(4.0 * pi).epsilon(1e-13));
  // First moments vanish, second moments are 4 pi / 3 on the diagonal.
  for (int i = 0; i < 3; ++i) {
    CHECK(integrate_sphere([&](const Vec3& w) { return w[i]; }, sph) ==
          Catch::Approx(0.0).margin(1e-13));
    CHECK(integrate_sphere([&](const Vec3& w) { return w[i] * w[i]; }, sph) ==
          Catch::Approx(4.0 * pi / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("cumulative integral tabulation") {
  CumulativeIntegral m([](double s) { return s * s; }, 4.0, 400);
  CHECK(m(2.0) == Catch::Approx(8.0 / 3.0).epsilon(1e-6));
  CHECK(m(0.0) == 0.0);
  CHECK(m(5.0) == Catch::Approx(64.0 / 3.0).epsilon(1e-6));  // clamps
}
