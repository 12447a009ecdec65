#include <catch2/catch_amalgamated.hpp>

#include "vml/characteristics.hpp"

using namespace vml;

namespace {

CharacteristicFlow zero_flow() {
  CharacteristicFlow flow;
  flow.field = [](double, const Vec3&) { return Faraday{}; };
  flow.limit_field = [](const Vec3&) { return Faraday{}; };
  return flow;
}

}  // namespace

TEST_CASE("zero field keeps comoving coordinates exactly constant") {
  const CharacteristicFlow flow = zero_flow();
  const Vec3 z{0.3, -0.4, 0.2}, v{0.5, 0.1, -0.6};
  TrajectoryOptions opt;
  opt.t_end = 500.0;
  const TrajectoryPoint end = flow.integrate(z, v, opt);
  CHECK(norm(end.Z - z) < 1e-12);
  CHECK(norm(end.V - v) < 1e-12);
  // Position is the free ray; correction vanishes with the limit field.
  CHECK(norm(end.X - (z + (end.t / jbracket(v)) * v)) < 1e-10);
}

TEST_CASE("flow is rejected before the modified-coordinate regime") {
  const CharacteristicFlow flow = zero_flow();
  TrajectoryOptions opt;
  opt.t_start = 1.0;
  CHECK_THROWS_AS(flow.integrate({0, 0, 0}, {0.1, 0, 0}, opt), domain_error);
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  CHECK_THROWS_AS(
      backward_distribution(flow, p, 1.5, {0, 0, 0}, {0.1, 0, 0}),
      domain_error);
}

TEST_CASE("logarithmic correction matches its defining formula") {
  // Constant limit field E = e2 for every v.
  ModifiedCoordinates mc;
  mc.limit_field = [](const Vec3&) {
    return Faraday{{0.0, 1.0, 0.0}, {0.0, 0.0, 0.0}};
  };
  const Vec3 v{0.6, 0.0, 0.0};
  const double v0 = jbracket(v);
  const Vec3 vh = v / v0;
  const double t = 25.0;
  const Vec3 C = mc.correction(t, v);
  // Projection of e2 orthogonal to vhat is e2 itself here.
  const Vec3 expect = (-std::log(t) / v0) * Vec3{0.0, 1.0, 0.0};
  CHECK(norm(C - expect) < 1e-12);
  CHECK(std::abs(dot(C, vh)) < 1e-12);
}

TEST_CASE("correction jacobian is consistent with direct differences") {
  ModifiedCoordinates mc;
  mc.limit_field = [](const Vec3& v) {
    return Faraday{{std::sin(v[0]), v[1] * v[2], 0.3}, {0.1, 0.0, v[0]}};
  };
  const Vec3 v{0.4, -0.3, 0.5};
  const double t = 10.0;
  const auto J = mc.correction_jacobian(t, v);
  for (int j = 0; j < 3; ++j) {
    Vec3 vp = v, vm = v;
    vp[j] += 1e-5;
    vm[j] -= 1e-5;
    const Vec3 d = (mc.correction(t, vp) - mc.correction(t, vm)) / 2e-5;
    CHECK(norm(J[j] - d) < 1e-5);
  }
}

TEST_CASE("backward distribution reduces to the profile in the free case") {
  const CharacteristicFlow flow = zero_flow();
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  const Vec3 z{0.2, 0.3, -0.1}, v{0.4, -0.2, 0.5};
  const double g = backward_distribution(flow, p, 10.0, z, v, 200.0);
  CHECK(g == Catch::Approx(p.eval(z, v)).epsilon(1e-10));
}

TEST_CASE("integrator tracks a known linear-in-time velocity push") {
  // Uncorrected flow in a constant electric field E = eps e1: V' = eps e1,
  // exactly linear in t; Z adjusts so that X stays consistent.
  const double eps = 1e-3;
  CharacteristicFlow flow;
  flow.field = [eps](double, const Vec3&) {
    return Faraday{{eps, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  };
  flow.limit_field = [](const Vec3&) { return Faraday{}; };
  TrajectoryOptions opt;
  opt.t_end = 50.0;
  opt.corrected = false;
  const Vec3 z{0.0, 0.0, 0.0}, v{0.2, 0.0, 0.0};
  const TrajectoryPoint end = flow.integrate(z, v, opt);
  CHECK(end.V[0] == Catch::Approx(v[0] + eps * (50.0 - 2.0)).epsilon(1e-8));
}

TEST_CASE("trajectory sampling returns the requested checkpoints in order") {
  const CharacteristicFlow flow = zero_flow();
  const std::vector<double> times{5.0, 20.0, 80.0};
  std::vector<TrajectoryPoint> pts;
  TrajectoryOptions opt;
  opt.t_end = 100.0;
  flow.integrate({0.1, 0, 0}, {0.3, 0, 0}, opt, &times, &pts);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].t == 5.0);
  CHECK(pts[2].t == 80.0);
}
