// Integrates a comoving characteristic in the tabulated field and prints the
// drift of the comoving position toward its limit.

#include <cstdio>

#include "vml/harness.hpp"

int main() {
  using namespace vml;
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  const harness::FlowBundle b = harness::make_flow(p, 1.0, 1000.0, 4);

  const Vec3 z{0.3, -0.2, 0.1}, v{0.4, 0.1, -0.3};
  TrajectoryOptions opt;
  opt.t_end = 1000.0;
  std::vector<double> checkpoints{10.0, 50.0, 200.0, 500.0};
  std::vector<TrajectoryPoint> pts;
  const TrajectoryPoint end = b.flow.integrate(z, v, opt, &checkpoints, &pts);
  std::printf("%8s %12s\n", "t", "|Z(t)-Z(T)|");
  for (const auto& q : pts)
    std::printf("%8.1f %12.4e\n", q.t, norm(q.Z - end.Z));
  std::printf("horizon T = %.0f, Z(T) = (%g, %g, %g)\n", end.t, end.Z[0],
              end.Z[1], end.Z[2]);
  return 0;
}
