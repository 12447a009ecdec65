// Samples the self-consistent field along an outgoing ray x = t vhat(v) and
// compares t^2 F against the direct limit-field quadrature.

#include <cstdio>

#include "vml/field_solver.hpp"

int main() {
  using namespace vml;
  const DistributionProfile p = gaussian_profile(1.0, 1.0, 1.0);
  const Vec3 v{0.5, 0.0, 0.0};
  const Vec3 vh = Momentum{v}.vhat();
  const Faraday ref = f_asymp(p, v);
  const AsympField F = AsympField::make(p, 1.0);
  std::printf("limit field at v: E = (%g, %g, %g)\n", ref.E[0], ref.E[1],
              ref.E[2]);
  std::printf("%8s %12s %12s\n", "t", "t^2 E1", "err");
  for (double t : {4.0, 6.0, 8.0, 12.0}) {
    const Faraday f = F(t, t * vh);
    std::printf("%8.1f %12.6f %12.3e\n", t, t * t * f.E[0],
                std::abs(t * t * f.E[0] - ref.E[0]));
  }
  return 0;
}
