#pragma once
// Quadrature rules: Gauss-Legendre segments, tensor boxes, product sphere
// rules, and cumulative radial integrals. All reductions use pairwise
// summation for reproducibility.

#include <deque>
#include <vector>

#include "vml/core.hpp"

namespace vml {

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on Legendre
// polynomials. Cached per order.
struct GaussLegendre {
  std::vector<double> node;
  std::vector<double> weight;

  explicit GaussLegendre(int n) {
    node.resize(n);
    weight.resize(n);
    for (int i = 0; i < n; ++i) {
      // Initial guess (Tricomi).
      double x = std::cos(pi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        // Evaluate P_n and P_n' by recurrence.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      node[i] = x;
      weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

inline const GaussLegendre& gl_rule(int n) {
  // Deque so that growing the cache never invalidates references handed out
  // to callers that trigger nested gl_rule calls of other orders.
  static thread_local std::deque<GaussLegendre> cache;  // indexed by order
  while (static_cast<int>(cache.size()) <= n)
    cache.emplace_back(std::max<std::size_t>(1, cache.size()));
  return cache[n];
}

// 1D integral over [a,b].
template <class F>
double integrate_segment(F&& f, double a, double b, int n) {
  const auto& g = gl_rule(n);
  std::vector<double> vals(g.node.size());
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < g.node.size(); ++i)
    vals[i] = g.weight[i] * f(mid + half * g.node[i]);
  return half * pairwise_sum(vals);
}

// 3D tensor-product integral over the box [a,b]^3.
template <class F>
double integrate_box(F&& f, const Vec3& a, const Vec3& b, int n) {
  const auto& g = gl_rule(n);
  const int m = static_cast<int>(g.node.size());
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(m) * m * m);
  Vec3 mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const Vec3 p = {mid[0] + half[0] * g.node[i],
                        mid[1] + half[1] * g.node[j],
                        mid[2] + half[2] * g.node[k]};
        vals.push_back(g.weight[i] * g.weight[j] * g.weight[k] * f(p));
      }
  return half[0] * half[1] * half[2] * pairwise_sum(vals);
}

// Product rule on S^2: Gauss-Legendre in cos(theta), uniform trapezoid in
// phi (exact for trigonometric polynomials). Integrates f(omega) against the
// round measure (total 4*pi).
struct SphereRule {
  struct Node {
    Vec3 omega;
    double theta, phi, weight;
  };
  std::vector<Node> nodes;

  SphereRule(int n_theta, int n_phi) {
    const auto& g = gl_rule(n_theta);
    const double dphi = 2.0 * pi / n_phi;
    nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
      const double c = g.node[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      const double th = std::acos(c);
      for (int j = 0; j < n_phi; ++j) {
        const double ph = (j + 0.5) * dphi;
        nodes.push_back({{s * std::cos(ph), s * std::sin(ph), c},
                         th,
                         ph,
                         g.weight[i] * dphi});
      }
    }
  }
};

template <class F>
double integrate_sphere(F&& f, const SphereRule& rule) {
  std::vector<double> vals(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    vals[i] = rule.nodes[i].weight * f(rule.nodes[i].omega);
  return pairwise_sum(vals);
}

// Cumulative integral m(r) = int_0^r f(s) ds tabulated on a uniform grid,
// linear interpolation in between panel endpoints via local Gauss panels.
struct CumulativeIntegral {
  double r_max = 0.0;
  double dr = 0.0;
  std::vector<double> table;  // table[i] = int_0^{i*dr} f

  template <class F>
  CumulativeIntegral(F&& f, double rmax, int n_panels, int n_gl = 8)
      : r_max(rmax), dr(rmax / n_panels) {
    table.resize(n_panels + 1);
    table[0] = 0.0;
    for (int i = 0; i < n_panels; ++i)
      table[i + 1] = table[i] + integrate_segment(f, i * dr, (i + 1) * dr, n_gl);
  }

  double operator()(double r) const {
    if (r <= 0.0) return 0.0;
    if (r >= r_max) return table.back();
    const double s = r / dr;
    const auto i = static_cast<std::size_t>(s);
    const double w = s - static_cast<double>(i);
    return (1.0 - w) * table[i] + w * table[i + 1];
  }
};

}  // namespace vml
