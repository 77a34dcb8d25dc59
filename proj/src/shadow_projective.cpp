#include <cmath>
#include <numbers>

#include "avalanche/shadowing.hpp"
#include "avalanche/singular.hpp"

namespace aval {

std::string ShadowConfig::violation() const {
  if (!(delta > 0.0)) return "delta must be positive";
  if (!(delta < kappa)) return "delta must be below kappa";
  if (!(kappa < 1.0)) return "kappa must be below 1";
  if (!(delta / (1 - kappa) < epsilon)) return "delta/(1-kappa) must be below epsilon";
  if (!(epsilon < 0.5)) return "epsilon must be below 1/2";
  return {};
}

double normalized_arc_distance(const ProjPoint& p, const ProjPoint& q) {
  return 2 / std::numbers::pi * proj_metrics(p, q).rho;
}

ProjPoint sample_arc_ball(Rng& rng, const ProjPoint& center, double radius) {
  const double r = std::min(radius, 1.0);
  return sample_sine_ball(center, std::sin(r * std::numbers::pi / 2), rng);
}

ShadowMap<ProjPoint> projective_shadow_map(const Matrix& g, const ProjPoint& center, std::string label,
                                           std::optional<double> epsilon) {
  ShadowMap<ProjPoint> m;
  m.label = std::move(label);
  m.apply = [g](const ProjPoint& p) { return projective_action(g, p); };
  m.boundary_distance = [center](const ProjPoint& p) { return 1.0 - normalized_arc_distance(p, center); };
  m.sample_region = [center](Rng& rng, double eps) { return sample_arc_ball(rng, center, 1.0 - eps); };
  if (epsilon) {
    if (!(proj_metrics(center, most_expanding_direction(g)).delta <= 1e-10)) {
      throw DomainError("projective_shadow_map: certificates need the most expanding direction as center");
    }
    // X0(eps) is the sine ball of radius cos(pi eps / 2) around the center.
    const double r = std::cos(std::numbers::pi * *epsilon / 2);
    if (r > 0.0 && r < 1.0) {
      const ContractionBounds b = contraction_report(g, r);
      m.lipschitz_certificate = b.lipschitz;
      m.image_radius_certificate = b.image_radius;
    }
  }
  return m;
}

ShadowProblem<ProjPoint> projective_shadow_problem(std::vector<ShadowMap<ProjPoint>> maps,
                                                   std::vector<ProjPoint> points) {
  ShadowProblem<ProjPoint> p;
  p.distance = normalized_arc_distance;
  p.sample_ball = [](Rng& rng, const ProjPoint& c, double radius) { return sample_arc_ball(rng, c, radius); };
  p.maps = std::move(maps);
  p.points = std::move(points);
  return p;
}

ShadowConfig ap_shadow_config(double kappa, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("ap_shadow_config: epsilon must lie in (0,1)");
  if (!(kappa > 0.0)) throw DomainError("ap_shadow_config: kappa must be positive");
  const double r = std::sqrt(1 - epsilon * epsilon / 4);
  const double c = std::sqrt(1 - r * r);
  return ShadowConfig{std::asin(epsilon) / std::numbers::pi, kappa * (r + c) / (1 - r * r), kappa * r / c};
}

ShadowProblem<ProjPoint> ap_shadow_problem(const std::vector<Matrix>& chain, double epsilon_sh, ApChain kind) {
  const std::size_t n = chain.size();
  if (n == 0) throw DomainError("ap_shadow_problem: empty chain");
  std::vector<ShadowMap<ProjPoint>> forward, backward;
  std::vector<ProjPoint> forward_pts, backward_pts;
  for (std::size_t j = 0; j < n; ++j) {
    const ProjPoint x = most_expanding_direction(chain[j]);
    forward.push_back(projective_shadow_map(chain[j], x, "g_" + std::to_string(j), epsilon_sh));
    forward_pts.push_back(x);
  }
  for (std::size_t m = n; m >= 1; --m) {
    const Matrix adjoint = chain[m - 1].transpose();
    const ProjPoint x = most_expanding_direction(adjoint);
    backward.push_back(projective_shadow_map(adjoint, x, "g_" + std::to_string(m - 1) + "^T", epsilon_sh));
    backward_pts.push_back(x);
  }
  if (kind == ApChain::Backward) {
    std::swap(forward, backward);
    std::swap(forward_pts, backward_pts);
  }
  for (std::size_t i = 0; i < backward.size(); ++i) {
    forward.push_back(std::move(backward[i]));
    forward_pts.push_back(std::move(backward_pts[i]));
  }
  return projective_shadow_problem(std::move(forward), std::move(forward_pts));
}

}  // namespace aval
