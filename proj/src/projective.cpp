#include "avalanche/projective.hpp"

#include <algorithm>
#include <cmath>

#include "avalanche/errors.hpp"
#include "avalanche/singular.hpp"

namespace aval {

Inequality make_inequality(std::string name, double lhs, double rhs, double tol) {
  Inequality out{std::move(name), lhs, rhs, false};
  out.holds = lhs <= rhs + tol * std::max(1.0, std::abs(rhs));
  return out;
}

namespace {

void require_action(const Matrix& g, Index n, const char* where) {
  require_square(g, where);
  if (g.rows() != n) throw ShapeError(std::string(where) + ": dimension mismatch");
}

Vector image_of(const Matrix& g, const Vector& x, const char* where) {
  Vector gx = g * x;
  const double scale = g.norm();
  if (!(gx.norm() > kKernelThreshold * scale)) {
    throw KernelError(std::string(where) + ": point lies in the kernel (|g p| = " + std::to_string(gx.norm()) + ")");
  }
  return gx;
}

// |a ^ b| without the cancellation of |a|^2 |b|^2 - <a,b>^2.
double wedge_norm(const Vector& a, const Vector& b) {
  const double na = a.norm();
  if (!(na > 0.0)) return 0.0;
  const Vector u = a / na;
  return na * (b - u.dot(b) * u).norm();
}

}  // namespace

ProjPoint projective_action(const Matrix& g, const ProjPoint& p) {
  require_action(g, p.rep().size(), "projective_action");
  return ProjPoint(image_of(g, p.rep(), "projective_action"));
}

Vector action_derivative(const Matrix& g, const ProjPoint& p, const Vector& v) {
  const Vector& x = p.rep();
  require_action(g, x.size(), "action_derivative");
  if (v.size() != x.size()) throw ShapeError("action_derivative: tangent vector has the wrong size");
  if (std::abs(v.dot(x)) > 1e-10 * std::max(1.0, v.norm())) {
    throw DomainError("action_derivative: tangent vector is not orthogonal to the base point");
  }
  const Vector gx = image_of(g, x, "action_derivative");
  const double norm = gx.norm();
  const Vector w = gx / norm;
  const Vector gv = g * v;
  return (gv - w.dot(gv) * w) / norm;
}

double derivative_norm(const Matrix& g, const ProjPoint& p) {
  const Vector& x = p.rep();
  require_action(g, x.size(), "derivative_norm");
  if (x.size() == 1) return 0.0;
  const Vector gx = image_of(g, x, "derivative_norm");
  const double norm = gx.norm();
  const Vector w = gx / norm;
  const Matrix tangent = complement_frame(x);
  const Matrix gt = g * tangent;
  const Matrix d = (gt - w * (w.transpose() * gt)) / norm;
  return rect_singular_values(d)(0);
}

double delta_ratio(const Matrix& g, const ProjPoint& p, const ProjPoint& q) {
  const Vector& pu = p.rep();
  const Vector& qu = q.rep();
  require_action(g, pu.size(), "delta_ratio");
  Vector perp = qu - pu.dot(qu) * pu;
  const double len = perp.norm();
  if (!(len > 1e-14)) throw DomainError("delta_ratio: points coincide");
  perp /= len;
  const Vector gp = image_of(g, pu, "delta_ratio");
  const Vector gq = image_of(g, qu, "delta_ratio");
  return wedge_norm(gp, g * perp) / (gp.norm() * gq.norm());
}

ContractionBounds contraction_report(const Matrix& g, double r, std::optional<double> kappa) {
  require_square(g, "contraction_report");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("contraction_report: r must lie in (0,1)");
  const double sigma = gap_profile(g).inverse_gap(1);
  ContractionBounds out;
  if (kappa) {
    if (!(*kappa > 0.0 && *kappa < 1.0)) throw DomainError("contraction_report: kappa must lie in (0,1)");
    if (sigma > *kappa * (1 + 1e-12)) {
      throw GapError("contraction_report: gr(g) = " + std::to_string(1 / sigma) + " is below 1/kappa");
    }
    out.kappa = *kappa;
  } else {
    if (!has_strict_gap(g, 1)) throw GapError("contraction_report: no strict first gap");
    out.kappa = sigma;
  }
  out.r = r;
  const double c = std::sqrt(1 - r * r);
  out.image_radius = out.kappa * r / c;
  out.lipschitz = out.kappa * (r + c) / (1 - r * r);
  return out;
}

ProjPoint sample_sine_ball(const ProjPoint& center, double r, Rng& rng) {
  const Vector& c = center.rep();
  const Index n = c.size();
  if (n == 1) return center;
  Vector u = rng.unit(n);
  u -= u.dot(c) * c;
  while (!(u.norm() > 1e-8)) {
    u = rng.unit(n);
    u -= u.dot(c) * c;
  }
  u.normalize();
  const double top = std::asin(std::clamp(r, 0.0, 1.0));
  const double angle = rng.uniform() < 0.2
                           ? top
                           : top * std::pow(rng.uniform(), 1.0 / static_cast<double>(n - 1));
  return ProjPoint(std::cos(angle) * c + std::sin(angle) * u);
}

ContractionSample sample_contraction(const Matrix& g, double r, std::optional<double> kappa, Rng& rng,
                                     int samples) {
  ContractionSample out;
  out.bounds = contraction_report(g, r, kappa);
  const ProjPoint center = most_expanding_direction(g);
  const ProjPoint image_center = most_expanding_direction(g.transpose());
  for (int s = 0; s < samples; ++s) {
    const ProjPoint x = sample_sine_ball(center, r, rng);
    ProjPoint y = sample_sine_ball(center, r, rng);
    if (s % 2 == 1) {
      const ProjPoint near = sample_sine_ball(x, 1e-4, rng);
      if (proj_metrics(near, center).delta <= r) y = near;
    }
    const ProjPoint gx = projective_action(g, x);
    out.max_image_radius = std::max(out.max_image_radius, proj_metrics(gx, image_center).delta);
    const double rho = proj_metrics(x, y).rho;
    if (rho > 1e-12) {
      out.max_lipschitz = std::max(out.max_lipschitz, proj_metrics(gx, projective_action(g, y)).rho / rho);
    }
    ++out.samples;
  }
  out.holds = out.max_image_radius <= out.bounds.image_radius * (1 + 1e-9) + 1e-14 &&
              out.max_lipschitz <= out.bounds.lipschitz * (1 + 1e-9) + 1e-14;
  return out;
}

}  // namespace aval
