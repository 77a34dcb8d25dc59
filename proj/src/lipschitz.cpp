#include <algorithm>
#include <cmath>
#include <limits>

#include "avalanche/errors.hpp"
#include "avalanche/projective.hpp"
#include "avalanche/singular.hpp"

namespace aval {

double relative_distance(const Matrix& g1, const Matrix& g2) {
  if (g1.rows() != g2.rows() || g1.cols() != g2.cols()) throw ShapeError("relative_distance: shapes differ");
  const double scale = std::max(op_norm(g1), op_norm(g2));
  if (!(scale > 0.0)) throw DomainError("relative_distance: both maps vanish");
  return op_norm(g1 - g2) / scale;
}

bool DeltaRatioReport::all_hold() const {
  return ratio_difference.holds && lower_distortion.holds && upper_distortion.holds && log_distortion.holds &&
         holder_difference.holds && action_difference.holds;
}

DeltaRatioReport delta_ratio_bounds(const Matrix& g1, const Matrix& g2, const ProjPoint& p, const ProjPoint& q,
                                    double alpha_exp) {
  require_square(g1, "delta_ratio_bounds");
  if (g1.rows() != g2.rows() || g2.rows() != g2.cols()) throw ShapeError("delta_ratio_bounds: shapes differ");
  if (!(alpha_exp > 0.0 && alpha_exp <= 1.0)) throw DomainError("delta_ratio_bounds: exponent must lie in (0,1]");
  const Vector s1 = singular_values(g1);
  const Vector s2 = singular_values(g2);
  if (!(s1(s1.size() - 1) > 1e-10) || !(s2(s2.size() - 1) > 1e-10)) {
    throw DomainError("delta_ratio_bounds: maps must be invertible");
  }
  if (!(proj_metrics(p, q).delta > 1e-14)) throw DomainError("delta_ratio_bounds: points coincide");

  const double n1 = s1(0), n2 = s2(0);
  const double i1 = 1 / s1(s1.size() - 1), i2 = 1 / s2(s2.size() - 1);
  const double diff = op_norm(g1 - g2);

  DeltaRatioReport out;
  out.ratio1 = delta_ratio(g1, p, q);
  out.ratio2 = delta_ratio(g2, p, q);
  out.c = (i1 * i1 + n2 * n2 * i1 * i1 * i2 * i2) * (n1 + n2);
  out.c1 = alpha_exp * std::pow(std::max(n1 * i1, n2 * i2), 2 * (1 - alpha_exp)) * out.c;

  const double distortion = (n1 * i1) * (n1 * i1);
  out.ratio_difference = make_inequality("ratio_difference", std::abs(out.ratio1 - out.ratio2), out.c * diff);
  out.lower_distortion = make_inequality("lower_distortion", 1 / distortion, out.ratio1);
  out.upper_distortion = make_inequality("upper_distortion", out.ratio1, distortion);
  const double ell = std::max(std::log(n1), std::log(i1));
  out.log_distortion = make_inequality("log_distortion", std::abs(std::log(out.ratio1)), 4 * ell);
  out.holder_difference =
      make_inequality("holder_difference",
                      std::abs(std::pow(out.ratio1, alpha_exp) - std::pow(out.ratio2, alpha_exp)), out.c1 * diff);
  const double lhs = proj_metrics(projective_action(g1, p), projective_action(g2, p)).d;
  const double rhs = std::max(1 / (g1 * p.rep()).norm(), 1 / (g2 * p.rep()).norm()) * diff;
  out.action_difference = make_inequality("action_difference", lhs, rhs);
  return out;
}

bool RestrictedGapReport::conclusions_hold() const {
  return gap_bound.holds && (!distance_bound || distance_bound->holds);
}

RestrictedGapReport restricted_gap(const Matrix& g, const Subspace& e, double varkappa, int k, int r,
                                   double delta0) {
  require_square(g, "restricted_gap");
  const int n = static_cast<int>(g.rows());
  if (e.ambient() != n) throw ShapeError("restricted_gap: subspace lives in a different space");
  if (k < 1 || r < 1 || k + r > n) throw DomainError("restricted_gap: need 1 <= k < k + r <= n");
  if (e.dim() != k) throw DomainError("restricted_gap: subspace dimension differs from k");

  const GapProfile profile = gap_profile(g);
  auto sigma_at = [&](int j) { return j == n ? 0.0 : profile.inverse_gap(j); };

  RestrictedGapReport out;
  out.gap_hypothesis = sigma_at(k) < varkappa && sigma_at(k + r) < varkappa;

  std::optional<Subspace> top_k;
  if (has_strict_gap(g, k)) {
    top_k = most_expanding_subspace(g, k);
    out.delta_e = grass_metrics(e, *top_k).delta;
    // Leakage of the top directions into E^perp is about delta_e s_1, so the
    // admissible distance shrinks with the size of g on v_k(g)^perp.
    const Vector s = singular_values(g);
    out.proximity_threshold = delta0 * s(k) / s(0);
    out.proximity_hypothesis = out.delta_e < out.proximity_threshold;
  } else {
    out.delta_e = std::numeric_limits<double>::quiet_NaN();
  }

  // g restricted to E^perp, realized on V as g composed with the projection onto E^perp.
  const Matrix fperp = complement_frame(e.frame());
  const Matrix h = g * fperp * fperp.transpose();
  const GapProfile restricted = gap_profile(h);
  out.sigma_restricted = restricted.inverse_gap(r);
  out.gap_bound = make_inequality("restricted_gap", out.sigma_restricted, 2 * varkappa);

  const bool top_gap = k + r == n || has_strict_gap(g, k + r);
  if (top_k && top_gap && has_strict_gap(h, r)) {
    try {
      const Subspace lhs_space = most_expanding_subspace(h, r);
      const Subspace rhs_space = intersect(most_expanding_subspace(g, k + r), complement(e));
      const double factor = 1 - 4 * varkappa * varkappa;
      const double rhs = factor > 0.0 ? 20 / factor * out.delta_e : std::numeric_limits<double>::infinity();
      out.distance_bound = make_inequality("restricted_direction", grass_metrics(lhs_space, rhs_space).delta, rhs);
    } catch (const TransversalityError&) {
      out.distance_bound.reset();
    }
  }
  return out;
}

Inequality wedge_difference_bound(const Matrix& g1, const Matrix& g2, int i) {
  require_square(g1, "wedge_difference_bound");
  if (g1.rows() != g2.rows() || g2.rows() != g2.cols()) throw ShapeError("wedge_difference_bound: shapes differ");
  const double lhs = op_norm(exterior_power(g1, i) - exterior_power(g2, i));
  const double m = std::max({1.0, op_norm(g1), op_norm(g2)});
  return make_inequality("wedge_difference", lhs, i * std::pow(m, i - 1) * op_norm(g1 - g2));
}

double lipschitz_constant_level(const Matrix& g1, const Matrix& g2, int l) {
  const double m = std::max({1.0, op_norm(g1), op_norm(g2)});
  const double denom = std::max(op_norm(exterior_power(g1, l)), op_norm(exterior_power(g2, l)));
  if (!(denom > 0.0)) throw DomainError("lipschitz_constant_level: both exterior powers vanish");
  return l * std::pow(m, l - 1) / denom;
}

EigendirectionReport eigendirection_continuity(const Matrix& g1, const Matrix& g2, double kappa, int level,
                                               double epsilon0) {
  require_square(g1, "eigendirection_continuity");
  if (g1.rows() != g2.rows() || g2.rows() != g2.cols()) {
    throw ShapeError("eigendirection_continuity: shapes differ");
  }
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("eigendirection_continuity: kappa must lie in (0,1)");
  const int n = static_cast<int>(g1.rows());
  if (level < 1 || level >= n) throw DomainError("eigendirection_continuity: level outside 1..n-1");

  EigendirectionReport out;
  out.level = level;
  out.d_rel = relative_distance(g1, g2);
  auto in_class = [&](const Matrix& g) {
    return has_strict_gap(g, level) && gap_profile(g).gap(level) >= (1 / kappa) * (1 - 1e-12);
  };
  out.in_class = in_class(g1) && in_class(g2);

  const double factor = 16 / (1 - kappa * kappa);
  double rhs = factor * out.d_rel;
  if (level == 1) {
    out.close = out.d_rel <= epsilon0;
  } else {
    out.c_level = lipschitz_constant_level(g1, g2, level);
    const double diff = op_norm(g1 - g2);
    out.close = diff <= epsilon0 / *out.c_level;
    rhs = factor * *out.c_level * diff;
  }
  if (!out.in_class) {
    out.distance = std::numeric_limits<double>::quiet_NaN();
    out.bound = Inequality{"eigendirection", out.distance, rhs, false};
    return out;
  }
  out.distance = grass_metrics(most_expanding_subspace(g1, level), most_expanding_subspace(g2, level)).d;
  out.bound = make_inequality("eigendirection", out.distance, rhs);
  return out;
}

}  // namespace aval
