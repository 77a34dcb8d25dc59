#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "avalanche/errors.hpp"
#include "avalanche/projective.hpp"

namespace aval {

// Parameters (epsilon, kappa, delta) of the contractive shadowing argument.
struct ShadowConfig {
  double epsilon = 0.0;
  double kappa = 0.0;
  double delta = 0.0;

  // Empty when 0 < delta < kappa < 1 and delta/(1-kappa) < epsilon < 1/2.
  std::string violation() const;
  bool valid() const { return violation().empty(); }
};

// One map g_j : X0_j -> X_{j+1} of a chain, with the data needed to test the
// hypotheses.  sample_region(rng, eps) draws a point of X0_j(eps).
template <class Point>
struct ShadowMap {
  std::string label;
  std::function<Point(const Point&)> apply;
  std::function<double(const Point&)> boundary_distance;
  std::function<Point(Rng&, double)> sample_region;
  std::optional<double> lipschitz_certificate;
  std::optional<double> image_radius_certificate;
};

template <class Point>
struct ShadowProblem {
  std::function<double(const Point&, const Point&)> distance;
  // sample_ball(rng, center, radius): a point at distance <= radius from center.
  std::function<Point(Rng&, const Point&, double)> sample_ball;
  std::vector<ShadowMap<Point>> maps;
  std::vector<Point> points;
  // Distance to the boundary of X0_n.  When empty and the chain is closed,
  // the first map's boundary is used.
  std::function<double(const Point&)> terminal_boundary_distance;
};

struct ShadowOptions {
  int region_samples = 1000;
  int ball_pairs = 200;
  double closed_tolerance = 1e-10;
  double fixed_point_tolerance = 1e-12;
  int max_iterations = 100000;
  int table_limit = 512;
  double floor = 1e-14;
  std::uint64_t seed = 0;
};

struct HypothesisItem {
  std::string item;  // "a", "b", "c", "d" or "config"
  int index = -1;
  double value = 0.0;
  double threshold = 0.0;
  bool holds = false;
  std::string certificate;  // "exact", "analytic" or "sampled"
  std::optional<double> sampled;
};

struct TableEntry {
  int i = 0;
  int j = 0;
  double distance = 0.0;
  double bound = 0.0;
};

template <class Point>
struct ShadowReport {
  ShadowConfig config;
  std::vector<HypothesisItem> hypotheses;
  bool hypotheses_hold = false;

  double log_lipschitz_bound = 0.0;  // n log kappa
  double lipschitz_bound = 0.0;
  double lipschitz_observed = 0.0;
  double lipschitz_excess = 0.0;  // max of d(Tp, Tq) - bound d(p, q) over sampled pairs
  bool lipschitz_holds = false;

  double end_distance = 0.0;
  Inequality end_bound;

  bool closed = false;
  std::optional<Point> fixed_point;
  std::optional<Inequality> fixed_point_bound;
  int iterations = 0;

  std::vector<TableEntry> table;
  bool table_holds = true;

  bool conclusions_hold() const {
    return lipschitz_holds && end_bound.holds && (!fixed_point_bound || fixed_point_bound->holds) && table_holds;
  }
  std::string first_failure() const {
    for (const HypothesisItem& h : hypotheses) {
      if (!h.holds) return "hypothesis (" + h.item + ") at index " + std::to_string(h.index);
    }
    return {};
  }
};

template <class Point>
Point shadow_compose(const ShadowProblem<Point>& problem, Point x) {
  for (const ShadowMap<Point>& m : problem.maps) x = m.apply(x);
  return x;
}

// Iterates t until the Cauchy increment drops below tol.
template <class Point>
std::pair<Point, int> iterate_to_fixed_point(const std::function<Point(const Point&)>& t,
                                             const std::function<double(const Point&, const Point&)>& distance,
                                             Point x, double tol, int max_iterations) {
  for (int it = 1; it <= max_iterations; ++it) {
    Point next = t(x);
    const double step = distance(next, x);
    x = std::move(next);
    if (step < tol) return {x, it};
  }
  throw ConvergenceError("fixed point iteration did not reach increment " + std::to_string(tol) + " within " +
                         std::to_string(max_iterations) + " iterations");
}

// Fixed point distance bound d(T1, T2) / (1 - kappa) for a kappa-contraction T1.
inline double fixed_point_perturbation_bound(double kappa, double sup_distance) {
  if (!(kappa >= 0.0 && kappa < 1.0)) throw DomainError("fixed_point_perturbation_bound: kappa must lie in [0,1)");
  return sup_distance / (1.0 - kappa);
}

template <class Point>
ShadowReport<Point> shadow_run(const ShadowProblem<Point>& problem, const ShadowConfig& config,
                               const ShadowOptions& options = {}) {
  const std::size_t n = problem.maps.size();
  if (n == 0 || problem.points.size() != n) {
    throw ShapeError("shadow_run: need one point per map");
  }
  const double eps = config.epsilon;
  const double kappa = config.kappa;
  const double delta = config.delta;
  const auto& dist = problem.distance;

  ShadowReport<Point> report;
  report.config = config;
  Rng rng(options.seed, 0x5ad0);

  const std::string bad = config.violation();
  report.hypotheses.push_back(HypothesisItem{"config", -1, 0.0, 0.0, bad.empty(), bad.empty() ? "exact" : bad, {}});

  const Point closing = problem.maps[n - 1].apply(problem.points[n - 1]);
  report.closed = dist(closing, problem.points[0]) <= options.closed_tolerance;

  for (std::size_t j = 0; j < n; ++j) {
    const ShadowMap<Point>& m = problem.maps[j];
    const Point& x = problem.points[j];
    const int idx = static_cast<int>(j);

    const double bd = m.boundary_distance(x);
    report.hypotheses.push_back(HypothesisItem{"a", idx, bd, 1.0, std::abs(bd - 1.0) <= 1e-12, "exact", {}});

    const Point image = m.apply(x);
    double sampled_lip = 0.0;
    double sampled_radius = 0.0;
    for (int s = 0; s < options.region_samples; ++s) {
      const Point p = m.sample_region(rng, eps);
      const Point q = m.sample_region(rng, eps);
      const double dpq = dist(p, q);
      const Point gp = m.apply(p);
      if (dpq > 1e-9) sampled_lip = std::max(sampled_lip, dist(gp, m.apply(q)) / dpq);
      sampled_radius = std::max(sampled_radius, dist(gp, image));
    }
    HypothesisItem lip{"b", idx, sampled_lip, kappa, false, "sampled", sampled_lip};
    if (m.lipschitz_certificate) {
      lip.value = *m.lipschitz_certificate;
      lip.certificate = "analytic";
    }
    lip.holds = lip.value <= kappa * (1 + 1e-12) && sampled_lip <= lip.value * (1 + 1e-9) + options.floor;
    report.hypotheses.push_back(lip);

    std::function<double(const Point&)> next_boundary;
    if (j + 1 < n) {
      next_boundary = problem.maps[j + 1].boundary_distance;
    } else if (problem.terminal_boundary_distance) {
      next_boundary = problem.terminal_boundary_distance;
    } else if (report.closed) {
      next_boundary = problem.maps[0].boundary_distance;
    }
    if (next_boundary) {
      const double bn = next_boundary(image);
      report.hypotheses.push_back(HypothesisItem{"c", idx, bn, 2 * eps, bn >= 2 * eps - 1e-12, "exact", {}});
    }

    HypothesisItem rad{"d", idx, sampled_radius, delta, false, "sampled", sampled_radius};
    if (m.image_radius_certificate) {
      rad.value = *m.image_radius_certificate;
      rad.certificate = "analytic";
    }
    rad.holds = rad.value <= delta + 1e-12 && sampled_radius <= rad.value * (1 + 1e-9) + options.floor;
    report.hypotheses.push_back(rad);
  }
  report.hypotheses_hold = true;
  for (const HypothesisItem& h : report.hypotheses) report.hypotheses_hold = report.hypotheses_hold && h.holds;

  // Conclusion (1): Lipschitz constant of the composition on B(x0, eps).
  report.log_lipschitz_bound = static_cast<double>(n) * std::log(kappa);
  report.lipschitz_bound = std::exp(report.log_lipschitz_bound);
  const Point& x0 = problem.points[0];
  report.lipschitz_holds = true;
  for (int s = 0; s < options.ball_pairs; ++s) {
    const Point p = problem.sample_ball(rng, x0, eps);
    // Alternate far pairs and near pairs to probe the local constant.
    const Point q = (s % 2 == 0) ? problem.sample_ball(rng, x0, eps) : problem.sample_ball(rng, p, 1e-3 * eps);
    const double dpq = dist(p, q);
    if (!(dpq > 1e-9)) continue;
    const double image = dist(shadow_compose(problem, p), shadow_compose(problem, q));
    report.lipschitz_observed = std::max(report.lipschitz_observed, image / dpq);
    report.lipschitz_excess = std::max(report.lipschitz_excess, image - report.lipschitz_bound * dpq);
    report.lipschitz_holds =
        report.lipschitz_holds && image <= report.lipschitz_bound * dpq * (1 + 1e-9) + options.floor;
  }

  // Conclusion (2).
  report.end_distance = dist(closing, shadow_compose(problem, x0));
  report.end_bound = make_inequality("end_distance", report.end_distance, delta / (1 - kappa));

  // The triangular array z^i_j = g_{j-1} ... g_i (x_i).
  if (static_cast<int>(n) <= options.table_limit) {
    // z[i][j - i] holds z^i_j.
    std::vector<std::vector<Point>> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i].reserve(n + 1 - i);
      z[i].push_back(problem.points[i]);
      for (std::size_t j = i; j < n; ++j) z[i].push_back(problem.maps[j].apply(z[i].back()));
    }
    for (std::size_t j = 2; j <= n; ++j) {
      for (std::size_t i = 1; i < j; ++i) {
        const double d = dist(z[i - 1][j - i + 1], z[i][j - i]);
        const double bound = std::pow(kappa, static_cast<double>(j - i - 1)) * delta;
        report.table.push_back(TableEntry{static_cast<int>(i), static_cast<int>(j), d, bound});
        report.table_holds = report.table_holds && d <= bound + options.floor;
      }
    }
  }

  // Conclusion (3).
  if (report.closed) {
    const std::function<Point(const Point&)> composed = [&](const Point& x) { return shadow_compose(problem, x); };
    auto [fixed, iterations] =
        iterate_to_fixed_point<Point>(composed, dist, x0, options.fixed_point_tolerance, options.max_iterations);
    report.fixed_point = fixed;
    report.iterations = iterations;
    const double bound = delta / ((1 - kappa) * (1 - report.lipschitz_bound));
    report.fixed_point_bound = make_inequality("fixed_point_distance", dist(x0, fixed), bound, 1e-10);
  }
  return report;
}

// Projective instantiation with the normalized arc distance d = (2/pi) rho.
double normalized_arc_distance(const ProjPoint& p, const ProjPoint& q);

// A point at normalized arc distance <= radius from center.
ProjPoint sample_arc_ball(Rng& rng, const ProjPoint& center, double radius);

// phi_g on X0 = { v : alpha(v, center) > 0 }.  With certify set, center must
// be the most expanding direction of g and analytic certificates for (b) and
// (d) are attached for the region X0(epsilon).
ShadowMap<ProjPoint> projective_shadow_map(const Matrix& g, const ProjPoint& center, std::string label,
                                           std::optional<double> epsilon = std::nullopt);

ShadowProblem<ProjPoint> projective_shadow_problem(std::vector<ShadowMap<ProjPoint>> maps,
                                                   std::vector<ProjPoint> points);

// Shadowing parameters derived from an AP regime (kappa, epsilon).
ShadowConfig ap_shadow_config(double kappa, double epsilon);

enum class ApChain { Forward, Backward };

// Chain (A): phi_{g_0}, ..., phi_{g_{n-1}}, phi_{g_{n-1}^T}, ..., phi_{g_0^T}
// through x_0, ..., x_{n-1}, x*_n, ..., x*_1 with x_j = v(g_j), x*_j = v(g_{j-1}^T).
// Chain (B) runs the adjoint half first.
ShadowProblem<ProjPoint> ap_shadow_problem(const std::vector<Matrix>& chain, double epsilon_sh,
                                           ApChain kind = ApChain::Forward);

}  // namespace aval
