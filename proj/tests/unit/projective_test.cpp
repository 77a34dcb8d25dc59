#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "avalanche/errors.hpp"
#include "avalanche/projective.hpp"
#include "avalanche/shadowing.hpp"
#include "avalanche/singular.hpp"
#include "test_support.hpp"

namespace {

using namespace aval;
using testing_support::diag;
using testing_support::rotation2;
using testing_support::Sampler;

constexpr double kPi = std::numbers::pi;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Matrix gapped(Sampler& rng, int n, double sigma) {
  Vector s(n);
  s(0) = 1.0;
  if (n > 1) s(1) = sigma;
  for (int i = 2; i < n; ++i) s(i) = s(i - 1) * rng.uniform(0.2, 0.9);
  return rng.with_singulars(s);
}

// Geodesic through p with initial velocity v (v orthogonal to p, unit).
Vector geodesic(const Vector& p, const Vector& v, double t) { return std::cos(t) * p + std::sin(t) * v; }

TEST(ProjectiveAction, Examples) {
  const ProjPoint p(vec({0.3, -0.4, 1.2}));
  EXPECT_LE((projective_action(Matrix::Identity(3, 3), p).rep() - p.rep()).norm(), 1e-15);
  EXPECT_LE((projective_action(diag({2, 1}), ProjPoint(vec({1, 0}))).rep() - vec({1, 0})).norm(), 1e-15);
  const ProjPoint image = projective_action(diag({2, 1}), ProjPoint(vec({1, 1})));
  EXPECT_LE((image.rep() - vec({2, 1}) / std::sqrt(5.0)).norm(), 1e-15);
  EXPECT_THROW(projective_action(diag({1, 0}), ProjPoint(vec({0, 1}))), KernelError);
  EXPECT_THROW(projective_action(Matrix::Identity(2, 2), ProjPoint(vec({1, 0, 0}))), ShapeError);
}

TEST(ProjectiveAction, NormalizationLipschitzAndMapDifference) {
  Sampler rng(51);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = rng.integer(2, 5);
    const Vector p = rng.gaussian(n, 1) * rng.uniform(0.1, 3);
    const Vector q = rng.gaussian(n, 1) * rng.uniform(0.1, 3);
    EXPECT_LE((p / p.norm() - q / q.norm()).norm(),
              std::max(1 / p.norm(), 1 / q.norm()) * (p - q).norm() * (1 + 1e-12));

    const Matrix g1 = rng.gaussian(n);
    const Matrix g2 = g1 + rng.uniform(0, 0.3) * rng.gaussian(n);
    const ProjPoint x(rng.unit(n));
    const double lhs = proj_metrics(projective_action(g1, x), projective_action(g2, x)).d;
    const double rhs = std::max(1 / (g1 * x.rep()).norm(), 1 / (g2 * x.rep()).norm()) * op_norm(g1 - g2);
    EXPECT_LE(lhs, rhs * (1 + 1e-10));
  }
}

TEST(ProjectiveAction, DeltaRatioWedgeFormula) {
  Sampler rng(52);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.integer(2, 5);
    const Matrix g = rng.gaussian(n);
    const ProjPoint p(rng.unit(n)), q(rng.unit(n));
    const double direct = proj_metrics(projective_action(g, p), projective_action(g, q)).delta /
                          proj_metrics(p, q).delta;
    EXPECT_NEAR(delta_ratio(g, p, q), direct, 1e-9 * std::max(1.0, direct));
  }
  EXPECT_THROW(delta_ratio(Matrix::Identity(2, 2), ProjPoint(vec({1, 0})), ProjPoint(vec({-1, 0}))), DomainError);
}

TEST(ProjectiveAction, ProjectionDifferenceLemma) {
  Sampler rng(53);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.integer(2, 6);
    const Vector u = rng.unit(n), v = rng.unit(n);
    const Matrix pu = u * u.transpose(), pv = v * v.transpose();
    const Matrix diff = pv - pu;
    const Matrix id = Matrix::Identity(n, n);
    EXPECT_NEAR(op_norm((id - pv) - (id - pu)), op_norm(diff), 1e-12);
    EXPECT_LE(op_norm(diff), std::min((v - u).norm(), (v + u).norm()) + 1e-12);
    // Restricted to span{u, v} the difference is a similarity with factor |sin angle(u, v)|.
    const Matrix plane = orthonormalize([&] {
      Matrix m(n, 2);
      m << u, v;
      return m;
    }());
    const Matrix restricted = plane.transpose() * diff * plane;
    const double sine = std::sqrt(std::max(0.0, 1 - std::pow(u.dot(v), 2)));
    const Vector sv = testing_support::eigen_singulars(restricted);
    EXPECT_NEAR(sv(0), sine, 1e-10);
    EXPECT_NEAR(sv(1), sine, 1e-10);
    EXPECT_LT(restricted.determinant(), 1e-12);  // orientation reversing
  }
}

TEST(ActionDerivative, Examples) {
  Sampler rng(54);
  const ProjPoint p(rng.unit(3));
  Vector v = rng.unit(3);
  v -= v.dot(p.rep()) * p.rep();
  EXPECT_LE((action_derivative(Matrix::Identity(3, 3), p, v) - v).norm(), 1e-14);

  const Vector d = action_derivative(diag({2, 1}), ProjPoint(vec({1, 0})), vec({0, 1}));
  EXPECT_LE((d - vec({0, 0.5})).norm(), 1e-15);
  EXPECT_THROW(action_derivative(diag({2, 1}), ProjPoint(vec({1, 0})), vec({1, 0})), DomainError);
}

TEST(ActionDerivative, MatchesCentralDifferences) {
  Sampler rng(55);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.integer(2, 5);
    const Matrix g = rng.gaussian(n);
    const Vector x = rng.unit(n);
    Vector v = rng.unit(n);
    v -= v.dot(x) * x;
    v.normalize();
    const double h = 1e-5;
    // Differentiate the lift w -> gw/|gw| on the sphere so that signs are consistent.
    auto lift = [&](const Vector& w) -> Vector { return g * w / (g * w).norm(); };
    const Vector fd = (lift(geodesic(x, v, h)) - lift(geodesic(x, v, -h))) / (2 * h);
    const ProjPoint p(x);
    // The canonical representative may be -x; the derivative flips with it.
    const double s = p.rep().dot(x) > 0 ? 1.0 : -1.0;
    const Vector analytic = s * action_derivative(g, p, s * v);
    const double scale = std::max(analytic.norm(), 1e-3);
    EXPECT_LE((analytic - fd).norm() / scale, 1e-5);
    EXPECT_LE(std::abs(analytic.dot(lift(x))), 1e-12 * std::max(1.0, analytic.norm()));
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(ActionDerivative, NormAtTopDirectionIsSigma) {
  Sampler rng(56);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(2, 6);
    const Matrix g = gapped(rng, n, rng.uniform(0.01, 0.9));
    const double sigma = gap_profile(g).inverse_gap(1);
    EXPECT_NEAR(derivative_norm(g, most_expanding_direction(g)), sigma, 1e-10);
  }
}

TEST(Contraction, Examples) {
  const ContractionBounds b = contraction_report(diag({10, 1}), 0.6, 0.1);
  EXPECT_NEAR(b.image_radius, 0.075, 1e-15);
  EXPECT_NEAR(b.lipschitz, 0.1 * (0.6 + 0.8) / 0.64, 1e-15);
  EXPECT_NEAR(contraction_report(diag({10, 1}), 1e-9, 0.1).lipschitz, 0.1, 1e-9);
  // Without kappa the actual gap inverse is used.
  EXPECT_NEAR(contraction_report(diag({10, 1}), 0.6).kappa, 0.1, 1e-15);
  EXPECT_THROW(contraction_report(diag({10, 1}), 0.6, 0.05), GapError);
  EXPECT_THROW(contraction_report(diag({10, 1}), 1.0, 0.1), DomainError);
  EXPECT_THROW(contraction_report(Matrix::Identity(2, 2), 0.5), GapError);
}

TEST(Contraction, MonteCarloInsideBounds) {
  Rng rng(57);
  const ContractionSample s = sample_contraction(diag({10, 1}), 0.6, 0.1, rng);
  EXPECT_EQ(s.samples, 1000);
  EXPECT_TRUE(s.holds);
  EXPECT_LE(s.max_image_radius, s.bounds.image_radius);
  EXPECT_LE(s.max_lipschitz, s.bounds.lipschitz);
  // The image radius bound is attained at the boundary for diagonal maps.
  EXPECT_GT(s.max_image_radius, 0.9 * s.bounds.image_radius);

  Sampler sampler(58);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = sampler.integer(2, 5);
    const Matrix g = gapped(sampler, n, sampler.uniform(0.01, 0.5));
    const ContractionSample t = sample_contraction(g, sampler.uniform(0.05, 0.95), std::nullopt, rng, 300);
    EXPECT_TRUE(t.holds) << t.max_image_radius << " vs " << t.bounds.image_radius << ", " << t.max_lipschitz
                         << " vs " << t.bounds.lipschitz;
  }
}

TEST(SineBall, SamplesStayInside) {
  Rng rng(59);
  const ProjPoint c(vec({1, 2, 3, 4}));
  double widest = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double d = proj_metrics(sample_sine_ball(c, 0.3, rng), c).delta;
    EXPECT_LE(d, 0.3 + 1e-12);
    widest = std::max(widest, d);
  }
  EXPECT_GT(widest, 0.3 - 1e-9);
}

TEST(DeltaRatioBounds, Examples) {
  Sampler rng(60);
  const Matrix g = rng.gaussian(3) + 3 * Matrix::Identity(3, 3);
  const ProjPoint p(rng.unit(3)), q(rng.unit(3));
  const DeltaRatioReport same = delta_ratio_bounds(g, g, p, q, 0.5);
  EXPECT_EQ(same.ratio_difference.lhs, 0.0);
  EXPECT_TRUE(same.all_hold());

  const Matrix o = rng.orthogonal(3);
  const DeltaRatioReport iso = delta_ratio_bounds(o, o, p, q, 1.0);
  EXPECT_NEAR(iso.ratio1, 1.0, 1e-12);
  EXPECT_NEAR(iso.log_distortion.rhs, 0.0, 1e-12);
  EXPECT_TRUE(iso.all_hold());

  EXPECT_THROW(delta_ratio_bounds(diag({1, 0}), diag({1, 1}), ProjPoint(vec({1, 0})), ProjPoint(vec({1, 1})), 1.0),
               DomainError);
  EXPECT_THROW(delta_ratio_bounds(g, g, p, p, 1.0), DomainError);
  EXPECT_THROW(delta_ratio_bounds(g, g, p, q, 0.0), DomainError);
}

TEST(DeltaRatioBounds, ConstantsAndRandomPairs) {
  Sampler rng(61);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.integer(2, 5);
    const Matrix g1 = rng.gaussian(n);
    Matrix g2 = g1 + rng.gaussian(n);
    g2 = g1 + (g2 - g1) * (rng.uniform(0, 0.1) * op_norm(g1) / op_norm(g2 - g1));
    ASSERT_LT(relative_distance(g1, g2), 0.1 + 1e-12);
    const ProjPoint p(rng.unit(n)), q(rng.unit(n));
    const double a = rng.uniform(0.05, 1.0);
    const DeltaRatioReport r = delta_ratio_bounds(g1, g2, p, q, a);

    const double n1 = op_norm(g1), n2 = op_norm(g2);
    const double i1 = op_norm(g1.inverse()), i2 = op_norm(g2.inverse());
    const double c = (i1 * i1 + n2 * n2 * i1 * i1 * i2 * i2) * (n1 + n2);
    EXPECT_NEAR(r.c / c, 1.0, 1e-9);
    EXPECT_NEAR(r.c1 / (a * std::pow(std::max(n1 * i1, n2 * i2), 2 * (1 - a)) * c), 1.0, 1e-9);
    EXPECT_TRUE(r.all_hold());
  }
}

TEST(RestrictedGap, BlockDiagonalExample) {
  const Matrix g = diag({100, 50, 1, 0.5});
  const RestrictedGapReport r = restricted_gap(g, Subspace::coordinate(4, {1, 2}), 0.6, 2, 1);
  EXPECT_TRUE(r.hypotheses_hold());
  EXPECT_NEAR(r.sigma_restricted, 0.5, 1e-14);
  EXPECT_NEAR(r.delta_e, 0.0, 1e-15);
  ASSERT_TRUE(r.distance_bound);
  EXPECT_NEAR(r.distance_bound->lhs, 0.0, 1e-12);
  EXPECT_TRUE(r.conclusions_hold());

  // sigma_2(g) = 0.02 but sigma_3(g) = 0.5 is not below kappa = 0.1.
  const RestrictedGapReport weak = restricted_gap(g, Subspace::coordinate(4, {1, 2}), 0.1, 2, 1);
  EXPECT_FALSE(weak.gap_hypothesis);
  EXPECT_THROW(restricted_gap(g, Subspace::coordinate(4, {1}), 0.6, 2, 1), DomainError);
}

TEST(RestrictedGap, ExactSubspaceMatchesGlobalGap) {
  Sampler rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(4, 6);
    const int k = rng.integer(1, n - 2);
    const int r = rng.integer(1, n - k - 1);
    const Matrix g = gapped(rng, n, 0.3);
    const RestrictedGapReport rep = restricted_gap(g, most_expanding_subspace(g, k), 0.99, k, r);
    EXPECT_NEAR(rep.sigma_restricted, gap_profile(g).inverse_gap(k + r), 1e-9);
    ASSERT_TRUE(rep.distance_bound);
    EXPECT_LE(rep.distance_bound->lhs, 1e-9);
  }
}

TEST(RestrictedGap, PerturbedSubspace) {
  Sampler rng(63);
  int evaluated = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 5;
    Vector s(n);
    s << 1, 0.05, 0.0025, 1e-4, 5e-6;
    const Matrix g = rng.with_singulars(s);
    const Subspace top = most_expanding_subspace(g, 2);
    const Subspace e = Subspace::span(top.frame() + 2e-5 * rng.gaussian(n, 2));
    const RestrictedGapReport rep = restricted_gap(g, e, 0.1, 2, 1);
    if (!rep.hypotheses_hold()) continue;
    ++evaluated;
    EXPECT_TRUE(rep.conclusions_hold()) << rep.gap_bound.lhs << " " << rep.distance_bound->lhs << " "
                                        << rep.distance_bound->rhs;
  }
  EXPECT_GT(evaluated, 150);
}

TEST(WedgeDifference, RandomPairs) {
  Sampler rng(64);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.integer(2, 5);
    const Matrix g1 = rng.gaussian(n) * rng.uniform(0.2, 3);
    const Matrix g2 = g1 + rng.uniform(0, 1) * rng.gaussian(n);
    for (int i = 1; i <= n; ++i) EXPECT_TRUE(wedge_difference_bound(g1, g2, i).holds);
  }
  const Inequality same = wedge_difference_bound(diag({2, 3}), diag({2, 3}), 2);
  EXPECT_EQ(same.lhs, 0.0);
}

TEST(EigendirectionContinuity, Examples) {
  const Matrix g = diag({10, 1});
  const EigendirectionReport same = eigendirection_continuity(g, g, 0.5);
  EXPECT_TRUE(same.preconditions());
  EXPECT_EQ(same.distance, 0.0);
  EXPECT_TRUE(same.bound.holds);

  const EigendirectionReport scaled = eigendirection_continuity(g, 3.0 * g, 0.5, 1, 1.0);
  EXPECT_NEAR(scaled.distance, 0.0, 1e-15);

  const EigendirectionReport rotated = eigendirection_continuity(g, rotation2(0.001) * g, 0.5);
  EXPECT_TRUE(rotated.preconditions());
  EXPECT_TRUE(rotated.bound.holds);
  EXPECT_NEAR(rotated.bound.rhs, 16 / 0.75 * rotated.d_rel, 1e-15);

  EXPECT_FALSE(eigendirection_continuity(g, diag({1, 10}), 0.5).preconditions());
  EXPECT_FALSE(eigendirection_continuity(diag({1.5, 1}), diag({1.5, 1}), 0.5).in_class);
}

TEST(EigendirectionContinuity, ThousandPairsNoViolation) {
  Sampler rng(65);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.integer(2, 5);
    const Matrix g1 = gapped(rng, n, rng.uniform(0.01, 0.45));
    const Matrix dir = rng.gaussian(n);
    const Matrix g2 = g1 + dir * (rng.uniform(0, 0.01) * op_norm(g1) / op_norm(dir));
    const EigendirectionReport r = eigendirection_continuity(g1, g2, 0.5);
    if (!r.preconditions()) continue;
    if (!r.bound.holds) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(EigendirectionContinuity, HigherLevels) {
  Sampler rng(66);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4;
    Vector s(n);
    s << 3, 2, 0.2, 0.1;
    const Matrix g1 = rng.with_singulars(s);
    const Matrix g2 = g1 + 1e-4 * rng.gaussian(n);
    const EigendirectionReport r = eigendirection_continuity(g1, g2, 0.5, 2);
    ASSERT_TRUE(r.c_level);
    const double c = 2 * std::max({1.0, op_norm(g1), op_norm(g2)}) /
                     std::max(op_norm(exterior_power(g1, 2)), op_norm(exterior_power(g2, 2)));
    EXPECT_NEAR(*r.c_level, c, 1e-12);
    EXPECT_NEAR(r.distance, grass_metrics(most_expanding_subspace(g1, 2), most_expanding_subspace(g2, 2)).d, 1e-12);
    EXPECT_TRUE(r.preconditions());
    EXPECT_TRUE(r.bound.holds);
  }
}

TEST(LemmaTi, FixedPointsOfNearbyContractions) {
  Sampler rng(67);
  Rng sampler(68);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(2, 4);
    // Positive semidefinite, unit norm, gap inverse 0.1.
    Vector s(n);
    s(0) = 1;
    for (int i = 1; i < n; ++i) s(i) = 0.1 / i;
    const Matrix o = rng.orthogonal(n);
    const Matrix h1 = o * s.asDiagonal() * o.transpose();
    Matrix h2 = h1 + 1e-3 * rng.gaussian(n);
    h2 = (0.5 * (h2 + h2.transpose())).eval();
    const ProjPoint x1 = most_expanding_direction(h1);
    const ProjPoint x2 = most_expanding_direction(h2);
    const double r = 0.3;
    const ContractionBounds b = contraction_report(h1, r);
    // The contraction constant is for rho, so the sup is taken in rho as well.
    double sup = proj_metrics(projective_action(h1, x2), projective_action(h2, x2)).rho;
    for (int i = 0; i < 300; ++i) {
      const ProjPoint y = sample_sine_ball(x1, r, sampler);
      sup = std::max(sup, proj_metrics(projective_action(h1, y), projective_action(h2, y)).rho);
    }
    ASSERT_LE(proj_metrics(x1, x2).delta, r);
    EXPECT_LE(proj_metrics(x1, x2).rho, fixed_point_perturbation_bound(b.lipschitz, sup) * (1 + 1e-9));
  }
  EXPECT_THROW(fixed_point_perturbation_bound(1.0, 0.1), DomainError);
}

TEST(ShadowConfigTest, Invariants) {
  EXPECT_TRUE((ShadowConfig{0.25, 0.1, 0.03}).valid());
  EXPECT_FALSE((ShadowConfig{0.25, 0.1, 0.2}).valid());   // delta > kappa
  EXPECT_FALSE((ShadowConfig{0.6, 0.1, 0.03}).valid());   // epsilon >= 1/2
  EXPECT_FALSE((ShadowConfig{0.02, 0.1, 0.03}).valid());  // delta/(1-kappa) >= epsilon
  const ShadowConfig ap = ap_shadow_config(1e-4, 0.5);
  const double r = std::sqrt(1 - 0.0625);
  EXPECT_NEAR(ap.epsilon, std::asin(0.5) / kPi, 1e-15);
  EXPECT_NEAR(ap.kappa, 1e-4 * (r + 0.25) / 0.0625, 1e-15);
  EXPECT_NEAR(ap.delta, 1e-4 * r / 0.25, 1e-15);
  EXPECT_TRUE(ap.valid());
}

TEST(ArcBall, DistanceAndSampling) {
  EXPECT_NEAR(normalized_arc_distance(ProjPoint(vec({1, 0})), ProjPoint(vec({0, 1}))), 1.0, 1e-15);
  EXPECT_NEAR(normalized_arc_distance(ProjPoint(vec({1, 0})), ProjPoint(vec({1, 1}))), 0.5, 1e-15);
  Rng rng(69);
  const ProjPoint c(vec({1, -1, 2}));
  for (int i = 0; i < 1000; ++i) EXPECT_LE(normalized_arc_distance(sample_arc_ball(rng, c, 0.2), c), 0.2 + 1e-12);
  for (int i = 0; i < 100; ++i) EXPECT_LE(normalized_arc_distance(sample_arc_ball(rng, c, 3.0), c), 1.0);
}

TEST(FixedPointIteration, NonContractionThrows) {
  const Matrix rot = rotation2(kPi / 4);
  const std::function<ProjPoint(const ProjPoint&)> t = [&](const ProjPoint& p) { return projective_action(rot, p); };
  const std::function<double(const ProjPoint&, const ProjPoint&)> d = normalized_arc_distance;
  EXPECT_THROW(iterate_to_fixed_point<ProjPoint>(t, d, ProjPoint(vec({1, 0})), 1e-12, 1000), ConvergenceError);
}

TEST(ShadowRun, SingleFixedMap) {
  const Matrix g = diag({10, 0.1});
  const ProjPoint e1(vec({1, 0}));
  const ShadowConfig cfg{0.25, 0.1, 0.03};
  auto problem = projective_shadow_problem({projective_shadow_map(g, e1, "g", cfg.epsilon)}, {e1});
  const auto report = shadow_run(problem, cfg);
  EXPECT_TRUE(report.hypotheses_hold) << report.first_failure();
  EXPECT_TRUE(report.closed);
  ASSERT_TRUE(report.fixed_point);
  EXPECT_NEAR(normalized_arc_distance(*report.fixed_point, e1), 0.0, 1e-15);
  EXPECT_TRUE(report.conclusions_hold());
}

TEST(ShadowRun, ExactOrbitShadowsItself) {
  Sampler rng(70);
  const int n = 3;
  const Matrix g = gapped(rng, n, 0.01);
  const ProjPoint v = most_expanding_direction(g);
  const ProjPoint vstar = most_expanding_direction(g.transpose());
  // Alternate g and g^T so that the orbit closes: v -> v* -> v.
  std::vector<ShadowMap<ProjPoint>> maps;
  std::vector<ProjPoint> points;
  const ShadowConfig cfg{0.25, 0.1, 0.05};
  for (int i = 0; i < 4; ++i) {
    const bool forward = i % 2 == 0;
    maps.push_back(projective_shadow_map(forward ? g : Matrix(g.transpose()), forward ? v : vstar,
                                         "m" + std::to_string(i), cfg.epsilon));
    points.push_back(forward ? v : vstar);
  }
  const auto report = shadow_run(projective_shadow_problem(maps, points), cfg);
  EXPECT_TRUE(report.hypotheses_hold) << report.first_failure();
  EXPECT_LE(report.end_distance, 1e-12);
  ASSERT_TRUE(report.fixed_point);
  EXPECT_LE(normalized_arc_distance(*report.fixed_point, v), 1e-12);
  for (const TableEntry& e : report.table) EXPECT_LE(e.distance, 1e-12);
  EXPECT_TRUE(report.conclusions_hold());
}

std::vector<Matrix> aligned_chain(Sampler& rng, int n, int len, double kappa, double angle) {
  // g_j = A_{j+1} D B_j^T with B_j = A_j Q_j, so alpha(g_{j-1}, g_j) = |cos angle|.
  Vector s(n);
  s(0) = 1;
  for (int i = 1; i < n; ++i) s(i) = kappa * std::pow(0.5, i - 1);
  std::vector<Matrix> frames;
  for (int j = 0; j <= len; ++j) frames.push_back(rng.orthogonal(n));
  std::vector<Matrix> chain;
  for (int j = 0; j < len; ++j) {
    Matrix q = Matrix::Identity(n, n);
    q.topLeftCorner(2, 2) = rotation2(angle);
    const Matrix b = frames[static_cast<std::size_t>(j)] * q;
    chain.push_back(frames[static_cast<std::size_t>(j) + 1] * s.asDiagonal() * b.transpose() *
                    std::exp(rng.uniform(-2, 2)));
  }
  return chain;
}

TEST(ShadowRun, AvalancheChainForward) {
  Sampler rng(71);
  const double kappa = 1e-4, eps = 0.5;
  const std::vector<Matrix> chain = aligned_chain(rng, 3, 6, kappa, std::acos(0.6));
  for (std::size_t i = 1; i < chain.size(); ++i) ASSERT_NEAR(alpha_maps(chain[i - 1], chain[i]), 0.6, 1e-9);
  const ShadowConfig cfg = ap_shadow_config(kappa, eps);
  const auto problem = ap_shadow_problem(chain, cfg.epsilon);
  ASSERT_EQ(problem.maps.size(), 12u);
  const auto report = shadow_run(problem, cfg);
  EXPECT_TRUE(report.hypotheses_hold) << report.first_failure();
  EXPECT_TRUE(report.closed);
  EXPECT_TRUE(report.conclusions_hold());
  for (const HypothesisItem& h : report.hypotheses) {
    if (h.item == "b" || h.item == "d") EXPECT_EQ(h.certificate, "analytic");
  }
  // The fixed point of chain (A) is the top direction of the product.
  Matrix prod = Matrix::Identity(3, 3);
  for (const Matrix& g : chain) prod = g * prod;
  ASSERT_TRUE(report.fixed_point);
  EXPECT_LE(normalized_arc_distance(*report.fixed_point, most_expanding_direction(prod)), 1e-9);
  EXPECT_LE(normalized_arc_distance(*report.fixed_point, most_expanding_direction(chain[0])),
            report.fixed_point_bound->rhs);
}

TEST(ShadowRun, AvalancheChainBackward) {
  Sampler rng(72);
  const double kappa = 1e-4, eps = 0.5;
  const std::vector<Matrix> chain = aligned_chain(rng, 4, 5, kappa, std::acos(0.55));
  const ShadowConfig cfg = ap_shadow_config(kappa, eps);
  const auto report = shadow_run(ap_shadow_problem(chain, cfg.epsilon, ApChain::Backward), cfg);
  EXPECT_TRUE(report.hypotheses_hold) << report.first_failure();
  EXPECT_TRUE(report.conclusions_hold());
  Matrix prod = Matrix::Identity(4, 4);
  for (const Matrix& g : chain) prod = g * prod;
  ASSERT_TRUE(report.fixed_point);
  EXPECT_LE(normalized_arc_distance(*report.fixed_point, most_expanding_direction(prod.transpose())), 1e-9);
}

TEST(ShadowRun, ReportsFailedHypothesisWithIndex) {
  Sampler rng(73);
  const double kappa = 1e-4;
  // Orthogonal consecutive directions break hypothesis (c) at the first map.
  std::vector<Matrix> chain = aligned_chain(rng, 3, 3, kappa, kPi / 2);
  const ShadowConfig cfg = ap_shadow_config(kappa, 0.5);
  const auto report = shadow_run(ap_shadow_problem(chain, cfg.epsilon), cfg);
  EXPECT_FALSE(report.hypotheses_hold);
  EXPECT_EQ(report.first_failure(), "hypothesis (c) at index 0");
}

}  // namespace
