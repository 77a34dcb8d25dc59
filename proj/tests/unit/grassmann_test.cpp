#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "avalanche/errors.hpp"
#include "avalanche/flag.hpp"
#include "avalanche/grassmann.hpp"
#include "avalanche/singular.hpp"
#include "test_support.hpp"

namespace {

using namespace aval;
using testing_support::diag;
using testing_support::Sampler;

constexpr double kPi = std::numbers::pi;

Subspace random_subspace(Sampler& rng, int n, int k) { return Subspace::span(rng.gaussian(n, k)); }

Subspace perturb(Sampler& rng, const Subspace& e, double size) {
  return Subspace::span(e.frame() + size * rng.gaussian(e.ambient(), e.dim()));
}

Flag random_flag(Sampler& rng, int n, const Signature& tau) {
  return Flag::from_columns(rng.gaussian(n, tau.dims.back()), tau);
}

Flag perturb(Sampler& rng, const Flag& f, double size) {
  // Nested basis: each block spans the part of the next component orthogonal to the previous one.
  Matrix nested(f.ambient(), f.spaces().back().dim());
  int filled = 0;
  for (const Subspace& s : f.spaces()) {
    const Matrix prev = nested.leftCols(filled);
    const Matrix extra = s.frame() - prev * (prev.transpose() * s.frame());
    nested.middleCols(filled, s.dim() - filled) = Eigen::JacobiSVD<Matrix>(extra, Eigen::ComputeThinU).matrixU().leftCols(s.dim() - filled);
    filled = s.dim();
  }
  return Flag::from_columns(nested + size * rng.gaussian(f.ambient(), nested.cols()), f.signature());
}

TEST(ProjMetrics, Examples) {
  const Metrics far = proj_metrics(Vector::Unit(2, 0), Vector::Unit(2, 1));
  EXPECT_NEAR(far.rho, kPi / 2, 1e-15);
  EXPECT_NEAR(far.d, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(far.delta, 1.0, 1e-15);

  Sampler rng(1);
  const Vector p = rng.unit(4);
  const Metrics same = proj_metrics(p, -p);
  EXPECT_NEAR(same.rho, 0.0, 1e-15);
  EXPECT_NEAR(same.d, 0.0, 1e-15);
  EXPECT_NEAR(same.delta, 0.0, 1e-15);

  Vector diag45(2);
  diag45 << 1, 1;
  const Metrics m = proj_metrics(Vector::Unit(2, 0), diag45 / std::sqrt(2.0));
  EXPECT_NEAR(m.rho, kPi / 4, 1e-15);
  EXPECT_NEAR(m.d, 2 * std::sin(kPi / 8), 1e-15);
  EXPECT_NEAR(m.delta, std::sqrt(0.5), 1e-15);
  EXPECT_THROW(proj_metrics(Vector::Zero(2), diag45), DomainError);
}

TEST(ProjMetrics, ClosedFormsAndChain) {
  Sampler rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = rng.integer(2, 6);
    const Vector p = rng.unit(n);
    // Mix close, generic and nearly orthogonal pairs.
    Vector q = rng.unit(n);
    if (trial % 3 == 0) q = p + std::pow(10.0, rng.uniform(-9, -1)) * rng.unit(n);
    const Metrics m = proj_metrics(p, q);
    EXPECT_NEAR(m.delta, std::sin(m.rho), 1e-14);
    EXPECT_NEAR(m.d, 2 * std::sin(m.rho / 2), 1e-14);
    EXPECT_LE(2 / kPi * m.rho, m.delta + 1e-12);
    EXPECT_LE(m.delta, m.d + 1e-12);
    EXPECT_LE(m.d, m.rho + 1e-12);
  }
}

TEST(ProjMetrics, SineDistanceTriangleInequality) {
  Sampler rng(3);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = rng.integer(2, 5);
    const Vector a = rng.unit(n), b = rng.unit(n), c = rng.unit(n);
    EXPECT_LE(proj_metrics(a, c).delta, proj_metrics(a, b).delta + proj_metrics(b, c).delta + 1e-12);
  }
}

TEST(GrassMetrics, Examples) {
  Sampler rng(4);
  const Subspace e = random_subspace(rng, 5, 2);
  const Metrics same = grass_metrics(e, Subspace::span(e.frame() * rng.orthogonal(2)));
  EXPECT_NEAR(same.delta, 0.0, 1e-12);
  const Metrics lines = grass_metrics(Subspace::coordinate(3, {1}), Subspace::coordinate(3, {2}));
  EXPECT_NEAR(lines.rho, kPi / 2, 1e-15);
  EXPECT_NEAR(lines.d, std::sqrt(2.0), 1e-15);
  const Metrics planes = grass_metrics(Subspace::coordinate(3, {1, 2}), Subspace::coordinate(3, {1, 3}));
  EXPECT_NEAR(planes.delta, 1.0, 1e-15);
  EXPECT_THROW(grass_metrics(Subspace::coordinate(3, {1}), Subspace::coordinate(3, {1, 2})), DomainError);
}

TEST(GrassMetrics, DeltaFromProjectionDeterminant) {
  Sampler rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(2, 7);
    const int k = rng.integer(1, n - 1);
    const Subspace e = random_subspace(rng, n, k);
    const Subspace f = random_subspace(rng, n, k);
    const double det = (e.frame().transpose() * f.frame()).determinant();
    EXPECT_NEAR(grass_metrics(e, f).delta, std::sqrt(std::max(0.0, 1 - det * det)), 1e-9);
  }
}

TEST(DeltaMinH, Examples) {
  Sampler rng(6);
  const Subspace e = random_subspace(rng, 4, 2);
  const MinHausdorff self = delta_min_H(e, e);
  EXPECT_NEAR(self.delta_min, 0.0, 1e-12);
  EXPECT_NEAR(*self.delta_h, 0.0, 1e-12);

  Vector v(2);
  v << 1, 1;
  const MinHausdorff lines = delta_min_H(Subspace::coordinate(2, {1}), Subspace::line(v));
  EXPECT_NEAR(lines.delta_min, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(*lines.delta_h, std::sqrt(0.5), 1e-15);
  EXPECT_THROW(delta_hausdorff(Subspace::coordinate(3, {1}), Subspace::coordinate(3, {1, 2})), DomainError);
  EXPECT_FALSE(delta_min_H(Subspace::coordinate(3, {1}), Subspace::coordinate(3, {1, 2})).delta_h);
}

TEST(DeltaMinH, OrderingAndAlphaLowerBound) {
  Sampler rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.integer(2, 7);
    const int k = rng.integer(1, n - 1);
    const Subspace e = random_subspace(rng, n, k);
    const Subspace f = random_subspace(rng, n, k);
    const MinHausdorff m = delta_min_H(e, f);
    EXPECT_LE(*m.delta_h, grass_metrics(e, f).delta + 1e-12);
    EXPECT_LE(m.delta_min, *m.delta_h + 1e-12);
    EXPECT_GE(delta_min(e, complement(f)) + 1e-12, alpha_subspaces(e, f));
  }
}

TEST(DeltaMin, AgreesWithVariationalSampling) {
  Sampler rng(8);
  const Subspace e = random_subspace(rng, 4, 2);
  const Subspace f = random_subspace(rng, 4, 2);
  double sampled = 1.0;
  for (int i = 0; i < 20000; ++i) {
    const Vector u = e.frame() * rng.unit(2);
    const Vector w = f.frame() * rng.unit(2);
    sampled = std::min(sampled, proj_metrics(u, w).delta);
  }
  EXPECT_LE(delta_min(e, f), sampled + 1e-12);
  EXPECT_NEAR(delta_min(e, f), sampled, 2e-2);
}

TEST(AlphaSubspaces, Examples) {
  Sampler rng(9);
  const Subspace e = random_subspace(rng, 5, 3);
  EXPECT_NEAR(alpha_subspaces(e, e), 1.0, 1e-12);
  EXPECT_NEAR(alpha_subspaces(Subspace::coordinate(3, {1, 2}), Subspace::coordinate(3, {1, 3})), 0.0, 1e-15);
  Vector v(2);
  v << 1, 1;
  EXPECT_NEAR(alpha_subspaces(Subspace::coordinate(2, {1}), Subspace::line(v)), std::sqrt(0.5), 1e-15);
}

TEST(AlphaSubspaces, PluckerInnerProductSymmetryAndComplement) {
  Sampler rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(2, 7);
    const int k = rng.integer(1, n - 1);
    const Subspace e = random_subspace(rng, n, k);
    const Subspace f = random_subspace(rng, n, k);
    const double a = alpha_subspaces(e, f);
    EXPECT_NEAR(a, std::abs(plucker(e).dot(plucker(f))), 1e-12);
    EXPECT_NEAR(a, alpha_subspaces(f, e), 1e-12);
    EXPECT_NEAR(a, alpha_subspaces(complement(e), complement(f)), 1e-10);
  }
}

TEST(AlphaPoints, LipschitzInBothArguments) {
  Sampler rng(11);
  for (int trial = 0; trial < 5000; ++trial) {
    const int n = rng.integer(2, 5);
    const Vector u = rng.unit(n), v = rng.unit(n);
    const Vector u2 = (u + rng.uniform(0, 0.5) * rng.unit(n)).normalized();
    const Vector v2 = (v + rng.uniform(0, 0.5) * rng.unit(n)).normalized();
    EXPECT_LE(std::abs(alpha_points(u, v) - alpha_points(u2, v2)),
              proj_metrics(u, u2).d + proj_metrics(v, v2).d + 1e-12);
  }
}

TEST(Theta, Examples) {
  const Transversality t = theta(Subspace::coordinate(2, {1}), Subspace::coordinate(2, {2}));
  EXPECT_NEAR(t.theta_plus, 1.0, 1e-15);
  EXPECT_NEAR(t.theta_cap, 1.0, 1e-15);
  EXPECT_EQ(theta_plus(Subspace::coordinate(3, {1, 2}), Subspace::coordinate(3, {2, 3})), 0.0);
  Vector v(2);
  v << 1, 1;
  Vector w(2);
  w << 1, 0;
  EXPECT_NEAR(theta_plus(Subspace::line(v), Subspace::line(w)), std::sqrt(0.5), 1e-15);
}

TEST(Theta, DeterminantCharacterizationAndDuality) {
  Sampler rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.integer(2, 7);
    const int r = rng.integer(1, n - 1);
    const int s = rng.integer(1, n - r);
    const Subspace e = random_subspace(rng, n, r);
    const Subspace f = random_subspace(rng, n, s);
    // |det pi_{E,F^perp}| as the product of singular values of the restriction.
    const Matrix fperp = complement_frame(f.frame());
    const Vector sv = testing_support::eigen_singulars(fperp.transpose() * e.frame());
    EXPECT_NEAR(theta_plus(e, f), sv.head(r).prod(), 1e-10);
    EXPECT_NEAR(theta_cap(e, f), theta_plus(complement(e), complement(f)), 0.0);
  }
}

TEST(Theta, MonotonicityAndAlphaIdentity) {
  Sampler rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(3, 7);
    const int r = rng.integer(1, n - 2);
    const Matrix big = rng.gaussian(n, r + 1);
    const Subspace e = Subspace::span(big.leftCols(r));
    const Subspace e_big = Subspace::span(big);
    const Subspace f = random_subspace(rng, n, n - r);
    EXPECT_GE(theta_cap(e_big, f) + 1e-12, theta_cap(e, f));

    const Subspace a = random_subspace(rng, n, r);
    const Subspace b = random_subspace(rng, n, r);
    EXPECT_NEAR(theta_cap(a, complement(b)), alpha_subspaces(a, b), 1e-9);
  }
}

TEST(Theta, CapLowerSemicontinuity) {
  Sampler rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.integer(3, 6);
    const int r = rng.integer(1, n - 1);
    const int s = rng.integer(n - r, n - 1);
    const Subspace e0 = random_subspace(rng, n, r);
    const Subspace f0 = random_subspace(rng, n, s);
    const Subspace e = perturb(rng, e0, rng.uniform(0, 0.3));
    const Subspace f = perturb(rng, f0, rng.uniform(0, 0.3));
    EXPECT_GE(theta_cap(e, f) + 1e-12,
              theta_cap(e0, f0) - grass_metrics(e, e0).d - grass_metrics(f, f0).d);
  }
}

TEST(Theta, WedgeNormSandwich) {
  Sampler rng(15);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.integer(3, 7);
    const int k = rng.integer(1, n - 1);
    const int i = rng.integer(1, n - k);
    const Subspace e = random_subspace(rng, n, k);
    const Subspace f = random_subspace(rng, n, k);
    const Matrix u = e.frame() * rng.gaussian(k);
    const Matrix w = complement_frame(f.frame()) * rng.gaussian(n - k, i);
    Matrix both(n, k + i);
    both << u, w;
    const double whole = wedge_columns(both).norm();
    const double pu = wedge_columns(u).norm();
    const double pw = wedge_columns(w).norm();
    EXPECT_LE(whole, pu * pw * (1 + 1e-10));
    EXPECT_GE(whole * (1 + 1e-10), alpha_subspaces(e, f) * pu * pw);
  }
}

TEST(SumIntersect, Examples) {
  const Subspace s = sum(Subspace::coordinate(3, {1}), Subspace::coordinate(3, {2}));
  EXPECT_TRUE(same_subspace(s, Subspace::coordinate(3, {1, 2})));
  try {
    sum(Subspace::coordinate(3, {1}), Subspace::coordinate(3, {1}));
    FAIL() << "expected a transversality error";
  } catch (const TransversalityError& err) {
    EXPECT_EQ(err.theta(), 0.0);
  }
  const Subspace i = intersect(Subspace::coordinate(3, {1, 2}), Subspace::coordinate(3, {1, 3}));
  EXPECT_TRUE(same_subspace(i, Subspace::coordinate(3, {1})));
  Sampler rng(16);
  const Subspace f = random_subspace(rng, 4, 2);
  EXPECT_TRUE(same_subspace(intersect(Subspace::whole(4), f), f));
  EXPECT_THROW(intersect(Subspace::coordinate(3, {1, 2}), Subspace::coordinate(3, {1, 2})),
               TransversalityError);
}

TEST(SumIntersect, PluckerFormulasAndDuality) {
  Sampler rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(3, 7);
    const int r = rng.integer(1, n - 1);
    const int s = rng.integer(1, n - r);
    const Subspace e = random_subspace(rng, n, r);
    const Subspace f = random_subspace(rng, n, s);
    const Subspace total = sum(e, f);
    EXPECT_EQ(total.dim(), r + s);
    EXPECT_LE(proj_metrics(plucker(total).coords(), wedge(plucker(e), plucker(f)).coords()).delta, 1e-9);

    const int a = rng.integer(1, n - 1);
    const int b = rng.integer(n - a, n);
    const Subspace x = random_subspace(rng, n, a);
    const Subspace y = random_subspace(rng, n, b);
    const Subspace cap = intersect(x, y);
    EXPECT_EQ(cap.dim(), a + b - n);
    if (cap.dim() > 0) {
      EXPECT_LE(proj_metrics(plucker(cap).coords(), vee(plucker(x), plucker(y)).coords()).delta, 1e-9);
    }
    // (E + F)^perp = E^perp ∩ F^perp.
    EXPECT_TRUE(same_subspace(complement(total), intersect(complement(e), complement(f))));
  }
}

TEST(SumIntersect, ModulusOfContinuity) {
  Sampler rng(18);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.integer(3, 6);
    const int r = rng.integer(1, n - 1);
    const int s = rng.integer(1, n - r);
    const Subspace e = random_subspace(rng, n, r), f = random_subspace(rng, n, s);
    const double size = rng.uniform(0, 0.2);
    const Subspace e2 = perturb(rng, e, size), f2 = perturb(rng, f, size);
    const double moved = grass_metrics(e, e2).d + grass_metrics(f, f2).d;
    const double k_sum = std::max(1 / theta_plus(e, f), 1 / theta_plus(e2, f2));
    EXPECT_LE(grass_metrics(sum(e, f), sum(e2, f2)).d, k_sum * moved + 1e-10);

    const Subspace x = random_subspace(rng, n, n - s), y = random_subspace(rng, n, n - r);
    const Subspace x2 = perturb(rng, x, size), y2 = perturb(rng, y, size);
    const double k_cap = std::max(1 / theta_cap(x, y), 1 / theta_cap(x2, y2));
    const Subspace c1 = intersect(x, y), c2 = intersect(x2, y2);
    if (c1.dim() == 0) continue;
    EXPECT_LE(grass_metrics(c1, c2).d,
              k_cap * (grass_metrics(x, x2).d + grass_metrics(y, y2).d) + 1e-10);
  }
}

TEST(Complement, ExamplesInvolutionIsometry) {
  EXPECT_TRUE(same_subspace(complement(Subspace::coordinate(3, {1, 2})), Subspace::coordinate(3, {3})));
  Sampler rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(2, 7);
    const int k = rng.integer(0, n);
    const Subspace e = random_subspace(rng, n, k);
    const Subspace ep = complement(e);
    EXPECT_EQ(ep.dim(), n - k);
    if (k > 0 && k < n) EXPECT_LE((e.frame().transpose() * ep.frame()).norm(), 1e-12);
    EXPECT_TRUE(same_subspace(complement(ep), e));
    if (k > 0 && k < n) {
      const Subspace f = random_subspace(rng, n, k);
      EXPECT_NEAR(grass_metrics(e, f).d, grass_metrics(ep, complement(f)).d, 1e-10);
    }
  }
}

TEST(PushPull, Examples) {
  const Matrix g = diag({1, 1, 0});
  EXPECT_TRUE(same_subspace(push_forward(g, Subspace::coordinate(3, {1})), Subspace::coordinate(3, {1})));
  EXPECT_THROW(push_forward(g, Subspace::coordinate(3, {3})), DomainError);
  const Subspace pre = pull_back(g, Subspace::coordinate(3, {3, 1}));
  EXPECT_EQ(pre.dim(), 2);
  // Preimage of span{e1, e3} under diag(1,1,0) is span{e1, e3}.
  EXPECT_TRUE(same_subspace(pre, Subspace::coordinate(3, {1, 3})));
  EXPECT_THROW(pull_back(g, Subspace::coordinate(3, {1, 2})), DomainError);
}

TEST(PushPull, RoundTripExplicitInverseAndDuality) {
  Sampler rng(20);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(2, 7);
    const int k = rng.integer(1, n - 1);
    const Matrix g = rng.gaussian(n);
    const Subspace e = random_subspace(rng, n, k);
    EXPECT_TRUE(same_subspace(pull_back(g, push_forward(g, e)), e));
    const Subspace via_inverse = Subspace::span(g.inverse() * e.frame());
    EXPECT_TRUE(same_subspace(pull_back(g, e), via_inverse));
    // (g^{-1} E)^perp = g^T (E^perp).
    EXPECT_TRUE(same_subspace(complement(pull_back(g, e)), push_forward(g.transpose(), complement(e))));
  }
}

TEST(Flags, ComplementExamples) {
  const Flag coord(Signature{1, 2}, {Subspace::coordinate(3, {1}), Subspace::coordinate(3, {1, 2})});
  const FlagComplement fc = flag_ops(coord);
  EXPECT_EQ(fc.tau_perp, (Signature{1, 2}));
  EXPECT_TRUE(same_subspace(fc.complement[0], Subspace::coordinate(3, {3})));
  EXPECT_TRUE(same_subspace(fc.complement[1], Subspace::coordinate(3, {2, 3})));
  EXPECT_TRUE(same_flag(complement(fc.complement), coord));
  EXPECT_THROW(Flag(Signature{1, 2}, {Subspace::coordinate(3, {3}), Subspace::coordinate(3, {1, 2})}),
               DomainError);
  EXPECT_THROW(Signature({2, 2}).validate(3), DomainError);
}

TEST(Flags, MetricsAndAlpha) {
  Sampler rng(21);
  const Signature tau{1, 3};
  const Flag f = random_flag(rng, 5, tau);
  const FlagMetrics self = flag_metric(f, f);
  EXPECT_NEAR(self.d, 0.0, 1e-12);
  EXPECT_NEAR(self.alpha, 1.0, 1e-12);

  const Subspace line = f[0];
  const Subspace other_line = Subspace::span(line.frame() + 0.1 * (f[1].frame().col(1)));
  // Same 3-space, different line inside it.
  const Flag g(tau, {other_line, f[1]});
  EXPECT_NEAR(flag_metric(f, g).d, grass_metrics(f[0], other_line).d, 1e-12);

  const Flag coord(Signature{1, 2}, {Subspace::coordinate(3, {1}), Subspace::coordinate(3, {1, 2})});
  EXPECT_NEAR(alpha_flags(coord, complement(coord)), 0.0, 1e-15);
  EXPECT_TRUE(in_orthogonal_hyperplane(complement(coord), coord));
  EXPECT_THROW(flag_metric(coord, random_flag(rng, 3, Signature{1})), DomainError);

  for (int trial = 0; trial < 50; ++trial) {
    const Flag a = random_flag(rng, 5, tau), b = random_flag(rng, 5, tau);
    const FlagMetrics m = flag_metric(a, b);
    const FlagMetrics mp = flag_metric(complement(a), complement(b));
    EXPECT_NEAR(m.d, mp.d, 1e-10);
    EXPECT_NEAR(m.rho, mp.rho, 1e-9);
    EXPECT_NEAR(m.delta, mp.delta, 1e-10);
  }
}

TEST(Sqcap, CoordinateDecomposition) {
  const Flag f(Signature{1, 2}, {Subspace::coordinate(3, {1}), Subspace::coordinate(3, {1, 2})});
  const SqcapResult r = sqcap(f, complement(f));
  ASSERT_EQ(r.decomposition.parts.size(), 3u);
  EXPECT_NEAR(r.theta, 1.0, 1e-15);
  EXPECT_TRUE(same_subspace(r.decomposition.parts[0], Subspace::coordinate(3, {1})));
  EXPECT_TRUE(same_subspace(r.decomposition.parts[1], Subspace::coordinate(3, {2})));
  EXPECT_TRUE(same_subspace(r.decomposition.parts[2], Subspace::coordinate(3, {3})));

  const Flag degenerate(Signature{1, 2}, {Subspace::coordinate(3, {1}), Subspace::coordinate(3, {1, 2})});
  EXPECT_THROW(sqcap(f, degenerate), TransversalityError);
}

TEST(Sqcap, DimensionsSemicontinuityAndModulus) {
  Sampler rng(22);
  const int n = 6;
  const Signature tau{1, 3, 4};
  const Signature tp = tau.perp(n);
  for (int trial = 0; trial < 60; ++trial) {
    const Flag f0 = random_flag(rng, n, tau);
    const Flag g0 = random_flag(rng, n, tp);
    const SqcapResult r0 = sqcap(f0, g0);
    int prev = 0;
    for (int i = 0; i < tau.size(); ++i) {
      EXPECT_EQ(r0.decomposition.parts[static_cast<std::size_t>(i)].dim(), tau[i] - prev);
      prev = tau[i];
    }
    EXPECT_EQ(r0.decomposition.parts.back().dim(), n - prev);

    const Flag f = perturb(rng, f0, rng.uniform(0, 0.1));
    const Flag g = perturb(rng, g0, rng.uniform(0, 0.1));
    const double df = flag_metric(f, f0).d;
    const double dg = flag_metric(g, g0).d;
    EXPECT_GE(theta_sqcap(f, g) + 1e-12, r0.theta - df - dg);

    const SqcapResult r = sqcap(f, g);
    double dist = 0.0;
    for (std::size_t p = 0; p < r.decomposition.parts.size(); ++p) {
      dist = std::max(dist, grass_metrics(r.decomposition.parts[p], r0.decomposition.parts[p]).d);
    }
    EXPECT_LE(dist, std::max(1 / r.theta, 1 / r0.theta) * (df + dg) + 1e-10);
  }
}

TEST(Sqcap, AlphaTauLowerBound) {
  Sampler rng(23);
  const int n = 5;
  const Signature tau{1, 2};
  for (int trial = 0; trial < 100; ++trial) {
    Vector s(n);
    s << 100, 10, 1, 0.5, 0.1;
    const Matrix g0 = rng.with_singulars(s);
    const Matrix g1 = rng.with_singulars(s);
    const Flag top = most_expanding_flag(g0.transpose(), tau);
    const Flag low = least_expanding_flag(g1, tau.perp(n));
    EXPECT_GE(theta_sqcap(top, low) + 1e-10, alpha_maps(g0, g1, tau));
  }
}

TEST(Flags, PushPullDualityAndConjugation) {
  Sampler rng(24);
  const int n = 5;
  const Signature tau{2, 3};
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix g = rng.gaussian(n);
    const Flag f = random_flag(rng, n, tau);
    EXPECT_TRUE(same_flag(pull_back(g, push_forward(g, f)), f));
    // (g^{-1} F)^perp = g^T (F^perp).
    EXPECT_TRUE(same_flag(complement(pull_back(g, f)), push_forward(g.transpose(), complement(f))));
    // Push-forward by g commutes with conjugating decompositions.
    const Flag h = random_flag(rng, n, tau.perp(n));
    const SqcapResult before = sqcap(f, h);
    const SqcapResult after = sqcap(push_forward(g, f), push_forward(g, h));
    for (std::size_t p = 0; p < before.decomposition.parts.size(); ++p) {
      EXPECT_TRUE(same_subspace(push_forward(g, before.decomposition.parts[p]), after.decomposition.parts[p]));
    }
  }
  const Matrix singular = diag({1, 1, 1, 1, 0});
  const Flag bad(Signature{1}, {Subspace::coordinate(n, {5})});
  EXPECT_THROW(push_forward(singular, bad), DomainError);
}

}  // namespace
