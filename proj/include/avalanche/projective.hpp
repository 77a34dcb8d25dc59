#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avalanche/grassmann.hpp"
#include "avalanche/random.hpp"

namespace aval {

// Smallest admissible |g p| relative to |g| before a point counts as lying
// in the kernel.
inline constexpr double kKernelThreshold = 1e-13;

// One side-by-side comparison lhs <= rhs.
struct Inequality {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double slack() const { return rhs - lhs; }
};

Inequality make_inequality(std::string name, double lhs, double rhs, double tol = 1e-12);

ProjPoint projective_action(const Matrix& g, const ProjPoint& p);

// Derivative of the projective action at p applied to a tangent vector v
// (v orthogonal to p.rep()).
Vector action_derivative(const Matrix& g, const ProjPoint& p, const Vector& v);

// Operator norm of the derivative on the tangent space p^perp.
double derivative_norm(const Matrix& g, const ProjPoint& p);

// Exact contraction ratio delta(gp, gq) / delta(p, q) through the wedge
// formula |gp ^ g v_p(q)| / (|gp| |gq|).
double delta_ratio(const Matrix& g, const ProjPoint& p, const ProjPoint& q);

struct ContractionBounds {
  double kappa = 0.0;
  double r = 0.0;
  double image_radius = 0.0;  // kappa r / sqrt(1 - r^2), sine distance
  double lipschitz = 0.0;     // kappa (r + sqrt(1 - r^2)) / (1 - r^2), arc distance
};

// Bounds for the action of g on the sine ball of radius r around its most
// expanding direction.  Without kappa the gap inverse sigma(g) is used.
ContractionBounds contraction_report(const Matrix& g, double r, std::optional<double> kappa = std::nullopt);

struct ContractionSample {
  ContractionBounds bounds;
  int samples = 0;
  double max_image_radius = 0.0;  // sine distance to the image center
  double max_lipschitz = 0.0;     // arc-distance ratio over sampled pairs
  bool holds = false;
};

ContractionSample sample_contraction(const Matrix& g, double r, std::optional<double> kappa, Rng& rng,
                                     int samples = 1000);

// Uniformly random direction in the sine ball of radius r around center,
// with a share of the samples placed exactly on the boundary sphere.
ProjPoint sample_sine_ball(const ProjPoint& center, double r, Rng& rng);

double relative_distance(const Matrix& g1, const Matrix& g2);

struct DeltaRatioReport {
  double ratio1 = 0.0;
  double ratio2 = 0.0;
  double c = 0.0;   // constant of the ratio-difference bound
  double c1 = 0.0;  // constant of the Holder ratio-difference bound
  Inequality ratio_difference;
  Inequality lower_distortion;  // 1/(|g1| |g1^-1|)^2 <= ratio1
  Inequality upper_distortion;  // ratio1 <= (|g1| |g1^-1|)^2
  Inequality log_distortion;    // |log ratio1| <= 4 ell(g1)
  Inequality holder_difference;
  Inequality action_difference;  // d(g1 p, g2 p) <= max(1/|g1 p|, 1/|g2 p|) |g1 - g2|
  bool all_hold() const;
};

DeltaRatioReport delta_ratio_bounds(const Matrix& g1, const Matrix& g2, const ProjPoint& p, const ProjPoint& q,
                                    double alpha_exp);

struct RestrictedGapReport {
  bool gap_hypothesis = false;        // sigma_k(g) < kappa and sigma_{k+r}(g) < kappa
  bool proximity_hypothesis = false;  // delta(E, v_k(g)) < delta0 s_{k+1}(g) / s_1(g)
  double delta_e = 0.0;
  double proximity_threshold = 0.0;
  double sigma_restricted = 0.0;  // sigma_r(g|E^perp)
  Inequality gap_bound;           // sigma_r(g|E^perp) <= 2 kappa
  std::optional<Inequality> distance_bound;
  bool hypotheses_hold() const { return gap_hypothesis && proximity_hypothesis; }
  bool conclusions_hold() const;
};

RestrictedGapReport restricted_gap(const Matrix& g, const Subspace& e, double varkappa, int k, int r,
                                   double delta0 = 0.05);

// |wedge_i g1 - wedge_i g2| <= i max(1, |g1|, |g2|)^(i-1) |g1 - g2|.
Inequality wedge_difference_bound(const Matrix& g1, const Matrix& g2, int i);

// l max(1, |g1|, |g2|)^(l-1) / max(|wedge_l g1|, |wedge_l g2|).
double lipschitz_constant_level(const Matrix& g1, const Matrix& g2, int l);

struct EigendirectionReport {
  int level = 1;
  bool in_class = false;  // gr_l >= 1/kappa for both maps
  bool close = false;     // proximity precondition at epsilon0
  double d_rel = 0.0;
  std::optional<double> c_level;
  double distance = 0.0;
  Inequality bound;
  bool preconditions() const { return in_class && close; }
};

EigendirectionReport eigendirection_continuity(const Matrix& g1, const Matrix& g2, double kappa, int level = 1,
                                               double epsilon0 = 0.01);

}  // namespace aval
