#pragma once

#include <optional>

#include "avalanche/exterior.hpp"
#include "avalanche/subspace.hpp"

namespace aval {

// The three projective distances: Riemannian (angle), Euclidean (chord)
// and sine distance.
struct Metrics {
  double rho = 0.0;
  double d = 0.0;
  double delta = 0.0;
};

inline constexpr double kTransversalityThreshold = 1e-10;
inline constexpr double kSubspaceEqualityTolerance = 1e-8;

Metrics proj_metrics(const Vector& p, const Vector& q);
Metrics proj_metrics(const ProjPoint& p, const ProjPoint& q);

KVector plucker(const Subspace& e);
// Subspace whose Plücker image is the given decomposable k-vector.
Subspace plucker_preimage(const KVector& w);

Metrics grass_metrics(const Subspace& e, const Subspace& f);
bool same_subspace(const Subspace& e, const Subspace& f, double tol = kSubspaceEqualityTolerance);

struct MinHausdorff {
  double delta_min = 0.0;
  std::optional<double> delta_h;  // only for equal dimensions
};

MinHausdorff delta_min_H(const Subspace& e, const Subspace& f);
double delta_min(const Subspace& e, const Subspace& f);
double delta_hausdorff(const Subspace& e, const Subspace& f);

// |det| of the orthogonal projection E -> F, equal to |<psi(E), psi(F)>|.
double alpha_subspaces(const Subspace& e, const Subspace& f);
// Angle between a subspace and a projective point's line (dim E = 1).
double alpha_points(const Vector& u, const Vector& v);

struct Transversality {
  double theta_plus = 0.0;
  double theta_cap = 0.0;
};

Transversality theta(const Subspace& e, const Subspace& f);
double theta_plus(const Subspace& e, const Subspace& f);
double theta_cap(const Subspace& e, const Subspace& f);

Subspace sum(const Subspace& e, const Subspace& f);
Subspace intersect(const Subspace& e, const Subspace& f);
Subspace complement(const Subspace& e);

// Image g(E); requires E to meet the kernel of g trivially.
Subspace push_forward(const Matrix& g, const Subspace& e);
// Preimage g^{-1}(E); requires E + range(g) = whole space.
Subspace pull_back(const Matrix& g, const Subspace& e);

}  // namespace aval
