#include "avalanche/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "avalanche/errors.hpp"

namespace aval {

namespace {

void require_same_ambient(const Subspace& e, const Subspace& f, const char* where) {
  if (e.ambient() != f.ambient()) throw ShapeError(std::string(where) + ": ambient dimensions differ");
}

void require_same_dim(const Subspace& e, const Subspace& f, const char* where) {
  require_same_ambient(e, f, where);
  if (e.dim() != f.dim()) {
    throw DomainError(std::string(where) + ": dimensions differ (" + std::to_string(e.dim()) +
                      " vs " + std::to_string(f.dim()) + ")");
  }
}

}  // namespace

Metrics proj_metrics(const Vector& p, const Vector& q) {
  if (p.size() != q.size()) throw ShapeError("proj_metrics: dimension mismatch");
  const double np = p.norm();
  const double nq = q.norm();
  if (!(np > 0.0) || !(nq > 0.0)) throw DomainError("proj_metrics: zero vector");
  const Vector u = p / np;
  Vector v = q / nq;
  double c = u.dot(v);
  if (c < 0) {
    v = -v;
    c = -c;
  }
  Metrics m;
  m.delta = std::min(1.0, (u - c * v).norm());
  m.d = (u - v).norm();
  m.rho = std::atan2(m.delta, std::min(c, 1.0));
  return m;
}

Metrics proj_metrics(const ProjPoint& p, const ProjPoint& q) { return proj_metrics(p.rep(), q.rep()); }

KVector plucker(const Subspace& e) {
  KVector w = wedge_columns(e.frame());
  canonicalize_sign(w.coords());
  return w;
}

Subspace plucker_preimage(const KVector& w) {
  const int n = w.ambient();
  const int k = w.degree();
  if (!(w.norm() > 0.0)) throw FrameError("plucker_preimage: zero multivector");
  if (k == 0) return Subspace::zero(n);
  if (k == n) return Subspace::whole(n);
  const KVector unit = w * (1.0 / w.norm());
  return Subspace::span(null_space(wedge_operator(unit), k));
}

Metrics grass_metrics(const Subspace& e, const Subspace& f) {
  require_same_dim(e, f, "grass_metrics");
  return proj_metrics(plucker(e).coords(), plucker(f).coords());
}

bool same_subspace(const Subspace& e, const Subspace& f, double tol) {
  if (e.ambient() != f.ambient() || e.dim() != f.dim()) return false;
  return grass_metrics(e, f).delta < tol;
}

double delta_min(const Subspace& e, const Subspace& f) {
  require_same_ambient(e, f, "delta_min");
  if (e.dim() == 0 || f.dim() == 0) throw DomainError("delta_min: zero subspace");
  const Matrix fperp = complement_frame(f.frame());
  if (e.dim() > fperp.cols()) return 0.0;
  const Vector s = rect_singular_values(fperp.transpose() * e.frame());
  return std::min(1.0, s(e.dim() - 1));
}

double delta_hausdorff(const Subspace& e, const Subspace& f) {
  require_same_dim(e, f, "delta_hausdorff");
  const Matrix fperp = complement_frame(f.frame());
  if (fperp.cols() == 0 || e.dim() == 0) return 0.0;
  return std::min(1.0, rect_singular_values(fperp.transpose() * e.frame())(0));
}

MinHausdorff delta_min_H(const Subspace& e, const Subspace& f) {
  MinHausdorff out;
  out.delta_min = delta_min(e, f);
  if (e.dim() == f.dim()) out.delta_h = delta_hausdorff(e, f);
  return out;
}

double alpha_subspaces(const Subspace& e, const Subspace& f) {
  require_same_dim(e, f, "alpha_subspaces");
  if (e.dim() == 0) return 1.0;
  const Matrix m = e.frame().transpose() * f.frame();
  return std::min(1.0, std::abs(m.partialPivLu().determinant()));
}

double alpha_points(const Vector& u, const Vector& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (!(nu > 0.0) || !(nv > 0.0)) throw DomainError("alpha_points: zero vector");
  return std::min(1.0, std::abs(u.dot(v)) / (nu * nv));
}

double theta_plus(const Subspace& e, const Subspace& f) {
  require_same_ambient(e, f, "theta_plus");
  if (e.dim() + f.dim() > e.ambient()) return 0.0;
  return std::min(1.0, wedge(plucker(e), plucker(f)).norm());
}

double theta_cap(const Subspace& e, const Subspace& f) { return theta_plus(complement(e), complement(f)); }

Transversality theta(const Subspace& e, const Subspace& f) {
  return Transversality{theta_plus(e, f), theta_cap(e, f)};
}

Subspace sum(const Subspace& e, const Subspace& f) {
  const double t = theta_plus(e, f);
  if (!(t > kTransversalityThreshold)) {
    throw TransversalityError("sum: subspaces intersect non-trivially (theta_plus = " +
                                  std::to_string(t) + ")",
                              t);
  }
  Matrix both(e.ambient(), e.dim() + f.dim());
  both << e.frame(), f.frame();
  return Subspace::span(both);
}

Subspace intersect(const Subspace& e, const Subspace& f) {
  const double t = theta_cap(e, f);
  if (!(t > kTransversalityThreshold)) {
    throw TransversalityError("intersect: subspaces do not span the whole space (theta_cap = " +
                                  std::to_string(t) + ")",
                              t);
  }
  const int n = e.ambient();
  const int dim = e.dim() + f.dim() - n;
  if (dim == 0) return Subspace::zero(n);
  // x = E a = F b  <=>  [E, -F] (a, b) = 0.
  Matrix system(n, e.dim() + f.dim());
  system << e.frame(), -f.frame();
  const Matrix kernel = null_space(system, dim);
  return Subspace::span(e.frame() * kernel.topRows(e.dim()));
}

Subspace complement(const Subspace& e) { return Subspace::from_frame(complement_frame(e.frame())); }

Subspace push_forward(const Matrix& g, const Subspace& e) {
  require_square(g, "push_forward");
  if (g.rows() != e.ambient()) throw ShapeError("push_forward: dimension mismatch");
  if (e.dim() == 0) return e;
  const double scale = op_norm(g);
  const Matrix image = g * e.frame();
  const double smallest = rect_singular_values(image)(e.dim() - 1);
  if (!(scale > 0.0) || !(smallest > kTransversalityThreshold * scale)) {
    throw DomainError("push_forward: subspace meets the kernel (smallest restricted singular value " +
                      std::to_string(smallest) + ")");
  }
  return Subspace::span(image);
}

Subspace pull_back(const Matrix& g, const Subspace& e) {
  require_square(g, "pull_back");
  const int n = e.ambient();
  if (g.rows() != n) throw ShapeError("pull_back: dimension mismatch");
  if (e.dim() == n) return e;
  const double scale = op_norm(g);
  const Matrix eperp = complement_frame(e.frame());
  const Vector s = rect_singular_values(g.transpose() * eperp);
  const double smallest = s(s.size() - 1);
  if (!(scale > 0.0) || !(smallest > kTransversalityThreshold * scale)) {
    throw DomainError("pull_back: subspace plus range does not span (smallest singular value " +
                      std::to_string(smallest) + ")");
  }
  if (e.dim() == 0) return e;
  return Subspace::span(null_space(eperp.transpose() * g, e.dim()));
}

}  // namespace aval
