#include "avalanche/errors.hpp"
#include "avalanche/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace aval {

namespace {

constexpr double kPairTolerance = 1e-15;
constexpr int kMaxSweeps = 80;

// Extends the orthonormal columns 0..filled-1 of q to a full orthonormal
// basis, trying canonical vectors in order.
void complete_basis(Matrix& q, Index filled) {
  const Index n = q.rows();
  Index next = filled;
  for (Index e = 0; e < n && next < q.cols(); ++e) {
    Vector v = Vector::Unit(n, e);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < next; ++j) v -= q.col(j).dot(v) * q.col(j);
    }
    const double norm = v.norm();
    if (norm > 1e-8) q.col(next++) = v / norm;
  }
}

}  // namespace

void require_square(const Matrix& g, const char* where) {
  if (g.rows() != g.cols() || g.rows() == 0) {
    throw ShapeError(std::string(where) + ": expected a non-empty square matrix, got " +
                     std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
  }
}

void require_finite(const Matrix& g, const char* where) {
  if (!g.allFinite()) throw ShapeError(std::string(where) + ": non-finite entry");
}

void canonicalize_sign(Eigen::Ref<Vector> v) {
  Index best = 0;
  double best_abs = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > best_abs) {
      best_abs = std::abs(v(i));
      best = i;
    }
  }
  if (v.size() > 0 && v(best) < 0) v = -v;
}

SVDFactors svd(const Matrix& g) {
  require_square(g, "svd");
  require_finite(g, "svd");
  const Index n = g.rows();
  Matrix a = g;
  Matrix v = Matrix::Identity(n, n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const double gamma = a.col(p).dot(a.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= kPairTolerance * std::sqrt(alpha * beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (Index i = 0; i < n; ++i) {
          const double ap = a(i, p), aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  Vector norms(n);
  for (Index j = 0; j < n; ++j) norms(j) = a.col(j).norm();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return norms(x) > norms(y); });

  SVDFactors out{Matrix::Zero(n, n), Vector::Zero(n), Matrix::Zero(n, n)};
  const double top = norms(order[0]);
  Index filled = 0;
  bool deficient = false;
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    out.singulars(j) = norms(src);
    out.right.col(j) = v.col(src);
    if (!deficient && norms(src) > 1e-13 * top && norms(src) > 0.0) {
      out.left.col(j) = a.col(src) / norms(src);
      filled = j + 1;
    } else {
      deficient = true;
    }
  }
  if (filled < n) complete_basis(out.left, filled);

  for (Index j = 0; j < n; ++j) {
    const Vector before = out.right.col(j);
    canonicalize_sign(out.right.col(j));
    if (out.right.col(j).dot(before) < 0) out.left.col(j) = -out.left.col(j);
  }
  return out;
}

Vector singular_values(const Matrix& g) { return svd(g).singulars; }

double op_norm(const Matrix& g) {
  if (g.size() == 0) return 0.0;
  if (g.rows() != g.cols()) {
    // Rectangular input: the norm of the zero-padded square matrix.
    const Index n = std::max(g.rows(), g.cols());
    Matrix sq = Matrix::Zero(n, n);
    sq.topLeftCorner(g.rows(), g.cols()) = g;
    return svd(sq).singulars(0);
  }
  return svd(g).singulars(0);
}

Matrix orthonormalize(const Matrix& m, double rank_tol) {
  Matrix q = m;
  for (Index j = 0; j < m.cols(); ++j) {
    const double original = m.col(j).norm();
    Vector v = m.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < j; ++i) v -= q.col(i).dot(v) * q.col(i);
    }
    const double norm = v.norm();
    if (!(original > 0.0) || norm <= rank_tol * original) {
      throw FrameError("orthonormalize: column " + std::to_string(j) +
                       " is linearly dependent on the preceding columns");
    }
    q.col(j) = v / norm;
  }
  return q;
}

Matrix complement_frame(const Matrix& frame) {
  const Index n = frame.rows();
  const Index k = frame.cols();
  if (k == 0) return Matrix::Identity(n, n);
  if (k == n) return Matrix(n, 0);
  Eigen::HouseholderQR<Matrix> qr(frame);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - k);
}

Matrix null_space(const Matrix& m, Index dim) {
  const Index n = m.cols();
  if (dim == 0) return Matrix(n, 0);
  Matrix square = Matrix::Zero(n, n);
  if (m.rows() <= n) {
    square.topRows(m.rows()) = m;
  } else {
    Eigen::HouseholderQR<Matrix> qr(m);
    square = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  }
  const SVDFactors f = svd(square);
  return orthonormalize(f.right.rightCols(dim));
}


Vector rect_singular_values(const Matrix& m) {
  const Index r = std::min(m.rows(), m.cols());
  if (r == 0) return Vector(0);
  const Index n = std::max(m.rows(), m.cols());
  Matrix sq = Matrix::Zero(n, n);
  sq.topLeftCorner(m.rows(), m.cols()) = m;
  return svd(sq).singulars.head(r);
}

}  // namespace aval
