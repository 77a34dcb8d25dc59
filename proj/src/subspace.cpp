#include "avalanche/subspace.hpp"

#include <string>

#include "avalanche/errors.hpp"

namespace aval {

Subspace Subspace::span(const Matrix& columns) {
  if (columns.cols() > columns.rows()) throw FrameError("Subspace::span: more columns than rows");
  return Subspace(orthonormalize(columns));
}

Subspace Subspace::from_frame(const Matrix& frame) {
  const Index k = frame.cols();
  if (k > frame.rows()) throw FrameError("Subspace::from_frame: more columns than rows");
  if (k == 0) return Subspace(frame);
  const double defect = (frame.transpose() * frame - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
  if (!(defect <= 1e-10)) {
    throw FrameError("Subspace::from_frame: frame not orthonormal (defect " +
                     std::to_string(defect) + ")");
  }
  return Subspace(frame);
}

Subspace Subspace::zero(int n) { return Subspace(Matrix(n, 0)); }

Subspace Subspace::whole(int n) { return Subspace(Matrix::Identity(n, n)); }

Subspace Subspace::coordinate(int n, const std::vector<int>& indices) {
  Matrix frame = Matrix::Zero(n, static_cast<Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const int i = indices[j];
    if (i < 1 || i > n) throw DomainError("Subspace::coordinate: index out of range");
    frame(i - 1, static_cast<Index>(j)) = 1.0;
  }
  return span(frame);
}

Subspace Subspace::line(const Vector& v) { return span(v); }

ProjPoint::ProjPoint(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !v.allFinite()) throw DomainError("ProjPoint: zero or non-finite vector");
  rep_ = v / norm;
  canonicalize_sign(rep_);
}

ProjPoint ProjPoint::basis(int n, int i) { return ProjPoint(Vector::Unit(n, i - 1)); }

}  // namespace aval
