#pragma once

#include <vector>

#include "avalanche/linalg.hpp"

namespace aval {

// A linear subspace of R^n, stored as an orthonormal n x k frame.
class Subspace {
 public:
  Subspace() = default;

  // Orthonormalized span of the columns; throws FrameError on dependence.
  static Subspace span(const Matrix& columns);
  // Adopts an already orthonormal frame (checked to 1e-10).
  static Subspace from_frame(const Matrix& frame);
  static Subspace zero(int n);
  static Subspace whole(int n);
  // Span of the canonical vectors e_i for the given 1-based indices.
  static Subspace coordinate(int n, const std::vector<int>& indices);
  static Subspace line(const Vector& v);

  int ambient() const { return static_cast<int>(frame_.rows()); }
  int dim() const { return static_cast<int>(frame_.cols()); }
  const Matrix& frame() const { return frame_; }
  Matrix projector() const { return frame_ * frame_.transpose(); }

 private:
  explicit Subspace(Matrix frame) : frame_(std::move(frame)) {}
  Matrix frame_;
};

// A point of projective space, represented by a unit vector whose first
// largest-magnitude component is positive.
class ProjPoint {
 public:
  ProjPoint() = default;
  explicit ProjPoint(const Vector& v);

  static ProjPoint basis(int n, int i);  // 1-based

  int ambient() const { return static_cast<int>(rep_.size()); }
  const Vector& rep() const { return rep_; }

 private:
  Vector rep_;
};

}  // namespace aval
