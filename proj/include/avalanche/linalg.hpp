#pragma once

#include <Eigen/Dense>

namespace aval {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// g = left * diag(singulars) * right^T with singulars sorted non-increasing.
struct SVDFactors {
  Matrix left;
  Vector singulars;
  Matrix right;
};

// One-sided Jacobi SVD of a square matrix.  Singular vectors are returned
// with the largest-magnitude component of each right singular vector made
// positive (the matching left vector is flipped with it).
SVDFactors svd(const Matrix& g);

Vector singular_values(const Matrix& g);

// Operator (spectral) norm.
double op_norm(const Matrix& g);

void require_square(const Matrix& g, const char* where);
void require_finite(const Matrix& g, const char* where);

// Flips v so that its first component of largest absolute value is positive.
void canonicalize_sign(Eigen::Ref<Vector> v);

// Orthonormalizes the columns of m by modified Gram-Schmidt with one
// reorthogonalization pass.  Throws FrameError if a column is (numerically)
// dependent on the previous ones.
Matrix orthonormalize(const Matrix& m, double rank_tol = 1e-10);

// Orthonormal basis of the orthogonal complement of the column span of an
// orthonormal frame (n x k -> n x (n-k)).
Matrix complement_frame(const Matrix& frame);

// Orthonormal basis (n x dim) of the null space of a matrix with n columns,
// taken from the right singular vectors of the smallest singular values.
Matrix null_space(const Matrix& m, Index dim);

// The min(rows, cols) singular values of a rectangular matrix, descending.
Vector rect_singular_values(const Matrix& m);

}  // namespace aval
