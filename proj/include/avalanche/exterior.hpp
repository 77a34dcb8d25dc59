#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "avalanche/linalg.hpp"

namespace aval {

// A k-element subset of {1, ..., n}; elements strictly increasing.
struct IndexSubset {
  int n = 0;
  std::vector<int> elements;

  int size() const { return static_cast<int>(elements.size()); }
  bool operator==(const IndexSubset&) const = default;
};

std::size_t binomial(int n, int k);

// All k-subsets of {1..n} in lexicographic order.
std::vector<IndexSubset> index_subsets(int n, int k);

// Position of a subset in the lexicographic order of index_subsets(n, k).
std::size_t subset_rank(const IndexSubset& s);

// The k-th exterior power: entry (I, J) is det g[I, J], rows and columns
// indexed lexicographically.  k = 0 gives the 1x1 identity.
Matrix exterior_power(const Matrix& g, int k);

// Element of the k-th exterior power of R^n in the basis {e_I}.
class KVector {
 public:
  KVector(int n, int k);
  KVector(int n, int k, Vector coords);

  static KVector basis(int n, const std::vector<int>& elements);
  static KVector from_vector(const Vector& v);
  static KVector volume(int n);

  int ambient() const { return n_; }
  int degree() const { return k_; }
  const Vector& coords() const { return coords_; }
  Vector& coords() { return coords_; }
  double norm() const { return coords_.norm(); }
  double dot(const KVector& other) const;

  KVector operator+(const KVector& other) const;
  KVector operator-(const KVector& other) const;
  KVector operator*(double s) const;

 private:
  int n_;
  int k_;
  Vector coords_;
};

KVector wedge(const KVector& u, const KVector& v);
KVector hodge_star(const KVector& v);
KVector vee(const KVector& v, const KVector& w);

// Wedge product of the columns of an n x k matrix (its k x k minors).
KVector wedge_columns(const Matrix& columns);

// Matrix of the linear map x -> x ^ w from R^n to the (k+1)-th power.
Matrix wedge_operator(const KVector& w);

}  // namespace aval
