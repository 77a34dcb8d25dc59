#include "avalanche/exterior.hpp"

#include <bit>
#include <string>

#include "avalanche/errors.hpp"

namespace aval {

namespace {

using Mask = std::uint64_t;
constexpr int kMaxAmbient = 62;

void check_ambient(int n) {
  if (n < 0 || n > kMaxAmbient) {
    throw DomainError("exterior algebra: ambient dimension " + std::to_string(n) +
                      " outside supported range");
  }
}

std::vector<Mask> subset_masks(int n, int k) {
  std::vector<Mask> out;
  out.reserve(binomial(n, k));
  for (const IndexSubset& s : index_subsets(n, k)) {
    Mask m = 0;
    for (int e : s.elements) m |= Mask{1} << (e - 1);
    out.push_back(m);
  }
  return out;
}

std::size_t mask_rank(int n, int k, Mask mask) {
  std::size_t rank = 0;
  int prev = -1;
  int t = 0;
  for (int c = 0; c < n; ++c) {
    if (!(mask >> c & 1)) continue;
    for (int j = prev + 1; j < c; ++j) rank += binomial(n - 1 - j, k - 1 - t);
    prev = c;
    ++t;
  }
  return rank;
}

// Sign of e_I ^ e_J relative to e_{I u J}: parity of pairs i in I, j in J
// with i > j.  Assumes I and J are disjoint.
double merge_sign(Mask a, Mask b) {
  int inversions = 0;
  while (b) {
    const int j = std::countr_zero(b);
    b &= b - 1;
    const Mask above = (j + 1 >= 64) ? Mask{0} : (~Mask{0} << (j + 1));
    inversions += std::popcount(a & above);
  }
  return (inversions % 2) ? -1.0 : 1.0;
}

}  // namespace

std::size_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

std::vector<IndexSubset> index_subsets(int n, int k) {
  if (n < 0 || k < 0 || k > n) {
    throw DomainError("index_subsets: need 0 <= k <= n, got n=" + std::to_string(n) +
                      " k=" + std::to_string(k));
  }
  std::vector<IndexSubset> out;
  out.reserve(binomial(n, k));
  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    out.push_back(IndexSubset{n, cur});
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::size_t subset_rank(const IndexSubset& s) {
  check_ambient(s.n);
  Mask m = 0;
  int prev = 0;
  for (int e : s.elements) {
    if (e <= prev || e > s.n) throw DomainError("subset_rank: elements must increase within 1..n");
    m |= Mask{1} << (e - 1);
    prev = e;
  }
  return mask_rank(s.n, s.size(), m);
}

Matrix exterior_power(const Matrix& g, int k) {
  require_square(g, "exterior_power");
  const int n = static_cast<int>(g.rows());
  if (k < 0 || k > n) {
    throw DomainError("exterior_power: k=" + std::to_string(k) + " outside 0.." + std::to_string(n));
  }
  const std::vector<IndexSubset> subsets = index_subsets(n, k);
  const Index dim = static_cast<Index>(subsets.size());
  Matrix out(dim, dim);
  if (k == 0) {
    out(0, 0) = 1.0;
    return out;
  }
  Matrix minor(k, k);
  for (Index r = 0; r < dim; ++r) {
    const auto& rows = subsets[static_cast<std::size_t>(r)].elements;
    for (Index c = 0; c < dim; ++c) {
      const auto& cols = subsets[static_cast<std::size_t>(c)].elements;
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) minor(i, j) = g(rows[static_cast<std::size_t>(i)] - 1, cols[static_cast<std::size_t>(j)] - 1);
      }
      out(r, c) = (k == 1) ? minor(0, 0) : minor.partialPivLu().determinant();
    }
  }
  return out;
}

KVector::KVector(int n, int k) : n_(n), k_(k) {
  check_ambient(n);
  if (k < 0 || k > n) throw DomainError("KVector: degree outside 0..n");
  coords_ = Vector::Zero(static_cast<Index>(binomial(n, k)));
}

KVector::KVector(int n, int k, Vector coords) : KVector(n, k) {
  if (coords.size() != coords_.size()) {
    throw ShapeError("KVector: expected " + std::to_string(coords_.size()) + " coordinates");
  }
  coords_ = std::move(coords);
}

KVector KVector::basis(int n, const std::vector<int>& elements) {
  KVector v(n, static_cast<int>(elements.size()));
  v.coords_(static_cast<Index>(subset_rank(IndexSubset{n, elements}))) = 1.0;
  return v;
}

KVector KVector::from_vector(const Vector& v) {
  return KVector(static_cast<int>(v.size()), 1, v);
}

KVector KVector::volume(int n) {
  KVector v(n, n);
  v.coords_(0) = 1.0;
  return v;
}

double KVector::dot(const KVector& other) const {
  if (other.n_ != n_ || other.k_ != k_) throw ShapeError("KVector::dot: shape mismatch");
  return coords_.dot(other.coords_);
}

KVector KVector::operator+(const KVector& other) const {
  if (other.n_ != n_ || other.k_ != k_) throw ShapeError("KVector: shape mismatch");
  return KVector(n_, k_, coords_ + other.coords_);
}

KVector KVector::operator-(const KVector& other) const {
  if (other.n_ != n_ || other.k_ != k_) throw ShapeError("KVector: shape mismatch");
  return KVector(n_, k_, coords_ - other.coords_);
}

KVector KVector::operator*(double s) const { return KVector(n_, k_, coords_ * s); }

KVector wedge(const KVector& u, const KVector& v) {
  if (u.ambient() != v.ambient()) throw ShapeError("wedge: ambient dimensions differ");
  const int n = u.ambient();
  const int k = u.degree() + v.degree();
  if (k > n) {
    throw DomainError("wedge: degree " + std::to_string(k) + " exceeds ambient dimension " +
                      std::to_string(n));
  }
  const std::vector<Mask> mu = subset_masks(n, u.degree());
  const std::vector<Mask> mv = subset_masks(n, v.degree());
  KVector out(n, k);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double a = u.coords()(static_cast<Index>(i));
    if (a == 0.0) continue;
    for (std::size_t j = 0; j < mv.size(); ++j) {
      const double b = v.coords()(static_cast<Index>(j));
      if (b == 0.0 || (mu[i] & mv[j])) continue;
      const Mask merged = mu[i] | mv[j];
      out.coords()(static_cast<Index>(mask_rank(n, k, merged))) += merge_sign(mu[i], mv[j]) * a * b;
    }
  }
  return out;
}

KVector hodge_star(const KVector& v) {
  const int n = v.ambient();
  const int k = v.degree();
  const std::vector<Mask> masks = subset_masks(n, k);
  const Mask full = (n == 64) ? ~Mask{0} : ((Mask{1} << n) - 1);
  KVector out(n, n - k);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const Mask rest = full & ~masks[i];
    out.coords()(static_cast<Index>(mask_rank(n, n - k, rest))) =
        merge_sign(masks[i], rest) * v.coords()(static_cast<Index>(i));
  }
  return out;
}

KVector vee(const KVector& v, const KVector& w) {
  if (v.ambient() != w.ambient()) throw ShapeError("vee: ambient dimensions differ");
  if (v.degree() + w.degree() < v.ambient()) {
    throw DomainError("vee: degrees " + std::to_string(v.degree()) + "+" +
                      std::to_string(w.degree()) + " below ambient dimension");
  }
  return hodge_star(wedge(hodge_star(v), hodge_star(w)));
}

KVector wedge_columns(const Matrix& columns) {
  const int n = static_cast<int>(columns.rows());
  const int k = static_cast<int>(columns.cols());
  KVector out(n, k);
  if (k == 0) {
    out.coords()(0) = 1.0;
    return out;
  }
  const std::vector<IndexSubset> subsets = index_subsets(n, k);
  Matrix minor(k, k);
  for (std::size_t r = 0; r < subsets.size(); ++r) {
    for (int i = 0; i < k; ++i) minor.row(i) = columns.row(subsets[r].elements[static_cast<std::size_t>(i)] - 1);
    out.coords()(static_cast<Index>(r)) = (k == 1) ? minor(0, 0) : minor.partialPivLu().determinant();
  }
  return out;
}

Matrix wedge_operator(const KVector& w) {
  const int n = w.ambient();
  if (w.degree() + 1 > n) throw DomainError("wedge_operator: degree too large");
  Matrix op(static_cast<Index>(binomial(n, w.degree() + 1)), n);
  for (int i = 0; i < n; ++i) op.col(i) = wedge(KVector::basis(n, {i + 1}), w).coords();
  return op;
}

}  // namespace aval
