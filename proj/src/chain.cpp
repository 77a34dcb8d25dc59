#include <string>

#include "avalanche/ap.hpp"
#include "avalanche/exterior.hpp"

namespace aval {

Chain::Chain(std::vector<Matrix> matrices) : matrices_(std::move(matrices)) {
  if (matrices_.empty()) throw DomainError("Chain: empty chain");
  const Index m = matrices_.front().rows();
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    const Matrix& g = matrices_[i];
    if (g.rows() != g.cols() || g.rows() != m || m == 0) {
      throw ShapeError("Chain: matrix " + std::to_string(i) + " is " + std::to_string(g.rows()) + "x" +
                       std::to_string(g.cols()) + ", expected " + std::to_string(m) + "x" + std::to_string(m));
    }
    require_finite(g, "Chain");
  }
}

ScaledMatrix Chain::window(std::size_t i, std::size_t j) const {
  if (!(i < j && j <= size())) {
    throw DomainError("Chain::window: need 0 <= i < j <= n, got i = " + std::to_string(i) + ", j = " +
                      std::to_string(j));
  }
  return scaled_product(matrices_, i, j);
}

Chain Chain::adjoint() const {
  std::vector<Matrix> out;
  out.reserve(size());
  for (auto it = matrices_.rbegin(); it != matrices_.rend(); ++it) out.push_back(it->transpose());
  return Chain(std::move(out));
}

Chain Chain::slice(std::size_t i, std::size_t j) const {
  if (!(i < j && j <= size())) throw DomainError("Chain::slice: empty or invalid range");
  return Chain(std::vector<Matrix>(matrices_.begin() + static_cast<std::ptrdiff_t>(i),
                                   matrices_.begin() + static_cast<std::ptrdiff_t>(j)));
}

Chain Chain::exterior(int k) const {
  std::vector<Matrix> out;
  out.reserve(size());
  for (const Matrix& g : matrices_) out.push_back(k == 1 ? g : exterior_power(g, k));
  return Chain(std::move(out));
}

Chain Chain::scaled_by(double lambda) const {
  std::vector<Matrix> out;
  out.reserve(size());
  for (const Matrix& g : matrices_) out.push_back(lambda * g);
  return Chain(std::move(out));
}

}  // namespace aval
