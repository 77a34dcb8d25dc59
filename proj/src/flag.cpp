#include "avalanche/flag.hpp"

#include <algorithm>
#include <string>

#include "avalanche/errors.hpp"

namespace aval {

void Signature::validate(int n, bool strict) const {
  if (dims.empty()) throw DomainError("Signature: empty");
  int prev = 0;
  for (int d : dims) {
    if (d <= prev) throw DomainError("Signature: dimensions must be strictly increasing and positive");
    prev = d;
  }
  if (prev > n || (strict && prev >= n)) {
    throw DomainError("Signature: top dimension " + std::to_string(prev) + " too large for n=" +
                      std::to_string(n));
  }
}

Signature Signature::perp(int n) const {
  std::vector<int> out;
  out.reserve(dims.size());
  for (auto it = dims.rbegin(); it != dims.rend(); ++it) out.push_back(n - *it);
  return Signature(std::move(out));
}

Flag::Flag(Signature signature, std::vector<Subspace> spaces)
    : signature_(std::move(signature)), spaces_(std::move(spaces)) {
  if (spaces_.empty() || static_cast<int>(spaces_.size()) != signature_.size()) {
    throw DomainError("Flag: number of subspaces does not match the signature");
  }
  const int n = spaces_.front().ambient();
  signature_.validate(n);
  for (int j = 0; j < size(); ++j) {
    const Subspace& s = spaces_[static_cast<std::size_t>(j)];
    if (s.ambient() != n || s.dim() != signature_[j]) {
      throw DomainError("Flag: component " + std::to_string(j + 1) + " has the wrong dimension");
    }
    if (j > 0) {
      const Subspace& prev = spaces_[static_cast<std::size_t>(j - 1)];
      const Matrix residual = prev.frame() - s.projector() * prev.frame();
      if (residual.size() > 0 && !(residual.norm() < 1e-9)) {
        throw DomainError("Flag: component " + std::to_string(j) + " is not contained in component " +
                          std::to_string(j + 1));
      }
    }
  }
}

Flag Flag::from_columns(const Matrix& columns, const Signature& signature) {
  signature.validate(static_cast<int>(columns.rows()));
  if (columns.cols() < signature.dims.back()) throw ShapeError("Flag::from_columns: too few columns");
  const Matrix q = orthonormalize(columns.leftCols(signature.dims.back()));
  std::vector<Subspace> spaces;
  for (int d : signature.dims) spaces.push_back(Subspace::from_frame(q.leftCols(d)));
  return Flag(signature, std::move(spaces));
}

void Decomposition::validate() const {
  if (parts.empty()) throw DomainError("Decomposition: no parts");
  const int n = parts.front().ambient();
  int total = 0;
  for (const Subspace& p : parts) total += p.dim();
  if (total != n) throw DomainError("Decomposition: dimensions do not add up to n");
  Matrix all(n, n);
  int col = 0;
  for (const Subspace& p : parts) {
    all.middleCols(col, p.dim()) = p.frame();
    col += p.dim();
  }
  if (!(singular_values(all)(n - 1) > 0.0)) throw DomainError("Decomposition: parts are not independent");
}

FlagComplement flag_ops(const Flag& f) {
  const int n = f.ambient();
  std::vector<Subspace> spaces;
  for (int j = f.size() - 1; j >= 0; --j) spaces.push_back(complement(f[j]));
  const Signature tau_perp = f.signature().perp(n);
  return FlagComplement{tau_perp, Flag(tau_perp, std::move(spaces))};
}

Flag complement(const Flag& f) { return flag_ops(f).complement; }

FlagMetrics flag_metric(const Flag& f, const Flag& g) {
  if (!(f.signature() == g.signature()) || f.ambient() != g.ambient()) {
    throw DomainError("flag_metric: signatures differ");
  }
  FlagMetrics out;
  for (int j = 0; j < f.size(); ++j) {
    const Metrics m = grass_metrics(f[j], g[j]);
    out.rho = std::max(out.rho, m.rho);
    out.d = std::max(out.d, m.d);
    out.delta = std::max(out.delta, m.delta);
    out.alpha = std::min(out.alpha, alpha_subspaces(f[j], g[j]));
  }
  return out;
}

double alpha_flags(const Flag& f, const Flag& g) { return flag_metric(f, g).alpha; }

bool same_flag(const Flag& f, const Flag& g, double tol) {
  return f.signature() == g.signature() && flag_metric(f, g).delta < tol;
}

bool in_orthogonal_hyperplane(const Flag& g, const Flag& f, double tol) {
  return alpha_flags(g, f) <= tol;
}

namespace {

void require_dual(const Flag& f, const Flag& g) {
  if (f.ambient() != g.ambient() || !(g.signature() == f.signature().perp(f.ambient()))) {
    throw DomainError("sqcap: second flag must have the complementary signature");
  }
}

}  // namespace

double theta_sqcap(const Flag& f, const Flag& g) {
  require_dual(f, g);
  const int k = f.size();
  double out = 1.0;
  for (int i = 0; i < k; ++i) out = std::min(out, theta_cap(f[i], g[k - 1 - i]));
  return out;
}

SqcapResult sqcap(const Flag& f, const Flag& g) {
  SqcapResult out;
  out.theta = theta_sqcap(f, g);
  if (!(out.theta > kTransversalityThreshold)) {
    throw TransversalityError("sqcap: flags are not transversal (theta_sqcap = " +
                                  std::to_string(out.theta) + ")",
                              out.theta);
  }
  const int n = f.ambient();
  const int k = f.size();
  // E_i = F_i ∩ G_{k-i+2} (1-based) with F_{k+1} = G_{k+1} = V.
  auto f_at = [&](int i) { return i == k + 1 ? Subspace::whole(n) : f[i - 1]; };
  auto g_at = [&](int i) { return i == k + 1 ? Subspace::whole(n) : g[i - 1]; };
  for (int i = 1; i <= k + 1; ++i) out.decomposition.parts.push_back(intersect(f_at(i), g_at(k - i + 2)));
  out.decomposition.validate();
  return out;
}

Flag push_forward(const Matrix& g, const Flag& f) {
  std::vector<Subspace> spaces;
  for (int j = 0; j < f.size(); ++j) {
    try {
      spaces.push_back(push_forward(g, f[j]));
    } catch (const DomainError& e) {
      throw DomainError("push_forward(flag) component " + std::to_string(j + 1) + ": " + e.what());
    }
  }
  return Flag(f.signature(), std::move(spaces));
}

Flag pull_back(const Matrix& g, const Flag& f) {
  std::vector<Subspace> spaces;
  for (int j = 0; j < f.size(); ++j) {
    try {
      spaces.push_back(pull_back(g, f[j]));
    } catch (const DomainError& e) {
      throw DomainError("pull_back(flag) component " + std::to_string(j + 1) + ": " + e.what());
    }
  }
  return Flag(f.signature(), std::move(spaces));
}

}  // namespace aval
