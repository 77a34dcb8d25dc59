#pragma once

#include <vector>

#include "avalanche/grassmann.hpp"

namespace aval {

// Strictly increasing dimension pattern tau = (tau_1 < ... < tau_k).
struct Signature {
  std::vector<int> dims;

  Signature() = default;
  Signature(std::initializer_list<int> d) : dims(d) {}
  explicit Signature(std::vector<int> d) : dims(std::move(d)) {}

  int size() const { return static_cast<int>(dims.size()); }
  int operator[](int j) const { return dims[static_cast<std::size_t>(j)]; }
  // Checks strict monotonicity and 1 <= tau_1, tau_k <= n (tau_k < n if strict).
  void validate(int n, bool strict = false) const;
  Signature perp(int n) const;
  bool operator==(const Signature&) const = default;
};

class Flag {
 public:
  Flag(Signature signature, std::vector<Subspace> spaces);

  // F_j spanned by the first tau_j columns of the given n x tau_k matrix.
  static Flag from_columns(const Matrix& columns, const Signature& signature);

  const Signature& signature() const { return signature_; }
  const std::vector<Subspace>& spaces() const { return spaces_; }
  const Subspace& operator[](int j) const { return spaces_[static_cast<std::size_t>(j)]; }
  int size() const { return signature_.size(); }
  int ambient() const { return spaces_.front().ambient(); }

 private:
  Signature signature_;
  std::vector<Subspace> spaces_;
};

// V = E_1 + ... + E_{k+1} (direct sum).
struct Decomposition {
  std::vector<Subspace> parts;

  void validate() const;
};

struct FlagComplement {
  Signature tau_perp;
  Flag complement;
};

FlagComplement flag_ops(const Flag& f);
Flag complement(const Flag& f);

struct FlagMetrics {
  double rho = 0.0;
  double d = 0.0;
  double delta = 0.0;
  double alpha = 1.0;
};

FlagMetrics flag_metric(const Flag& f, const Flag& g);
double alpha_flags(const Flag& f, const Flag& g);
bool same_flag(const Flag& f, const Flag& g, double tol = kSubspaceEqualityTolerance);

// Membership in the orthogonal hyperplane of F: alpha_tau(G, F) = 0.
bool in_orthogonal_hyperplane(const Flag& g, const Flag& f, double tol = 1e-12);

double theta_sqcap(const Flag& f, const Flag& g);

struct SqcapResult {
  double theta = 0.0;
  Decomposition decomposition;
};

// Intersection decomposition of F (signature tau) and G (signature tau-perp).
SqcapResult sqcap(const Flag& f, const Flag& g);

Flag push_forward(const Matrix& g, const Flag& f);
Flag pull_back(const Matrix& g, const Flag& f);

}  // namespace aval
