#pragma once

#include <optional>
#include <vector>

#include "avalanche/flag.hpp"

namespace aval {

inline constexpr double kStrictGap = 1e-10;

struct GapProfile {
  Vector singulars;           // s_1 >= ... >= s_n
  std::vector<double> gr;     // gr[k-1] = s_k / s_{k+1}, +inf when s_{k+1} = 0 < s_k
  std::vector<double> sigma;  // sigma[k-1] = 1 / gr[k-1]
  double least_expansion = 0.0;
  std::optional<double> ell;  // max(log|g|, log|g^-1|) for invertible g

  double gap(int k) const { return gr[static_cast<std::size_t>(k - 1)]; }
  double inverse_gap(int k) const { return sigma[static_cast<std::size_t>(k - 1)]; }
};

GapProfile gap_profile(const Matrix& g);

// gr_k computed from norms of exterior powers instead of singular values.
double gap_ratio_exterior(const Matrix& g, int k);

double gap_ratio_tau(const Matrix& g, const Signature& tau);
double sigma_tau(const Matrix& g, const Signature& tau);
bool has_strict_gap(const Matrix& g, int k);

ProjPoint most_expanding_direction(const Matrix& g);
Subspace most_expanding_subspace(const Matrix& g, int k);
Flag most_expanding_flag(const Matrix& g, const Signature& tau);
Subspace least_expanding_subspace(const Matrix& g, int k);
Flag least_expanding_flag(const Matrix& g, const Signature& tau);

double oplus(double a, double b);

double alpha_maps(const Matrix& g, const Matrix& g2);
double alpha_maps(const Matrix& g, const Matrix& g2, int k);
double alpha_maps(const Matrix& g, const Matrix& g2, const Signature& tau);

double beta_maps(const Matrix& g, const Matrix& g2);
double beta_maps(const Matrix& g, const Matrix& g2, int k);
double beta_maps(const Matrix& g, const Matrix& g2, const Signature& tau);

// A product exp(log_scale) * unit with |unit|_F = 1 (or unit = 0).
struct ScaledMatrix {
  Matrix unit;
  double log_scale = 0.0;

  bool is_zero() const { return unit.isZero(0.0); }
  // log of the operator norm of the represented matrix (-inf for zero).
  double log_norm() const;
};

ScaledMatrix scaled(const Matrix& g);
// Multiplies on the left: returns g * p.
ScaledMatrix left_multiply(const Matrix& g, const ScaledMatrix& p);
// g_{end-1} ... g_{begin}.
ScaledMatrix scaled_product(const std::vector<Matrix>& chain, std::size_t begin, std::size_t end);
ScaledMatrix scaled_product(const std::vector<Matrix>& chain);

struct RiftValue {
  double value = 1.0;
  double log_value = 0.0;
  Signature level{1};
};

RiftValue rift(const std::vector<Matrix>& chain);
RiftValue rift(const std::vector<Matrix>& chain, int k);
RiftValue rift(const std::vector<Matrix>& chain, const Signature& tau);

struct SandwichStep {
  int index = 0;  // i, pairing the prefix g^(i) = g_{i-1}...g_0 with g_i
  double alpha = 0.0;
  double beta = 0.0;
  double ratio = 0.0;  // |g_i g^(i)| / (|g_i| |g^(i)|)
  double sigma_prefix = 0.0;
  double sigma_factor = 0.0;
  std::optional<double> angle_rift_lower;
  bool holds = false;
};

struct RiftSandwich {
  std::vector<SandwichStep> steps;
  double log_alpha_product = 0.0;
  double log_rift = 0.0;
  double log_beta_product = 0.0;
  double lower_slack = 0.0;  // log_rift - log_alpha_product
  double upper_slack = 0.0;  // log_beta_product - log_rift
  bool chain_holds = false;
  bool steps_hold = false;
};

RiftSandwich rift_sandwich(const std::vector<Matrix>& chain, double slack = 1e-10);

}  // namespace aval
