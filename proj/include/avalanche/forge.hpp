#pragma once

#include <cstdint>
#include <optional>

#include "avalanche/ap.hpp"
#include "avalanche/random.hpp"

namespace aval {

struct ForgeSpec {
  int n = 2;
  int m = 2;
  double kappa = 0.01;
  double epsilon = 0.5;
  std::uint64_t seed = 0;
  double norm_min = 1.0;  // s_1 drawn log-uniform in [norm_min, norm_max]
  double norm_max = 1.0;
  std::optional<double> regime_c;  // when set, kappa <= regime_c epsilon^2 is required

  void validate() const;
};

inline constexpr int kForgeAttempts = 10000;

// Every g_i = U_i D_i V_i^T with s_{tau_j + 1} = kappa s_{tau_j} exactly and
// alpha_tau(g_{i-1}, g_i) >= epsilon.  Throws ForgeError if a link cannot be
// placed within kForgeAttempts draws.
Chain forge_chain(const ForgeSpec& spec);
Chain forge_flag_chain(const ForgeSpec& spec, const Signature& tau);

// g_i' = g_i + t G_i with Gaussian G_i and t chosen so d_rel(g_i, g_i') = 0.9 delta at most.
Chain perturb_chain(const Chain& chain, double delta, std::uint64_t seed);

}  // namespace aval
