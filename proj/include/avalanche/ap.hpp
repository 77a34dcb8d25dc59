#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avalanche/errors.hpp"
#include "avalanche/singular.hpp"

namespace aval {

// An immutable chain g_0, ..., g_{n-1} of m x m matrices.
class Chain {
 public:
  Chain() = default;
  explicit Chain(std::vector<Matrix> matrices);

  std::size_t size() const { return matrices_.size(); }
  int dim() const { return matrices_.empty() ? 0 : static_cast<int>(matrices_.front().rows()); }
  const Matrix& operator[](std::size_t i) const { return matrices_[i]; }
  const std::vector<Matrix>& matrices() const { return matrices_; }

  // g^(j,i) = g_{j-1} ... g_i for 0 <= i < j <= n, re-multiplied on every call.
  ScaledMatrix window(std::size_t i, std::size_t j) const;
  // g^(i) = g^(i,0).
  ScaledMatrix prefix(std::size_t i) const { return window(0, i); }
  ScaledMatrix product() const { return window(0, size()); }

  // g_{n-1}^T, ..., g_0^T.
  Chain adjoint() const;
  // g_i, ..., g_{j-1}.
  Chain slice(std::size_t i, std::size_t j) const;
  // wedge_k g_0, ..., wedge_k g_{n-1}.
  Chain exterior(int k) const;
  Chain scaled_by(double lambda) const;

 private:
  std::vector<Matrix> matrices_;
};

// Multipliers for the bounds stated up to a universal constant, and the
// regime constant c of kappa <= c epsilon^2.
struct ApConstants {
  double c = 0.01;
  double c1 = 10.0;
  double c2 = 10.0;
  double c4 = 40.0;
  double almost_invariance = 10.0;
  double perturbation_direction = 10.0;
  double perturbation_norm = 10.0;
};

struct APHypotheses {
  double kappa = 0.0;
  double epsilon = 0.0;
  double c = 0.0;
  Signature tau{1};
  std::vector<double> sigmas;       // sigma_tau(g_i), i = 0..n-1
  std::vector<double> alphas;       // alpha_tau(g_{i-1}, g_i), i = 1..n-1
  std::vector<double> norm_ratios;  // min_j |wedge g_i g_{i-1}| / (|wedge g_i| |wedge g_{i-1}|)
  std::vector<int> failing_sigmas;
  std::vector<int> failing_alphas;
  bool gaps_ok = false;
  bool angles_ok = false;
  // The practical form: gr > 1/kappa strictly and norm ratios > epsilon.
  bool practical_ok = false;
  // epsilon sqrt(1 - 2 c^2 epsilon^2), the angle bound implied by the practical form.
  double practical_alpha_bound = 0.0;
  bool regime_ok = false;  // kappa <= c epsilon^2, reported only
  bool pass = false;       // gaps_ok and angles_ok

  std::string describe() const;
};

class HypothesisError : public Error {
 public:
  HypothesisError(const std::string& what, APHypotheses hypotheses)
      : Error(what), hypotheses_(std::move(hypotheses)) {}
  const APHypotheses& hypotheses() const { return hypotheses_; }

 private:
  APHypotheses hypotheses_;
};

// A raw quantity against multiplier * formula.  For quantities that may
// underflow, the comparison is made between the logs.
struct Conclusion {
  std::string name;
  double raw = 0.0;
  double formula = 0.0;
  double multiplier = 1.0;
  double bound = 0.0;
  std::optional<double> log_raw;
  std::optional<double> log_bound;
  bool pass = false;
};

// A tau-singular value product: the product of the block products pi_{tau,j}
// for j in blocks (1-based).  p_{tau_j} is blocks = {1, ..., j}.
struct Svp {
  std::vector<int> blocks;

  static Svp block(int j) { return Svp{{j}}; }
  static Svp partial(int j);
  // "p_j" for {1..j}, otherwise "pi_a*pi_b"; the tau overload names p by tau_j.
  std::string name() const;
  std::string name(const Signature& tau) const;
  // log pi(g) from log p_{tau_j}(g), j = 0..k, with log p_{tau_0} = 0.
  double log_value(const std::vector<double>& log_p) const;
};

struct SvpResult {
  Svp svp;
  std::string name;
  double signed_telescoped = 0.0;
  double telescoped = 0.0;
  // norm-product form of the same quantity, exp(signed_telescoped)
  double product_ratio = 1.0;
  bool remark_consistent = false;
  Conclusion conclusion;
};

struct APReport {
  APHypotheses hypotheses;
  int n = 0;
  double d_start = 0.0;  // d(v_tau(g^(n)), v_tau(g_0))
  double d_end = 0.0;    // d(v_tau(g^(n)*), v_tau(g_{n-1}*))
  double log_sigma_product = 0.0;
  double sigma_product = 0.0;
  // |log |g^(n)| + sum_{1..n-2} log |g_i| - sum_{1..n-1} log |g_i g_{i-1}||, for p_{tau_1}.
  double telescoped = 0.0;
  std::vector<Conclusion> conclusions;  // start_direction, end_direction, product_gap, telescoped
  std::vector<SvpResult> svps;
  double identity_error = 0.0;  // block / partial product identities
  bool identities_ok = false;

  bool pass() const;
};

APHypotheses check_hypotheses(const Chain& chain, double kappa, double epsilon, const ApConstants& k = {});
APHypotheses check_flag_hypotheses(const Chain& chain, const Signature& tau, double kappa, double epsilon,
                                   const ApConstants& k = {});

APReport run_ap(const Chain& chain, double kappa, double epsilon, const ApConstants& k = {});

// With an empty selection every block product and every partial product p_{tau_j} is checked.
APReport run_flag_ap(const Chain& chain, const Signature& tau, double kappa, double epsilon,
                     const std::vector<Svp>& svps = {}, const ApConstants& k = {});

// C^m identified with R^{2m} through z_r = x_{2r} + i x_{2r+1}.
Matrix realify(const CMatrix& g);
Chain realify(const std::vector<CMatrix>& chain);

double complex_sigma(const CMatrix& g);
// |<v(g*), v(g')>| with the Hermitian inner product.
double complex_alpha(const CMatrix& g, const CMatrix& g2);

struct ComplexAPReport {
  std::vector<double> sigmas;
  std::vector<double> alphas;
  bool complex_pass = false;
  double bridge_error = 0.0;  // max |alpha_(2)(g^R, g'^R) - alpha(g, g')^2|
  double sigma_error = 0.0;   // max |sigma_(2)(g^R) - sigma(g)|
  APReport real;              // run_flag_ap on the realified chain, tau = (2), epsilon^2
};

ComplexAPReport run_complex_ap(const std::vector<CMatrix>& chain, double kappa, double epsilon,
                               const ApConstants& k = {});

struct AlmostInvarianceReport {
  int index = 0;
  APHypotheses window;
  double distance = 0.0;
  Conclusion conclusion;
  bool floor_applied = false;
};

// d(phi_{g_i^T} v(g^(n,i+1)), v(g^(n,i))) for 0 <= i <= n-2.
AlmostInvarianceReport almost_invariance(const Chain& chain, int i, double kappa, double epsilon,
                                         const ApConstants& k = {});

struct PerturbationReport {
  APHypotheses first;
  APHypotheses second;
  std::vector<double> d_rel;
  Conclusion direction;  // d(v(g^(n)), v(g'^(n))) against C (kappa/epsilon + 8 delta)
  Conclusion log_norm;   // |log |g^(n)| / |g'^(n)|| against C n (kappa/epsilon^2 + delta/epsilon)
  bool pass() const { return direction.pass && log_norm.pass; }
};

PerturbationReport perturbation_compare(const Chain& chain, const Chain& chain2, double kappa, double epsilon,
                                        double delta, const ApConstants& k = {});

// Absolute floor for comparisons whose bound drops below double resolution.
inline constexpr double kResolutionFloor = 1e-14;

}  // namespace aval
