#include "avalanche/singular.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "avalanche/errors.hpp"

namespace aval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_gap(const Matrix& g, int k, const char* where) {
  if (!has_strict_gap(g, k)) {
    throw GapError(std::string(where) + ": no strict gap at k=" + std::to_string(k) +
                   " (gr_k = " + std::to_string(gap_profile(g).gap(k)) + ")");
  }
}

}  // namespace

GapProfile gap_profile(const Matrix& g) {
  GapProfile p;
  p.singulars = singular_values(g);
  const Index n = p.singulars.size();
  for (Index k = 0; k + 1 < n; ++k) {
    const double top = p.singulars(k);
    const double next = p.singulars(k + 1);
    double gr = 1.0;
    if (next > 0.0) {
      gr = top / next;
    } else if (top > 0.0) {
      gr = kInf;
    }
    p.gr.push_back(gr);
    p.sigma.push_back(std::isinf(gr) ? 0.0 : 1.0 / gr);
  }
  p.least_expansion = p.singulars(n - 1);
  if (p.least_expansion > 0.0) {
    p.ell = std::max(std::log(p.singulars(0)), -std::log(p.least_expansion));
  }
  return p;
}

double gap_ratio_exterior(const Matrix& g, int k) {
  require_square(g, "gap_ratio_exterior");
  const int n = static_cast<int>(g.rows());
  if (k < 1 || k >= n) throw DomainError("gap_ratio_exterior: k outside 1..n-1");
  const double mid = op_norm(exterior_power(g, k));
  return mid * mid / (op_norm(exterior_power(g, k - 1)) * op_norm(exterior_power(g, k + 1)));
}

bool has_strict_gap(const Matrix& g, int k) {
  require_square(g, "has_strict_gap");
  if (k < 1 || k >= g.rows()) throw DomainError("gap index outside 1..n-1");
  return gap_profile(g).gap(k) > 1.0 + kStrictGap;
}

double gap_ratio_tau(const Matrix& g, const Signature& tau) {
  tau.validate(static_cast<int>(g.rows()), true);
  const GapProfile p = gap_profile(g);
  double out = kInf;
  for (int d : tau.dims) out = std::min(out, p.gap(d));
  return out;
}

double sigma_tau(const Matrix& g, const Signature& tau) {
  tau.validate(static_cast<int>(g.rows()), true);
  const GapProfile p = gap_profile(g);
  double out = 0.0;
  for (int d : tau.dims) out = std::max(out, p.inverse_gap(d));
  return out;
}

ProjPoint most_expanding_direction(const Matrix& g) {
  require_gap(g, 1, "most_expanding_direction");
  return ProjPoint(svd(g).right.col(0));
}

Subspace most_expanding_subspace(const Matrix& g, int k) {
  require_square(g, "most_expanding_subspace");
  const int n = static_cast<int>(g.rows());
  if (k < 0 || k > n) throw DomainError("most_expanding_subspace: k outside 0..n");
  if (k == 0) return Subspace::zero(n);
  if (k == n) return Subspace::whole(n);
  require_gap(g, k, "most_expanding_subspace");
  return Subspace::from_frame(svd(g).right.leftCols(k));
}

Flag most_expanding_flag(const Matrix& g, const Signature& tau) {
  tau.validate(static_cast<int>(g.rows()), true);
  std::vector<Subspace> spaces;
  for (int d : tau.dims) spaces.push_back(most_expanding_subspace(g, d));
  return Flag(tau, std::move(spaces));
}

Subspace least_expanding_subspace(const Matrix& g, int k) {
  require_square(g, "least_expanding_subspace");
  const int n = static_cast<int>(g.rows());
  if (k < 0 || k > n) throw DomainError("least_expanding_subspace: k outside 0..n");
  return complement(most_expanding_subspace(g, n - k));
}

Flag least_expanding_flag(const Matrix& g, const Signature& tau) {
  tau.validate(static_cast<int>(g.rows()), true);
  std::vector<Subspace> spaces;
  for (int d : tau.dims) spaces.push_back(least_expanding_subspace(g, d));
  return Flag(tau, std::move(spaces));
}

double oplus(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
    throw DomainError("oplus: arguments must lie in [0,1]");
  }
  return a + b - a * b;
}

double alpha_maps(const Matrix& g, const Matrix& g2) { return alpha_maps(g, g2, 1); }

double alpha_maps(const Matrix& g, const Matrix& g2, int k) {
  if (g.rows() != g2.rows()) throw ShapeError("alpha_maps: dimension mismatch");
  return alpha_subspaces(most_expanding_subspace(g.transpose(), k), most_expanding_subspace(g2, k));
}

double alpha_maps(const Matrix& g, const Matrix& g2, const Signature& tau) {
  double out = 1.0;
  for (int d : tau.dims) out = std::min(out, alpha_maps(g, g2, d));
  return out;
}

double beta_maps(const Matrix& g, const Matrix& g2) { return beta_maps(g, g2, Signature{1}); }

double beta_maps(const Matrix& g, const Matrix& g2, int k) { return beta_maps(g, g2, Signature{k}); }

double beta_maps(const Matrix& g, const Matrix& g2, const Signature& tau) {
  const double a = alpha_maps(g, g2, tau);
  const double s1 = sigma_tau(g, tau);
  const double s2 = sigma_tau(g2, tau);
  return std::sqrt(oplus(oplus(s1 * s1, a * a), s2 * s2));
}

double ScaledMatrix::log_norm() const {
  if (is_zero()) return -kInf;
  return log_scale + std::log(op_norm(unit));
}

ScaledMatrix scaled(const Matrix& g) {
  const double f = g.norm();
  if (!(f > 0.0)) return ScaledMatrix{Matrix::Zero(g.rows(), g.cols()), 0.0};
  return ScaledMatrix{g / f, std::log(f)};
}

ScaledMatrix left_multiply(const Matrix& g, const ScaledMatrix& p) {
  ScaledMatrix out = scaled(g * p.unit);
  if (!out.is_zero()) out.log_scale += p.log_scale;
  return out;
}

ScaledMatrix scaled_product(const std::vector<Matrix>& chain, std::size_t begin, std::size_t end) {
  if (begin >= end || end > chain.size()) throw DomainError("scaled_product: empty or invalid range");
  ScaledMatrix p = scaled(chain[begin]);
  for (std::size_t i = begin + 1; i < end; ++i) p = left_multiply(chain[i], p);
  return p;
}

ScaledMatrix scaled_product(const std::vector<Matrix>& chain) {
  return scaled_product(chain, 0, chain.size());
}

RiftValue rift(const std::vector<Matrix>& chain) { return rift(chain, 1); }

RiftValue rift(const std::vector<Matrix>& chain, int k) {
  if (chain.empty()) throw DomainError("rift: empty chain");
  std::vector<Matrix> powers;
  powers.reserve(chain.size());
  double log_norms = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    powers.push_back(k == 1 ? chain[i] : exterior_power(chain[i], k));
    const double norm = op_norm(powers.back());
    if (!(norm > 0.0)) throw DomainError("rift: factor " + std::to_string(i) + " has zero norm");
    log_norms += std::log(norm);
  }
  RiftValue out;
  out.level = Signature{k};
  out.log_value = std::min(0.0, scaled_product(powers).log_norm() - log_norms);
  out.value = std::exp(out.log_value);
  return out;
}

RiftValue rift(const std::vector<Matrix>& chain, const Signature& tau) {
  RiftValue out;
  out.log_value = 0.0;
  for (int d : tau.dims) out.log_value = std::min(out.log_value, rift(chain, d).log_value);
  out.value = std::exp(out.log_value);
  out.level = tau;
  return out;
}

RiftSandwich rift_sandwich(const std::vector<Matrix>& chain, double slack) {
  if (chain.size() < 2) throw DomainError("rift_sandwich: need at least two matrices");
  RiftSandwich out;
  out.log_rift = rift(chain).log_value;
  out.steps_hold = true;
  ScaledMatrix prefix = scaled(chain[0]);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const Matrix& gi = chain[i];
    if (!has_strict_gap(prefix.unit, 1)) {
      throw GapError("rift_sandwich: prefix product g^(" + std::to_string(i) + ") has no strict gap");
    }
    if (!has_strict_gap(gi, 1)) {
      throw GapError("rift_sandwich: factor g_" + std::to_string(i) + " has no strict gap");
    }
    SandwichStep step;
    step.index = static_cast<int>(i);
    step.alpha = alpha_maps(prefix.unit, gi);
    step.beta = beta_maps(prefix.unit, gi);
    step.ratio = op_norm(gi * prefix.unit) / (op_norm(gi) * op_norm(prefix.unit));
    step.sigma_prefix = gap_profile(prefix.unit).inverse_gap(1);
    step.sigma_factor = gap_profile(gi).inverse_gap(1);
    const double radicand =
        1.0 - (step.sigma_prefix * step.sigma_prefix + step.sigma_factor * step.sigma_factor) /
                  (step.ratio * step.ratio);
    if (radicand > 0.0) step.angle_rift_lower = step.ratio * std::sqrt(radicand);
    step.holds = step.alpha <= step.ratio + slack && step.ratio <= step.beta + slack &&
                 (!step.angle_rift_lower || *step.angle_rift_lower <= step.alpha + slack);
    out.steps_hold = out.steps_hold && step.holds;
    out.log_alpha_product += std::log(step.alpha);
    out.log_beta_product += std::log(step.beta);
    out.steps.push_back(step);
    prefix = left_multiply(gi, prefix);
  }
  out.lower_slack = out.log_rift - out.log_alpha_product;
  out.upper_slack = out.log_beta_product - out.log_rift;
  out.chain_holds = out.lower_slack >= -slack && out.upper_slack >= -slack;
  return out;
}

}  // namespace aval
