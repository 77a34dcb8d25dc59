#include "avalanche/forge.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace aval {

void ForgeSpec::validate() const {
  if (n < 2) throw DomainError("forge: n must be at least 2");
  if (m < 2) throw DomainError("forge: m must be at least 2");
  if (!(kappa > 0 && kappa < 1)) throw DomainError("forge: kappa must lie in (0, 1)");
  if (!(epsilon > 0 && epsilon < 1)) throw DomainError("forge: epsilon must lie in (0, 1)");
  if (!(norm_min > 0 && norm_min <= norm_max)) throw DomainError("forge: need 0 < norm_min <= norm_max");
  if (regime_c && !(kappa <= *regime_c * epsilon * epsilon)) {
    throw DomainError("forge: kappa exceeds regime_c * epsilon^2");
  }
}

namespace {

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

// Block j of the spectrum starts kappa below the end of block j-1; the rest
// of each block is log-uniform within a factor kappa of its first entry.
Vector forge_spectrum(Rng& rng, const ForgeSpec& spec, const Signature& tau) {
  const double s1 = log_uniform(rng, spec.norm_min, spec.norm_max);
  std::vector<int> ends = tau.dims;
  ends.push_back(spec.m);
  Vector s(spec.m);
  int at = 0;
  double first = s1;
  for (int end : ends) {
    s(at) = first;
    std::vector<double> rest;
    for (int l = at + 1; l < end; ++l) rest.push_back(log_uniform(rng, spec.kappa * first, first));
    std::sort(rest.begin(), rest.end(), std::greater<>());
    for (double v : rest) s(++at) = v;
    first = spec.kappa * s(at);
    ++at;
  }
  return s;
}

Matrix cayley(const Matrix& skew) {
  const Matrix id = Matrix::Identity(skew.rows(), skew.cols());
  return (id - 0.5 * skew).partialPivLu().solve(id + 0.5 * skew);
}

// An orthogonal R whose leading tau_j minors all have |det| >= target.
Matrix aligned_rotation(Rng& rng, int m, const Signature& tau, double target) {
  for (int attempt = 0; attempt < kForgeAttempts; ++attempt) {
    Matrix s = rng.gaussian(m, m);
    s = (0.5 * (s - s.transpose())).eval();
    s /= s.norm();
    const Matrix r = cayley(rng.uniform(0.0, 3.0) * s);
    bool ok = true;
    for (int d : tau.dims) ok = ok && std::abs(r.topLeftCorner(d, d).determinant()) >= target;
    if (ok) return r;
  }
  throw ForgeError("forge: no link reached the angle target after " + std::to_string(kForgeAttempts) + " draws");
}

}  // namespace

Chain forge_flag_chain(const ForgeSpec& spec, const Signature& tau) {
  spec.validate();
  tau.validate(spec.m, true);
  Rng rng(spec.seed, 0);
  // Margin so the measured angle stays above epsilon after rounding.
  const double target = spec.epsilon + 1e-12;
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(spec.n));
  Matrix previous_u;
  for (int i = 0; i < spec.n; ++i) {
    const Vector s = forge_spectrum(rng, spec, tau);
    const Matrix u = rng.haar(spec.m);
    const Matrix v = i == 0 ? rng.haar(spec.m) : Matrix(previous_u * aligned_rotation(rng, spec.m, tau, target));
    out.push_back(u * s.asDiagonal() * v.transpose());
    previous_u = u;
  }
  Chain chain(std::move(out));
  const APHypotheses h = check_flag_hypotheses(chain, tau, spec.kappa, spec.epsilon);
  if (!h.pass) throw ForgeError("forge: forged chain failed verification: " + h.describe());
  return chain;
}

Chain forge_chain(const ForgeSpec& spec) { return forge_flag_chain(spec, Signature{1}); }

Chain perturb_chain(const Chain& chain, double delta, std::uint64_t seed) {
  if (!(delta > 0)) throw DomainError("perturb_chain: delta must be positive");
  Rng rng(seed, 1);
  std::vector<Matrix> out;
  out.reserve(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Matrix& g = chain[i];
    const Matrix noise = rng.gaussian(g.rows(), g.cols());
    const double t = 0.9 * delta * op_norm(g) / op_norm(noise);
    out.push_back(g + t * noise);
  }
  return Chain(std::move(out));
}

}  // namespace aval
