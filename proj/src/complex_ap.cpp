#include <cmath>
#include <limits>

#include "avalanche/ap.hpp"

namespace aval {

Matrix realify(const CMatrix& g) {
  const Index m = g.rows();
  Matrix out(2 * m, 2 * g.cols());
  for (Index r = 0; r < m; ++r) {
    for (Index c = 0; c < g.cols(); ++c) {
      const double a = g(r, c).real();
      const double b = g(r, c).imag();
      out(2 * r, 2 * c) = a;
      out(2 * r, 2 * c + 1) = -b;
      out(2 * r + 1, 2 * c) = b;
      out(2 * r + 1, 2 * c + 1) = a;
    }
  }
  return out;
}

Chain realify(const std::vector<CMatrix>& chain) {
  std::vector<Matrix> out;
  out.reserve(chain.size());
  for (const CMatrix& g : chain) out.push_back(realify(g));
  return Chain(std::move(out));
}

double complex_sigma(const CMatrix& g) {
  if (g.rows() != g.cols()) throw ShapeError("complex_sigma: matrix is not square");
  const Eigen::JacobiSVD<CMatrix> svd(g);
  const auto& s = svd.singularValues();
  if (s.size() < 2) return 0.0;
  if (s(0) == 0.0) return 1.0;
  return s(1) / s(0);
}

double complex_alpha(const CMatrix& g, const CMatrix& g2) {
  if (g.rows() != g.cols() || g2.rows() != g2.cols() || g.rows() != g2.rows()) {
    throw ShapeError("complex_alpha: need square matrices of the same size");
  }
  if (!(complex_sigma(g) < 1.0) || !(complex_sigma(g2) < 1.0)) {
    throw GapError("complex_alpha: top singular value is not simple");
  }
  const Eigen::JacobiSVD<CMatrix> a(g, Eigen::ComputeFullU);
  const Eigen::JacobiSVD<CMatrix> b(g2, Eigen::ComputeFullV);
  return std::abs(a.matrixU().col(0).dot(b.matrixV().col(0)));
}

ComplexAPReport run_complex_ap(const std::vector<CMatrix>& chain, double kappa, double epsilon,
                               const ApConstants& k) {
  if (chain.size() < 2) throw DomainError("run_complex_ap: need a chain of at least two maps");
  const Chain real = realify(chain);
  if (real.dim() < 4) throw DomainError("run_complex_ap: need m >= 2");

  ComplexAPReport r;
  bool ok = true;
  for (const CMatrix& g : chain) {
    r.sigmas.push_back(complex_sigma(g));
    ok = ok && r.sigmas.back() <= kappa * (1 + 1e-12) + 1e-14;
  }
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const bool defined = r.sigmas[i - 1] < 1.0 && r.sigmas[i] < 1.0;
    r.alphas.push_back(defined ? complex_alpha(chain[i - 1], chain[i]) : std::numeric_limits<double>::quiet_NaN());
    ok = ok && r.alphas.back() >= epsilon * (1 - 1e-12);
  }
  r.complex_pass = ok;

  const Signature tau{2};
  if (!ok) {
    const APHypotheses h = check_flag_hypotheses(real, tau, kappa, epsilon * epsilon, k);
    throw HypothesisError("run_complex_ap: hypotheses fail: " + h.describe(), h);
  }
  for (std::size_t i = 0; i < chain.size(); ++i) {
    r.sigma_error = std::max(r.sigma_error, std::abs(sigma_tau(real[i], tau) - r.sigmas[i]));
    if (i >= 1) {
      const double a = r.alphas[i - 1];
      r.bridge_error = std::max(r.bridge_error, std::abs(alpha_maps(real[i - 1], real[i], tau) - a * a));
    }
  }
  r.real = run_flag_ap(real, tau, kappa, epsilon * epsilon, {}, k);
  return r;
}

}  // namespace aval
