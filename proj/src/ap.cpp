#include "avalanche/ap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "avalanche/exterior.hpp"
#include "avalanche/grassmann.hpp"

namespace aval {

namespace {

// Slack when a hypothesis quantity sits exactly on its threshold.
constexpr double kThresholdSlack = 1e-12;

// s_{k+1} / s_k read back from an SVD is only resolved to about
// eps * s_1 / s_k in absolute terms.
double sigma_resolution(const Vector& s, const Signature& tau) {
  double out = 0.0;
  for (int d : tau.dims) {
    const double sk = s(d - 1);
    out = std::max(out, sk > 0 ? 32 * std::numeric_limits<double>::epsilon() * s(0) / sk : 0.0);
  }
  return out;
}

std::string index_list(const std::vector<int>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
  return os.str();
}

// log s_1 + ... + log s_k for k = 0..m.
std::vector<double> log_partials(const Matrix& g) {
  const Vector s = singular_values(g);
  std::vector<double> out(static_cast<std::size_t>(s.size()) + 1, 0.0);
  for (Index l = 0; l < s.size(); ++l) out[static_cast<std::size_t>(l) + 1] = out[static_cast<std::size_t>(l)] + std::log(s(l));
  return out;
}

// log p_{tau_j}(g) for j = 0..k from the log partial products.
std::vector<double> tau_partials(const std::vector<double>& partials, const Signature& tau) {
  std::vector<double> out{0.0};
  for (int d : tau.dims) out.push_back(partials[static_cast<std::size_t>(d)]);
  return out;
}

Conclusion make_conclusion(std::string name, double raw, double formula, double multiplier) {
  Conclusion c;
  c.name = std::move(name);
  c.raw = raw;
  c.formula = formula;
  c.multiplier = multiplier;
  c.bound = multiplier * formula;
  c.pass = raw <= c.bound * (1 + kThresholdSlack);
  return c;
}

std::vector<Svp> default_svps(int k) {
  std::vector<Svp> out;
  for (int j = 1; j <= k; ++j) out.push_back(Svp::block(j));
  for (int j = 2; j <= k; ++j) out.push_back(Svp::partial(j));
  return out;
}

}  // namespace

std::string APHypotheses::describe() const {
  std::ostringstream os;
  if (!failing_sigmas.empty()) os << "sigma > kappa at indices " << index_list(failing_sigmas);
  if (!failing_alphas.empty()) {
    if (!failing_sigmas.empty()) os << "; ";
    os << "alpha < epsilon at indices " << index_list(failing_alphas);
  }
  if (failing_sigmas.empty() && failing_alphas.empty()) os << "hypotheses hold";
  return os.str();
}

Svp Svp::partial(int j) {
  Svp s;
  for (int l = 1; l <= j; ++l) s.blocks.push_back(l);
  return s;
}

std::string Svp::name() const {
  Signature identity;
  const int top = blocks.empty() ? 0 : *std::max_element(blocks.begin(), blocks.end());
  for (int l = 1; l <= top; ++l) identity.dims.push_back(l);
  return name(identity);
}

std::string Svp::name(const Signature& tau) const {
  std::vector<int> sorted = blocks;
  std::sort(sorted.begin(), sorted.end());
  bool prefix = !sorted.empty();
  for (std::size_t i = 0; i < sorted.size(); ++i) prefix = prefix && sorted[i] == static_cast<int>(i) + 1;
  if (prefix) return "p_" + std::to_string(tau[static_cast<int>(sorted.size()) - 1]);
  std::string out;
  for (std::size_t i = 0; i < sorted.size(); ++i) out += (i ? "*pi_" : "pi_") + std::to_string(sorted[i]);
  return out;
}

double Svp::log_value(const std::vector<double>& log_p) const {
  double out = 0.0;
  for (int j : blocks) {
    out += log_p[static_cast<std::size_t>(j)] - log_p[static_cast<std::size_t>(j) - 1];
  }
  return out;
}

bool APReport::pass() const {
  if (!hypotheses.pass || !identities_ok) return false;
  for (const Conclusion& c : conclusions)
    if (!c.pass) return false;
  for (const SvpResult& s : svps)
    if (!s.conclusion.pass) return false;
  return true;
}

APHypotheses check_flag_hypotheses(const Chain& chain, const Signature& tau, double kappa, double epsilon,
                                   const ApConstants& k) {
  const std::size_t n = chain.size();
  if (n < 2) throw DomainError("check_hypotheses: need a chain of at least two maps");
  const int m = chain.dim();
  tau.validate(m, true);

  APHypotheses h;
  h.kappa = kappa;
  h.epsilon = epsilon;
  h.c = k.c;
  h.tau = tau;
  std::vector<std::vector<double>> partials;
  partials.reserve(n);
  bool strict_gaps = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = sigma_tau(chain[i], tau);
    h.sigmas.push_back(s);
    const double slack = sigma_resolution(singular_values(chain[i]), tau);
    if (!(s <= kappa * (1 + kThresholdSlack) + slack)) h.failing_sigmas.push_back(static_cast<int>(i));
    if (!(s < kappa)) strict_gaps = false;
    partials.push_back(log_partials(chain[i]));
  }

  bool strict_ratios = true;
  for (std::size_t i = 1; i < n; ++i) {
    bool defined = true;
    for (int d : tau.dims) defined = defined && has_strict_gap(chain[i - 1], d) && has_strict_gap(chain[i], d);
    const double a = defined ? alpha_maps(chain[i - 1], chain[i], tau) : std::numeric_limits<double>::quiet_NaN();
    h.alphas.push_back(a);
    if (!(a >= epsilon * (1 - kThresholdSlack))) h.failing_alphas.push_back(static_cast<int>(i));

    const std::vector<double> pair = log_partials(chain[i] * chain[i - 1]);
    double ratio = 1.0;
    for (int d : tau.dims) {
      const auto u = static_cast<std::size_t>(d);
      ratio = std::min(ratio, std::exp(pair[u] - partials[i][u] - partials[i - 1][u]));
    }
    h.norm_ratios.push_back(ratio);
    if (!(ratio > epsilon)) strict_ratios = false;
  }

  h.gaps_ok = h.failing_sigmas.empty();
  h.angles_ok = h.failing_alphas.empty();
  h.pass = h.gaps_ok && h.angles_ok;
  h.practical_ok = strict_gaps && strict_ratios;
  h.practical_alpha_bound = epsilon * std::sqrt(1 - 2 * k.c * k.c * epsilon * epsilon);
  h.regime_ok = kappa <= k.c * epsilon * epsilon;
  return h;
}

APHypotheses check_hypotheses(const Chain& chain, double kappa, double epsilon, const ApConstants& k) {
  return check_flag_hypotheses(chain, Signature{1}, kappa, epsilon, k);
}

APReport run_flag_ap(const Chain& chain, const Signature& tau, double kappa, double epsilon,
                     const std::vector<Svp>& selection, const ApConstants& k) {
  APReport r;
  r.hypotheses = check_flag_hypotheses(chain, tau, kappa, epsilon, k);
  if (!r.hypotheses.pass) {
    throw HypothesisError("run_ap: hypotheses fail: " + r.hypotheses.describe(), r.hypotheses);
  }
  const std::size_t n = chain.size();
  const int m = chain.dim();
  const int blocks = tau.size();
  r.n = static_cast<int>(n);

  // Levels whose exterior chains are multiplied out: every tau_j and its neighbours.
  std::set<int> levels;
  for (int d : tau.dims) {
    for (int l : {d - 1, d, d + 1})
      if (l >= 1 && l <= m) levels.insert(l);
  }
  std::vector<double> log_p(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<ScaledMatrix> products(static_cast<std::size_t>(m) + 1);
  for (int l : levels) {
    products[static_cast<std::size_t>(l)] = chain.exterior(l).product();
    log_p[static_cast<std::size_t>(l)] = products[static_cast<std::size_t>(l)].log_norm();
  }

  r.log_sigma_product = -std::numeric_limits<double>::infinity();
  for (int d : tau.dims) {
    const auto u = static_cast<std::size_t>(d);
    const double ls = (log_p[u + 1] - log_p[u]) - (log_p[u] - log_p[u - 1]);
    r.log_sigma_product = std::max(r.log_sigma_product, ls);
  }
  r.sigma_product = std::exp(r.log_sigma_product);

  for (int d : tau.dims) {
    const SVDFactors p = svd(products[static_cast<std::size_t>(d)].unit);
    const Matrix first = d == 1 ? chain[0] : exterior_power(chain[0], d);
    const Matrix last = d == 1 ? chain[n - 1] : exterior_power(chain[n - 1], d);
    const SVDFactors f = svd(first);
    const SVDFactors e = svd(last);
    r.d_start = std::max(r.d_start, proj_metrics(Vector(p.right.col(0)), Vector(f.right.col(0))).d);
    r.d_end = std::max(r.d_end, proj_metrics(Vector(p.left.col(0)), Vector(e.left.col(0))).d);
  }

  // log p_{tau_j} of the product, the factors and the adjacent pairs.
  std::vector<double> product_p{0.0};
  for (int d : tau.dims) product_p.push_back(log_p[static_cast<std::size_t>(d)]);
  std::vector<std::vector<double>> factor_p(n), pair_p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> partials = log_partials(chain[i]);
    factor_p[i] = tau_partials(partials, tau);
    if (i >= 1) pair_p[i] = tau_partials(log_partials(chain[i] * chain[i - 1]), tau);
  }
  // With two maps the product is the single pair; the same number is used for both.
  if (n == 2) product_p = pair_p[1];

  r.identity_error = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> s = log_partials(chain[i]);
    double previous = 0.0;
    double accumulated = 0.0;
    for (int j = 1; j <= blocks; ++j) {
      const int hi = tau[j - 1];
      const int lo = j == 1 ? 0 : tau[j - 2];
      const double block = s[static_cast<std::size_t>(hi)] - s[static_cast<std::size_t>(lo)];
      const double p_hi = std::log(op_norm(hi == 1 ? chain[i] : exterior_power(chain[i], hi)));
      r.identity_error = std::max(r.identity_error, std::abs(block - (p_hi - previous)));
      accumulated += block;
      r.identity_error = std::max(r.identity_error, std::abs(p_hi - accumulated));
      previous = p_hi;
    }
  }
  r.identities_ok = r.identity_error <= 1e-8;

  const double formula4 = static_cast<double>(n) * kappa / (epsilon * epsilon);
  auto telescope = [&](const Svp& svp) {
    SvpResult out;
    out.svp = svp;
    out.name = svp.name(tau);
    double t = svp.log_value(product_p);
    for (std::size_t i = 1; i + 1 < n; ++i) t += svp.log_value(factor_p[i]);
    for (std::size_t i = 1; i < n; ++i) t -= svp.log_value(pair_p[i]);
    out.signed_telescoped = t;
    out.telescoped = std::abs(t);
    out.product_ratio = std::exp(t);
    out.conclusion = make_conclusion("telescoped[" + out.name + "]", out.telescoped, formula4, k.c4);
    const bool in_band =
        out.product_ratio >= std::exp(-out.conclusion.bound) && out.product_ratio <= std::exp(out.conclusion.bound);
    const bool log_matches = std::abs(std::log(out.product_ratio) - t) <= 1e-12 * std::max(1.0, std::abs(t));
    out.remark_consistent = log_matches && (in_band == out.conclusion.pass ||
                                            std::abs(out.telescoped - out.conclusion.bound) <= 1e-9);
    return out;
  };

  const SvpResult first = telescope(Svp::partial(1));
  r.telescoped = first.telescoped;

  const double formula12 = kappa / epsilon;
  r.conclusions.push_back(make_conclusion("start_direction", r.d_start, formula12, k.c1));
  r.conclusions.push_back(make_conclusion("end_direction", r.d_end, formula12, k.c2));

  Conclusion gap;
  gap.name = "product_gap";
  gap.raw = r.sigma_product;
  gap.multiplier = 1.0;
  const double log_rate = std::log(kappa * (4 + 2 * epsilon) / (epsilon * epsilon));
  gap.log_bound = static_cast<double>(n) * log_rate;
  gap.log_raw = r.log_sigma_product;
  gap.formula = std::exp(*gap.log_bound);
  gap.bound = gap.formula;
  gap.pass = *gap.log_raw <= *gap.log_bound + kThresholdSlack * std::max(1.0, std::abs(*gap.log_bound));
  r.conclusions.push_back(gap);

  Conclusion tele = first.conclusion;
  tele.name = "telescoped";
  r.conclusions.push_back(tele);

  const std::vector<Svp> chosen = selection.empty() ? default_svps(blocks) : selection;
  for (const Svp& s : chosen) {
    for (int j : s.blocks) {
      if (j < 1 || j > blocks) throw DomainError("run_flag_ap: block index " + std::to_string(j) + " outside tau");
    }
    r.svps.push_back(telescope(s));
  }
  return r;
}

APReport run_ap(const Chain& chain, double kappa, double epsilon, const ApConstants& k) {
  return run_flag_ap(chain, Signature{1}, kappa, epsilon, {}, k);
}

}  // namespace aval
