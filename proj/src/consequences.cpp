#include <cmath>
#include <sstream>

#include "avalanche/ap.hpp"
#include "avalanche/grassmann.hpp"
#include "avalanche/projective.hpp"

namespace aval {

AlmostInvarianceReport almost_invariance(const Chain& chain, int i, double kappa, double epsilon,
                                         const ApConstants& k) {
  const int n = static_cast<int>(chain.size());
  if (i < 0 || i > n - 2) {
    throw DomainError("almost_invariance: index " + std::to_string(i) + " outside [0, " + std::to_string(n - 2) + "]");
  }
  AlmostInvarianceReport r;
  r.index = i;
  const auto start = static_cast<std::size_t>(i);
  r.window = check_hypotheses(chain.slice(start, chain.size()), kappa, epsilon, k);
  if (!r.window.pass) {
    throw HypothesisError("almost_invariance: hypotheses fail on the window: " + r.window.describe(), r.window);
  }

  const ProjPoint tail = most_expanding_direction(chain.window(start + 1, chain.size()).unit);
  const ProjPoint whole = most_expanding_direction(chain.window(start, chain.size()).unit);
  const ProjPoint moved = projective_action(chain[start].transpose(), tail);
  r.distance = proj_metrics(moved, whole).d;

  const double log_formula = std::log(kappa / epsilon) +
                             (n - i) * std::log(kappa * (4 + 2 * epsilon) / (epsilon * epsilon));
  Conclusion& c = r.conclusion;
  c.name = "almost_invariance";
  c.raw = r.distance;
  c.multiplier = k.almost_invariance;
  c.formula = std::exp(log_formula);
  c.bound = c.multiplier * c.formula;
  c.log_raw = std::log(r.distance);
  c.log_bound = std::log(c.multiplier) + log_formula;
  r.floor_applied = c.bound < kResolutionFloor;
  c.pass = r.distance <= std::max(c.bound, kResolutionFloor) * (1 + 1e-12);
  return r;
}

PerturbationReport perturbation_compare(const Chain& chain, const Chain& chain2, double kappa, double epsilon,
                                        double delta, const ApConstants& k) {
  if (chain.size() != chain2.size() || chain.dim() != chain2.dim()) {
    throw ShapeError("perturbation_compare: chains differ in length or dimension");
  }
  if (!(delta > 0)) throw DomainError("perturbation_compare: delta must be positive");
  PerturbationReport r;
  r.first = check_hypotheses(chain, kappa, epsilon, k);
  if (!r.first.pass) throw HypothesisError("perturbation_compare: first chain: " + r.first.describe(), r.first);
  r.second = check_hypotheses(chain2, kappa, epsilon, k);
  if (!r.second.pass) throw HypothesisError("perturbation_compare: second chain: " + r.second.describe(), r.second);

  std::vector<int> offending;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    r.d_rel.push_back(relative_distance(chain[i], chain2[i]));
    if (!(r.d_rel.back() < delta)) offending.push_back(static_cast<int>(i));
  }
  if (!offending.empty()) {
    std::ostringstream os;
    os << "perturbation_compare: d_rel >= delta at indices ";
    for (std::size_t j = 0; j < offending.size(); ++j) os << (j ? ", " : "") << offending[j];
    throw DomainError(os.str());
  }

  const ScaledMatrix p = chain.product();
  const ScaledMatrix p2 = chain2.product();
  const double n = static_cast<double>(chain.size());

  r.direction.name = "perturbation_direction";
  r.direction.raw = proj_metrics(most_expanding_direction(p.unit), most_expanding_direction(p2.unit)).d;
  r.direction.formula = kappa / epsilon + 8 * delta;
  r.direction.multiplier = k.perturbation_direction;
  r.direction.bound = r.direction.multiplier * r.direction.formula;
  r.direction.pass = r.direction.raw <= r.direction.bound;

  r.log_norm.name = "perturbation_log_norm";
  r.log_norm.raw = std::abs(p.log_norm() - p2.log_norm());
  r.log_norm.formula = n * (kappa / (epsilon * epsilon) + delta / epsilon);
  r.log_norm.multiplier = k.perturbation_norm;
  r.log_norm.bound = r.log_norm.multiplier * r.log_norm.formula;
  r.log_norm.pass = r.log_norm.raw <= r.log_norm.bound;
  return r;
}

}  // namespace aval
