#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "avalanche/ap.hpp"
#include "avalanche/exterior.hpp"
#include "avalanche/experiment.hpp"
#include "avalanche/forge.hpp"
#include "avalanche/grassmann.hpp"
#include "avalanche/projective.hpp"

namespace py = pybind11;
using namespace aval;

namespace {

ForgeSpec make_spec(int n, int m, double kappa, double epsilon, std::uint64_t seed, double norm_min,
                    double norm_max, std::optional<double> regime_c) {
  ForgeSpec s;
  s.n = n;
  s.m = m;
  s.kappa = kappa;
  s.epsilon = epsilon;
  s.seed = seed;
  s.norm_min = norm_min;
  s.norm_max = norm_max;
  s.regime_c = regime_c;
  return s;
}

Signature signature(const std::vector<int>& dims) { return Signature(dims); }

// Accepts a Chain or any sequence of square arrays; construction errors keep their type.
Chain as_chain(const py::handle& h) {
  if (py::isinstance<Chain>(h)) return h.cast<Chain>();
  return Chain(h.cast<std::vector<Matrix>>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Avalanche principle verification for chains of real and complex matrices";

  auto base = py::register_exception<Error>(m, "AvalancheError", PyExc_RuntimeError);
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<GapError>(m, "GapError", base.ptr());
  py::register_exception<ForgeError>(m, "ForgeError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<HypothesisError>(m, "HypothesisError", base.ptr());

  py::class_<Chain>(m, "Chain")
      .def(py::init<std::vector<Matrix>>(), py::arg("matrices"))
      .def("__len__", &Chain::size)
      .def("__getitem__",
           [](const Chain& c, std::size_t i) {
             if (i >= c.size()) throw py::index_error();
             return c[i];
           })
      .def_property_readonly("dim", &Chain::dim)
      .def_property_readonly("matrices", &Chain::matrices)
      .def("adjoint", &Chain::adjoint)
      .def("slice", &Chain::slice);

  py::class_<ApConstants>(m, "ApConstants")
      .def(py::init<>())
      .def_readwrite("c", &ApConstants::c)
      .def_readwrite("c1", &ApConstants::c1)
      .def_readwrite("c2", &ApConstants::c2)
      .def_readwrite("c4", &ApConstants::c4)
      .def_readwrite("almost_invariance", &ApConstants::almost_invariance)
      .def_readwrite("perturbation_direction", &ApConstants::perturbation_direction)
      .def_readwrite("perturbation_norm", &ApConstants::perturbation_norm);

  py::class_<Conclusion>(m, "Conclusion")
      .def_readonly("name", &Conclusion::name)
      .def_readonly("raw", &Conclusion::raw)
      .def_readonly("formula", &Conclusion::formula)
      .def_readonly("multiplier", &Conclusion::multiplier)
      .def_readonly("bound", &Conclusion::bound)
      .def_readonly("log_raw", &Conclusion::log_raw)
      .def_readonly("log_bound", &Conclusion::log_bound)
      .def_readonly("passed", &Conclusion::pass)
      .def("__repr__", [](const Conclusion& c) {
        return "<Conclusion " + c.name + " raw=" + std::to_string(c.raw) + " bound=" + std::to_string(c.bound) +
               (c.pass ? " pass>" : " fail>");
      });

  py::class_<APHypotheses>(m, "APHypotheses")
      .def_readonly("kappa", &APHypotheses::kappa)
      .def_readonly("epsilon", &APHypotheses::epsilon)
      .def_readonly("sigmas", &APHypotheses::sigmas)
      .def_readonly("alphas", &APHypotheses::alphas)
      .def_readonly("norm_ratios", &APHypotheses::norm_ratios)
      .def_readonly("failing_sigmas", &APHypotheses::failing_sigmas)
      .def_readonly("failing_alphas", &APHypotheses::failing_alphas)
      .def_readonly("gaps_ok", &APHypotheses::gaps_ok)
      .def_readonly("angles_ok", &APHypotheses::angles_ok)
      .def_readonly("practical_ok", &APHypotheses::practical_ok)
      .def_readonly("regime_ok", &APHypotheses::regime_ok)
      .def_readonly("passed", &APHypotheses::pass)
      .def("describe", &APHypotheses::describe);

  py::class_<SvpResult>(m, "SvpResult")
      .def_readonly("name", &SvpResult::name)
      .def_readonly("signed_telescoped", &SvpResult::signed_telescoped)
      .def_readonly("telescoped", &SvpResult::telescoped)
      .def_readonly("product_ratio", &SvpResult::product_ratio)
      .def_readonly("remark_consistent", &SvpResult::remark_consistent)
      .def_readonly("conclusion", &SvpResult::conclusion);

  py::class_<APReport>(m, "APReport")
      .def_readonly("hypotheses", &APReport::hypotheses)
      .def_readonly("n", &APReport::n)
      .def_readonly("d_start", &APReport::d_start)
      .def_readonly("d_end", &APReport::d_end)
      .def_readonly("log_sigma_product", &APReport::log_sigma_product)
      .def_readonly("sigma_product", &APReport::sigma_product)
      .def_readonly("telescoped", &APReport::telescoped)
      .def_readonly("conclusions", &APReport::conclusions)
      .def_readonly("svps", &APReport::svps)
      .def_readonly("identity_error", &APReport::identity_error)
      .def_property_readonly("passed", &APReport::pass);

  py::class_<ComplexAPReport>(m, "ComplexAPReport")
      .def_readonly("sigmas", &ComplexAPReport::sigmas)
      .def_readonly("alphas", &ComplexAPReport::alphas)
      .def_readonly("complex_pass", &ComplexAPReport::complex_pass)
      .def_readonly("bridge_error", &ComplexAPReport::bridge_error)
      .def_readonly("sigma_error", &ComplexAPReport::sigma_error)
      .def_readonly("real", &ComplexAPReport::real);

  py::class_<AlmostInvarianceReport>(m, "AlmostInvarianceReport")
      .def_readonly("index", &AlmostInvarianceReport::index)
      .def_readonly("distance", &AlmostInvarianceReport::distance)
      .def_readonly("conclusion", &AlmostInvarianceReport::conclusion)
      .def_readonly("floor_applied", &AlmostInvarianceReport::floor_applied);

  py::class_<PerturbationReport>(m, "PerturbationReport")
      .def_readonly("d_rel", &PerturbationReport::d_rel)
      .def_readonly("direction", &PerturbationReport::direction)
      .def_readonly("log_norm", &PerturbationReport::log_norm)
      .def_property_readonly("passed", &PerturbationReport::pass);

  m.def("exterior_power", &exterior_power, py::arg("g"), py::arg("k"));
  m.def(
      "proj_metrics",
      [](const Vector& u, const Vector& v) {
        const Metrics x = proj_metrics(u, v);
        return py::dict(py::arg("delta") = x.delta, py::arg("d") = x.d, py::arg("rho") = x.rho);
      },
      py::arg("u"), py::arg("v"));
  m.def(
      "sigma_tau", [](const Matrix& g, const std::vector<int>& tau) { return sigma_tau(g, signature(tau)); },
      py::arg("g"), py::arg("tau") = std::vector<int>{1});
  m.def(
      "alpha_maps",
      [](const Matrix& g, const Matrix& g2, const std::vector<int>& tau) { return alpha_maps(g, g2, signature(tau)); },
      py::arg("g"), py::arg("g2"), py::arg("tau") = std::vector<int>{1});
  m.def(
      "beta_maps",
      [](const Matrix& g, const Matrix& g2, const std::vector<int>& tau) { return beta_maps(g, g2, signature(tau)); },
      py::arg("g"), py::arg("g2"), py::arg("tau") = std::vector<int>{1});
  m.def("relative_distance", &relative_distance, py::arg("g1"), py::arg("g2"));

  m.def(
      "check_hypotheses",
      [](const py::object& c, double kappa, double epsilon, const ApConstants& k) {
        return check_hypotheses(as_chain(c), kappa, epsilon, k);
      },
      py::arg("chain"), py::arg("kappa"), py::arg("epsilon"), py::arg("constants") = ApConstants{});
  m.def(
      "run_ap",
      [](const py::object& c, double kappa, double epsilon, const ApConstants& k) {
        return run_ap(as_chain(c), kappa, epsilon, k);
      },
      py::arg("chain"), py::arg("kappa"), py::arg("epsilon"), py::arg("constants") = ApConstants{});
  m.def(
      "run_flag_ap",
      [](const py::object& c, const std::vector<int>& tau, double kappa, double epsilon, const ApConstants& k) {
        return run_flag_ap(as_chain(c), signature(tau), kappa, epsilon, {}, k);
      },
      py::arg("chain"), py::arg("tau"), py::arg("kappa"), py::arg("epsilon"), py::arg("constants") = ApConstants{});
  m.def("run_complex_ap", &run_complex_ap, py::arg("chain"), py::arg("kappa"), py::arg("epsilon"),
        py::arg("constants") = ApConstants{});
  m.def("realify", py::overload_cast<const CMatrix&>(&realify), py::arg("g"));
  m.def(
      "almost_invariance",
      [](const py::object& c, int i, double kappa, double epsilon, const ApConstants& k) {
        return almost_invariance(as_chain(c), i, kappa, epsilon, k);
      },
      py::arg("chain"), py::arg("i"), py::arg("kappa"), py::arg("epsilon"), py::arg("constants") = ApConstants{});
  m.def(
      "perturbation_compare",
      [](const py::object& a, const py::object& b, double kappa, double epsilon, double delta,
         const ApConstants& k) { return perturbation_compare(as_chain(a), as_chain(b), kappa, epsilon, delta, k); },
      py::arg("chain"), py::arg("chain2"), py::arg("kappa"), py::arg("epsilon"), py::arg("delta"),
      py::arg("constants") = ApConstants{});

  m.def(
      "forge_chain",
      [](int n, int m_, double kappa, double epsilon, std::uint64_t seed, double norm_min, double norm_max,
         std::optional<double> regime_c, std::optional<std::vector<int>> tau) {
        const ForgeSpec s = make_spec(n, m_, kappa, epsilon, seed, norm_min, norm_max, regime_c);
        return tau ? forge_flag_chain(s, signature(*tau)) : forge_chain(s);
      },
      py::arg("n"), py::arg("m"), py::arg("kappa"), py::arg("epsilon"), py::arg("seed") = 0,
      py::arg("norm_min") = 1.0, py::arg("norm_max") = 1.0, py::arg("regime_c") = py::none(),
      py::arg("tau") = py::none());
  m.def(
      "perturb_chain",
      [](const py::object& c, double delta, std::uint64_t seed) { return perturb_chain(as_chain(c), delta, seed); },
      py::arg("chain"), py::arg("delta"), py::arg("seed") = 0);

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const ExperimentResult r = run_experiment(config_from_json(config_json));
        return py::make_tuple(r.exit_code(), r.artifact);
      },
      py::arg("config_json"), "Runs a JSON experiment config; returns (exit_code, artifact).");
}
