#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rnd/capacity.hpp"
#include "rnd/estimator.hpp"
#include "rnd/kernel.hpp"
#include "rnd/selection.hpp"
#include "rnd/synth.hpp"

namespace py = pybind11;
using namespace rnd;

namespace {

Sample as_sample(const Matrix& points, SampleLabel label) { return Sample{points, label}; }

}  // namespace

PYBIND11_MODULE(_rnd, m) {
  m.doc() = "Density-ratio estimation via kernel-regularized least squares";

  py::enum_<KernelFamily>(m, "KernelFamily")
      .value("gaussian", KernelFamily::gaussian)
      .value("laplacian", KernelFamily::laplacian)
      .value("polynomial", KernelFamily::polynomial);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("gaussian", &KernelSpec::gaussian, py::arg("d"), py::arg("sigma") = 1.0)
      .def_static("laplacian", &KernelSpec::laplacian, py::arg("d"), py::arg("sigma") = 1.0)
      .def_static("polynomial", &KernelSpec::polynomial, py::arg("d"), py::arg("degree"),
                  py::arg("offset"), py::arg("domain_radius"))
      .def_readonly("dim", &KernelSpec::dim)
      .def_readonly("bandwidth", &KernelSpec::bandwidth)
      .def_property_readonly("family", [](const KernelSpec& k) { return family_name(k.family); })
      .def("kappa_squared", &KernelSpec::kappa_squared)
      .def("__eq__", [](const KernelSpec& a, const KernelSpec& b) { return a == b; });

  m.def("eval_kernel", &eval_kernel, py::arg("spec"), py::arg("x"), py::arg("y"));
  m.def(
      "gram",
      [](const KernelSpec& spec, const Matrix& pts) { return gram(spec, as_sample(pts, SampleLabel::p)); },
      py::arg("spec"), py::arg("points"));
  m.def(
      "cross_gram",
      [](const KernelSpec& spec, const Matrix& a, const Matrix& b) {
        return cross_gram(spec, as_sample(a, SampleLabel::p), as_sample(b, SampleLabel::q));
      },
      py::arg("spec"), py::arg("a"), py::arg("b"));

  py::enum_<FitMode>(m, "FitMode").value("full", FitMode::full).value("nystrom", FitMode::nystrom);

  py::class_<FitCost>(m, "FitCost")
      .def_readonly("kernel_evals", &FitCost::kernel_evals)
      .def_readonly("solver_flops", &FitCost::solver_flops)
      .def("total", &FitCost::total);

  py::class_<RatioModel>(m, "RatioModel")
      .def_readonly("kernel", &RatioModel::kernel)
      .def_readonly("alpha", &RatioModel::alpha)
      .def_readonly("p_centers", &RatioModel::p_centers)
      .def_readonly("q_centers", &RatioModel::q_centers)
      .def_readonly("c", &RatioModel::c)
      .def_readonly("c_prime", &RatioModel::c_prime)
      .def_readonly("n_full", &RatioModel::n_full)
      .def_readonly("m_full", &RatioModel::m_full)
      .def_readonly("mode", &RatioModel::mode)
      .def_readonly("cost", &RatioModel::cost);

  py::class_<NystromPlan>(m, "NystromPlan")
      .def_readonly("p_indices", &NystromPlan::p_indices)
      .def_readonly("q_indices", &NystromPlan::q_indices)
      .def_readonly("seed", &NystromPlan::seed)
      .def("m", &NystromPlan::m);

  m.def("subsample_plan", &subsample_plan, py::arg("n_p"), py::arg("n_q"), py::arg("m"),
        py::arg("seed"));
  m.def(
      "fit_full",
      [](const KernelSpec& spec, const Matrix& xp, const Matrix& xq, double alpha) {
        return fit_full(spec, as_sample(xp, SampleLabel::p), as_sample(xq, SampleLabel::q), alpha);
      },
      py::arg("spec"), py::arg("xp"), py::arg("xq"), py::arg("alpha"));
  m.def(
      "fit_nystrom",
      [](const KernelSpec& spec, const Matrix& xp, const Matrix& xq, double alpha,
         const NystromPlan& plan) {
        return fit_nystrom(spec, as_sample(xp, SampleLabel::p), as_sample(xq, SampleLabel::q),
                           alpha, plan);
      },
      py::arg("spec"), py::arg("xp"), py::arg("xq"), py::arg("alpha"), py::arg("plan"));
  m.def(
      "evaluate",
      [](const RatioModel& model, const Matrix& t) { return evaluate(model, as_sample(t, SampleLabel::p)); },
      py::arg("model"), py::arg("points"));
  m.def("rkhs_distance", &rkhs_distance, py::arg("spec"), py::arg("f"), py::arg("g"));
  m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
  m.def("load_model", &load_model, py::arg("path"));
  m.def("model_to_json", &model_to_json, py::arg("model"));
  m.def("model_from_json", &model_from_json, py::arg("text"));

  // capacity
  m.def(
      "capacity_diag",
      [](const KernelSpec& spec, const Matrix& xp, double alpha) {
        return capacity_diag(spec, as_sample(xp, SampleLabel::p), alpha);
      },
      py::arg("spec"), py::arg("xp"), py::arg("alpha"));
  m.def(
      "effective_dimension",
      [](const KernelSpec& spec, const Matrix& xp, double alpha) {
        return effective_dimension(spec, as_sample(xp, SampleLabel::p), alpha);
      },
      py::arg("spec"), py::arg("xp"), py::arg("alpha"));
  m.def(
      "capacity_sup",
      [](const KernelSpec& spec, const Matrix& xp, double alpha) {
        return capacity_sup(spec, as_sample(xp, SampleLabel::p), alpha);
      },
      py::arg("spec"), py::arg("xp"), py::arg("alpha"));
  m.def(
      "alpha_star",
      [](const KernelSpec& spec, const Matrix& xp) { return alpha_star(spec, as_sample(xp, SampleLabel::p)); },
      py::arg("spec"), py::arg("xp"));

  // selection
  py::enum_<Regime>(m, "Regime")
      .value("in_rkhs", Regime::in_rkhs)
      .value("out_of_rkhs", Regime::out_of_rkhs);

  py::class_<IndexFunctions>(m, "IndexFunctions")
      .def(py::init([](double s, double r, Regime regime) {
             IndexFunctions idx{s, r, regime};
             validate_indices(idx);
             return idx;
           }),
           py::arg("s") = 0.5, py::arg("r") = 0.5, py::arg("regime") = Regime::in_rkhs)
      .def_readonly("s", &IndexFunctions::s)
      .def_readonly("r", &IndexFunctions::r)
      .def_readonly("regime", &IndexFunctions::regime);

  py::class_<SelectionPolicy>(m, "SelectionPolicy")
      .def(py::init([](const IndexFunctions& idx, double delta, double c_sub) {
             SelectionPolicy policy{idx, delta, c_sub};
             validate_policy(policy);
             return policy;
           }),
           py::arg("indices") = IndexFunctions{}, py::arg("delta") = 0.1,
           py::arg("c_subsample") = 1.0)
      .def_readonly("indices", &SelectionPolicy::indices)
      .def_readonly("delta", &SelectionPolicy::delta)
      .def_readonly("c_subsample", &SelectionPolicy::c_subsample);

  py::class_<AlphaChoice>(m, "AlphaChoice")
      .def_readonly("value", &AlphaChoice::value)
      .def_readonly("clamped", &AlphaChoice::clamped)
      .def_readonly("admissible_lo", &AlphaChoice::admissible_lo);

  m.def("theta", &theta, py::arg("indices"), py::arg("t"));
  m.def("theta_bar", &theta_bar, py::arg("indices"), py::arg("t"));
  m.def("theta_inverse", &theta_inverse, py::arg("indices"), py::arg("u"));
  m.def("theta_bar_inverse", &theta_bar_inverse, py::arg("indices"), py::arg("u"));
  m.def("choose_alpha", &choose_alpha, py::arg("policy"), py::arg("n"), py::arg("m"));
  m.def("choose_subsample_size", &choose_subsample_size, py::arg("policy"), py::arg("n_inf_alpha"),
        py::arg("alpha"), py::arg("n"), py::arg("m"));

  py::enum_<RateMetric>(m, "RateMetric")
      .value("hk", RateMetric::hk)
      .value("l2", RateMetric::l2)
      .value("embedded_hk", RateMetric::embedded_hk)
      .value("embedded_l2", RateMetric::embedded_l2);
  m.def("theory_rate_exponent", &theory_rate_exponent, py::arg("indices"), py::arg("metric"));

  // synthetic benchmark
  py::enum_<SampleLabel>(m, "SampleLabel").value("p", SampleLabel::p).value("q", SampleLabel::q);

  py::class_<SyntheticPair>(m, "SyntheticPair")
      .def_static("gauss_scale", &SyntheticPair::gauss_scale, py::arg("d") = 1,
                  py::arg("sigma_q") = 0.8, py::arg("sigma_p") = 1.0)
      .def_static("gauss_shift_scale", &SyntheticPair::gauss_shift_scale, py::arg("p_mean"),
                  py::arg("p_sigma"), py::arg("q_mean"), py::arg("q_sigma"))
      .def_readonly("d", &SyntheticPair::d)
      .def_readonly("b0", &SyntheticPair::b0);

  m.def("true_ratio", &true_ratio, py::arg("pair"), py::arg("x"));
  m.def(
      "draw",
      [](const SyntheticPair& pair, SampleLabel which, Index n, std::uint64_t seed) {
        return draw(pair, which, n, seed).points;
      },
      py::arg("pair"), py::arg("which"), py::arg("n"), py::arg("seed"));

  py::class_<ErrorReport>(m, "ErrorReport")
      .def_readonly("l2p_error", &ErrorReport::l2p_error)
      .def_readonly("mc_points", &ErrorReport::mc_points)
      .def_readonly("seed", &ErrorReport::seed);

  m.def("l2p_error", &l2p_error, py::arg("pair"), py::arg("model"), py::arg("t_count"),
        py::arg("seed"));
  m.def("embedded_error", &embedded_error, py::arg("pair"), py::arg("model"), py::arg("t_count"),
        py::arg("seed"));
}
