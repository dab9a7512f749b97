#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lassoeq/categorize.hpp"
#include "lassoeq/dataset.hpp"
#include "lassoeq/equivalence.hpp"
#include "lassoeq/errors.hpp"
#include "lassoeq/lasso.hpp"
#include "lassoeq/report.hpp"
#include "lassoeq/spectral.hpp"

namespace py = pybind11;
using namespace lassoeq;
using Eigen::Index;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Equivalent Lasso solutions: fitting, enumeration, categorization and reporting";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base);
  py::register_exception<NumericalError>(m, "NumericalError", base);

  py::enum_<Task>(m, "Task").value("regression", Task::Regression).value("classification", Task::Classification);
  py::enum_<Metric>(m, "Metric").value("rmse", Metric::Rmse).value("deviance", Metric::Deviance);
  py::enum_<Category>(m, "Category")
      .value("dispensable", Category::Dispensable)
      .value("indispensable", Category::Indispensable);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("X", &Dataset::X)
      .def_readwrite("y", &Dataset::y)
      .def_readwrite("column_names", &Dataset::column_names)
      .def_readwrite("task", &Dataset::task)
      .def_readwrite("class_labels", &Dataset::class_labels)
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("p", &Dataset::p);

  py::class_<StandardizationStats>(m, "StandardizationStats")
      .def_readonly("column_means", &StandardizationStats::column_means)
      .def_readonly("column_sds", &StandardizationStats::column_sds)
      .def_readonly("y_mean", &StandardizationStats::y_mean)
      .def_readonly("dropped_columns", &StandardizationStats::dropped_columns);

  m.def("load_csv", &load_csv, py::arg("path"), py::arg("target"), py::arg("task") = Task::Regression);
  m.def("standardize", &standardize, py::arg("dataset"));

  py::class_<LassoSolution>(m, "LassoSolution")
      .def_readonly("beta", &LassoSolution::beta)
      .def_readonly("intercept", &LassoSolution::intercept)
      .def_readonly("lambda_", &LassoSolution::lambda)
      .def_readonly("support", &LassoSolution::support)
      .def_readonly("signs", &LassoSolution::signs)
      .def_readonly("objective", &LassoSolution::objective)
      .def_readonly("task", &LassoSolution::task);

  m.def("lambda_max", &lambda_max, py::arg("X"), py::arg("y"), py::arg("task") = Task::Regression);
  m.def(
      "fit",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, Task task) {
        return fit(X, y, lambda, task);
      },
      py::arg("X"), py::arg("y"), py::arg("lam"), py::arg("task") = Task::Regression);
  m.def(
      "fit_reference",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, Task task) {
        return fit_reference(X, y, lambda, default_reference_ridge(lambda), task);
      },
      py::arg("X"), py::arg("y"), py::arg("lam"), py::arg("task") = Task::Regression,
      "Maximal-support reference fit with the default small ridge.");
  m.def("kkt_check", &kkt_check, py::arg("solution"), py::arg("X"), py::arg("y"), py::arg("lam"));

  py::class_<SpectralData>(m, "SpectralData")
      .def_readonly("U", &SpectralData::U)
      .def_readonly("sigma", &SpectralData::sigma)
      .def_readonly("V", &SpectralData::V)
      .def_readonly("rank", &SpectralData::rank);
  m.def("thin_svd", &thin_svd, py::arg("X"));
  m.def("rmse_bound", &rmse_bound, py::arg("l"), py::arg("sigma_bar"), py::arg("support_size"), py::arg("n"),
        py::arg("rmse_ref"));
  m.def("dev_bound", &dev_bound, py::arg("l"), py::arg("sigma_bar"), py::arg("support_size"), py::arg("n"),
        py::arg("dev_ref"));

  py::class_<EquivalentSolution>(m, "EquivalentSolution")
      .def_readonly("beta", &EquivalentSolution::beta)
      .def_readonly("support", &EquivalentSolution::support)
      .def_readonly("metric_value", &EquivalentSolution::metric_value);
  py::class_<EquivalentSolutionSet>(m, "EquivalentSolutionSet")
      .def_readonly("reference", &EquivalentSolutionSet::reference)
      .def_readonly("metric", &EquivalentSolutionSet::metric)
      .def_readonly("tol", &EquivalentSolutionSet::tol)
      .def_readonly("i_star_final", &EquivalentSolutionSet::i_star_final)
      .def_readonly("solutions", &EquivalentSolutionSet::solutions)
      .def_readonly("reference_metric", &EquivalentSolutionSet::reference_metric)
      .def_readonly("box_halfwidth", &EquivalentSolutionSet::box_halfwidth)
      .def_readonly("sigma_bar", &EquivalentSolutionSet::sigma_bar);

  m.def(
      "enumerate_relaxed",
      [](const LassoSolution& ref, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::optional<Metric> metric,
         double tol, Index d_max, bool strict_break, Index dim_cap) {
        return enumerate_relaxed(ref, metric.value_or(default_metric(ref.task)), tol, d_max, X, y,
                                 EnumerationOptions{strict_break, dim_cap});
      },
      py::arg("reference"), py::arg("X"), py::arg("y"), py::arg("metric") = py::none(), py::arg("tol") = kDefaultTol,
      py::arg("d_max") = kDefaultDMax, py::arg("strict_break") = false, py::arg("dim_cap") = kDefaultDimCap);
  m.def(
      "enumerate_strong",
      [](const LassoSolution& ref, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Index dim_cap) {
        return enumerate_strong(ref, X, y, EnumerationOptions{false, dim_cap});
      },
      py::arg("reference"), py::arg("X"), py::arg("y"), py::arg("dim_cap") = kDefaultDimCap);

  py::class_<VariableBound>(m, "VariableBound")
      .def_readonly("index", &VariableBound::index)
      .def_readonly("lower", &VariableBound::lower)
      .def_readonly("upper", &VariableBound::upper)
      .def_readonly("category", &VariableBound::category)
      .def_property_readonly("label", [](const VariableBound& b) { return std::string(label(b.category)); });
  m.def(
      "categorize_variables",
      [](const LassoSolution& ref, const Eigen::MatrixXd& X, std::optional<Index> i_star) {
        return categorize_variables(ref, thin_svd(select_columns(X, ref.support)), i_star);
      },
      py::arg("reference"), py::arg("X"), py::arg("i_star") = py::none(),
      "Coefficient ranges; i_star=None selects strong equivalence.");

  py::class_<SignatureGroup>(m, "SignatureGroup")
      .def_readonly("signature_size", &SignatureGroup::signature_size)
      .def_readonly("count", &SignatureGroup::count)
      .def_readonly("mean_jaccard", &SignatureGroup::mean_jaccard)
      .def_readonly("mean_solution_specific", &SignatureGroup::mean_solution_specific);
  py::class_<SignatureReport>(m, "SignatureReport")
      .def_readonly("groups", &SignatureReport::groups)
      .def_readonly("cov_performance", &SignatureReport::cov_performance)
      .def_readonly("cov_size", &SignatureReport::cov_size)
      .def_readonly("n_signatures", &SignatureReport::n_signatures);

  m.def("jaccard", &jaccard, py::arg("a"), py::arg("b"));
  m.def("solution_specific_count", &solution_specific_count, py::arg("a"), py::arg("b"));
  m.def(
      "coefficient_of_variation", [](const std::vector<double>& v) { return coefficient_of_variation(v); },
      py::arg("values"));
  m.def(
      "signature_report",
      [](const std::vector<IndexSet>& signatures, std::optional<std::vector<double>> scores) {
        if (!scores) return signature_report(signatures);
        return signature_report(signatures, std::span<const double>(*scores));
      },
      py::arg("signatures"), py::arg("holdout_scores") = py::none());
}
