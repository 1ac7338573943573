// Python bindings for the spectral step-coefficient PDE solver.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "steppde/oracle.hpp"
#include "steppde/problem_io.hpp"

namespace py = pybind11;
using namespace steppde;

namespace {

std::string severity_name(Severity s) {
    return s == Severity::overflow ? "overflow" : "growth";
}

}  // namespace

PYBIND11_MODULE(_steppde, m) {
    m.doc() = "spectral solver for linear PDEs with step-function coefficients";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<OverflowError>(m, "OverflowError", PyExc_OverflowError);
    py::register_exception<UnavailableValueError>(m, "UnavailableValueError",
                                                  PyExc_ArithmeticError);

    py::class_<Mode>(m, "Mode")
        .def(py::init<double, double>(), py::arg("c") = 0.0, py::arg("d") = 0.0)
        .def_readwrite("c", &Mode::c)
        .def_readwrite("d", &Mode::d)
        .def("__repr__", [](const Mode& mm) {
            return "Mode(c=" + std::to_string(mm.c) + ", d=" + std::to_string(mm.d) + ")";
        });

    py::class_<FourierState>(m, "FourierState")
        .def(py::init<>())
        .def(py::init([](double half_c0, const std::vector<std::pair<double, double>>& modes) {
                 FourierState s;
                 s.half_c0 = half_c0;
                 for (auto [c, d] : modes) s.modes.push_back(Mode{c, d});
                 return s;
             }),
             py::arg("half_c0"), py::arg("modes"))
        .def_readwrite("half_c0", &FourierState::half_c0)
        .def_readwrite("modes", &FourierState::modes)
        .def_property_readonly("truncation", &FourierState::truncation);

    py::class_<OperatorCoefficients>(m, "OperatorCoefficients")
        .def(py::init([](int order, std::vector<double> a, double l) {
                 return OperatorCoefficients{order, std::move(a), l};
             }),
             py::arg("order"), py::arg("a"), py::arg("l"))
        .def_readwrite("order", &OperatorCoefficients::order)
        .def_readwrite("a", &OperatorCoefficients::a)
        .def_readwrite("l", &OperatorCoefficients::l);

    py::class_<SpectralPair>(m, "SpectralPair")
        .def_readonly("sigma", &SpectralPair::sigma)
        .def_readonly("omega", &SpectralPair::omega)
        .def_readonly("k", &SpectralPair::k);

    py::class_<StepProblem>(m, "StepProblem")
        .def(py::init<>())
        .def_readwrite("l", &StepProblem::l)
        .def_readwrite("T", &StepProblem::T)
        .def_readwrite("time_partition", &StepProblem::time_partition)
        .def_readwrite("space_partition", &StepProblem::space_partition)
        .def_readwrite("order", &StepProblem::order)
        .def_readwrite("coefficients", &StepProblem::coeffs)
        .def_readwrite("initial", &StepProblem::initial);

    py::class_<DivergenceNote>(m, "DivergenceNote")
        .def_readonly("i", &DivergenceNote::i)
        .def_readonly("j", &DivergenceNote::j)
        .def_readonly("k", &DivergenceNote::k)
        .def_readonly("sigma", &DivergenceNote::sigma)
        .def_readonly("max_exponent", &DivergenceNote::max_exponent)
        .def_property_readonly("severity",
                               [](const DivergenceNote& n) { return severity_name(n.severity); })
        .def("__repr__", [](const DivergenceNote& n) { return to_string(n); });

    py::class_<Field>(m, "Field")
        .def_readonly("t_values", &Field::t_values)
        .def_readonly("x_values", &Field::x_values)
        .def_readonly("provenance", &Field::provenance)
        .def("value",
             [](const Field& f, std::size_t it, std::size_t ix) -> py::object {
                 const std::size_t idx = f.index(it, ix);
                 if (!f.present.at(idx)) return py::none();
                 return py::float_(f.values[idx]);
             },
             py::arg("it"), py::arg("ix"))
        .def("rows", [](const Field& f) {
            std::vector<std::vector<py::object>> rows;
            for (std::size_t it = 0; it < f.t_values.size(); ++it) {
                std::vector<py::object> row;
                for (std::size_t ix = 0; ix < f.x_values.size(); ++ix) {
                    const std::size_t idx = f.index(it, ix);
                    row.push_back(f.present[idx] ? py::object(py::float_(f.values[idx]))
                                                 : py::object(py::none()));
                }
                rows.push_back(std::move(row));
            }
            return rows;
        });

    py::class_<PiecewiseSolution>(m, "PiecewiseSolution")
        .def_readonly("diagnostics", &PiecewiseSolution::diagnostics)
        .def_property_readonly("problem",
                               [](const PiecewiseSolution& s) { return s.problem; });

    py::class_<Settings>(m, "Settings")
        .def_readonly("truncation", &Settings::truncation)
        .def_readonly("grid_nt", &Settings::grid_nt)
        .def_readonly("grid_nx", &Settings::grid_nx);

    py::class_<ProblemDocument>(m, "ProblemDocument")
        .def_readwrite("problem", &ProblemDocument::problem)
        .def_readonly("settings", &ProblemDocument::settings)
        .def_readonly("comment", &ProblemDocument::comment);

    py::class_<CompareReport>(m, "CompareReport")
        .def_readonly("max_abs", &CompareReport::max_abs)
        .def_readonly("rms", &CompareReport::rms)
        .def_readonly("t_at_max", &CompareReport::t_at_max)
        .def_readonly("x_at_max", &CompareReport::x_at_max)
        .def_readonly("compared", &CompareReport::compared);

    py::class_<FDConfig>(m, "FDConfig")
        .def(py::init([](int nx, double dt) { return FDConfig{nx, dt}; }),
             py::arg("nx") = 256, py::arg("dt") = 1e-4)
        .def_readwrite("nx", &FDConfig::nx)
        .def_readwrite("dt", &FDConfig::dt);

    m.def("apply_fourier_derivative", &apply_fourier_derivative, py::arg("state"),
          py::arg("l"));
    m.def("apply_operator_polynomial", &apply_operator_polynomial, py::arg("state"),
          py::arg("ops"));
    m.def("spectral_pair", &spectral_pair, py::arg("ops"), py::arg("k"),
          py::arg("mode_cap") = kDefaultModeCap);
    m.def("evaluate_series", &evaluate_series, py::arg("state"), py::arg("x"),
          py::arg("l"));

    m.def("parse_problem",
          [](const std::string& text) { return parse_problem(text); }, py::arg("text"));
    m.def("serialize_problem", &serialize_problem, py::arg("document"));
    m.def("resolve", &resolve, py::arg("document"));

    m.def("build", &build, py::arg("problem"));
    m.def("evaluate", &evaluate, py::arg("solution"), py::arg("t"), py::arg("x"));
    m.def("evaluate_grid",
          [](const PiecewiseSolution& sol, int nt, int nx, std::optional<double> x_lo,
             std::optional<double> x_hi) { return evaluate_grid(sol, nt, nx, x_lo, x_hi); },
          py::arg("solution"), py::arg("nt"), py::arg("nx"),
          py::arg("x_lo") = std::nullopt, py::arg("x_hi") = std::nullopt);
    m.def("residual", &residual, py::arg("solution"), py::arg("t"), py::arg("x"),
          py::arg("dt"));
    m.def("residual_scale", &residual_scale, py::arg("solution"));
    m.def("check_divergence", &check_divergence, py::arg("problem"));

    m.def("fd_solve", &fd_solve, py::arg("problem"), py::arg("config"), py::arg("t_end"));
    m.def("compare_fields", &compare_fields, py::arg("a"), py::arg("b"));

    m.def("emit_csv", &emit_csv, py::arg("field"));
    m.def("emit_gnuplot",
          [](const Field& f, const std::string& csv_path) { return emit_gnuplot(f, csv_path); },
          py::arg("field"), py::arg("csv_path"));
}
