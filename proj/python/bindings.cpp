#include <sstream>
#include <string>
#include <vector>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aoicast/analysis.hpp"
#include "aoicast/experiments.hpp"
#include "aoicast/order_stats.hpp"
#include "aoicast/simulator.hpp"

namespace py = pybind11;
using namespace aoicast;

namespace {

ServiceDistribution make_dist(const std::string& kind, double rate, double shift) {
    if (kind == "exp") {
        if (shift != 0.0) throw py::value_error("shift must be 0 for dist 'exp'");
        return ServiceDistribution::exponential(rate);
    }
    if (kind == "sexp") return ServiceDistribution::shifted_exponential(rate, shift);
    throw py::value_error("dist must be 'exp' or 'sexp', got '" + kind + "'");
}

SimConfig make_config(const ServiceDistribution& dist, std::size_t k, std::size_t intervals,
                      std::uint64_t seed, std::size_t replications) {
    SimConfig c{dist, k, intervals, seed, replications};
    validate(c);
    return c;
}

SweepSpec make_spec(SweepVariable variable, const std::vector<std::string>& args) {
    return parse_config(args, variable);
}

std::string report_csv(const AgeReport& report) {
    std::ostringstream out;
    write_csv(out, report);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Age of information for multicast with a prioritized group";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_RuntimeError);

    m.attr("EULER_GAMMA") = static_cast<double>(kEulerGamma);

    m.def("harmonic", &harmonic, py::arg("n"), "H_n = sum_{i=1}^n 1/i");
    m.def("harmonic2", &harmonic2, py::arg("n"), "sum_{i=1}^n 1/i^2");

    py::enum_<DistributionKind>(m, "DistributionKind")
        .value("Exponential", DistributionKind::Exponential)
        .value("ShiftedExponential", DistributionKind::ShiftedExponential);

    py::class_<ServiceDistribution>(m, "ServiceDistribution")
        .def(py::init(&make_dist), py::arg("kind") = "exp", py::arg("rate") = 1.0,
             py::arg("shift") = 0.0)
        .def_static("exponential", &ServiceDistribution::exponential, py::arg("rate"))
        .def_static("shifted_exponential", &ServiceDistribution::shifted_exponential, py::arg("rate"),
                    py::arg("shift"))
        .def_property_readonly("kind", &ServiceDistribution::kind)
        .def_property_readonly("rate", &ServiceDistribution::rate)
        .def_property_readonly("shift", &ServiceDistribution::shift)
        .def("mean", &ServiceDistribution::mean)
        .def("variance", &ServiceDistribution::variance)
        .def("cdf", &ServiceDistribution::cdf, py::arg("x"))
        .def("order_stat_mean", &ServiceDistribution::order_stat_mean, py::arg("k"), py::arg("n"))
        .def("order_stat_var", &ServiceDistribution::order_stat_var, py::arg("k"), py::arg("n"))
        .def(py::self == py::self)
        .def("__repr__", [](const ServiceDistribution& d) {
            std::ostringstream s;
            s << "ServiceDistribution(rate=" << d.rate() << ", shift=" << d.shift() << ")";
            return s.str();
        });

    py::class_<PriorityAge>(m, "PriorityAge")
        .def_readonly("value", &PriorityAge::value)
        .def_readonly("lower_bound", &PriorityAge::lower_bound);
    py::class_<NonPriorityAge>(m, "NonPriorityAge")
        .def_readonly("value", &NonPriorityAge::value)
        .def_readonly("delta0", &NonPriorityAge::delta0)
        .def_readonly("delta1", &NonPriorityAge::delta1)
        .def_readonly("delta2", &NonPriorityAge::delta2);

    m.def("age_priority", &age_priority, py::arg("dist"), py::arg("k"));
    m.def("priority_age", &priority_age, py::arg("dist"), py::arg("k"));
    m.def("age_priority_lower_bound", &age_priority_lower_bound, py::arg("rate"), py::arg("shift"),
          py::arg("k"));
    m.def("age_nonpriority", &age_nonpriority, py::arg("dist"), py::arg("k"));
    m.def("age_exponential", &age_exponential, py::arg("rate"), py::arg("k"));
    m.def("failure_prob", &failure_prob, py::arg("k"));
    m.def(
        "w_moments",
        [](const ServiceDistribution& d, std::size_t k) {
            const auto w = w_moments(d, k);
            return py::make_tuple(w.mean, w.second_moment);
        },
        py::arg("dist"), py::arg("k"), "(E[W], E[W^2])");
    m.def("xtilde_mean", &xtilde_mean, py::arg("dist"), py::arg("k"));

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init(&make_config), py::arg("dist"), py::arg("k"), py::arg("intervals") = 100000,
             py::arg("seed") = 1, py::arg("replications") = 8)
        .def_readonly("dist", &SimConfig::dist)
        .def_readonly("k", &SimConfig::k)
        .def_readonly("intervals", &SimConfig::num_intervals)
        .def_readonly("seed", &SimConfig::seed)
        .def_readonly("replications", &SimConfig::replications);

    py::class_<Estimate>(m, "Estimate")
        .def_readonly("value", &Estimate::value)
        .def_readonly("std_error", &Estimate::std_error)
        .def("__repr__", [](const Estimate& e) {
            std::ostringstream s;
            s << "Estimate(value=" << e.value << ", std_error=" << e.std_error << ")";
            return s.str();
        });

    py::class_<SimResult>(m, "SimResult")
        .def_readonly("age_priority", &SimResult::age_priority_hat)
        .def_readonly("age_nonpriority", &SimResult::age_nonpriority_hat)
        .def_readonly("y_mean", &SimResult::y_mean_hat)
        .def_readonly("y_failure_mean", &SimResult::y_failure_mean_hat)
        .def_readonly("y_success_mean", &SimResult::y_success_mean_hat)
        .def_readonly("w_mean", &SimResult::w_mean_hat)
        .def_readonly("w2_mean", &SimResult::w2_mean_hat)
        .def_readonly("xtilde_mean", &SimResult::xtilde_mean_hat)
        .def_readonly("m_mean", &SimResult::m_mean_hat)
        .def_readonly("q", &SimResult::q_hat)
        .def_readonly("m_y_correlation", &SimResult::m_y_correlation)
        .def_readonly("intervals_used", &SimResult::intervals_used)
        .def_readonly("cycles_used", &SimResult::cycles_used)
        .def_readonly("replications", &SimResult::replications);

    m.def("simulate", &run_simulation, py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "sawtooth_cross_check",
        [](const SimConfig& c) {
            const auto r = sample_path_cross_check(c);
            return py::make_tuple(r.age_priority, r.age_nonpriority);
        },
        py::arg("config"), "(priority, non-priority) ages by direct integration");

    py::class_<AgeRow>(m, "AgeRow")
        .def_readonly("sweep_value", &AgeRow::sweep_value)
        .def_readonly("delta_p_theory", &AgeRow::delta_p_theory)
        .def_readonly("delta_p_sim", &AgeRow::delta_p_sim)
        .def_readonly("delta_p_stderr", &AgeRow::delta_p_stderr)
        .def_readonly("delta_e_theory", &AgeRow::delta_e_theory)
        .def_readonly("delta_e_sim", &AgeRow::delta_e_sim)
        .def_readonly("delta_e_stderr", &AgeRow::delta_e_stderr)
        .def_readonly("lower_bound", &AgeRow::lower_bound)
        .def_readonly("relerr_p", &AgeRow::relerr_p)
        .def_readonly("relerr_e", &AgeRow::relerr_e);

    py::class_<AgeReport>(m, "AgeReport")
        .def_readonly("rows", &AgeReport::rows)
        .def("within", &AgeReport::within, py::arg("tolerance"))
        .def("to_csv", &report_csv);

    m.def(
        "sweep_k", [](const std::vector<std::string>& args) { return sweep_k(make_spec(SweepVariable::K, args)); },
        py::arg("args") = std::vector<std::string>{}, py::call_guard<py::gil_scoped_release>(),
        "Age versus k; `args` uses the command-line sweep flags");
    m.def(
        "sweep_shift",
        [](const std::vector<std::string>& args) { return sweep_shift(make_spec(SweepVariable::Shift, args)); },
        py::arg("args") = std::vector<std::string>{}, py::call_guard<py::gil_scoped_release>(),
        "Age versus shift c; `args` uses the command-line sweep flags");

    py::class_<ValidationCheck>(m, "ValidationCheck")
        .def_readonly("name", &ValidationCheck::name)
        .def_readonly("passed", &ValidationCheck::passed)
        .def_readonly("detail", &ValidationCheck::detail);
    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("checks", &ValidationReport::checks)
        .def_property_readonly("passed", &ValidationReport::passed)
        .def("__str__", [](const ValidationReport& r) {
            std::ostringstream s;
            print_validation(s, r);
            return s.str();
        });

    m.def(
        "validate",
        [](std::uint64_t seed, std::size_t intervals, std::size_t replications, double tolerance,
           double sigmas) {
            return validate(ValidationOptions{seed, intervals, replications, tolerance, sigmas});
        },
        py::arg("seed") = 20170101, py::arg("intervals") = 100000, py::arg("replications") = 8,
        py::arg("tolerance") = 0.02, py::arg("sigmas") = 4.0, py::call_guard<py::gil_scoped_release>());
}
