// Python bindings for the core operations. Reports cross the boundary as
// plain dicts/lists converted from their JSON form.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "riskdesign/case_study.hpp"
#include "riskdesign/contract_solvers.hpp"
#include "riskdesign/errors.hpp"
#include "riskdesign/monotonicity.hpp"
#include "riskdesign/moral_hazard.hpp"
#include "riskdesign/scenario_io.hpp"
#include "riskdesign/transport.hpp"

namespace py = pybind11;
namespace rd = riskdesign;

namespace {

py::object json_to_py(const rd::Json& j) {
    switch (j.type()) {
        case nlohmann::detail::value_t::null:
            return py::none();
        case nlohmann::detail::value_t::boolean:
            return py::bool_(j.get<bool>());
        case nlohmann::detail::value_t::number_integer:
            return py::int_(j.get<long long>());
        case nlohmann::detail::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case nlohmann::detail::value_t::number_float:
            return py::float_(j.get<double>());
        case nlohmann::detail::value_t::string:
            return py::str(j.get<std::string>());
        case nlohmann::detail::value_t::array: {
            py::list out;
            for (const auto& e : j) out.append(json_to_py(e));
            return out;
        }
        case nlohmann::detail::value_t::object: {
            py::dict out;
            for (const auto& item : j.items()) out[py::str(item.key())] = json_to_py(item.value());
            return out;
        }
        default:
            return py::none();
    }
}

rd::Scenario scenario_from_string(const std::string& text) {
    return rd::scenario_from_json(rd::Json::parse(text));
}

rd::Contract contract_from_dict(const py::dict& d) {
    rd::Json j;
    for (auto item : d) {
        std::string key = py::cast<std::string>(item.first);
        if (key == "kind")
            j[key] = py::cast<std::string>(item.second);
        else if (key == "w")
            j[key] = py::cast<std::vector<double>>(item.second);
        else
            j[key] = py::cast<double>(item.second);
    }
    return rd::contract_from_json(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "risk preference design toolkit: coherent risk measures, transport "
              "distances, contract solvers, and moral-hazard sensitivities";

    py::register_exception<rd::InfeasibleError>(m, "InfeasibleError");
    py::register_exception<rd::UnsupportedError>(m, "UnsupportedError");
    py::register_exception<rd::NumericalError>(m, "NumericalError");

    py::class_<rd::RiskMeasureSpec>(m, "RiskMeasure")
        .def_static("expectation", &rd::RiskMeasureSpec::expectation)
        .def_static("semideviation", &rd::RiskMeasureSpec::semideviation, py::arg("kappa"))
        .def_static("avar", &rd::RiskMeasureSpec::avar, py::arg("alpha"))
        .def("__repr__", [](const rd::RiskMeasureSpec& spec) {
            return "RiskMeasure(" + spec.kind_name() + ")";
        });

    py::class_<rd::Scenario>(m, "Scenario")
        .def_static("from_json", &scenario_from_string, py::arg("text"))
        .def_static("from_file", &rd::load_scenario, py::arg("path"))
        .def("to_json", [](const rd::Scenario& s) { return rd::scenario_to_json(s).dump(2); })
        .def_property_readonly("mu0", [](const rd::Scenario& s) { return s.mu0.weights; })
        .def_property_readonly("n_types", [](const rd::Scenario& s) { return s.types.size(); });

    m.def("case_study_scenario", [](double c, double p, double kappa, double m_cost, double mu2,
                                    double gamma) {
              return rd::case_study_scenario({c, p, kappa, m_cost, mu2, gamma});
          },
          py::arg("c") = 0.5, py::arg("p") = 1.0, py::arg("kappa") = 1.0, py::arg("m") = 0.28,
          py::arg("mu2") = 0.1, py::arg("gamma") = 2.0);
    m.def("smooth_sensitivity_scenario", &rd::smooth_sensitivity_scenario,
          py::arg("n_types") = 2);

    m.def("evaluate_risk",
          [](const rd::RiskMeasureSpec& spec, const std::vector<double>& z,
             const std::vector<double>& probs) { return rd::evaluate(spec, z, probs); },
          py::arg("measure"), py::arg("z"), py::arg("probs"));
    m.def("envelope_density",
          [](const rd::RiskMeasureSpec& spec, const std::vector<double>& z,
             const std::vector<double>& probs) {
              auto env = rd::envelope_density(spec, z, probs);
              return py::make_tuple(env.weights, env.tie);
          },
          py::arg("measure"), py::arg("z"), py::arg("probs"));
    m.def("envelope_lp_objective",
          [](const rd::RiskMeasureSpec& spec, const std::vector<double>& z,
             const std::vector<double>& probs) {
              return rd::envelope_lp_oracle(spec, z, probs).objective;
          },
          py::arg("measure"), py::arg("z"), py::arg("probs"));
    m.def("mixture_risk",
          [](const std::vector<rd::RiskMeasureSpec>& types, const std::vector<double>& weights,
             const std::vector<double>& z, const std::vector<double>& probs) {
              return rd::mixture_risk(types, weights, z, probs);
          },
          py::arg("types"), py::arg("weights"), py::arg("z"), py::arg("probs"));

    m.def("density",
          [](const rd::Scenario& s, double x) { return rd::density(s.model, x); },
          py::arg("scenario"), py::arg("x"));
    m.def("density_dx",
          [](const rd::Scenario& s, double x) { return rd::density_dx(s.model, x); },
          py::arg("scenario"), py::arg("x"));

    m.def("w1",
          [](const std::vector<double>& mu, const std::vector<double>& mu0) {
              return rd::w1(rd::TypeDistribution{mu}, rd::TypeDistribution{mu0});
          },
          py::arg("mu"), py::arg("mu0"));
    m.def("w1_dual",
          [](const std::vector<double>& mu, const std::vector<double>& mu0) {
              auto dual = rd::w1_dual(rd::TypeDistribution{mu}, rd::TypeDistribution{mu0});
              return py::make_tuple(dual.value, dual.b);
          },
          py::arg("mu"), py::arg("mu0"));
    m.def("project_simplex",
          [](const std::vector<double>& v) { return rd::project_simplex(v).weights; },
          py::arg("v"));

    m.def("agent_objective",
          [](const rd::Scenario& s, const std::vector<double>& mu, const py::dict& contract,
             double x) {
              return rd::agent_objective(s, rd::TypeDistribution{mu}, contract_from_dict(contract),
                                         x);
          },
          py::arg("scenario"), py::arg("mu"), py::arg("contract"), py::arg("x"));
    m.def("agent_best_response",
          [](const rd::Scenario& s, const std::vector<double>& mu,
             const py::object& contract) {
              rd::Contract c = contract.is_none()
                                   ? *s.contract
                                   : contract_from_dict(py::cast<py::dict>(contract));
              return rd::agent_best_response(s, rd::TypeDistribution{mu}, c);
          },
          py::arg("scenario"), py::arg("mu"), py::arg("contract") = py::none());
    m.def("solve_full_info",
          [](const rd::Scenario& s, const std::vector<double>& mu) {
              return json_to_py(
                  rd::solve_report_to_json(rd::solve_full_info(s, rd::TypeDistribution{mu})));
          },
          py::arg("scenario"), py::arg("mu"));
    m.def("solve_hidden_action",
          [](const rd::Scenario& s, double mu_grid_step) {
              return json_to_py(rd::solve_report_to_json(
                  rd::solve_hidden_action(s, {.mu_grid_step = mu_grid_step})));
          },
          py::arg("scenario"), py::arg("mu_grid_step") = 0.01);

    m.def("imh",
          [](const rd::Scenario& s, const std::vector<double>& mu) {
              return json_to_py(rd::imh_report_to_json(rd::imh(s, rd::TypeDistribution{mu})));
          },
          py::arg("scenario"), py::arg("mu"));
    m.def("imh_gradient",
          [](const rd::Scenario& s, const std::vector<double>& mu) {
              return rd::imh_gradient(s, rd::TypeDistribution{mu});
          },
          py::arg("scenario"), py::arg("mu"));
    m.def("mitigating_direction",
          [](const std::vector<double>& grad, const std::vector<double>& b_star) -> py::object {
              auto d = rd::mitigating_direction(grad, b_star);
              if (!d) return py::none();
              return py::cast(*d);
          },
          py::arg("grad"), py::arg("b_star"));
    m.def("design_step",
          [](const rd::Scenario& s, const std::vector<double>& mu,
             const std::vector<double>& dmu, double c_step) {
              return json_to_py(rd::design_step_to_json(
                  rd::design_step(s, rd::TypeDistribution{mu}, dmu, c_step)));
          },
          py::arg("scenario"), py::arg("mu"), py::arg("dmu"), py::arg("c_step"));

    m.def("check_mlr",
          [](const rd::Scenario& s, double x) { return rd::check_mlr(s.model, x); },
          py::arg("scenario"), py::arg("x"));
    m.def("check_monotone_contract",
          [](const std::vector<double>& w) {
              return rd::check_monotone_contract(rd::TabularContract{w});
          },
          py::arg("w"));

    m.def("case_study_report",
          [](double c, double p, double kappa, double m_cost, double mu2, double gamma) {
              return json_to_py(
                  rd::case_study_to_json(rd::run_case_study({c, p, kappa, m_cost, mu2, gamma})));
          },
          py::arg("c") = 0.5, py::arg("p") = 1.0, py::arg("kappa") = 1.0, py::arg("m") = 0.28,
          py::arg("mu2") = 0.1, py::arg("gamma") = 2.0);
}
