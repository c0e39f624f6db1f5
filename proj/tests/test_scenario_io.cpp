#include <doctest.h>

#include <stdexcept>

#include <string>

#include "riskdesign/case_study.hpp"
#include "riskdesign/scenario_io.hpp"

using namespace riskdesign;

namespace {

Json preset_json() { return scenario_to_json(case_study_scenario()); }

}  // namespace

TEST_CASE("scenario round trip") {
    Json j = preset_json();
    Scenario parsed = scenario_from_json(j);
    CHECK(scenario_to_json(parsed) == j);

    Json smooth = scenario_to_json(smooth_sensitivity_scenario(3));
    CHECK(scenario_to_json(scenario_from_json(smooth)) == smooth);
}

TEST_CASE("unknown fields are rejected by name") {
    Json j = preset_json();
    j["surprise"] = 1;
    try {
        scenario_from_json(j);
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("surprise") != std::string::npos);
    }

    Json nested = preset_json();
    nested["family"]["extra"] = true;
    CHECK_THROWS_AS(scenario_from_json(nested), std::invalid_argument);
}

TEST_CASE("missing and malformed fields are rejected") {
    Json j = preset_json();
    j.erase("gamma");
    try {
        scenario_from_json(j);
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("gamma") != std::string::npos);
    }

    Json bad_mu = preset_json();
    bad_mu["mu0"] = {0.5, 0.4};
    CHECK_THROWS_AS(scenario_from_json(bad_mu), std::invalid_argument);

    Json bad_type = preset_json();
    bad_type["types"][1]["kind"] = "entropic";
    CHECK_THROWS_AS(scenario_from_json(bad_type), std::invalid_argument);

    Json bad_kappa = preset_json();
    bad_kappa["types"][1]["kappa"] = 2.0;
    CHECK_THROWS_AS(scenario_from_json(bad_kappa), std::invalid_argument);
}

TEST_CASE("risk measure encoding") {
    Json j = risk_spec_to_json(RiskMeasureSpec::semideviation(0.7));
    CHECK(j["kind"] == "semideviation");
    CHECK(j["kappa"] == 0.7);
    RiskMeasureSpec spec = risk_spec_from_json(j);
    CHECK(spec.kind == RiskKind::AbsSemiDeviation);
    CHECK(spec.kappa == 0.7);

    Json avar = Json{{"kind", "avar"}, {"alpha", 0.25}};
    CHECK(risk_spec_from_json(avar).alpha == 0.25);
    Json expect = Json{{"kind", "expectation"}};
    CHECK(risk_spec_from_json(expect).kind == RiskKind::Expectation);
    Json extra = Json{{"kind", "expectation"}, {"kappa", 1.0}};
    CHECK_THROWS_AS(risk_spec_from_json(extra), std::invalid_argument);
}

TEST_CASE("missing scenario file") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/path/scenario.json"), std::invalid_argument);
}

TEST_CASE("numbers are quantized to 12 significant digits") {
    CHECK(json_number(1.0 / 3.0).get<double>() == 0.333333333333);
    CHECK(json_number(-0.15).get<double>() == -0.15);
}
