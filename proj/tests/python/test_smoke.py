#!/usr/bin/env python3
"""Smoke tests for the python bindings (plain asserts, no framework)."""

import math
import os
import pathlib

import riskdesign as rd


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def test_risk_measures():
    sd = rd.RiskMeasure.semideviation(1.0)
    assert close(rd.evaluate_risk(sd, [1, 4, 9], [0.3, 0.4, 0.3]), 5.92, 1e-12)
    assert close(rd.evaluate_risk(sd, [1, 4, 9], [0.5, 0.3, 0.2]), 4.75, 1e-12)
    weights, tie = rd.envelope_density(sd, [1, 4, 9], [0.3, 0.4, 0.3])
    assert not tie
    assert close(weights[0], 0.7, 1e-12) and close(weights[2], 1.7, 1e-12)
    assert close(rd.envelope_lp_objective(sd, [1, 4, 9], [0.3, 0.4, 0.3]), 5.92, 1e-8)
    avar = rd.RiskMeasure.avar(0.5)
    assert close(rd.evaluate_risk(avar, [1, 2, 3], [1 / 3, 1 / 3, 1 / 3]), 8 / 3, 1e-12)
    types = [rd.RiskMeasure.expectation(), sd]
    assert close(rd.mixture_risk(types, [0.5, 0.5], [1, 4, 9], [0.5, 0.3, 0.2]), 4.125, 1e-12)


def test_transport():
    assert close(rd.w1([0.3, 0.7], [0.5, 0.5]), 0.2, 1e-12)
    value, potential = rd.w1_dual([1.0, 0.0], [0.0, 1.0])
    assert close(value, 1.0, 1e-9)
    assert close(potential[0], 1.0, 1e-9) and potential[1] == 0.0
    assert rd.project_simplex([1.2, -0.2]) == [1.0, 0.0]


def test_scenario_and_solvers():
    scenario = rd.case_study_scenario()
    assert scenario.n_types == 2
    assert rd.agent_best_response(scenario, [0.9, 0.1]) == 0.0
    assert rd.agent_best_response(scenario, [0.4, 0.6]) == 1.0

    report = rd.imh(scenario, [0.9, 0.1])
    assert report["imh"] == 1.0
    after = rd.imh(scenario, [0.4, 0.6])
    assert after["imh"] == 0.0

    full = rd.solve_full_info(scenario, [0.9, 0.1])
    assert full["action"] == 1.0
    assert full["ir_slack"] >= -1e-9

    text = scenario.to_json()
    again = rd.Scenario.from_json(text)
    assert again.mu0 == scenario.mu0

    fixtures = os.environ.get("RISKDESIGN_FIXTURES")
    if fixtures:
        loaded = rd.Scenario.from_file(
            str(pathlib.Path(fixtures) / "smooth_sensitivity.json")
        )
        assert loaded.n_types == 2
        assert rd.check_mlr(loaded, 0.5) in (True, False)


def test_sensitivity():
    scenario = rd.smooth_sensitivity_scenario(2)
    grad = rd.imh_gradient(scenario, [0.4, 0.6])
    assert grad[1] < -0.5
    direction = rd.mitigating_direction([1.0, -1.0], [1.0, 0.0])
    assert direction is not None
    assert close(direction[0], -1 / math.sqrt(2), 1e-12)
    blocked = rd.mitigating_direction([-1.0, 1.0], [1.0, -1.0])
    assert blocked is None

    step = rd.design_step(scenario, [0.41, 0.59], direction, 1e-3)
    assert step["accepted"]
    assert step["imh_after"] <= step["imh_before"] + 1e-12


def test_case_study_report():
    report = rd.case_study_report()
    assert report["participation"]["bounds_agree"]
    assert close(report["participation"]["premium_bound_formula"], 2.71875, 1e-12)
    assert report["incentive_flip"]["thresholds_disagree"]
    assert close(report["incentive_flip"]["mu2_flip_threshold"], 2 / 7, 1e-6)
    assert report["design"]["imh_before"] == 1.0
    assert report["design"]["imh_after"] == 0.0


def test_errors():
    try:
        rd.evaluate_risk(rd.RiskMeasure.semideviation(2.0), [1, 2], [0.5, 0.5])
        raise AssertionError("expected a validation error")
    except ValueError:
        pass


def main():
    tests = [
        test_risk_measures,
        test_transport,
        test_scenario_and_solvers,
        test_sensitivity,
        test_case_study_report,
        test_errors,
    ]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print("python smoke tests passed")


if __name__ == "__main__":
    main()
