#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "riskdesign/core_model.hpp"
#include "riskdesign/errors.hpp"
#include "riskdesign/numerics.hpp"

using namespace riskdesign;

namespace {

OutcomeModel case_model() {
    return OutcomeModel{OutcomeGrid{{1, 2, 3}},
                        {1.0 / 3, 1.0 / 3, 1.0 / 3},
                        ActionFamily::linear({0.3, 0.4, 0.3}, {0.5, 0.3, 0.2})};
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS((OutcomeGrid{{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS((OutcomeGrid{{1.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS((OutcomeGrid{{2.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("interpolated family rows") {
    OutcomeModel model = case_model();
    auto low = density(model, 0.0);
    CHECK(low[0] == 0.3);
    CHECK(low[1] == 0.4);
    CHECK(low[2] == 0.3);
    auto high = density(model, 1.0);
    CHECK(high[0] == 0.5);
    CHECK(high[1] == 0.3);
    CHECK(high[2] == 0.2);
    auto mid = density(model, 0.5);
    CHECK(mid[0] == doctest::Approx(0.40).epsilon(1e-15));
    CHECK(mid[1] == doctest::Approx(0.35).epsilon(1e-15));
    CHECK(mid[2] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(density(model, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(density(model, -0.1), std::invalid_argument);
}

TEST_CASE("rows stay on the simplex and interpolate exactly") {
    OutcomeModel model = case_model();
    Rng rng(5);
    auto low = density(model, 0.0);
    auto high = density(model, 1.0);
    for (int i = 0; i < 200; ++i) {
        double x = rng.next_double();
        auto row = density(model, x);
        CHECK(is_simplex(row, 1e-12));
        for (std::size_t k = 0; k < row.size(); ++k)
            CHECK(row[k] == (1.0 - x) * low[k] + x * high[k]);  // bitwise
    }
}

TEST_CASE("family derivative is the endpoint difference") {
    OutcomeModel model = case_model();
    auto d = density_dx(model, 0.25);
    CHECK(d[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(d[2] == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(sum(d) == doctest::Approx(0.0).epsilon(1e-12));

    // central-difference cross-check
    double h = 1e-6;
    auto up = density(model, 0.5 + h);
    auto down = density(model, 0.5 - h);
    for (std::size_t k = 0; k < d.size(); ++k)
        CHECK((up[k] - down[k]) / (2 * h) == doctest::Approx(d[k]).epsilon(1e-6));
}

TEST_CASE("table families") {
    OutcomeModel model{OutcomeGrid{{1, 2, 3}},
                       {1.0 / 3, 1.0 / 3, 1.0 / 3},
                       ActionFamily::table({0.0, 1.0}, {{0.3, 0.4, 0.3}, {0.5, 0.3, 0.2}})};
    CHECK(density(model, 1.0)[0] == 0.5);
    CHECK_THROWS_AS(density(model, 0.5), std::invalid_argument);
    auto d = density_dx(model, 0.0);
    CHECK(d[0] == doctest::Approx(0.2).epsilon(1e-12));

    OutcomeModel isolated{OutcomeGrid{{1, 2, 3}},
                          {1.0 / 3, 1.0 / 3, 1.0 / 3},
                          ActionFamily::table({0.0}, {{0.3, 0.4, 0.3}})};
    CHECK_THROWS_AS(density_dx(isolated, 0.0), UnsupportedError);
}

TEST_CASE("expectation") {
    std::vector<double> z = {1, 4, 9};
    CHECK(expectation(z, std::vector<double>{0.3, 0.4, 0.3}) ==
          doctest::Approx(4.6).epsilon(1e-15));
    CHECK(expectation(z, std::vector<double>{0.5, 0.3, 0.2}) ==
          doctest::Approx(3.5).epsilon(1e-15));
    CHECK(expectation(std::vector<double>{7, 7, 7}, std::vector<double>{0.2, 0.5, 0.3}) ==
          doctest::Approx(7.0).epsilon(1e-15));
    CHECK_THROWS_AS(expectation(z, std::vector<double>{0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("contract bounds") {
    OutcomeGrid grid{{1, 2, 3}};
    CHECK_NOTHROW(validate_contract(TabularContract{{0, 1, 3}}, grid));
    CHECK_THROWS_AS(validate_contract(TabularContract{{0, 2.5, 3}}, grid), std::invalid_argument);
    CHECK_THROWS_AS(validate_contract(TabularContract{{-0.1, 0, 0}}, grid), std::invalid_argument);
    CHECK_THROWS_AS(validate_contract(TabularContract{{0, 0}}, grid), std::invalid_argument);
    CHECK_NOTHROW(validate_contract(LinearContract{0.5, 1.0}, grid));
    CHECK_THROWS_AS(validate_contract(LinearContract{0.0, 1.0}, grid), std::invalid_argument);
    CHECK_THROWS_AS(validate_contract(LinearContract{1.0, 1.0}, grid), std::invalid_argument);
    CHECK_THROWS_AS(validate_contract(LinearContract{0.5, 0.0}, grid), std::invalid_argument);

    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> w(3);
        for (std::size_t k = 0; k < 3; ++k) w[k] = rng.next_double() * grid.points[k];
        CHECK_NOTHROW(validate_contract(TabularContract{w}, grid));
    }
}

TEST_CASE("coverage and residual rows") {
    OutcomeGrid grid{{1, 2, 3}};
    DisutilitySpec quad{DisutilityShape::Quadratic, 2.0, 0.0};
    auto row = residual_cost_row(grid, LinearContract{0.5, 1.0}, quad);
    CHECK(row[0] == doctest::Approx(0.25));
    CHECK(row[1] == doctest::Approx(1.0));
    CHECK(row[2] == doctest::Approx(2.25));
    CHECK(contract_premium(LinearContract{0.5, 1.0}) == 1.0);
    CHECK(contract_premium(TabularContract{{0, 0, 0}}) == 0.0);
}

TEST_CASE("disutility shapes") {
    DisutilitySpec power{DisutilityShape::Power, 3.0, 0.1};
    CHECK(power.g(2.0) == doctest::Approx(8.0));
    CHECK(power.g_prime(2.0) == doctest::Approx(12.0));
    DisutilitySpec identity{DisutilityShape::Identity, 1.0, 0.0};
    CHECK(identity.g(2.0) == 2.0);
    CHECK(identity.g_prime(2.0) == 1.0);
    DisutilitySpec bad{DisutilityShape::Power, 0.5, 0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    DisutilitySpec negative{DisutilityShape::Quadratic, 2.0, -1.0};
    CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
}

TEST_CASE("type distribution validation") {
    CHECK_THROWS_AS((TypeDistribution{{0.5, 0.4}}), std::invalid_argument);
    CHECK_THROWS_AS((TypeDistribution{{1.5, -0.5}}), std::invalid_argument);
    CHECK_NOTHROW((TypeDistribution{{0.25, 0.75}}));
}

TEST_CASE("scenario validation") {
    Scenario scenario{case_model(),
                      TypeSpace{{RiskMeasureSpec::expectation()}},
                      TypeDistribution{{1.0}},
                      DisutilitySpec{},
                      2.0,
                      1.0,
                      ActionSet::discrete({0.0, 1.0}),
                      std::nullopt};
    CHECK_NOTHROW(scenario.validate());
    Scenario bad_ubar = scenario;
    bad_ubar.u_bar = 0.0;
    CHECK_THROWS_AS(bad_ubar.validate(), std::invalid_argument);
    Scenario bad_gamma = scenario;
    bad_gamma.gamma = -1.0;
    CHECK_THROWS_AS(bad_gamma.validate(), std::invalid_argument);
    Scenario bad_mu = scenario;
    bad_mu.mu0 = TypeDistribution{{0.5, 0.5}};
    CHECK_THROWS_AS(bad_mu.validate(), std::invalid_argument);
    Scenario bad_action = scenario;
    bad_action.actions = ActionSet::discrete({0.0, 2.0});
    CHECK_THROWS_AS(bad_action.validate(), std::invalid_argument);
}
