#include <doctest.h>

#include "riskdesign/simplex_lp.hpp"

using namespace riskdesign;

TEST_CASE("box constraints") {
    LpResult r = lp_solve_max({{1, 0}, {0, 1}}, {1, 2}, {1, 1});
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.x[0] == doctest::Approx(1.0));
    CHECK(r.x[1] == doctest::Approx(2.0));
}

TEST_CASE("coupling constraint binds") {
    // max 2x + 3y s.t. x + y <= 4, x <= 2, y <= 3
    LpResult r = lp_solve_max({{1, 1}, {1, 0}, {0, 1}}, {4, 2, 3}, {2, 3});
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(11.0).epsilon(1e-12));
    CHECK(r.x[0] == doctest::Approx(1.0));
    CHECK(r.x[1] == doctest::Approx(3.0));
}

TEST_CASE("negative rhs goes through phase one") {
    // max -x s.t. -x <= -1  (i.e. x >= 1)
    LpResult r = lp_solve_max({{-1}}, {-1}, {-1});
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.x[0] == doctest::Approx(1.0));
    CHECK(r.objective == doctest::Approx(-1.0));
}

TEST_CASE("infeasible and unbounded are detected") {
    CHECK(lp_solve_max({{1}, {-1}}, {1, -2}, {1}).status == LpStatus::Infeasible);
    CHECK(lp_solve_max({{0}}, {1}, {1}).status == LpStatus::Unbounded);
}

TEST_CASE("degenerate pivoting terminates (classic cycling data)") {
    LpResult r = lp_solve_max(
        {{0.25, -60.0, -0.04, 9.0}, {0.5, -90.0, -0.02, 3.0}, {0.0, 0.0, 1.0, 0.0}},
        {0.0, 0.0, 1.0}, {0.75, -150.0, 0.02, -6.0});
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(0.05).epsilon(1e-9));
}
