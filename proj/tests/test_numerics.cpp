#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "riskdesign/numerics.hpp"

using namespace riskdesign;

TEST_CASE("format_double uses 12 significant digits and no locale") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(1.0 / 3.0) == "0.333333333333");
    CHECK(format_double(-0.15) == "-0.15");
    CHECK(format_double(12345.678901234) == "12345.6789012");
}

TEST_CASE("golden section finds quadratic minima") {
    auto f = [](double x) { return (x - 0.3) * (x - 0.3); };
    CHECK(golden_section_min(f, 0.0, 1.0, 1e-10) == doctest::Approx(0.3).epsilon(1e-7));
    // boundary minimum
    auto g = [](double x) { return x; };
    CHECK(golden_section_min(g, 0.25, 1.0, 1e-10) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("bisection root") {
    auto f = [](double x) { return x * x - 2.0; };
    CHECK(bisect_root(f, 0.0, 2.0, 1e-14) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(bisect_root(f, 2.0, 3.0), std::invalid_argument);
}

TEST_CASE("rng simplex draws are simplex points and deterministic") {
    Rng rng(42);
    for (int i = 0; i < 50; ++i) {
        auto v = rng.simplex(4);
        CHECK(is_simplex(v, 1e-12));
    }
    Rng a(7), b(7);
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
}
