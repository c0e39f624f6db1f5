#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace riskdesign {

inline constexpr double kSimplexTol = 1e-12;

/// Deterministic 64-bit generator (splitmix64). Used by property tests and
/// randomized acceptance suites; never seeded from the clock.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    std::vector<double> simplex(std::size_t n) {
        std::vector<double> v(n);
        double total = 0.0;
        for (auto& e : v) {
            e = -std::log(1.0 - next_double());
            total += e;
        }
        for (auto& e : v) e /= total;
        return v;
    }

private:
    std::uint64_t state_;
};

double sum(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
bool is_simplex(std::span<const double> v, double tol = kSimplexTol);

/// Locale-independent formatting with 12 significant digits; shared by all
/// report emitters so golden files are stable across platforms.
std::string format_double(double value, int significant_digits = 12);

/// Minimizes a unimodal function on [lo, hi] by golden-section search.
/// Returns the argmin; ties resolve toward lo.
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-8);

/// Finds the root of a monotone function on [lo, hi] by bisection.
/// Requires f(lo) and f(hi) to bracket zero.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol = 1e-12);

/// Central finite difference (f(x+h) - f(x-h)) / 2h.
double central_difference(const std::function<double(double)>& f, double x, double h);

}  // namespace riskdesign
