#include "riskdesign/numerics.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace riskdesign {

double sum(std::span<const double> v) {
    double total = 0.0;
    for (double e : v) total += e;
    return total;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
    return total;
}

bool is_simplex(std::span<const double> v, double tol) {
    for (double e : v)
        if (e < -tol || !std::isfinite(e)) return false;
    return std::abs(sum(v) - 1.0) <= tol;
}

std::string format_double(double value, int significant_digits) {
    if (value == 0.0) value = 0.0;  // normalize -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general,
                             significant_digits);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf, res.ptr);
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
    if (!(lo <= hi)) throw std::invalid_argument("golden_section_min: empty interval");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {  // keep the left interval on ties
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    // Evaluate interval ends as well so boundary minima are exact.
    double xm = 0.5 * (a + b);
    double best_x = lo, best_f = f(lo);
    for (double cand : {xm, hi}) {
        double fc = f(cand);
        if (fc < best_f - 0.0) {
            best_f = fc;
            best_x = cand;
        }
    }
    return best_x;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw std::invalid_argument("bisect_root: interval does not bracket a root");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace riskdesign
