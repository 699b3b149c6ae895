// Test-only reference computations, independent of the library paths they
// check: adaptive Simpson quadrature and closed-form surface quantities.
#ifndef DRIFTSPEC_TESTS_ORACLES_HPP
#define DRIFTSPEC_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = simpson(f, a, m);
    const double right = simpson(f, m, b);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, right, tol / 2.0, depth - 1);
}

// Adaptive Simpson to absolute tolerance tol.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    return adaptive_simpson_rec(f, a, b, simpson(f, a, b), tol, 48);
}

} // namespace oracles

#endif
