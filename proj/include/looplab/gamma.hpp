#pragma once

// gamma(x) = Gamma(x)/Gamma(1-x), the building block of every Coulomb-gas
// structure-constant formula, plus a tagged arithmetic for evaluating
// products of gamma's at points where individual factors hit poles/zeros.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace looplab {

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// gamma(x) = Gamma(x)^2 sin(pi x) / pi.
// Simple poles at x = 0, -1, -2, ...; simple zeros at x = 1, 2, 3, ...
inline double gamma_fn(double x) {
    double r = std::nearbyint(x);
    if (std::abs(x - r) < 1e-13) {
        if (r >= 1.0) return 0.0;
        return std::numeric_limits<double>::infinity();  // pole
    }
    return std::exp(2.0 * std::lgamma(x)) * std::sin(M_PI * x) / M_PI;
}

// Value of the form  m * eps^k  for a common infinitesimal eps.
// k < 0 is a pole of order |k|, k > 0 a zero of order k.
struct Tagged {
    double m = 1.0;  // mantissa
    int k = 0;       // order in eps

    bool finite() const { return k == 0; }
    double value() const {
        if (k > 0) return 0.0;
        if (k < 0) return std::numeric_limits<double>::infinity();
        return m;
    }
};

inline Tagged operator*(Tagged x, Tagged y) { return {x.m * y.m, x.k + y.k}; }
inline Tagged operator/(Tagged x, Tagged y) { return {x.m / y.m, x.k - y.k}; }
inline Tagged& operator*=(Tagged& x, Tagged y) { x = x * y; return x; }
inline Tagged& operator/=(Tagged& x, Tagged y) { x = x / y; return x; }

inline Tagged tpow(Tagged x, int n) {
    Tagged r{1.0, 0};
    bool inv = n < 0;
    for (int i = 0; i < std::abs(n); ++i) r *= x;
    return inv ? Tagged{1.0, 0} / r : r;
}

// sqrt of a tagged value; the order must be even.
inline Tagged tsqrt(Tagged x) {
    if (x.k % 2 != 0) throw std::domain_error("tsqrt: odd eps-order");
    return {std::sqrt(x.m), x.k / 2};
}

// gamma(x + slope*eps) as a tagged value.
// At a pole -j the residue of gamma is (-1)^j / (j!)^2.
// At a zero 1+j the slope of gamma is (-1)^(j+1) (j!)^2.
inline Tagged gamma_tagged(double x, double slope = 0.0) {
    double r = std::nearbyint(x);
    if (std::abs(x - r) < 1e-9) {
        if (r <= 0.0) {
            int j = static_cast<int>(-r);
            double res = ((j % 2) ? -1.0 : 1.0) / (factorial(j) * factorial(j));
            if (slope == 0.0) throw std::domain_error("gamma_tagged: pole with zero slope");
            return {res / slope, -1};
        }
        int j = static_cast<int>(r) - 1;
        double sl = ((j % 2) ? 1.0 : -1.0) * factorial(j) * factorial(j);
        if (slope == 0.0) return {0.0, 0};
        return {sl * slope, +1};
    }
    return {gamma_fn(x), 0};
}

}  // namespace looplab
