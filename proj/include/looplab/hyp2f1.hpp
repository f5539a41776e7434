#pragma once

// Gauss hypergeometric function for complex parameters and argument,
// restricted to the region needed by the conformal blocks (|z| < 1 plus
// arguments of the form 1-z with z near 0).

#include <cmath>
#include <complex>
#include <stdexcept>

namespace looplab {

using cdouble = std::complex<double>;

// Lanczos approximation, g = 7, 9 terms
inline cdouble cgamma(cdouble z) {
    static const double coef[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection
        return M_PI / (std::sin(M_PI * z) * cgamma(1.0 - z));
    }
    z -= 1.0;
    cdouble x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + static_cast<double>(i));
    cdouble t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

namespace detail {

inline cdouble hyp2f1_series(cdouble A, cdouble B, cdouble C, cdouble z) {
    cdouble term = 1.0, sum = 1.0;
    for (int n = 0; n < 4000; ++n) {
        double dn = n;
        term *= (A + dn) * (B + dn) / ((C + dn) * (dn + 1.0)) * z;
        sum += term;
        if (std::abs(term) < 1e-16 * (1.0 + std::abs(sum)) && n > 4) return sum;
    }
    throw std::runtime_error("hyp2f1: series not converged");
}

}  // namespace detail

inline cdouble hyp2f1(cdouble A, cdouble B, cdouble C, cdouble z) {
    if (std::abs(z) <= 0.7) return detail::hyp2f1_series(A, B, C, z);
    cdouble w = z / (z - 1.0);
    if (std::abs(w) <= 0.7)
        return std::pow(1.0 - z, -A) * detail::hyp2f1_series(A, C - B, C, w);
    cdouble u = 1.0 - z;
    if (std::abs(u) <= 0.7 || std::abs(u / (u - 1.0)) <= 0.7) {
        // connection about z = 1 (generic exponents only)
        cdouble cab = C - A - B;
        cdouble f1 = cgamma(C) * cgamma(cab) / (cgamma(C - A) * cgamma(C - B)) *
                     hyp2f1(A, B, A + B - C + 1.0, u);
        cdouble f2 = std::pow(u, cab) * cgamma(C) * cgamma(-cab) / (cgamma(A) * cgamma(B)) *
                     hyp2f1(C - A, C - B, cab + 1.0, u);
        return f1 + f2;
    }
    throw std::domain_error("hyp2f1: argument outside supported region");
}

inline cdouble hyp2f1_deriv(cdouble A, cdouble B, cdouble C, cdouble z) {
    return A * B / C * hyp2f1(A + 1.0, B + 1.0, C + 1.0, z);
}

}  // namespace looplab
