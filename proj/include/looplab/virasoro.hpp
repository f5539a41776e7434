#pragma once

// Descendant OPE coefficients at levels one and two, the level-2 Gram
// matrix, and the indecomposability parameter of the (chi_12, W_{1,-2})
// Jordan block via the e0 -> 1-g limit.

#include <array>
#include <cmath>
#include <stdexcept>

#include "looplab/coulomb.hpp"

namespace looplab {

// beta_12^{p(1)}: coefficient of L_{-1} Phi_p in the OPE Phi_1 x Phi_2
inline double beta_level1(double h1, double h2, double hp) {
    return (h1 - h2 + hp) / (2.0 * hp);
}

// P(h1, h2, hp), numerator of beta^{p(2)}
inline double level2_P(double h1, double h2, double hp) {
    return -3.0 * (h1 - h2 + hp) * (h1 - h2 + hp + 1.0) +
           2.0 * (2.0 * hp + 1.0) * (2.0 * h1 - h2 + hp);
}

struct Level2Coeffs {
    double beta1;    // L_{-1}
    double beta2;    // L_{-2}
    double beta11;   // L_{-1}^2
};

inline Level2Coeffs descendant_coeffs(double h1, double h2, double hp, double c) {
    Level2Coeffs r;
    r.beta1 = beta_level1(h1, h2, hp);
    double den = 16.0 * hp * hp + 2.0 * (c - 5.0) * hp + c;
    r.beta2 = level2_P(h1, h2, hp) / den;
    r.beta11 = (2.0 * (2.0 * h1 - h2 + hp) - (8.0 * hp + c) * r.beta2) / (12.0 * hp);
    return r;
}

// residuals of the printed level-2 linear system
inline std::array<double, 2> level2_system_residual(double h1, double h2, double hp, double c) {
    Level2Coeffs b = descendant_coeffs(h1, h2, hp, c);
    double r1 = 2.0 * (2.0 * hp + 1.0) * b.beta11 + 3.0 * b.beta2 -
                (h1 - h2 + hp + 1.0) * b.beta1;
    double r2 = 6.0 * hp * b.beta11 + (4.0 * hp + c / 2.0) * b.beta2 - (2.0 * h1 - h2 + hp);
    return {r1, r2};
}

// Gram matrix of {L_{-2}|h>, L_{-1}^2|h>}
inline std::array<std::array<double, 2>, 2> gram_level2(double h, double c) {
    return {{{4.0 * h + c / 2.0, 6.0 * h}, {6.0 * h, 4.0 * h * (2.0 * h + 1.0)}}};
}

// <V_h| (L_2 - g L_1^2)(L_{-2} - g L_{-1}^2) |V_h>
inline double chi12_norm(double h, double c, double g) {
    return (4.0 * h + c / 2.0) - 12.0 * g * h + 4.0 * g * g * h * (2.0 * h + 1.0);
}

struct LogOpeLimit {
    double beta_indec;     // lim <chi|chi> / (h - h')
    double partner_ratio;  // lim (h - h') / (h - h^K_12)
};

// Numerical e0 -> 1-g limit (two-sided, Richardson-extrapolated).
// Throws if the extrapolation is not converged.
inline LogOpeLimit log_ope_limit(double g, double tol = 1e-7) {
    if (g <= 0.0 || g >= 1.0) throw std::domain_error("log_ope_limit: need 0 < g < 1");
    auto eval = [&](double d) -> std::array<double, 2> {
        CoulombParams p{g, 1.0 - g + d};
        double h = p.h_me(0.0, p.e0 + 1.0);
        double hp = p.h_me(1.0, 2.0);
        double hk = p.h_kac(1, 2);
        return {chi12_norm(h, p.central_charge(), g) / (h - hp), (h - hp) / (h - hk)};
    };
    auto sym = [&](double eps) -> std::array<double, 2> {
        auto a = eval(eps), b = eval(-eps);
        return {(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0};
    };
    // symmetric average kills the O(eps) term; Richardson in eps^2
    double eps = 1e-4;
    auto f1 = sym(eps), f2 = sym(eps / 2.0), f3 = sym(eps / 4.0);
    LogOpeLimit out;
    double res[2];
    for (int i = 0; i < 2; ++i) {
        double r12 = (4.0 * f2[i] - f1[i]) / 3.0;
        double r23 = (4.0 * f3[i] - f2[i]) / 3.0;
        res[i] = (16.0 * r23 - r12) / 15.0;
        if (std::abs(r23 - r12) > tol * (1.0 + std::abs(res[i])))
            throw std::runtime_error("log_ope_limit: limit not converged");
    }
    // the Jordan partner is proportional to [-chi + kappa w], so
    // <chi|w> picks up a minus sign relative to the raw norm/(h-h') limit
    out.beta_indec = -res[0];
    out.partner_ratio = res[1];
    return out;
}

// C(Phi_1, Phi_2, w_{1,-2}) from C(Phi_1, Phi_2, V_h) and the finite
// factors of the logarithmic OPE
inline double log_partner_coeff(double C_v, double h1, double h2, double g) {
    CoulombParams p{g, 1.0 - g};
    double h = p.h_kac(1, 2);
    double q12 = level2_P(h1, h2, h) / (16.0 * (h - p.h_kac(2, 1)));
    return C_v * q12 * log_ope_limit(g).partner_ratio;
}

}  // namespace looplab
