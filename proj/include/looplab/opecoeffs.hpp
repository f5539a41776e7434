#pragma once

// Closed-form Coulomb-gas expansion coefficients and OPE structure
// constants, including the regularized limits needed for the logarithmic
// operators W_{1,±1} (tagged eps-order arithmetic).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "looplab/coulomb.hpp"
#include "looplab/gamma.hpp"

namespace looplab {

// An argument of gamma() that moves linearly with the regulator eps.
struct Arg {
    double x;      // value at eps = 0
    double s = 0;  // d(arg)/d(eps)
};

inline Tagged gprod(std::initializer_list<Arg> num, std::initializer_list<Arg> den = {}) {
    Tagged r{1.0, 0};
    for (const Arg& a : num) r *= gamma_tagged(a.x, a.s);
    for (const Arg& a : den) r /= gamma_tagged(a.x, a.s);
    return r;
}

// ---- expansion coefficients S_k ------------------------------------------

// General four-charge expansion coefficient (p-1 screening charges,
// channel k in the z->0 basis).
inline double sk_general(int p, int k, double a, double b, double c, double d, double rho) {
    if (k < 1 || k > p) throw std::domain_error("sk_general: need 1 <= k <= p");
    double r = 1.0;
    for (int j = 0; j <= k - 2; ++j)
        r *= gamma_fn((j + 1) * rho) * gamma_fn(1 + a + j * rho) * gamma_fn(1 + c + j * rho) /
             gamma_fn(2 + a + c + (k - 2 + j) * rho);
    for (int j = 0; j <= p - k - 1; ++j)
        r *= gamma_fn((j + 1) * rho) * gamma_fn(1 + b + j * rho) * gamma_fn(1 + d + j * rho) /
             gamma_fn(2 + b + d + (p - k - 1 + j) * rho);
    return r;
}

// Restricted case  <V_a V_{2a0-a} V_1p V_1p>:  S_k^(p)(a, a').
inline double sk_restricted(int p, int k, double a, double ap, double rho) {
    if (k < 1 || k > p) throw std::domain_error("sk_restricted: need 1 <= k <= p");
    double r = 1.0;
    for (int j = 0; j <= k - 2; ++j)
        r *= gamma_fn((j + 1) * rho) * gamma_fn(1 + a + j * rho) * gamma_fn(1 + ap + j * rho) /
             gamma_fn((k + j) * rho);
    for (int j = 0; j <= p - k - 1; ++j) {
        double t = gamma_fn(1 - (p - j - 1) * rho);
        r *= gamma_fn((j + 1) * rho) * t * t / gamma_fn(2 - (p + k - j - 1) * rho);
    }
    return r;
}

// C^2(V_{1,2k-1}, V_1p, V_1p)  (electric three-point couplings)
inline double cppk_squared(int p, int k, double rho) {
    double r = 1.0;
    for (int j = 0; j <= p - 2; ++j)
        r *= gamma_fn((j + 1) * rho) / gamma_fn(-1 + (j + 2) * rho);
    for (int j = 0; j <= k - 2; ++j)
        r *= gamma_fn((j + 1) * rho) * gamma_fn(-1 + (p + 1 + j) * rho) /
             (gamma_fn((j + k) * rho) * gamma_fn((p - 1 - j) * rho));
    for (int j = 0; j <= p - k - 1; ++j) {
        double t = gamma_fn((p - 1 - j) * rho);
        r *= gamma_fn((j + 1) * rho) * gamma_fn(-1 + (p + k - 1 - j) * rho) / (t * t);
    }
    return r;
}

// ---- electric OPE constants ----------------------------------------------

// C^2(V_alpha, V_alpha, V_{1,2k-1}) with eps-slopes on the letters a, a'.
inline Tagged C1_squared_tagged(int k, Arg a, Arg ap, double rho) {
    Tagged r{1.0, 0};
    for (int j = 0; j <= k - 2; ++j) {
        r *= tpow(gamma_tagged((j + 1) * rho), 3);
        r *= tpow(gamma_tagged(1 + a.x + j * rho, a.s), 2);
        r *= tpow(gamma_tagged(1 + ap.x + j * rho, ap.s), 2);
        r /= gamma_tagged((j + k) * rho);
    }
    for (int j = 0; j <= 2 * k - 3; ++j) r *= gamma_tagged(2 - (j + 2) * rho);
    return r;
}

inline double C1_squared(int k, double a, double ap, double rho) {
    return C1_squared_tagged(k, {a}, {ap}, rho).value();
}

// C^2(V_1p, V_alpha, V_{alpha + q alpha_+}), up to a q-independent constant.
// ell = (p+1)/2 - q must be an integer in 1..p.
inline double C2_squared(int p, double q, double a, double ap, double rho) {
    double elld = (p + 1) / 2.0 - q;
    int ell = static_cast<int>(std::lround(elld));
    if (std::abs(elld - ell) > 1e-9 || ell < 1 || ell > p)
        throw std::domain_error("C2_squared: q incompatible with p");
    double r = 1.0;
    for (int j = 0; j <= ell - 2; ++j) {
        double t = gamma_fn((j + 1) * rho);
        r *= t * t * gamma_fn(1 + ap + j * rho) * gamma_fn(1 + a + (p - ell - 1 - j) * rho);
    }
    for (int j = 0; j <= p - ell - 1; ++j) {
        double t = gamma_fn((j + 1) * rho);
        r *= t * t * gamma_fn(1 + a + j * rho) * gamma_fn(1 + ap + (ell - 2 - j) * rho);
    }
    return r;
}

// C^2(V12, V_a, V_{a - a_+/2}) / C^2(V12, V_a, V_{a + a_+/2})
inline Tagged C2bis_ratio_squared_tagged(Arg a, Arg ap, double rho) {
    return gprod({{1 + ap.x, ap.s}, {1 + a.x - rho, a.s}},
                 {{1 + a.x, a.s}, {1 + ap.x - rho, ap.s}});
}
inline double C2bis_ratio_squared(double a, double ap, double rho) {
    return C2bis_ratio_squared_tagged({a}, {ap}, rho).value();
}

// ---- mixed electric/magnetic coefficients (geometric means) --------------

// C(V_{alpha,alphabar}, V_{alpha,alphabar}, V_{1,2k-1})
//   = [ C^2(V_alpha,...) * C^2(V_alphabar,...) ]^(1/4)
inline Tagged C_mixed_electric_tagged(int k, Arg a, Arg ap, Arg ab, Arg abp, double rho) {
    Tagged h = C1_squared_tagged(k, a, ap, rho);
    Tagged hb = C1_squared_tagged(k, ab, abp, rho);
    return tsqrt(tsqrt(h * hb));
}

// ratio^2 of C(V12, V_{a,ab}, V_{-alpha_+/2 shift}) / C(..., +alpha_+/2 shift)
inline Tagged C5_ratio_squared_tagged(Arg a, Arg ap, Arg ab, Arg abp, double rho) {
    return tsqrt(C2bis_ratio_squared_tagged(a, ap, rho) *
                 C2bis_ratio_squared_tagged(ab, abp, rho));
}

// ---- functional-relation ratios (crossing with Phi_12) --------------------

// (X1/X2)^2 from the monodromy problem of <Phi_1 Phi_12 Phi_3 Phi_4>.
inline Tagged X_ratio_squared_tagged(Arg a, Arg ap, Arg b, Arg bp, Arg d,
                                     Arg ab, Arg abp, Arg bb, Arg bbp, Arg db,
                                     double rho) {
    auto half = [&](Arg A, Arg Ap, Arg B, Arg Bp, Arg D) {
        return gprod({{(A.x - Ap.x) / 2, (A.s - Ap.s) / 2},
                      {(D.x - A.x - Bp.x + rho) / 2, (D.s - A.s - Bp.s) / 2},
                      {(D.x - A.x - B.x + rho) / 2, (D.s - A.s - B.s) / 2}},
                     {{(Ap.x - A.x) / 2, (Ap.s - A.s) / 2},
                      {(D.x - Ap.x - Bp.x + rho) / 2, (D.s - Ap.s - Bp.s) / 2},
                      {(D.x - Ap.x - B.x + rho) / 2, (D.s - Ap.s - B.s) / 2}});
    };
    return half(a, ap, b, bp, d) * half(ab, abp, bb, bbp, db);
}

// [C(Phi_{a1-a+/2}, Phi2, Phi3) / C(Phi_{a1+a+/2}, Phi2, Phi3)]^2
inline Tagged C6_ratio_squared_tagged(Arg a, Arg ap, Arg b, Arg bp, Arg d,
                                      Arg ab, Arg abp, Arg bb, Arg bbp, Arg db,
                                      double rho) {
    auto locpart = [&](Arg A, Arg Ap) {
        return gprod({{(A.x - Ap.x) / 2, (A.s - Ap.s) / 2}, {1 + A.x, A.s}},
                     {{(Ap.x - A.x) / 2, (Ap.s - A.s) / 2}, {1 + Ap.x, Ap.s}});
    };
    auto dpart = [&](Arg A, Arg Ap, Arg B, Arg Bp, Arg D) {
        return gprod({{(D.x - A.x - Bp.x + rho) / 2, (D.s - A.s - Bp.s) / 2},
                      {(D.x - A.x - B.x + rho) / 2, (D.s - A.s - B.s) / 2}},
                     {{(D.x - Ap.x - Bp.x + rho) / 2, (D.s - Ap.s - Bp.s) / 2},
                      {(D.x - Ap.x - B.x + rho) / 2, (D.s - Ap.s - B.s) / 2}});
    };
    return tsqrt(locpart(a, ap) * locpart(ab, abp)) * dpart(a, ap, b, bp, d) *
           dpart(ab, abp, bb, bbp, db);
}

// ---- closed-form predictions for the four measured constants --------------

// sign-aware magnitude of the 2^m-th root of a tagged (finite) value
inline double root_magnitude(Tagged t, int twopow) {
    if (!t.finite()) return t.value();
    double v = std::abs(t.m);
    for (int i = 0; i < twopow; ++i) v = std::sqrt(v);
    return v;
}

// C(W10, W10, V13)
inline double C_theo1(const CoulombParams& p) {
    double rho = p.rho();
    Tagged inner = gprod({{rho}, {rho}, {rho}, {2 - 2 * rho}, {2 - 3 * rho}}, {{2 * rho}});
    return root_magnitude(inner, 1) * gamma_fn(rho + 1) * gamma_fn(rho - 1);
}

// C(W11, W11, V13), closed form as printed
inline double C_theo2(const CoulombParams& p) {
    double rho = p.rho();
    Tagged inner = gprod({{rho}, {rho}, {rho}, {1 + 2 * rho}}, {{2 * rho}});
    if (!inner.finite()) return inner.value();
    return std::sqrt(std::abs(inner.m * rho * (2 - 3 * rho)));
}

// C(W11, W11, V13) via the regularized geometric-mean limit
// alpha = alpha_11 + eps, alphabar = alpha_{-1,1} + eps.
inline double C_theo2_reg(const CoulombParams& p) {
    double rho = p.rho(), s = 2 * p.alpha_plus();
    ChargePair w11 = ChargePair::from_me(p, 1, 1);
    Tagged t = C_mixed_electric_tagged(2, {w11.a(p), s}, {w11.a_prime(p), -s},
                                       {w11.abar(p), s}, {w11.abar_prime(p), -s}, rho);
    return std::abs(t.value());
}

// C(V12, W11, W12) / C(V12, W11, W10), closed form as printed
inline double C_theo3(const CoulombParams& p) {
    double rho = p.rho();
    Tagged inner = gprod({{-1 + 2 * rho}, {1 + 2 * rho}, {1 - rho}, {-1 - rho}},
                         {{-1 + rho}, {1 + rho}});
    return root_magnitude(inner, 2);
}

// same ratio via the regularized C5 limit
inline double C_theo3_reg(const CoulombParams& p) {
    double rho = p.rho(), s = 2 * p.alpha_plus();
    ChargePair w11 = ChargePair::from_me(p, 1, 1);
    Tagged t = C5_ratio_squared_tagged({w11.a(p), s}, {w11.a_prime(p), -s},
                                       {w11.abar(p), s}, {w11.abar_prime(p), -s}, rho);
    return root_magnitude(t, 1);
}

// C(W10, W10, W12) / C(W10, W10, W10), closed form as printed
inline double C_theo4(const CoulombParams& p) {
    double rho = p.rho();
    Tagged first = gprod({{1 - rho}, {-1 - rho}},
                         {{-1 + 2 * rho}, {1 + 2 * rho}, {-1 + rho}, {1 + rho}});
    Tagged second = gprod({{rho / 2}, {rho / 2}, {rho / 2}, {-1 + rho / 2}},
                          {{-rho / 2}, {-rho / 2}, {-rho / 2}, {-1 - rho / 2}});
    return root_magnitude(first, 2) * root_magnitude(second, 1);
}

// same ratio via the crossing relation with Phi_12 (eps-regularized W11 legs)
inline double C_theo4_reg(const CoulombParams& p) {
    double rho = p.rho(), s = 2 * p.alpha_plus();
    ChargePair w11 = ChargePair::from_me(p, 1, 1);
    ChargePair w10 = ChargePair::from_me(p, 1, 0);
    Tagged t = C6_ratio_squared_tagged(
        {w11.a(p), s}, {w11.a_prime(p), -s},
        {w10.a(p)}, {w10.a_prime(p)}, {w10.a(p)},
        {w11.abar(p), s}, {w11.abar_prime(p), -s},
        {w10.abar(p)}, {w10.abar_prime(p)}, {w10.abar(p)}, rho);
    return root_magnitude(t, 1);
}

// ---- normalisation factors and connection-matrix boundary rows ------------

inline double sinpi(double x) { return std::sin(M_PI * x); }

// N_k(alpha_1..alpha_4) for p-1 screening charges
inline double nk_norm(int p, int k, double a, double b, double c, double d, double rho) {
    double r = 1.0;
    for (int j = 0; j <= k - 2; ++j)
        r *= std::tgamma((j + 1) * rho) / std::tgamma(rho) * std::tgamma(1 + a + j * rho) *
             std::tgamma(1 + c + j * rho) / std::tgamma(2 + a + c + (k - 2 + j) * rho);
    for (int j = 0; j <= p - k - 1; ++j)
        r *= std::tgamma((j + 1) * rho) / std::tgamma(rho) * std::tgamma(1 + b + j * rho) *
             std::tgamma(1 + d + j * rho) / std::tgamma(2 + b + d + (p - k - 1 + j) * rho);
    return r;
}

// last row A_{pk} of the change-of-basis matrix between the z->0 and z->1
// conformal-block bases (p-1 screening charges)
inline double a_pk(int p, int k, double a, double b, double c, double d, double rho) {
    double r = 1.0;
    for (int j = 0; j <= k - 2; ++j)
        r *= sinpi(1 + b + j * rho) / sinpi(2 + b + c + (k - 2 + j) * rho);
    for (int j = 0; j <= p - k - 1; ++j)
        r *= sinpi(1 + d + j * rho) / sinpi(2 + a + d + (p - k - 1 + j) * rho);
    return r;
}

// last column A_{kp}; depends on the internal-channel letters b, c only
inline double a_kp(int p, int k, double b, double c, double rho) {
    double r = 1.0;
    for (int j = 0; j <= p - 2; ++j) r *= sinpi((j + 1) * rho);
    for (int j = 0; j <= k - 2; ++j)
        r *= sinpi(1 + b + (p - k + j) * rho) /
             (sinpi((j + 1) * rho) * sinpi(b + c + (p - 2 + j) * rho));
    for (int j = 0; j <= p - k - 1; ++j)
        r *= sinpi(1 + c + (k - 1 + j) * rho) /
             (sinpi((j + 1) * rho) * sinpi(b + c + (p - 3 + k + j) * rho));
    return r;
}

// row p of the inverse matrix: the a <-> b image of A_{pk}
inline double atilde_pk(int p, int k, double a, double b, double c, double d, double rho) {
    return a_pk(p, k, b, a, c, d, rho);
}

// bracketed product of the proportionality statement for A_{kp}
inline double a_kp_bracket(int p, int k, double b, double c, double rho) {
    double r = 1.0;
    for (int j = 0; j <= k - 2; ++j) r *= sinpi((j + 1) * rho) * sinpi(1 + c + j * rho);
    for (int j = 0; j <= p - k - 1; ++j) r *= sinpi((j + 1) * rho) * sinpi(1 + b + j * rho);
    return r;
}

}  // namespace looplab
