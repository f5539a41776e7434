#pragma once

// Hypergeometric conformal blocks of the four-point function with one
// screening charge: the I/J bases, connection matrices (generic and
// logarithmic), crossing ratios, and monodromy transport around z = 0.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "looplab/coulomb.hpp"
#include "looplab/hyp2f1.hpp"

namespace looplab {

// Four-point block data for the null-vector ODE: vertex charges alpha_1,
// alpha_3, alpha_4 are free; the second field is the degenerate one with
// charge -alpha_+/2 (letter -rho).
struct FourPoint {
    CoulombParams p;
    double al1, al2, al3, al4;

    static FourPoint make(const CoulombParams& p, double al1, double al3, double al4) {
        return FourPoint{p, al1, -p.alpha_plus() / 2.0, al3, al4};
    }
    double rho() const { return p.rho(); }
    // letters: x = 2 alpha_+ alpha, x' = 2(rho-1) - x
    double a() const { return p.letter_a(al1); }
    double ap() const { return p.letter_a_prime(al1); }
    double b() const { return p.letter_a(al3); }
    double bp() const { return p.letter_a_prime(al3); }
    double d() const { return p.letter_a(al4); }
    double dp() const { return p.letter_a_prime(al4); }
    double h(int i) const {
        double al = (i == 1 ? al1 : i == 2 ? al2 : i == 3 ? al3 : al4);
        return p.h_of_alpha(al);
    }
};

inline cdouble block_I1(const FourPoint& f, cdouble z) {
    double rho = f.rho();
    return std::pow(z, -f.a() / 2.0) * std::pow(1.0 - z, -f.b() / 2.0) *
           hyp2f1((f.d() - f.a() - f.b() + rho) / 2.0, (f.dp() - f.a() - f.b() + rho) / 2.0,
                  1.0 + (f.ap() - f.a()) / 2.0, z);
}

inline cdouble block_I2(const FourPoint& f, cdouble z) {
    double rho = f.rho();
    return std::pow(z, -f.ap() / 2.0) * std::pow(1.0 - z, -f.bp() / 2.0) *
           hyp2f1((f.dp() - f.ap() - f.bp() + rho) / 2.0,
                  (f.d() - f.ap() - f.bp() + rho) / 2.0, 1.0 + (f.a() - f.ap()) / 2.0, z);
}

inline cdouble block_J1(const FourPoint& f, cdouble z) {
    double rho = f.rho();
    return std::pow(z, -f.a() / 2.0) * std::pow(1.0 - z, -f.b() / 2.0) *
           hyp2f1((f.d() - f.a() - f.b() + rho) / 2.0, (f.dp() - f.a() - f.b() + rho) / 2.0,
                  1.0 + (f.bp() - f.b()) / 2.0, 1.0 - z);
}

inline cdouble block_J2(const FourPoint& f, cdouble z) {
    double rho = f.rho();
    return std::pow(z, -f.ap() / 2.0) * std::pow(1.0 - z, -f.bp() / 2.0) *
           hyp2f1((f.dp() - f.ap() - f.bp() + rho) / 2.0,
                  (f.d() - f.ap() - f.bp() + rho) / 2.0, 1.0 + (f.b() - f.bp()) / 2.0,
                  1.0 - z);
}

using Mat2 = std::array<std::array<double, 2>, 2>;

// change of basis I_k = sum_l M_kl J_l; inverse is M(b,a,d)
inline Mat2 connection_matrix(double a, double b, double d, double rho) {
    double ap = 2.0 * (rho - 1.0) - a;
    double bp = 2.0 * (rho - 1.0) - b;
    double dp = 2.0 * (rho - 1.0) - d;
    auto G = [](double x) { return std::tgamma(x); };
    Mat2 m;
    m[0][0] = G(1 + (ap - a) / 2) * G((b - bp) / 2) /
              (G((d - a - bp + rho) / 2) * G((dp - a - bp + rho) / 2));
    m[0][1] = G(1 + (ap - a) / 2) * G((bp - b) / 2) /
              (G((d - a - b + rho) / 2) * G((dp - a - b + rho) / 2));
    m[1][0] = G(1 + (a - ap) / 2) * G((b - bp) / 2) /
              (G((d - ap - bp + rho) / 2) * G((dp - ap - bp + rho) / 2));
    m[1][1] = G(1 + (a - ap) / 2) * G((bp - b) / 2) /
              (G((d - ap - b + rho) / 2) * G((dp - ap - b + rho) / 2));
    return m;
}

// second-order ODE satisfied by all blocks (holomorphic sector)
//   g f'' + (1/z + 1/(z-1)) f' + (h1/z - h3/(z-1) + h2 - h4)/(z(z-1)) f = 0
inline cdouble block_ode_fpp(const FourPoint& f, cdouble z, cdouble fz, cdouble fpz) {
    double g = f.p.g;
    cdouble coef1 = 1.0 / z + 1.0 / (z - 1.0);
    cdouble coef0 = (f.h(1) / z - f.h(3) / (z - 1.0) + f.h(2) - f.h(4)) / (z * (z - 1.0));
    return -(coef1 * fpz + coef0 * fz) / g;
}

// residual of the ODE with derivatives taken by Cauchy integrals on a small
// circle (spectral accuracy); func must be analytic in |w - z| <= r
inline double pde_residual(const FourPoint& f, const std::function<cdouble(cdouble)>& func,
                           cdouble z, double r = 0.08) {
    constexpr int N = 32;
    cdouble f0 = func(z), d1 = 0.0, d2 = 0.0;
    for (int k = 0; k < N; ++k) {
        double th = 2.0 * M_PI * k / N;
        cdouble e{std::cos(th), std::sin(th)};
        cdouble fv = func(z + r * e);
        d1 += fv / e;
        d2 += fv / (e * e);
    }
    d1 /= N * r;
    d2 *= 2.0 / (N * r * r);
    cdouble res = f.p.g * d2 - block_ode_fpp(f, z, f0, d1) * f.p.g;
    double scale = std::abs(f0) + std::abs(d1) + std::abs(d2);
    return std::abs(res) / (scale > 0 ? scale : 1.0);
}

// ---- logarithmic case: a - a' = -2m ----------------------------------------

// regularized first charge: a = rho - 1 - m - eps
inline FourPoint log_fourpoint(const CoulombParams& p, int m, double al3, double al4,
                               double eps = 0.0) {
    double a = p.rho() - 1.0 - m - eps;
    double al1 = a / (2.0 * p.alpha_plus());
    return FourPoint::make(p, al1, al3, al4);
}

// The printed epsilon-limit combination for the logarithmic partner block.
// The second regularized block carries a simple pole proportional to the
// first one, I_{2,eps} ~ [Gamma(1-m-eps)/m!] (q)_m (q')_m I_{1,eps}; we
// subtract it explicitly so the limit is finite.  `wind` applies the known
// prefactor phases of a loop z -> z e^{2 pi i wind} around the origin.
inline cdouble log_block_I2t_raw(const CoulombParams& p, int m, double al3, double al4,
                                 cdouble z, double eps, int wind = 0) {
    FourPoint fe = log_fourpoint(p, m, al3, al4, eps);
    double rho = p.rho();
    double a = fe.a(), a_p = fe.ap(), b = fe.b(), bp = fe.bp(), d = fe.d(), dp = fe.dp();
    auto G = [](double x) { return std::tgamma(x); };
    double c1 = G((d - a_p - b + rho) / 2) * G((dp - a_p - b + rho) / 2) /
                G(1 + (bp - b) / 2);
    double c2 = G((d - a_p - bp + rho) / 2) * G((dp - a_p - bp + rho) / 2) /
                G(1 + (b - bp) / 2);
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    double poch = 1.0;
    for (int j = 0; j < m; ++j)
        poch *= ((d - b - m + 1) / 2 + j) * ((dp - b - m + 1) / 2 + j);
    double pole = G(1.0 - m - eps) / fact * poch;
    cdouble ph1 = std::exp(cdouble(0.0, -M_PI * a * wind));
    cdouble ph2 = std::exp(cdouble(0.0, -M_PI * a_p * wind));
    cdouble i1 = ph1 * block_I1(fe, z);
    cdouble i2 = ph2 * block_I2(fe, z);
    return sign * fact / 2.0 * (c1 * i1 + c2 * (i2 - pole * i1));
}

// finite-eps limit, three-level Richardson in eps
inline cdouble log_block_I2t_limit(const CoulombParams& p, int m, double al3, double al4,
                                   cdouble z, int wind = 0, double eps = 1e-3) {
    cdouble f1 = log_block_I2t_raw(p, m, al3, al4, z, eps, wind);
    cdouble f2 = log_block_I2t_raw(p, m, al3, al4, z, eps / 2.0, wind);
    cdouble f3 = log_block_I2t_raw(p, m, al3, al4, z, eps / 4.0, wind);
    cdouble r1 = 2.0 * f2 - f1, r2 = 2.0 * f3 - f2;
    return (4.0 * r2 - r1) / 3.0;
}

// coefficient of I_1 log z in the limit solution, measured by comparing the
// value transported once around the origin (via the known prefactor phases)
// with the untransported one
inline cdouble log_block_kappa(const CoulombParams& p, int m, double al3, double al4) {
    cdouble zref(0.37, 0.11);
    FourPoint f0 = log_fourpoint(p, m, al3, al4);
    cdouble y0 = log_block_I2t_limit(p, m, al3, al4, zref, 0);
    cdouble y1 = log_block_I2t_limit(p, m, al3, al4, zref, 1);
    cdouble pha = std::exp(cdouble(0.0, M_PI * f0.a()));
    return (pha * y1 - y0) / (cdouble(0.0, 2.0 * M_PI) * block_I1(f0, zref));
}

// canonical logarithmic partner:  I_1(z) log z + H(z) z^{(1-m-rho)/2}
inline cdouble log_block_I2t(const CoulombParams& p, int m, double al3, double al4,
                             cdouble z) {
    return log_block_I2t_limit(p, m, al3, al4, z) / log_block_kappa(p, m, al3, al4);
}

// printed log-case connection matrix {I1, I2t} = Mt . {J1, J2}
inline Mat2 log_connection_matrix(const CoulombParams& p, int m, double al3, double al4) {
    FourPoint f = log_fourpoint(p, m, al3, al4);
    double b = f.b(), bp = f.bp(), d = f.d(), dp = f.dp();
    auto G = [](double x) { return std::tgamma(x); };
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    Mat2 mt;
    mt[0][0] = fact * G((b - bp) / 2) / (G((d - bp + 1 + m) / 2) * G((dp - bp + 1 + m) / 2));
    mt[0][1] = fact * G((bp - b) / 2) / (G((d - b + 1 + m) / 2) * G((dp - b + 1 + m) / 2));
    mt[1][0] = fact * sign * G((d - b + 1 - m) / 2) * G((dp - b + 1 - m) / 2) /
               (2 * G(1 + (bp - b) / 2));
    mt[1][1] = fact * sign * G((d - bp + 1 - m) / 2) * G((dp - bp + 1 - m) / 2) /
               (2 * G(1 + (b - bp) / 2));
    return mt;
}

inline Mat2 log_connection_matrix_inverse(const CoulombParams& p, int m, double al3,
                                          double al4) {
    FourPoint f = log_fourpoint(p, m, al3, al4);
    double b = f.b(), bp = f.bp(), d = f.d(), dp = f.dp();
    auto G = [](double x) { return std::tgamma(x); };
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    Mat2 mi;
    mi[0][0] = G((d - bp + 1 + m) / 2) * G((dp - bp + 1 + m) / 2) / (2 * G((b - bp) / 2));
    mi[0][1] = sign * G(1 + (bp - b) / 2) / (G((d - b + 1 - m) / 2) * G((dp - b + 1 - m) / 2));
    mi[1][0] = G((d - b + 1 + m) / 2) * G((dp - b + 1 + m) / 2) / (2 * G((bp - b) / 2));
    mi[1][1] = sign * G(1 + (b - bp) / 2) / (G((d - bp + 1 - m) / 2) * G((dp - bp + 1 - m) / 2));
    for (auto& row : mi)
        for (auto& x : row) x /= fact;
    return mi;
}

// ---- crossing ratios --------------------------------------------------------

// the two printed forms of X1/X2 from the holomorphic/antiholomorphic
// connection matrices; they must agree when the locality (determinant)
// condition holds
inline std::array<double, 2> x1_over_x2_forms(const Mat2& M, const Mat2& Mb) {
    return {-M[1][0] * Mb[1][1] / (M[0][0] * Mb[0][1]),
            -M[1][1] * Mb[1][0] / (M[0][1] * Mb[0][0])};
}

// sine form of the determinant (locality) condition; returns the relative
// mismatch between the unbarred and barred products
inline double determinant_condition_mismatch(double a, double b, double d, double ab,
                                             double bb, double db, double rho) {
    auto s = [](double x) { return std::sin(M_PI * x); };
    auto prod = [&](double a_, double b_, double d_) {
        return s((rho + a_ - b_ - d_) / 2) * s((rho + b_ - a_ - d_) / 2) /
               (s((rho + d_ - a_ - b_) / 2) * s((3 * rho - d_ - a_ - b_) / 2));
    };
    double u = prod(a, b, d), v = prod(ab, bb, db);
    return std::abs(u - v) / (std::abs(u) + std::abs(v));
}

// necessary parity condition: abar + bbar + dbar = a + b + d (mod 2)
inline bool charge_parity_ok(double a, double b, double d, double ab, double bb, double db,
                             double tol = 1e-9) {
    double diff = (ab + bb + db) - (a + b + d);
    double r = diff / 2.0 - std::round(diff / 2.0);
    return std::abs(r) < tol;
}

enum class SpectrumClass { generic, logarithmic, hybrid_ruled_out };

// classify the holomorphic/antiholomorphic pair of indicial spacings
inline SpectrumClass classify_block_pair(double a, double ap, double ab, double abp,
                                         double tol = 1e-9) {
    auto even = [&](double x) { return std::abs(x / 2.0 - std::round(x / 2.0)) < tol; };
    bool lh = even(a - ap), lb = even(ab - abp);
    if (lh && lb) return SpectrumClass::logarithmic;
    if (lh != lb) return SpectrumClass::hybrid_ruled_out;
    return SpectrumClass::generic;
}

// ---- monodromy transport ----------------------------------------------------

// transport a solution (f, f') of the block ODE around the circle |z| = r,
// starting and ending at z = r, by RK4 integration in the angle
inline std::array<cdouble, 2> monodromy_transport(const FourPoint& fp, cdouble f0,
                                                  cdouble fp0, double r, int steps = 512) {
    cdouble y0 = f0, y1 = fp0;
    double h = 2.0 * M_PI / steps;
    auto rhs = [&](double th, cdouble u0, cdouble u1, cdouble& du0, cdouble& du1) {
        cdouble z = std::polar(r, th);
        cdouble dz = cdouble(0.0, 1.0) * z;  // dz/dtheta
        du0 = u1 * dz;
        du1 = block_ode_fpp(fp, z, u0, u1) * dz;
    };
    for (int k = 0; k < steps; ++k) {
        double th = h * k;
        cdouble k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
        rhs(th, y0, y1, k1a, k1b);
        rhs(th + h / 2, y0 + h / 2 * k1a, y1 + h / 2 * k1b, k2a, k2b);
        rhs(th + h / 2, y0 + h / 2 * k2a, y1 + h / 2 * k2b, k3a, k3b);
        rhs(th + h, y0 + h * k3a, y1 + h * k3b, k4a, k4b);
        y0 += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        y1 += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    }
    return {y0, y1};
}

// numerical derivative of an analytic function (Cauchy, small circle)
inline cdouble cauchy_deriv(const std::function<cdouble(cdouble)>& func, cdouble z,
                            double r = 0.05) {
    constexpr int N = 32;
    cdouble d1 = 0.0;
    for (int k = 0; k < N; ++k) {
        double th = 2.0 * M_PI * k / N;
        cdouble e{std::cos(th), std::sin(th)};
        d1 += func(z + r * e) / e;
    }
    return d1 / (N * r);
}

}  // namespace looplab
