#pragma once

// Coulomb-gas parameterization of the loop-model CFT: coupling g, background
// charge e0, vertex charges alpha_{m,e} and their conformal dimensions.

#include <cmath>
#include <stdexcept>

namespace looplab {

struct CoulombParams {
    double g;   // coupling, 0 < g < 1
    double e0;  // background charge parameter

    static CoulombParams from_n(double n) {
        // n = -2 cos(pi g), and the TL lattice model sits at n_tilde = n,
        // i.e. e0 = 1 - g.
        if (n <= -2.0 || n >= 2.0) throw std::domain_error("from_n: need -2 < n < 2");
        double g = std::acos(-n / 2.0) / M_PI;
        return {g, 1.0 - g};
    }
    static CoulombParams from_g(double g, double e0) {
        if (g <= 0.0 || g >= 1.0) throw std::domain_error("from_g: need 0 < g < 1");
        return {g, e0};
    }

    double n() const { return -2.0 * std::cos(M_PI * g); }
    double n_tilde() const { return 2.0 * std::cos(M_PI * e0); }
    double sqrtg() const { return std::sqrt(g); }
    double alpha_plus() const { return -1.0 / sqrtg(); }
    double alpha_minus() const { return sqrtg(); }
    double alpha0() const { return -e0 / (2.0 * sqrtg()); }
    double rho() const { return 1.0 / g; }
    double central_charge() const { return 1.0 - 6.0 * e0 * e0 / g; }

    // h(alpha) = alpha(alpha - 2 alpha0)
    double h_of_alpha(double alpha) const { return alpha * (alpha - 2.0 * alpha0()); }

    // vertex charge of W_{m,e} (electric operators V_{0e} are m = 0)
    double alpha_me(double m, double e) const {
        return alpha0() - m * sqrtg() / 2.0 + e / (2.0 * sqrtg());
    }
    double h_me(double m, double e) const {
        double t = m * sqrtg() - e / sqrtg();
        return 0.25 * t * t - e0 * e0 / (4.0 * g);
    }
    // electric operator V_{1k} = V_{0, e0+k-1}
    double alpha_1k(int k) const { return alpha_me(0.0, e0 + k - 1); }

    // Kac dimensions for central charge c(g, e0). The Kac charges ap, am
    // solve ap+am = -e0/sqrt(g), ap*am = -1, with ap -> -1/sqrt(g) as
    // e0 -> 1-g.
    double h_kac(int r, int s) const {
        double sum = -e0 / sqrtg();
        double disc = std::sqrt(sum * sum + 4.0);
        double am = (sum + disc) / 2.0;  // -> sqrt(g)
        double ap = (sum - disc) / 2.0;  // -> -1/sqrt(g)
        double t = r * am + s * ap;
        return 0.25 * t * t - e0 * e0 / (4.0 * g);
    }

    // the "letters" entering every hypergeometric/Coulomb-gas formula
    double letter_a(double alpha) const { return 2.0 * alpha_plus() * alpha; }
    double letter_a_prime(double alpha) const {
        return 2.0 * alpha_plus() * (2.0 * alpha0() - alpha);
    }
};

// A pair of holomorphic/antiholomorphic vertex charges.
struct ChargePair {
    double alpha;
    double alphabar;

    static ChargePair from_me(const CoulombParams& p, double m, double e) {
        return {p.alpha_me(m, e), p.alpha_me(-m, e)};
    }
    static ChargePair scalar(double a) { return {a, a}; }

    double h(const CoulombParams& p) const { return p.h_of_alpha(alpha); }
    double hbar(const CoulombParams& p) const { return p.h_of_alpha(alphabar); }
    double spin(const CoulombParams& p) const { return h(p) - hbar(p); }

    double a(const CoulombParams& p) const { return p.letter_a(alpha); }
    double a_prime(const CoulombParams& p) const { return p.letter_a_prime(alpha); }
    double abar(const CoulombParams& p) const { return p.letter_a(alphabar); }
    double abar_prime(const CoulombParams& p) const { return p.letter_a_prime(alphabar); }

    // locality requires a - abar (or a' - abar) to be an integer
    bool local(const CoulombParams& p, double tol = 1e-9) const {
        double d1 = a(p) - abar(p), d2 = a_prime(p) - abar(p);
        return std::abs(d1 - std::nearbyint(d1)) < tol ||
               std::abs(d2 - std::nearbyint(d2)) < tol;
    }
};

}  // namespace looplab
