#pragma once

// Upsilon special function (Barnes double-gamma combination) and the
// timelike-DOZZ three-point constant, normalized by C(V_a, V_a, 1) = 1.

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "looplab/gamma.hpp"

namespace looplab {

// log Upsilon_beta(x) on the strip 0 < x < Q via the integral representation
inline double log_upsilon_strip(double x, double beta) {
    double Q = beta + 1.0 / beta;
    if (x <= 0.0 || x >= Q) throw std::domain_error("log_upsilon_strip: need 0 < x < Q");
    double u = Q / 2.0 - x;
    auto f = [=](double t) {
        double bracket;
        if (t < 1e-4) {
            // small-t expansion of u^2 e^{-t} - sinh^2(ut/2)/(sinh(bt/2) sinh(t/2b))
            double m2 = beta * beta + 1.0 / (beta * beta);
            bracket = u * u * (-t + t * t / 2.0) + u * u * t * t * (m2 - u * u) / 12.0;
        } else if (Q * t > 60.0) {
            // large-t: sinh ratio -> exp((|u| - Q/2) t), decays since |u| < Q/2
            bracket = u * u * std::exp(-t) - std::exp((std::abs(u) - Q / 2.0) * t);
        } else {
            double sh = std::sinh(u * t / 2.0);
            bracket = u * u * std::exp(-t) -
                      sh * sh / (std::sinh(beta * t / 2.0) * std::sinh(t / (2.0 * beta)));
        }
        return bracket / t;
    };
    boost::math::quadrature::exp_sinh<double> integ;
    return integ.integrate(f, 1e-12);
}

// Upsilon_beta(x) for any real x, via the shift relation
//   Upsilon(x + beta) = gamma(beta x) beta^(1 - 2 beta x) Upsilon(x)
// applied from a base point inside the strip.
inline double upsilon(double x, double beta) {
    double Q = beta + 1.0 / beta;
    // bring x into [Q/2 - beta/2, Q/2 + beta/2)
    double k = std::floor((x - (Q - beta) / 2.0) / beta);
    double x0 = x - k * beta;
    double v = std::exp(log_upsilon_strip(x0, beta));
    int n = static_cast<int>(k);
    for (int i = 0; i < n; ++i) {
        double xi = x0 + i * beta;
        v *= gamma_fn(beta * xi) * std::pow(beta, 1.0 - 2.0 * beta * xi);
    }
    for (int i = 0; i < -n; ++i) {
        double xi = x0 - (i + 1) * beta;
        v /= gamma_fn(beta * xi) * std::pow(beta, 1.0 - 2.0 * beta * xi);
    }
    return v;
}

// DOZZ structure constant with charges (a1, a2, a3), coupling beta,
// normalized so that C(V_a, V_a, 1) = 1.
inline double dozz(double a1, double a2, double a3, double beta) {
    double s = a1 + a2 + a3;
    double w = 2.0 * beta - 1.0 / beta;
    double num = upsilon(beta - (a1 + a2 - a3), beta) * upsilon(beta - (a2 + a3 - a1), beta) *
                 upsilon(beta - (a3 + a1 - a2), beta) * upsilon(w - s, beta);
    double den = 1.0;
    for (double a : {a1, a2, a3}) den *= upsilon(beta - 2.0 * a, beta) * upsilon(w - 2.0 * a, beta);
    double raw = num / std::sqrt(std::abs(den));
    // normalization fixed by the alpha-independent value of the raw formula
    // at (a, a, 0)
    double ub = upsilon(beta, beta);
    double norm = std::pow(ub, 1.5) / std::sqrt(std::abs(upsilon(w, beta)));
    return raw / norm;
}

}  // namespace looplab
