#pragma once

// Contour change-of-basis matrix A between the z->0 and z->1 conformal-block
// bases, for p-1 screening charges.  Only the last row and last column of A
// (and of its inverse, obtained by swapping a <-> b) have closed sine-product
// forms; the interior entries are recovered numerically from the requirement
// that the two matrices are mutually inverse.  The homogeneous monodromy
// system then has the solution X_k = Atilde_pk / A_kp.

#include <Eigen/Dense>
#include <random>
#include <stdexcept>

#include "looplab/opecoeffs.hpp"

namespace looplab {

// neutrality with p-1 screening charges: a + b + c + d = 2(rho-1) - 2(p-1)rho
inline double neutral_letter_d(int p, double a, double b, double c, double rho) {
    return 2 * (rho - 1) - 2 * (p - 1) * rho - a - b - c;
}

// matrix with the printed border entries filled in and zero interior
inline Eigen::MatrixXd a_matrix_border(int p, double a, double b, double c, double d,
                                       double rho) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
    for (int k = 1; k <= p; ++k) {
        A(p - 1, k - 1) = a_pk(p, k, a, b, c, d, rho);
        A(k - 1, p - 1) = a_kp(p, k, b, c, rho);
    }
    return A;
}

struct MonodromyPair {
    Eigen::MatrixXd A;       // change of basis F_k = sum_l A_kl Ftilde_l
    Eigen::MatrixXd Atilde;  // its inverse
    double fit_residual;     // worst entry of |Atilde*A - 1| and |A*Atilde - 1|
};

// Fill the interior of A and Atilde by damped Gauss-Newton on the
// overdetermined bilinear system Atilde*A = A*Atilde = 1 (2p^2 equations,
// 2(p-1)^2 unknowns) with the printed borders held fixed.  Consistency of
// this system is a nontrivial property of the border formulas: perturbing
// any border entry (or breaking charge neutrality) leaves no solution.
inline MonodromyPair solve_monodromy_pair(int p, double a, double b, double c, double d,
                                          double rho) {
    const Eigen::MatrixXd A0 = a_matrix_border(p, a, b, c, d, rho);
    const Eigen::MatrixXd At0 = a_matrix_border(p, b, a, c, d, rho);
    const int m = p - 1, nun = 2 * m * m, neq = 2 * p * p;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(p, p);

    auto unpack = [&](const Eigen::VectorXd& v, Eigen::MatrixXd& A, Eigen::MatrixXd& At) {
        A = A0;
        At = At0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                A(i, j) = v[i * m + j];
                At(i, j) = v[m * m + i * m + j];
            }
    };
    auto resid = [&](const Eigen::VectorXd& v) {
        Eigen::MatrixXd A, At;
        unpack(v, A, At);
        Eigen::VectorXd r(neq);
        Eigen::MatrixXd r1 = At * A - id, r2 = A * At - id;
        for (int i = 0; i < p * p; ++i) {
            r[i] = r1(i / p, i % p);
            r[p * p + i] = r2(i / p, i % p);
        }
        return r;
    };

    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd best;
    double best_norm = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 12 && best_norm > 1e-12; ++trial) {
        Eigen::VectorXd v(nun);
        for (int i = 0; i < nun; ++i) v[i] = gauss(rng);
        for (int it = 0; it < 300; ++it) {
            Eigen::VectorXd r = resid(v);
            if (r.norm() < 1e-13) break;
            Eigen::MatrixXd J(neq, nun);
            const double h = 1e-7;
            for (int i = 0; i < nun; ++i) {
                Eigen::VectorXd vp = v;
                vp[i] += h;
                J.col(i) = (resid(vp) - r) / h;
            }
            Eigen::VectorXd dv = J.colPivHouseholderQr().solve(-r);
            double lam = 1.0;
            while (lam > 1e-8 && resid(v + lam * dv).norm() >= r.norm()) lam /= 2;
            v += lam * dv;
        }
        double rn = resid(v).lpNorm<Eigen::Infinity>();
        if (rn < best_norm) {
            best_norm = rn;
            best = v;
        }
    }

    MonodromyPair out;
    unpack(best, out.A, out.Atilde);
    out.fit_residual = best_norm;
    return out;
}

// X_k solving the monodromy constraints, from the printed border entries only
inline double xk_monodromy(int p, int k, double a, double b, double c, double d,
                           double rho) {
    return a_pk(p, k, b, a, c, d, rho) / a_kp(p, k, b, c, rho);
}

// the same X_k from the expansion coefficients and block normalisations
inline double xk_expansion(int p, int k, double a, double b, double c, double d,
                           double rho) {
    double n = nk_norm(p, k, a, b, c, d, rho);
    return sk_general(p, k, a, b, c, d, rho) / (n * n);
}

// worst relative residual of sum_k A_kl A_kp X_k = 0 over l = 1 .. p-1,
// with X_k = Atilde_pk / A_kp
inline double mono2_residual(const MonodromyPair& mp) {
    const int p = static_cast<int>(mp.A.rows());
    double worst = 0.0;
    for (int l = 0; l < p - 1; ++l) {
        double num = 0.0, den = 0.0;
        for (int k = 0; k < p; ++k) {
            double xk = mp.Atilde(p - 1, k) / mp.A(k, p - 1);
            double term = mp.A(k, l) * mp.A(k, p - 1) * xk;
            num += term;
            den += std::abs(term);
        }
        if (den == 0.0) throw std::domain_error("mono2_residual: degenerate system");
        worst = std::max(worst, std::abs(num) / den);
    }
    return worst;
}

}  // namespace looplab
