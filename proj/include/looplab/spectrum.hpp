#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "looplab/linkstate.hpp"

namespace looplab {

using Cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// ---- translation-orbit bookkeeping ----------------------------------------------
//
// tau is a signed permutation of every basis we diagonalize, so H block-diagonalizes
// over Fourier combinations of tau-orbits.  Convention: sector k collects the
// eigenvectors of tau with eigenvalue exp(2*pi*i*k/L).

struct OrbitData {
    std::vector<int> orbit;    // orbit id per basis state
    std::vector<int> shift;    // tau^shift |rep> = sign * |state>
    std::vector<int> sign;     // +1 or -1
    std::vector<int> rep;      // basis index of each orbit representative
    std::vector<int> period;   // orbit length
    std::vector<int> cycsign;  // accumulated sign of tau^period on the rep
};

inline OrbitData build_orbits(const BasisIndex& basis, Module module = Module::W) {
    OrbitData od;
    int n = basis.size();
    od.orbit.assign(n, -1);
    od.shift.assign(n, 0);
    od.sign.assign(n, 1);
    for (int i = 0; i < n; ++i) {
        if (od.orbit[i] >= 0) continue;
        int oid = (int)od.rep.size();
        od.rep.push_back(i);
        LinkState cur = basis.states[i];
        int sgn = 1, t = 0;
        while (true) {
            int idx = basis.index.at(cur);
            if (idx == i && t > 0) break;
            od.orbit[idx] = oid;
            od.shift[idx] = t;
            od.sign[idx] = sgn;
            sgn *= tau_sign(cur, module);
            cur = apply_tau(cur, module);
            ++t;
        }
        od.period.push_back(t);
        od.cycsign.push_back(sgn);
    }
    return od;
}

// ---- momentum-sector Hamiltonian -------------------------------------------------

// orbits participating in sector k: those with exp(-i theta k d) * cycsign == 1
inline std::vector<int> sector_orbits(const BasisIndex& basis, const OrbitData& od, int k) {
    const int L = basis.states[0].L;
    const double theta = 2 * M_PI / L;
    std::vector<int> ids;
    for (size_t o = 0; o < od.rep.size(); ++o) {
        Cplx wrap = std::exp(Cplx(0, -theta * k * od.period[o])) * double(od.cycsign[o]);
        if (std::abs(wrap - 1.0) < 1e-9) ids.push_back((int)o);
    }
    return ids;
}

// orthonormal sector column for orbit o: entry on state s is
// sign_s * exp(-i theta k shift_s) / sqrt(period)
inline CVec sector_lift(const BasisIndex& basis, const OrbitData& od, int k,
                        const std::vector<int>& ids, const CVec& sec) {
    const int L = basis.states[0].L;
    const double theta = 2 * M_PI / L;
    std::vector<int> col_of(od.rep.size(), -1);
    for (size_t c = 0; c < ids.size(); ++c) col_of[ids[c]] = (int)c;
    CVec full = CVec::Zero(basis.size());
    for (int s = 0; s < basis.size(); ++s) {
        int o = od.orbit[s];
        if (col_of[o] < 0) continue;
        full(s) = sec(col_of[o]) * double(od.sign[s]) *
                  std::exp(Cplx(0, -theta * k * od.shift[s])) / std::sqrt(double(od.period[o]));
    }
    return full;
}

inline CVec sector_project(const BasisIndex& basis, const OrbitData& od, int k,
                           const std::vector<int>& ids, const CVec& full) {
    const int L = basis.states[0].L;
    const double theta = 2 * M_PI / L;
    std::vector<int> col_of(od.rep.size(), -1);
    for (size_t c = 0; c < ids.size(); ++c) col_of[ids[c]] = (int)c;
    CVec sec = CVec::Zero(ids.size());
    for (int s = 0; s < basis.size(); ++s) {
        int o = od.orbit[s];
        if (col_of[o] < 0) continue;
        sec(col_of[o]) += full(s) * double(od.sign[s]) *
                          std::exp(Cplx(0, theta * k * od.shift[s])) /
                          std::sqrt(double(od.period[o]));
    }
    return sec;
}

template <class Op>
CMat sector_matrix(const BasisIndex& basis, const OrbitData& od, int k,
                   const std::vector<int>& ids, Op&& ham_apply) {
    const int L = basis.states[0].L;
    const double theta = 2 * M_PI / L;
    std::vector<int> col_of(od.rep.size(), -1);
    for (size_t c = 0; c < ids.size(); ++c) col_of[ids[c]] = (int)c;
    int m = (int)ids.size();
    CMat hk = CMat::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        SparseVec<double> x = ham_apply(basis.states[od.rep[ids[j]]]);
        for (const auto& [st, c] : x) {
            int idx = basis.index.at(st);
            int oi = od.orbit[idx];
            // orbits absent from this sector carry no momentum-k component: their
            // contributions cancel over the orbit sum, so they are simply skipped
            if (col_of[oi] < 0) continue;
            double dq = std::sqrt(double(od.period[ids[j]]) / od.period[oi]);
            hk(col_of[oi], j) += dq * c * double(od.sign[idx]) *
                                 std::exp(Cplx(0, theta * k * od.shift[idx]));
        }
    }
    return hk;
}

struct SectorSpectrum {
    int L = 0, k = 0;
    std::vector<int> orbit_ids;        // orbits participating in this sector
    Eigen::VectorXd energies;          // ascending
    CMat vectors;                      // columns: eigenvectors in the FULL basis
    double max_imag = 0;               // largest |Im| of any raw eigenvalue
};

template <class Op>
SectorSpectrum sector_spectrum(const BasisIndex& basis, const OrbitData& od, int k,
                               Op&& ham_apply) {
    const int L = basis.states[0].L;
    SectorSpectrum out;
    out.L = L;
    out.k = ((k % L) + L) % L;

    out.orbit_ids = sector_orbits(basis, od, out.k);
    int m = (int)out.orbit_ids.size();
    if (m == 0) return out;
    CMat hk = sector_matrix(basis, od, out.k, out.orbit_ids, ham_apply);

    Eigen::ComplexEigenSolver<CMat> es(hk);
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return es.eigenvalues()(a).real() < es.eigenvalues()(b).real();
    });
    out.energies.resize(m);
    out.vectors = CMat::Zero(basis.size(), m);
    for (int i = 0; i < m; ++i) {
        Cplx ev = es.eigenvalues()(order[i]);
        out.max_imag = std::max(out.max_imag, std::abs(ev.imag()));
        out.energies(i) = ev.real();
        out.vectors.col(i) =
            sector_lift(basis, od, out.k, out.orbit_ids, es.eigenvectors().col(order[i]));
    }
    return out;
}

inline SparseVec<double> ham_apply_state(const LinkState& s, const LoopWeights<double>& w,
                                         Module module) {
    SparseVec<double> v, out;
    v[s] = 1.0;
    const int L = s.L;
    for (int j = 1; j <= L; ++j)
        for (const auto& [t, c] : apply_generator(v, j, w, module)) out[t] -= c;
    return out;
}

// matrix-free H on a dense coefficient vector
inline CVec ham_apply_dense(const BasisIndex& basis, const CVec& x, const LoopWeights<double>& w,
                            Module module) {
    CVec out = CVec::Zero(basis.size());
    for (int i = 0; i < basis.size(); ++i) {
        if (x(i) == Cplx(0)) continue;
        for (const auto& [st, c] : ham_apply_state(basis.states[i], w, module))
            out(basis.index.at(st)) += x(i) * c;
    }
    return out;
}

inline SectorSpectrum momentum_spectrum(const BasisIndex& basis, const LoopWeights<double>& w,
                                        Module module, int k) {
    OrbitData od = build_orbits(basis, module);
    return sector_spectrum(basis, od, k,
                           [&](const LinkState& s) { return ham_apply_state(s, w, module); });
}

// ---- dense and iterative full-space solvers --------------------------------------

inline Eigen::MatrixXd dense_hamiltonian(const BasisIndex& basis, const LoopWeights<double>& w,
                                         Module module = Module::W) {
    int n = basis.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (const auto& [st, c] : ham_apply_state(basis.states[j], w, module))
            h(basis.index.at(st), j) += c;
    return h;
}

struct EigenPairs {
    Eigen::VectorXd energies;
    CMat vectors;
};

inline EigenPairs dense_diagonalize(const Eigen::MatrixXd& h) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(h);
    int n = (int)h.rows();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return es.eigenvalues()(a).real() < es.eigenvalues()(b).real();
    });
    EigenPairs out;
    out.energies.resize(n);
    out.vectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.energies(i) = es.eigenvalues()(order[i]).real();
        out.vectors.col(i) = es.eigenvectors().col(order[i]);
    }
    return out;
}

// Arnoldi with full re-orthogonalization; extremal (lowest real part) Ritz values.
// Used above the dense-size cutoff; validated against the dense solver below it.
inline Eigen::VectorXd arnoldi_lowest(const Eigen::MatrixXd& h, int k_lowest,
                                      int max_dim = 400, double tol = 1e-10) {
    int n = (int)h.rows();
    int m = std::min(n, max_dim);
    Eigen::MatrixXd V(n, m + 1);
    Eigen::MatrixXd Hm = Eigen::MatrixXd::Zero(m + 1, m);
    std::mt19937 rng(4321);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v0(n);
    for (int i = 0; i < n; ++i) v0(i) = gauss(rng);
    V.col(0) = v0.normalized();
    Eigen::VectorXd prev = Eigen::VectorXd::Constant(k_lowest, 1e300);
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd w = h * V.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= j; ++i) {
                double c = V.col(i).dot(w);
                Hm(i, j) += c;
                w -= c * V.col(i);
            }
        Hm(j + 1, j) = w.norm();
        if (Hm(j + 1, j) < 1e-13) {
            m = j + 1;
            break;
        }
        V.col(j + 1) = w / Hm(j + 1, j);
        if (j >= std::max(2 * k_lowest, 20) && j % 10 == 0) {
            Eigen::EigenSolver<Eigen::MatrixXd> es(Hm.topLeftCorner(j + 1, j + 1));
            std::vector<double> re(j + 1);
            for (int i = 0; i <= j; ++i) re[i] = es.eigenvalues()(i).real();
            std::sort(re.begin(), re.end());
            Eigen::VectorXd cur(k_lowest);
            for (int i = 0; i < k_lowest; ++i) cur(i) = re[i];
            if ((cur - prev).cwiseAbs().maxCoeff() < tol) return cur;
            prev = cur;
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(Hm.topLeftCorner(m, m));
    std::vector<double> re(m);
    for (int i = 0; i < m; ++i) re[i] = es.eigenvalues()(i).real();
    std::sort(re.begin(), re.end());
    if (m < k_lowest) throw std::runtime_error("arnoldi_lowest: Krylov space exhausted");
    Eigen::VectorXd cur(k_lowest);
    for (int i = 0; i < k_lowest; ++i) cur(i) = re[i];
    if (prev.size() == k_lowest && (cur - prev).cwiseAbs().maxCoeff() > 1e-6)
        throw std::runtime_error("arnoldi_lowest: Ritz values not converged");
    return cur;
}

// ---- conversions between Eigen vectors and link-state vectors --------------------

inline SparseVec<Cplx> to_sparse(const BasisIndex& basis, const CVec& v, double cut = 1e-300) {
    SparseVec<Cplx> out;
    for (int i = 0; i < basis.size(); ++i)
        if (std::abs(v(i)) > cut) out[basis.states[i]] = v(i);
    return out;
}

inline LoopWeights<Cplx> cweights(const LoopWeights<double>& w) {
    return {Cplx(w.n), Cplx(w.n_tilde)};
}

// bilinear module form between Eigen vectors (no complex conjugation: the lattice
// form is real-bilinear, exactly as used for self-adjointness of H)
inline Cplx form_value(const BasisIndex& ba, const CVec& a, const BasisIndex& bb,
                       const CVec& b, const LoopWeights<double>& w, bool mixed) {
    SparseVec<Cplx> va = to_sparse(ba, a), vb = to_sparse(bb, b);
    LoopWeights<Cplx> cw = cweights(w);
    return mixed ? gram_mixed(va, vb, cw) : gram(va, vb, cw);
}

// a couple of inverse-iteration steps to clean up eigenvectors of a dense general
// solver near close level spacings; returns the refined Rayleigh energy
inline double refine_eigenpair(const Eigen::MatrixXd& h, double e, CVec& v) {
    int n = (int)h.rows();
    for (int step = 0; step < 2; ++step) {
        CMat shifted = h.cast<Cplx>() - (e + 1e-11) * CMat::Identity(n, n);
        v = shifted.partialPivLu().solve(v);
        v /= v.norm();
        e = (v.adjoint() * h.cast<Cplx>() * v)(0).real();
    }
    return e;
}

// ---- degeneracy pairing across W1 / W0 (special line n = n_tilde) ----------------

struct DegeneracyPair {
    double e1;          // W1 eigenvalue
    double e0;          // best-matching W0 eigenvalue
    double gap;         // |e1 - e0|
    double phi_resid;   // |(H0 - e1) phi(v)| / |phi(v)|
};

inline std::vector<DegeneracyPair> find_degeneracies(int L, const LoopWeights<double>& w,
                                                     double tol = 1e-10) {
    if (std::abs(w.n - w.n_tilde) > 1e-14)
        throw std::domain_error("find_degeneracies: requires n = n_tilde");
    BasisIndex b0(enumerate_basis(L, 0)), b1(enumerate_basis(L, 1));
    Eigen::MatrixXd h0 = dense_hamiltonian(b0, w), h1 = dense_hamiltonian(b1, w);
    EigenPairs s0 = dense_diagonalize(h0), s1 = dense_diagonalize(h1);
    CMat h0c = h0.cast<Cplx>();
    LoopWeights<Cplx> cw = cweights(w);

    std::vector<DegeneracyPair> out;
    for (int i = 0; i < s1.energies.size(); ++i) {
        DegeneracyPair p;
        CVec v1 = s1.vectors.col(i);
        p.e1 = s1.energies(i);
        int best = 0;
        for (int j = 1; j < s0.energies.size(); ++j)
            if (std::abs(s0.energies(j) - p.e1) < std::abs(s0.energies(best) - p.e1)) best = j;
        p.e0 = s0.energies(best);
        p.gap = std::abs(p.e0 - p.e1);
        // phi of the eigenvector is itself an eigenvector of H0 with the same energy
        // phi(v) must be an H0 eigenvector; measure against its own Rayleigh
        // quotient, which is immune to the tiny spurious imaginary parts the
        // dense solver produces at exactly degenerate W1 levels
        SparseVec<Cplx> pv = phi_map(to_sparse(b1, v1));
        CVec chi = CVec::Zero(b0.size());
        for (const auto& [st, c] : pv) chi(b0.index.at(st)) = c;
        Cplx eray = (chi.adjoint() * h0c * chi)(0) / chi.squaredNorm();
        p.phi_resid = (h0c * chi - eray * chi).norm() / chi.norm();
        if (std::abs(eray - Cplx(p.e1)) > 1e-7)
            throw std::runtime_error("find_degeneracies: phi image drifted in energy");
        if (p.gap > tol) throw std::runtime_error("find_degeneracies: missing W0 partner");
        out.push_back(p);
    }
    return out;
}

}  // namespace looplab
