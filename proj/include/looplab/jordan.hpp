#pragma once

#include "looplab/spectrum.hpp"

namespace looplab {

// W1 -> W0 block of H inside the mixed module (the signed leg contractions)
inline CMat contraction_block(const BasisIndex& b0, const BasisIndex& b1,
                              const LoopWeights<double>& w) {
    CMat c = CMat::Zero(b0.size(), b1.size());
    const int L = b1.states[0].L;
    for (int j = 0; j < b1.size(); ++j) {
        SparseVec<double> v;
        v[b1.states[j]] = 1.0;
        for (int g = 1; g <= L; ++g)
            for (const auto& [st, x] : apply_generator(v, g, w, Module::Wle1))
                if (st.legs() == 0) c(b0.index.at(st), j) -= x;
    }
    return c;
}

struct JordanCell {
    int L = 0, k = 0;
    double energy = 0;
    CVec w1;      // two-leg component, W1 coordinates (Euclidean-normalized)
    CVec chi;     // = phi(w1), W0 coordinates
    CVec wprime;  // zero-leg completion, W0 coordinates
    Cplx gamma;                 // H(w + w') = E(w + w') + gamma * chi
    double ls_residual = 0;     // of (H0 - E) w' = gamma*chi - Wc
    double eig_residual = 0;    // of (H1 - E) w1 = 0
    double block_residual = 0;  // of the 2x2 Jordan action in the mixed module
    Cplx pairing;               // <<chi, W>>: the decoupling scalar product
};

// matrix-free version of contraction_block applied to a dense two-leg vector
inline CVec contraction_apply(const BasisIndex& b0, const BasisIndex& b1, const CVec& x,
                              const LoopWeights<double>& w) {
    const int L = b1.states[0].L;
    CVec out = CVec::Zero(b0.size());
    for (int i = 0; i < b1.size(); ++i) {
        if (x(i) == Cplx(0)) continue;
        SparseVec<double> v;
        v[b1.states[i]] = 1.0;
        for (int g = 1; g <= L; ++g)
            for (const auto& [st, c] : apply_generator(v, g, w, Module::Wle1))
                if (st.legs() == 0) out(b0.index.at(st)) -= x(i) * c;
    }
    return out;
}

// Jordan partner construction for the lowest two-leg level at lattice momentum k.
// The pair (chi, w + w') spans a 2x2 Jordan cell of H in the mixed module.  All
// zero-leg linear algebra happens inside one momentum sector, so the construction
// stays cheap at large L.
inline JordanCell build_jordan_cell(int L, const LoopWeights<double>& w, int k,
                                    bool want_pairing = true) {
    if (std::abs(w.n - w.n_tilde) > 1e-14)
        throw std::domain_error("build_jordan_cell: requires n = n_tilde");
    BasisIndex b0(enumerate_basis(L, 0)), b1(enumerate_basis(L, 1));
    SectorSpectrum sec = momentum_spectrum(b1, w, Module::W, k);
    if (sec.energies.size() == 0)
        throw std::domain_error("build_jordan_cell: empty momentum sector");

    JordanCell cell;
    cell.L = L;
    cell.k = ((k % L) + L) % L;
    cell.energy = sec.energies(0);
    cell.w1 = sec.vectors.col(0);
    cell.eig_residual =
        (ham_apply_dense(b1, cell.w1, w, Module::W) - cell.energy * cell.w1).norm();

    cell.chi = CVec::Zero(b0.size());
    for (const auto& [st, c] : phi_map(to_sparse(b1, cell.w1))) cell.chi(b0.index.at(st)) = c;
    CVec wc = contraction_apply(b0, b1, cell.w1, w);

    // phi anticommutes with the translation, so the whole zero-leg system lives in
    // the momentum sector k + L/2
    OrbitData od0 = build_orbits(b0, Module::W);
    int k0 = (cell.k + L / 2) % L;
    std::vector<int> ids = sector_orbits(b0, od0, k0);
    CVec chis = sector_project(b0, od0, k0, ids, cell.chi);
    CVec wcs = sector_project(b0, od0, k0, ids, wc);
    double scale = cell.chi.norm() + wc.norm();
    if ((sector_lift(b0, od0, k0, ids, chis) - cell.chi).norm() > 1e-8 * scale ||
        (sector_lift(b0, od0, k0, ids, wcs) - wc).norm() > 1e-8 * scale)
        throw std::runtime_error("build_jordan_cell: right-hand side leaves its sector");

    // Solve (H0 - E) w' = gamma*chi - Wc.  The scale gamma of the nilpotent part
    // is fixed by matching the cokernel components of chi and Wc: the relative
    // normalization of chi and the contraction terms is a convention, and the
    // cell basis (gamma*chi, w + w') then realizes exactly ((E,1),(0,E)).  When
    // both chi and Wc already lie in the range, H0 itself carries the Jordan
    // structure at this energy and gamma = 1 works directly.
    int m = (int)ids.size();
    CMat h0s = sector_matrix(b0, od0, k0, ids,
                             [&](const LinkState& s) { return ham_apply_state(s, w, Module::W); });
    CMat a = h0s - cell.energy * CMat::Identity(m, m);
    Eigen::BDCSVD<CMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    // relative to max(smax, 1): a sector block consisting only of the eigenvalue E
    // has smax ~ 0 and every direction is null
    double thresh = 1e-8 * std::max(svd.singularValues()(0), 1.0);
    std::vector<int> null_cols;
    for (int i = 0; i < m; ++i)
        if (svd.singularValues()(i) < thresh) null_cols.push_back(i);
    CVec c_chi(null_cols.size()), c_wc(null_cols.size());
    for (size_t i = 0; i < null_cols.size(); ++i) {
        c_chi(i) = svd.matrixU().col(null_cols[i]).adjoint() * chis;
        c_wc(i) = svd.matrixU().col(null_cols[i]).adjoint() * wcs;
    }
    if (c_chi.norm() < 1e-9 * scale) {
        if (c_wc.norm() > 1e-9 * scale)
            throw std::runtime_error("build_jordan_cell: system has no solution");
        cell.gamma = 1.0;
    } else {
        cell.gamma = c_chi.dot(c_wc) / c_chi.squaredNorm();
        if (std::abs(cell.gamma) < 1e-6)
            throw std::runtime_error("build_jordan_cell: nilpotent part vanished");
    }
    CVec rhs = cell.gamma * chis - wcs;
    // minimum-norm solve from the same SVD, dropping the null directions
    CVec y = svd.matrixU().adjoint() * rhs;
    for (int i = 0; i < m; ++i)
        y(i) = (svd.singularValues()(i) < thresh) ? 0.0 : y(i) / svd.singularValues()(i);
    CVec wps = svd.matrixV() * y;
    cell.ls_residual = (a * wps - rhs).norm() / std::max(scale, 1e-30);
    cell.wprime = sector_lift(b0, od0, k0, ids, wps);
    // gauge: the solution is defined up to multiples of chi; remove that component
    cell.wprime -= (cell.chi.adjoint() * cell.wprime)(0) / cell.chi.squaredNorm() * cell.chi;

    // H acting on |W>> = w1 + w' must give E|W>> + gamma|chi>>, chi stays diagonal
    CVec h0wp = ham_apply_dense(b0, cell.wprime, w, Module::W);
    double top = (h0wp + wc - cell.energy * cell.wprime - cell.gamma * cell.chi).norm();
    double bot = cell.eig_residual;
    double diag =
        (ham_apply_dense(b0, cell.chi, w, Module::W) - cell.energy * cell.chi).norm();
    cell.block_residual = std::max({top, bot, diag});

    // Decoupling scalar product of the null state with its logarithmic partner at
    // the same energy: the partner cell sits at momentum -k and is the complex
    // conjugate of this one (H is real), so <<chi, W_partner>> = G(phi(w), w*)
    // up to the term G(chi, w'*), which vanishes because Im(phi) is null.
    if (want_pairing) {
        LoopWeights<Cplx> cw = cweights(w);
        SparseVec<Cplx> vchi = to_sparse(b0, cell.chi);
        SparseVec<Cplx> vw = to_sparse(b1, cell.w1.conjugate());
        SparseVec<Cplx> vwp = to_sparse(b0, cell.wprime.conjugate());
        cell.pairing = gram_mixed(vchi, vw, cw) + gram_mixed(vchi, vwp, cw);
    }
    return cell;
}

struct DecouplingRow {
    int L, k;
    double energy;
    Cplx pairing;          // <<chi_k, W_k>>_L
    double cross_pairing;  // max |G(phi(w_k), w_k')| over other momentum sectors
    double null_overlap;   // max |<chi, a>| over the W0 basis: total decoupling in W
};

inline std::vector<DecouplingRow> decoupling_report(int L, const LoopWeights<double>& w,
                                                    int kmax = 2) {
    BasisIndex b0(enumerate_basis(L, 0)), b1(enumerate_basis(L, 1));
    LoopWeights<Cplx> cw = cweights(w);
    std::vector<DecouplingRow> rows;
    for (int k = 0; k <= kmax; ++k) {
        if (k >= L) break;
        SectorSpectrum sec = momentum_spectrum(b1, w, Module::W, k);
        if (sec.energies.size() == 0) continue;
        // the pairing only needs the two-leg eigenvector and its phi image; it is
        // meaningful even at the accidental sizes where the 2x2 cell degenerates
        CVec w1 = sec.vectors.col(0);
        CVec chi = CVec::Zero(b0.size());
        for (const auto& [st, c] : phi_map(to_sparse(b1, w1))) chi(b0.index.at(st)) = c;
        SparseVec<Cplx> vchi = to_sparse(b0, chi);
        Cplx pairing = gram_mixed(vchi, to_sparse(b1, w1.conjugate()), cw);
        DecouplingRow row{L, k, sec.energies(0), pairing, 0, 0};
        for (const LinkState& a : b0.states) {
            SparseVec<Cplx> va;
            va[a] = Cplx(1);
            row.null_overlap = std::max(row.null_overlap, std::abs(gram(va, vchi, cw)));
        }
        for (int k2 = 0; k2 <= kmax; ++k2) {
            if (k2 == k || k2 >= L) continue;
            SectorSpectrum other = momentum_spectrum(b1, w, Module::W, k2);
            if (other.energies.size() == 0) continue;
            SparseVec<Cplx> vo = to_sparse(b1, other.vectors.col(0).conjugate());
            row.cross_pairing =
                std::max(row.cross_pairing, std::abs(gram_mixed(vchi, vo, cw)));
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace looplab
