#pragma once

// Lattice probe operators for OPE measurements: the subtracted generator family
// (electric content) and the two-leg contraction family (magnetic content),
// together with their Fourier modes.

#include "looplab/spectrum.hpp"

namespace looplab {

// images (e_j - c) x for j = 1..L, x given in the basis b; c is the vacuum
// expectation subtracted so that the probe has no identity content
inline std::vector<CVec> electric_site_images(const BasisIndex& b, const CVec& x,
                                              const LoopWeights<double>& w, Module module,
                                              double c) {
    const int L = b.states[0].L;
    std::vector<CVec> img(L, CVec::Zero(b.size()));
    for (int i = 0; i < b.size(); ++i) {
        if (x(i) == Cplx(0)) continue;
        for (int j = 1; j <= L; ++j) {
            for (const auto& [st, v] : apply_generator(b.states[i], j, w, module))
                img[j - 1](b.index.at(st)) += x(i) * v;
            img[j - 1](i) -= c * x(i);
        }
    }
    return img;
}

// images of the per-site leg annihilation: the two-leg -> zero-leg block of e_j
// inside the mixed module, applied to a two-leg vector x
inline std::vector<CVec> annihilate_site_images(const BasisIndex& b0, const BasisIndex& b1,
                                                const CVec& x, const LoopWeights<double>& w) {
    const int L = b1.states[0].L;
    std::vector<CVec> img(L, CVec::Zero(b0.size()));
    for (int i = 0; i < b1.size(); ++i) {
        if (x(i) == Cplx(0)) continue;
        for (int j = 1; j <= L; ++j)
            for (const auto& [st, v] : apply_generator(b1.states[i], j, w, Module::Wle1))
                if (st.legs() == 0) img[j - 1](b0.index.at(st)) += x(i) * v;
    }
    return img;
}

// Fourier mode sum_j exp(i 2 pi s j / L) phi(j) assembled from per-site images
inline CVec fourier_mode(const std::vector<CVec>& img, int s) {
    const int L = (int)img.size();
    const double theta = 2 * M_PI / L;
    CVec out = CVec::Zero(img[0].size());
    for (int j = 1; j <= L; ++j) out += std::exp(Cplx(0, theta * s * j)) * img[j - 1];
    return out;
}

// creation block as the adjoint of annihilation under the module bilinear forms:
// G11 * create(j) = annihilate(j)^T * G00.  Dense, for small-L consistency checks.
inline CMat creation_matrix(const BasisIndex& b0, const BasisIndex& b1, int j,
                            const LoopWeights<double>& w) {
    LoopWeights<Cplx> cw = cweights(w);
    int n0 = b0.size(), n1 = b1.size();
    CMat ann = CMat::Zero(n0, n1);
    for (int i = 0; i < n1; ++i)
        for (const auto& [st, v] : apply_generator(b1.states[i], j, cw, Module::Wle1))
            if (st.legs() == 0) ann(b0.index.at(st), i) += v;
    CMat g00(n0, n0), g11(n1, n1);
    for (int a = 0; a < n0; ++a)
        for (int b = 0; b < n0; ++b) g00(a, b) = gram(b0.states[a], b0.states[b], cw);
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b) g11(a, b) = gram(b1.states[a], b1.states[b], cw);
    return g11.completeOrthogonalDecomposition().pseudoInverse() * ann.transpose() * g00;
}

}  // namespace looplab
