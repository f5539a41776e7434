#pragma once

// OPE coefficient measurement: state identification on the cylinder, bilinear
// matrix elements of the lattice probes, and the 1/L extrapolation of the raw
// ratios.

#include <thread>

#include "looplab/coulomb.hpp"
#include "looplab/jordan.hpp"
#include "looplab/probes.hpp"

namespace looplab {

// covector u(t) = sum_s x_s * form(s, basis[t]); brute force, threaded over t
inline CVec gram_covector(const BasisIndex& bt, const SparseVec<Cplx>& x,
                          const LoopWeights<Cplx>& cw, bool mixed = false) {
    int n = bt.size();
    CVec u = CVec::Zero(n);
    std::vector<std::pair<LinkState, Cplx>> xs(x.begin(), x.end());
    int nt = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    auto work = [&](int lo, int hi) {
        for (int t = lo; t < hi; ++t) {
            Cplx acc = 0;
            for (const auto& [s, c] : xs)
                acc += c * (mixed ? gram_mixed(s, bt.states[t], cw) : gram(s, bt.states[t], cw));
            u(t) = acc;
        }
    };
    std::vector<std::thread> pool;
    int chunk = (n + nt - 1) / nt;
    for (int w = 0; w < nt; ++w) {
        int lo = w * chunk, hi = std::min(n, (w + 1) * chunk);
        if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& t : pool) t.join();
    return u;
}

// bilinear contraction of a covector with a coefficient vector
inline Cplx dotb(const CVec& u, const CVec& y) { return (u.transpose() * y)(0); }

// Fourier mode whose matrix element against a fixed covector is non-zero; the
// translation selection rule makes all other modes vanish identically
inline int select_mode(const CVec& cov, const std::vector<CVec>& img, Cplx& element) {
    const int L = (int)img.size();
    const double theta = 2 * M_PI / L;
    std::vector<Cplx> per_site(L);
    for (int j = 1; j <= L; ++j) per_site[j - 1] = dotb(cov, img[j - 1]);
    int best = 0;
    double bestmag = -1, second = 0;
    Cplx bestval = 0;
    for (int s = 0; s < L; ++s) {
        Cplx acc = 0;
        for (int j = 1; j <= L; ++j) acc += std::exp(Cplx(0, theta * s * j)) * per_site[j - 1];
        double m = std::abs(acc);
        if (m > bestmag) {
            second = bestmag;
            bestmag = m;
            best = s;
            bestval = acc;
        } else {
            second = std::max(second, m);
        }
    }
    if (second > 1e-6 * bestmag) {
        std::string msg = "select_mode: no single dominant Fourier mode;";
        for (int s = 0; s < L; ++s) {
            Cplx acc = 0;
            for (int j = 1; j <= L; ++j) acc += std::exp(Cplx(0, theta * s * j)) * per_site[j - 1];
            msg += " s" + std::to_string(s) + "=" + std::to_string(std::abs(acc));
        }
        throw std::runtime_error(msg);
    }
    element = bestval;
    return best;
}

// one lattice eigenstate with the bookkeeping needed for matrix elements
struct MState {
    int ell = 0, k = 0, idx = 0;
    double energy = 0;
    CVec v;     // full-basis coefficients, Euclidean-normalized
    Cplx norm;  // bilinear norm <<conj v, v>>
};

// all spectra, identified states and probe data at one (n, L) point
struct OPELab {
    int L;
    LoopWeights<double> w;
    LoopWeights<Cplx> cw;
    CoulombParams p;
    BasisIndex b0, b1;
    std::map<std::pair<int, int>, SectorSpectrum> spectra;  // (ell, k) -> spectrum
    double e_vac = 0, veff = 0, esub = 0;
    MState vac, v12, v13, w10, w11, w12;

    OPELab(int L_, double n)
        : L(L_),
          w{n, n},
          cw{Cplx(n), Cplx(n)},
          p(CoulombParams::from_n(n)),
          b0(enumerate_basis(L_, 0)),
          b1(enumerate_basis(L_, 1)) {
        identify();
    }

    const SectorSpectrum& sector(int ell, int k) {
        k = ((k % L) + L) % L;
        auto key = std::make_pair(ell, k);
        auto it = spectra.find(key);
        if (it == spectra.end())
            it = spectra.emplace(key, momentum_spectrum(ell == 0 ? b0 : b1, w, Module::W, k))
                     .first;
        return it->second;
    }

    MState make_state(int ell, int k, int idx) {
        const BasisIndex& b = ell == 0 ? b0 : b1;
        const SectorSpectrum& s = sector(ell, k);
        if (idx >= (int)s.energies.size())
            throw std::runtime_error("make_state: sector too small");
        MState m{ell, ((k % L) + L) % L, idx, s.energies(idx), s.vectors.col(idx), 0};
        CVec cov = gram_covector(b, to_sparse(b, m.v.conjugate()), cw);
        m.norm = dotb(cov, m.v);
        return m;
    }

    double x_est(double energy) const { return (energy - e_vac) * L / (2 * M_PI * veff); }

    // scaling dimensions used for identification windows
    double x_electric(double e) const { return (e * e - p.e0 * p.e0) / (2 * p.g); }
    double x_magnetic(int e) const {
        return (p.g * p.g + e * e) / (2 * p.g) - p.e0 * p.e0 / (2 * p.g);
    }

    // identified level: within the window around x_target, the level coupling
    // most strongly through the covector cov (null states drop out automatically)
    MState pick_by_coupling(int ell, int k, double x_target, double window, const CVec& cov,
                            int skip = 0) {
        const SectorSpectrum& s = sector(ell, k);
        int best = -1;
        double bestmag = 0;
        for (int i = skip; i < (int)s.energies.size(); ++i) {
            double x = x_est(s.energies(i));
            if (x > x_target + window) break;
            if (x < x_target - window) continue;
            double m = std::abs(dotb(cov, s.vectors.col(i)));
            if (m > bestmag) {
                bestmag = m;
                best = i;
            }
        }
        if (best < 0) throw std::runtime_error("pick_by_coupling: no candidate in window");
        return make_state(ell, k, best);
    }

    void identify() {
        // vacuum, then the effective velocity from the exactly known W10 gap
        vac = make_state(0, 0, 0);
        e_vac = vac.energy;
        w10 = make_state(1, 0, 0);
        veff = (w10.energy - e_vac) * L / (2 * M_PI * x_magnetic(0));

        // subtracted generator: <0|e_j|0>
        CVec cov_vac = gram_covector(b0, to_sparse(b0, vac.v.conjugate()), cw);
        CVec e1vac = CVec::Zero(b0.size());
        for (int i = 0; i < b0.size(); ++i) {
            if (vac.v(i) == Cplx(0)) continue;
            for (const auto& [st, c] : apply_generator(b0.states[i], 1, w, Module::W))
                e1vac(b0.index.at(st)) += vac.v(i) * c;
        }
        esub = (dotb(cov_vac, e1vac) / vac.norm).real();

        // W11 sits in the staggered two-leg sector k = 1 + L/2 (lowest level)
        w11 = make_state(1, 1 + L / 2, 0);

        // V13: the zero-momentum level the subtracted generator creates from the
        // vacuum (its electric content); null states have zero element
        std::vector<CVec> evac = electric_site_images(b0, vac.v, w, Module::W, esub);
        CVec cov_phi0vac = gram_covector(b0, to_sparse(b0, fourier_mode(evac, 0)), cw);
        v13 = pick_by_coupling(0, 0, x_electric(p.e0 + 2), 1.6, cov_phi0vac, 1);

        // V12: lowest non-null level of the staggered zero-leg sector; the
        // quotient map onto the parity-free module kills exactly the null states
        const SectorSpectrum& s0h = sector(0, L / 2);
        int iv12 = -1;
        for (int i = 0; i < (int)s0h.energies.size(); ++i) {
            SparseVec<Cplx> q;
            CVec cand = s0h.vectors.col(i);
            for (int t = 0; t < b0.size(); ++t) {
                if (std::abs(cand(t)) < 1e-14) continue;
                q[project_reduced(b0.states[t])] += cand(t);
            }
            double qn = 0;
            for (const auto& [st, c] : q) qn += std::norm(c);
            if (std::sqrt(qn) > 1e-6) {
                iv12 = i;
                break;
            }
        }
        if (iv12 < 0) throw std::runtime_error("identify: no non-null staggered level");
        v12 = make_state(0, L / 2, iv12);

        // W12: in the k=2 two-leg sector, above the W10 descendants; identified by
        // its coupling to V12 through the leg-contraction probe
        CVec cov_v12 = gram_covector(b0, to_sparse(b0, v12.v.conjugate()), cw);
        w12 = pick_w12(cov_v12);
    }

    // coupling of a two-leg candidate to the V12 bra through the best Fourier
    // mode of the annihilation probe, normalized by the candidate's own norm
    MState pick_w12(const CVec& cov_v12) {
        const SectorSpectrum& s = sector(1, 2);
        double x_target = x_magnetic(2);
        int best = -1;
        double bestmag = 0;
        for (int i = 0; i < (int)s.energies.size(); ++i) {
            double x = x_est(s.energies(i));
            if (x > x_target + 1.4) break;
            if (x < x_target - 1.4) continue;
            CVec cand = s.vectors.col(i);
            std::vector<CVec> img = annihilate_site_images(b0, b1, cand, w);
            Cplx elem = 0;
            select_mode(cov_v12, img, elem);
            MState ms = make_state(1, 2, i);
            double m = std::abs(elem) / std::sqrt(std::abs(ms.norm));
            if (m > bestmag) {
                bestmag = m;
                best = i;
            }
        }
        if (best < 0) throw std::runtime_error("pick_w12: no candidate in window");
        return make_state(1, 2, best);
    }

    // normalized element <<conj(bra), Phi_s ket>> / sqrt(|norm bra| |norm ket|)
    double normalized_element(const MState& bra, const CVec& mode_image, const MState& ket) {
        const BasisIndex& bb = bra.ell == 0 ? b0 : b1;
        CVec cov = gram_covector(bb, to_sparse(bb, bra.v.conjugate()), cw);
        return std::abs(dotb(cov, mode_image)) /
               std::sqrt(std::abs(bra.norm) * std::abs(ket.norm));
    }

    // C(W10, W10, V13): electric probe between the W10 states, normalized by the
    // vacuum-to-V13 element of the same probe
    double theo1() { return electric_diagonal(w10) / electric_normalizer(); }

    // C(W11, W11, V13): same normalizer, W11 states
    double theo2() { return electric_diagonal(w11) / electric_normalizer(); }

    double electric_diagonal(const MState& st) {
        std::vector<CVec> img = electric_site_images(b1, st.v, w, Module::W, esub);
        CVec cov = gram_covector(b1, to_sparse(b1, st.v.conjugate()), cw);
        Cplx elem;
        select_mode(cov, img, elem);
        return std::abs(elem) / std::abs(st.norm);
    }

    double electric_normalizer() {
        std::vector<CVec> img = electric_site_images(b0, vac.v, w, Module::W, esub);
        CVec cov = gram_covector(b0, to_sparse(b0, v13.v.conjugate()), cw);
        Cplx elem;
        select_mode(cov, img, elem);
        return std::abs(elem) / std::sqrt(std::abs(v13.norm) * std::abs(vac.norm));
    }

    // C(V12, W11, W12) / C(V12, W11, W10): the probe normalization cancels in the
    // ratio, as does the V12 norm
    double theo3() {
        CVec cov = gram_covector(b0, to_sparse(b0, v12.v.conjugate()), cw);
        Cplx num, den;
        select_mode(cov, annihilate_site_images(b0, b1, w12.v, w), num);
        select_mode(cov, annihilate_site_images(b0, b1, w10.v, w), den);
        return (std::abs(num) / std::sqrt(std::abs(w12.norm))) /
               (std::abs(den) / std::sqrt(std::abs(w10.norm)));
    }

    // C(W10, W10, W12) / C(W10, W10, W10): the bra is the logarithmic completion
    // w + w' of W10 in the mixed module, so the annihilation images of the kets
    // pair with it through both the zero-leg form and the mixed cross form.  The
    // bra normalization and the probe normalization cancel in the ratio.
    double theo4() {
        JordanCell cell = build_jordan_cell(L, w, 0, false);
        CVec cov0 = gram_covector(b0, to_sparse(b0, cell.wprime.conjugate()), cw);
        CVec covx = gram_covector(b0, to_sparse(b1, cell.w1.conjugate()), cw, true);
        CVec cov = cov0 + covx;
        Cplx num, den;
        select_mode(cov, annihilate_site_images(b0, b1, w12.v, w), num);
        select_mode(cov, annihilate_site_images(b0, b1, w10.v, w), den);
        return (std::abs(num) / std::sqrt(std::abs(w12.norm))) /
               (std::abs(den) / std::sqrt(std::abs(w10.norm)));
    }
};

// least-squares fit value(L) = c + b L^(-delta); returns (c, residual)
inline std::pair<double, double> power_fit(const std::vector<std::pair<double, double>>& pts,
                                           double delta) {
    double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
    for (auto [L, y] : pts) {
        double u = std::pow(L, -delta);
        s0 += 1;
        s1 += u;
        s2 += u * u;
        t0 += y;
        t1 += y * u;
    }
    double det = s0 * s2 - s1 * s1;
    double c = (t0 * s2 - t1 * s1) / det, b = (s0 * t1 - s1 * t0) / det;
    double r = 0;
    for (auto [L, y] : pts) r += std::pow(y - c - b * std::pow(L, -delta), 2);
    return {c, std::sqrt(r)};
}

struct FitResult {
    double value = 0, error = 0, exponent = 0, residual = 0;
    bool flagged = false;
};

// extrapolate a finite-size series; delta = 0 requests a fitted exponent
inline FitResult extrapolate(std::vector<std::pair<double, double>> pts, double delta = 0) {
    if (pts.size() < 3) throw std::domain_error("extrapolate: need at least 3 sizes");
    std::sort(pts.begin(), pts.end());
    FitResult out;
    if (delta <= 0) {
        // coarse scan then golden-section refinement of the fit residual
        double best = 1, bestr = std::numeric_limits<double>::max();
        for (double d = 0.2; d <= 4.0001; d += 0.05) {
            double r = power_fit(pts, d).second;
            if (r < bestr) {
                bestr = r;
                best = d;
            }
        }
        double lo = std::max(0.05, best - 0.05), hi = std::min(4.2, best + 0.05);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
        double fa = power_fit(pts, a).second, fb = power_fit(pts, b).second;
        while (hi - lo > 1e-7) {
            if (fa < fb) {
                hi = b;
                b = a;
                fb = fa;
                a = hi - gr * (hi - lo);
                fa = power_fit(pts, a).second;
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + gr * (hi - lo);
                fb = power_fit(pts, b).second;
            }
        }
        delta = 0.5 * (lo + hi);
    }
    auto [c_all, r_all] = power_fit(pts, delta);
    std::vector<std::pair<double, double>> last3(pts.end() - 3, pts.end());
    auto [c_3, r_3] = power_fit(last3, delta);
    out.value = c_3;  // the 3 largest sizes carry the least subleading bias
    out.error = std::abs(c_all - c_3);
    out.exponent = delta;
    out.residual = r_all;
    // non-monotone data with a poor fit gets flagged, the estimate stands
    double span = std::abs(pts.back().second - pts.front().second);
    out.flagged = r_all > 0.2 * std::max(span, 1e-12) + 1e-12;
    return out;
}

}  // namespace looplab
