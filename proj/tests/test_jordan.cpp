#include <cmath>

#include "doctest.h"
#include "looplab/jordan.hpp"

using namespace looplab;

namespace {
const double NSPE = std::sqrt(2.0);  // n = n_tilde at g = 3/4
const LoopWeights<double> WSPE{NSPE, NSPE};
}  // namespace

TEST_CASE("contraction block is the mixed-module leg annihilator") {
    BasisIndex b0(enumerate_basis(4, 0)), b1(enumerate_basis(4, 1));
    CMat cb = contraction_block(b0, b1, WSPE);
    // reproduce one column by hand: H|s> restricted to zero legs
    SparseVec<double> v;
    v[b1.states[0]] = 1.0;
    for (int g = 1; g <= 4; ++g)
        for (const auto& [st, x] : apply_generator(v, g, WSPE, Module::Wle1))
            if (st.legs() == 0) CHECK(std::abs(cb(b0.index.at(st), 0) + x) < 1e-15);
}

TEST_CASE("smallest chain solved by hand: E=0 cell with nilpotent scale -2") {
    // L=2: H|s> = -(d - w) = -2 phi(s), so w'=0 and gamma=-2 exactly
    JordanCell cell = build_jordan_cell(2, WSPE, 0);
    CHECK(std::abs(cell.energy) < 1e-12);
    CHECK(std::abs(cell.gamma - Cplx(-2.0)) < 1e-10);
    CHECK(cell.wprime.norm() < 1e-10);
    // the eigensolver fixes the eigenvector only up to a phase; the pairing is
    // quadratic in that phase, so only its magnitude is pinned
    CHECK(std::abs(std::abs(cell.pairing) - 1.0) < 1e-10);
}

TEST_CASE("jordan cells exist for the lowest levels at momenta 0, 1, 2") {
    for (int L : {4, 6, 8, 10}) {
        for (int k : {0, 1, 2}) {
            // at L=4 the momentum-1 level is four-fold degenerate and H is
            // diagonalizable there (checked below); the cell first appears at L=6
            if (L == 4 && k == 1) continue;
            JordanCell cell = build_jordan_cell(L, WSPE, k);
            CHECK(cell.eig_residual <= 1e-8);
            CHECK(cell.ls_residual <= 1e-8);
            CHECK(cell.block_residual <= 1e-8);
            CHECK(std::abs(cell.pairing) > 1e-8);
        }
    }
    CHECK_THROWS_AS(build_jordan_cell(4, LoopWeights<double>{1.3, 0.7}, 0),
                    std::domain_error);
}

TEST_CASE("finite-size accident: no momentum-1 cell at L=4") {
    // at L=4 the lowest momentum-1 two-leg level sits in a four-fold degenerate
    // eigenspace of the mixed Hamiltonian with ker(H-E) = ker((H-E)^2), i.e. H is
    // diagonalizable at that energy and the nilpotent scale has nowhere to live
    CHECK_THROWS_AS(build_jordan_cell(4, WSPE, 1), std::runtime_error);

    BasisIndex b0(enumerate_basis(4, 0)), b1(enumerate_basis(4, 1));
    int n0 = b0.size(), n1 = b1.size();
    CMat h = CMat::Zero(n0 + n1, n0 + n1);
    h.topLeftCorner(n0, n0) = dense_hamiltonian(b0, WSPE).cast<Cplx>();
    h.bottomRightCorner(n1, n1) = dense_hamiltonian(b1, WSPE).cast<Cplx>();
    h.topRightCorner(n0, n1) = contraction_block(b0, b1, WSPE);
    double e = momentum_spectrum(b1, WSPE, Module::W, 1).energies(0);
    CMat a = h - e * CMat::Identity(n0 + n1, n0 + n1);
    auto rank = [](const CMat& m) {
        Eigen::JacobiSVD<CMat> svd(m);
        int r = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-8 * svd.singularValues()(0)) ++r;
        return r;
    };
    int ker1 = n0 + n1 - rank(a), ker2 = n0 + n1 - rank(CMat(a * a));
    CHECK(ker1 == 4);
    CHECK(ker2 == ker1);  // no generalized eigenvectors at this energy
}

TEST_CASE("the cell really is a 2x2 Jordan block, not a diagonal pair") {
    // H on span(chi, W) in the basis (chi, W) is ((E,1),(0,E)); the off-diagonal 1
    // is fixed by the construction, so (H-E) has rank 1 on the cell and (H-E)^2 = 0
    JordanCell cell = build_jordan_cell(6, WSPE, 1);
    BasisIndex b0(enumerate_basis(6, 0)), b1(enumerate_basis(6, 1));
    CMat h0 = dense_hamiltonian(b0, WSPE).cast<Cplx>();
    CMat cb = contraction_block(b0, b1, WSPE);
    CMat h1 = dense_hamiltonian(b1, WSPE).cast<Cplx>();
    // (H-E) applied to W lands exactly on gamma*chi (nilpotent of order 2)
    CVec top = h0 * cell.wprime + cb * cell.w1 - cell.energy * cell.wprime;
    CVec bot = h1 * cell.w1 - cell.energy * cell.w1;
    CHECK((top - cell.gamma * cell.chi).norm() < 1e-8);
    CHECK(bot.norm() < 1e-8);
    // (H-E) chi = 0, hence (H-E)^2 kills the whole cell
    CHECK((h0 * cell.chi - cell.energy * cell.chi).norm() < 1e-8);
    CHECK(cell.chi.norm() > 0.1);  // the nilpotent part is genuinely nonzero
}

TEST_CASE("chi has zero norm but pairs with its logarithmic partner") {
    for (int k : {0, 1}) {
        JordanCell cell = build_jordan_cell(8, WSPE, k);
        BasisIndex b0(enumerate_basis(8, 0));
        LoopWeights<Cplx> cw = cweights(WSPE);
        SparseVec<Cplx> vchi = to_sparse(b0, cell.chi);
        CHECK(std::abs(gram(vchi, vchi, cw)) < 1e-10);
        CHECK(std::abs(cell.pairing) > 1e-8);
    }
}

TEST_CASE("decoupling report: finite-size scalar products and symmetry zeros") {
    for (int L = 2; L <= 10; L += 2) {
        auto rows = decoupling_report(L, WSPE);
        CHECK(!rows.empty());
        for (const auto& row : rows) {
            CHECK(std::abs(row.pairing) > 1e-8);
            CHECK(row.null_overlap < 1e-10);
            CHECK(row.cross_pairing < 1e-10);
        }
    }
}
