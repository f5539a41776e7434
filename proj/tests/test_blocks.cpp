#include "doctest.h"

#include "looplab/blocks.hpp"
#include "looplab/opecoeffs.hpp"

using namespace looplab;

namespace {

const CoulombParams P = CoulombParams::from_n(1.3);
const FourPoint F = FourPoint::make(P, 0.21, -0.13, 0.37);

double cerr(cdouble got, cdouble want) {
    return std::abs(got - want) / (1.0 + std::abs(want));
}

}  // namespace

TEST_CASE("letters of the degenerate insertion") {
    CHECK(F.a() + F.ap() == doctest::Approx(2.0 * (F.rho() - 1.0)).epsilon(1e-13));
    // second field is the level-2 degenerate one: letter -rho
    CHECK(P.letter_a(F.al2) == doctest::Approx(-F.rho()).epsilon(1e-13));
    CHECK(F.h(2) == doctest::Approx(P.h_kac(1, 2)).epsilon(1e-12));
}

TEST_CASE("all four blocks satisfy the hypergeometric ODE") {
    auto check_at = [&](cdouble z) {
        CHECK(pde_residual(F, [&](cdouble w) { return block_I1(F, w); }, z) < 1e-8);
        CHECK(pde_residual(F, [&](cdouble w) { return block_I2(F, w); }, z) < 1e-8);
        CHECK(pde_residual(F, [&](cdouble w) { return block_J1(F, w); }, z) < 1e-8);
        CHECK(pde_residual(F, [&](cdouble w) { return block_J2(F, w); }, z) < 1e-8);
    };
    check_at({0.31, 0.22});
    check_at({0.58, -0.17});
}

TEST_CASE("exchange symmetries of the block bases") {
    cdouble z(0.41, 0.18);
    // alpha_1 -> 2 alpha_0 - alpha_1 swaps a <-> a', i.e. I1 <-> I2
    FourPoint fa = FourPoint::make(P, 2.0 * P.alpha0() - F.al1, F.al3, F.al4);
    CHECK(cerr(block_I1(fa, z), block_I2(F, z)) < 1e-12);
    CHECK(cerr(block_J1(fa, z), block_J1(F, z)) < 1e-12);
    // alpha_4 -> 2 alpha_0 - alpha_4 (d <-> d') leaves everything invariant
    FourPoint fd = FourPoint::make(P, F.al1, F.al3, 2.0 * P.alpha0() - F.al4);
    CHECK(cerr(block_I1(fd, z), block_I1(F, z)) < 1e-13);
    CHECK(cerr(block_J2(fd, z), block_J2(F, z)) < 1e-13);
}

TEST_CASE("connection matrix relates the two bases and inverts as M(b,a,d)") {
    Mat2 M = connection_matrix(F.a(), F.b(), F.d(), F.rho());
    for (cdouble z : {cdouble(0.35, 0.15), cdouble(0.52, -0.2)}) {
        cdouble i1 = block_I1(F, z), i2 = block_I2(F, z);
        cdouble j1 = block_J1(F, z), j2 = block_J2(F, z);
        CHECK(cerr(i1, M[0][0] * j1 + M[0][1] * j2) < 1e-10);
        CHECK(cerr(i2, M[1][0] * j1 + M[1][1] * j2) < 1e-10);
    }
    Mat2 Mi = connection_matrix(F.b(), F.a(), F.d(), F.rho());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double want = (i == j) ? 1.0 : 0.0;
            double got = M[i][0] * Mi[0][j] + M[i][1] * Mi[1][j];
            CHECK(std::abs(got - want) < 1e-10);
        }
}

TEST_CASE("monodromy around z=0 multiplies I_k by its indicial phase") {
    double r = 0.45;
    cdouble z0(r, 0.0);
    auto i1f = [&](cdouble w) { return block_I1(F, w); };
    auto i2f = [&](cdouble w) { return block_I2(F, w); };
    auto t1 = monodromy_transport(F, i1f(z0), cauchy_deriv(i1f, z0), r);
    auto t2 = monodromy_transport(F, i2f(z0), cauchy_deriv(i2f, z0), r);
    cdouble ph1 = std::exp(cdouble(0.0, -M_PI * F.a()));
    cdouble ph2 = std::exp(cdouble(0.0, -M_PI * F.ap()));
    CHECK(cerr(t1[0], ph1 * i1f(z0)) < 1e-6);
    CHECK(cerr(t2[0], ph2 * i2f(z0)) < 1e-6);
}

TEST_CASE("crossing ratio: both printed forms agree and square to the sine formula") {
    double rho = F.rho();
    double a = F.a(), b = F.b(), d = F.d();
    // barred letters shifted by even integers: locality and parity hold
    double ab = a, bb = b + 2.0, db = d - 2.0;
    CHECK(charge_parity_ok(a, b, d, ab, bb, db));
    CHECK(determinant_condition_mismatch(a, b, d, ab, bb, db, rho) < 1e-12);
    Mat2 M = connection_matrix(a, b, d, rho);
    Mat2 Mb = connection_matrix(ab, bb, db, rho);
    auto forms = x1_over_x2_forms(M, Mb);
    CHECK(std::abs(forms[0] - forms[1]) < 1e-10 * (std::abs(forms[0]) + 1.0));
    double twom = 2.0 * (rho - 1.0);
    Tagged xr = X_ratio_squared_tagged({a, 0}, {twom - a, 0}, {b, 0}, {twom - b, 0},
                                       {d, 0}, {ab, 0}, {twom - ab, 0}, {bb, 0},
                                       {twom - bb, 0}, {db, 0}, rho);
    REQUIRE(xr.k == 0);
    CHECK(forms[0] * forms[1] == doctest::Approx(xr.m).epsilon(1e-9));
}

TEST_CASE("non-local charge assignments are rejected") {
    double a = F.a(), b = F.b(), d = F.d();
    CHECK_FALSE(charge_parity_ok(a, b, d, a, b + 2.0, d - 1.3));
    CHECK(determinant_condition_mismatch(a, b, d, a + 0.4, b, d, F.rho()) > 1e-3);
    double ap = F.ap();
    CHECK(classify_block_pair(a, ap, a, ap) == SpectrumClass::generic);
    FourPoint fl = log_fourpoint(P, 1, F.al3, F.al4);
    CHECK(classify_block_pair(fl.a(), fl.ap(), fl.a(), fl.ap()) ==
          SpectrumClass::logarithmic);
    CHECK(classify_block_pair(fl.a(), fl.ap(), a, ap) ==
          SpectrumClass::hybrid_ruled_out);
}

TEST_CASE("logarithmic partner block: connection matrix and its printed inverse") {
    int m = 1;
    double al3 = -0.13, al4 = 0.37;
    Mat2 Mt = log_connection_matrix(P, m, al3, al4);
    Mat2 Mti = log_connection_matrix_inverse(P, m, al3, al4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double want = (i == j) ? 1.0 : 0.0;
            double got = Mt[i][0] * Mti[0][j] + Mt[i][1] * Mti[1][j];
            CHECK(std::abs(got - want) < 1e-10);
        }

    // the first row is inherited from the generic connection matrix
    FourPoint f0 = log_fourpoint(P, m, al3, al4);
    for (cdouble z : {cdouble(0.34, 0.21), cdouble(0.55, -0.12)}) {
        cdouble j1 = block_J1(f0, z), j2 = block_J2(f0, z);
        cdouble i1 = block_I1(f0, z);
        CHECK(cerr(i1, Mt[0][0] * j1 + Mt[0][1] * j2) < 1e-9);
    }
}

TEST_CASE("logarithmic partner block: epsilon-limit stability") {
    int m = 1;
    double al3 = -0.13, al4 = 0.37;
    cdouble z(0.34, 0.21);
    cdouble f1 = log_block_I2t_limit(P, m, al3, al4, z, 0, 1e-3);
    cdouble f2 = log_block_I2t_limit(P, m, al3, al4, z, 0, 5e-4);
    CHECK(std::abs(f1 - f2) < 1e-6 * (1.0 + std::abs(f1)));
    // the log coefficient is a finite real constant
    cdouble kap = log_block_kappa(P, m, al3, al4);
    CHECK(std::abs(kap) > 1e-3);
    CHECK(std::abs(kap.imag()) < 1e-7 * std::abs(kap));
}

TEST_CASE("logarithmic partner block satisfies the ODE") {
    int m = 1;
    FourPoint f0 = log_fourpoint(P, m, -0.13, 0.37);
    auto i2tf = [&](cdouble w) { return log_block_I2t(P, m, -0.13, 0.37, w); };
    CHECK(pde_residual(f0, i2tf, {0.4, 0.2}) < 1e-8);
}

TEST_CASE("monodromy of the logarithmic pair mixes in 2 pi i times the primary") {
    int m = 1;
    double al3 = -0.13, al4 = 0.37;
    FourPoint f0 = log_fourpoint(P, m, al3, al4);
    double r = 0.45;
    cdouble z0(r, 0.0);
    auto i2tf = [&](cdouble w) { return log_block_I2t(P, m, al3, al4, w); };
    cdouble i1 = block_I1(f0, z0);
    cdouble i2t = i2tf(z0);
    auto t = monodromy_transport(f0, i2t, cauchy_deriv(i2tf, z0), r);
    cdouble ph = std::exp(cdouble(0.0, -M_PI * f0.a()));
    cdouble want = ph * (cdouble(0.0, 2.0 * M_PI) * i1 + i2t);
    CHECK(cerr(t[0], want) < 1e-6);
}
