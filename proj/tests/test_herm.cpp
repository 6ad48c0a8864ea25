#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qlanlab/herm.hpp"
#include "test_util.hpp"

using namespace qlanlab;
using namespace qlanlab::testutil;

TEST_CASE("eigh basics") {
    auto e = eigh(HermitianOp::identity(2));
    CHECK(e.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(e.eigenvalues[1] == doctest::Approx(1.0));

    e = eigh(HermitianOp(sz()));
    CHECK(e.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(e.eigenvalues[1] == doctest::Approx(1.0));

    // 2x2 characteristic polynomial of sx: eigenvalues -1, 1 with
    // eigenvectors (1, -1)/sqrt(2) and (1, 1)/sqrt(2) up to phase.
    e = eigh(HermitianOp(sx()));
    CHECK(e.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(e.eigenvalues[1] == doctest::Approx(1.0));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(e.eigenvectors(0, 0)) == doctest::Approx(s));
    CHECK(std::abs(e.eigenvectors(1, 1)) == doctest::Approx(s));
    // reconstruction and unitarity
    CMatrix rec = e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
    CHECK(max_abs(rec - sx()) < 1e-12);
    CHECK(max_abs(e.eigenvectors.adjoint() * e.eigenvectors - id(2)) < 1e-10);
}

TEST_CASE("hermiticity is enforced at construction") {
    CMatrix bad(2, 2);
    bad << 1, 2, 3, 4;
    CHECK_THROWS_AS(HermitianOp{bad}, model_error);
}

TEST_CASE("func_calc closed cases") {
    CHECK(max_abs(func_calc(HermitianOp::zero(2), [](double x) { return std::exp(x); }).mat() -
                  id(2)) < 1e-14);

    CMatrix d49(2, 2);
    d49 << 4, 0, 0, 9;
    CMatrix d23(2, 2);
    d23 << 2, 0, 0, 3;
    CHECK(max_abs(func_calc(HermitianOp(d49), [](double x) { return std::sqrt(x); }).mat() -
                  d23) < 1e-12);

    // sx^2 = I by the Pauli algebra
    CHECK(max_abs(func_calc(HermitianOp(sx()), [](double x) { return x * x; }).mat() - id(2)) <
          1e-12);
}

TEST_CASE("func_calc domain error names the eigenvalue") {
    try {
        func_calc(HermitianOp(sz()), [](double x) { return std::log(x); }, "log");
        CHECK(false);
    } catch (const numeric_error& e) {
        CHECK(std::string(e.what()).find("log") != std::string::npos);
        CHECK(std::string(e.what()).find("-1") != std::string::npos);
    }
}

TEST_CASE("func_calc matches matrix polynomials") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + static_cast<int>(rng.uniform() * 4);
        HermitianOp h(random_hermitian(rng, dim));
        CMatrix poly = 2.0 * id(dim) + 0.5 * h.mat() - 0.25 * h.mat() * h.mat() +
                       0.125 * h.mat() * h.mat() * h.mat();
        HermitianOp viaspec =
            func_calc(h, [](double x) { return 2.0 + 0.5 * x - 0.25 * x * x + 0.125 * x * x * x; });
        CHECK(max_abs(viaspec.mat() - poly) < 1e-9);
    }
}

TEST_CASE("geometric mean") {
    CHECK(max_abs(geometric_mean(HermitianOp::identity(2), HermitianOp::identity(2)).mat() -
                  id(2)) < 1e-12);

    CMatrix a(2, 2), b(2, 2), expect(2, 2);
    a << 1, 0, 0, 4;
    b << 9, 0, 0, 1;
    expect << 3, 0, 0, 2;
    CHECK(max_abs(geometric_mean(HermitianOp(a), HermitianOp(b)).mat() - expect) < 1e-12);

    // defining property P A^-1 P = B, and symmetry, on random PD pairs
    Rng rng(5);
    for (int dim = 2; dim <= 6; ++dim) {
        HermitianOp A(random_pd(rng, dim));
        HermitianOp B(random_pd(rng, dim));
        HermitianOp P = geometric_mean(A, B);
        CMatrix a_inv = A.mat().inverse();
        CHECK(max_abs(P.mat() * a_inv * P.mat() - B.mat()) < 1e-9);
        HermitianOp Q = geometric_mean(B, A);
        CHECK(max_abs(P.mat() - Q.mat()) < 1e-9);
    }

    CMatrix sing(2, 2);
    sing << 1, 0, 0, 0;
    CHECK_THROWS_AS(geometric_mean(HermitianOp(sing), HermitianOp::identity(2)), numeric_error);
}

TEST_CASE("trace_abs") {
    CHECK(trace_abs(HermitianOp(sz())) == doctest::Approx(2.0));
    CHECK(trace_abs(HermitianOp::zero(3)) == doctest::Approx(0.0));
    // i * [[0,-1],[1,0]] is sy, eigenvalues +-1
    CMatrix anti(2, 2);
    anti << 0, -1, 1, 0;
    CHECK(trace_abs(HermitianOp(CMatrix(Complex(0, 1) * anti))) == doctest::Approx(2.0));

    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        HermitianOp h(random_hermitian(rng, 4));
        CHECK(trace_abs(h) >= std::abs(h.mat().trace().real()) - 1e-12);
    }
}

TEST_CASE("kron and site_embed") {
    CHECK(max_abs(kron(id(2), id(2)) - id(4)) == 0.0);
    CHECK(max_abs(site_embed(HermitianOp(sz()), 2, 1).mat() - kron(sz(), id(2))) == 0.0);

    // trace factorization: Tr rho0 x rho0 (sz x I) = Tr rho0 sz
    Rng rng(17);
    DensityOp rho = random_density(rng, 2, 2);
    CMatrix rho2 = kron(rho.mat(), rho.mat());
    const double lhs = (rho2 * site_embed(HermitianOp(sz()), 2, 1).mat()).trace().real();
    const double rhs = (rho.mat() * sz()).trace().real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    // operators at distinct sites commute
    HermitianOp e1 = site_embed(HermitianOp(sx()), 3, 1);
    HermitianOp e3 = site_embed(HermitianOp(sy()), 3, 3);
    CHECK(max_abs(e1.mat() * e3.mat() - e3.mat() * e1.mat()) <= 1e-12);
}

TEST_CASE("tensor cap is enforced and reported") {
    const int before = dim_cap();
    set_dim_cap(8);
    CHECK_THROWS_AS(site_embed(HermitianOp(sz()), 4, 1), resource_error);
    try {
        site_embed(HermitianOp(sz()), 4, 1);
    } catch (const resource_error& e) {
        CHECK(std::string(e.what()).find("16") != std::string::npos);
    }
    set_dim_cap(before);
}
