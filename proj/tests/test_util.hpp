#ifndef QLANLAB_TEST_UTIL_HPP
#define QLANLAB_TEST_UTIL_HPP

#include "qlanlab/herm.hpp"
#include "qlanlab/rng.hpp"
#include "qlanlab/states.hpp"

namespace qlanlab::testutil {

inline const CMatrix& sx() {
    static const CMatrix m = (CMatrix(2, 2) << 0, 1, 1, 0).finished();
    return m;
}
inline const CMatrix& sy() {
    static const CMatrix m =
        (CMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
    return m;
}
inline const CMatrix& sz() {
    static const CMatrix m = (CMatrix(2, 2) << 1, 0, 0, -1).finished();
    return m;
}
inline CMatrix id(int n) { return CMatrix::Identity(n, n); }

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline CMatrix random_hermitian(Rng& rng, int dim, double scale = 1.0) {
    CMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
    m = 0.5 * (m + m.adjoint().eval());
    return scale * m;
}

inline CMatrix random_unitary(Rng& rng, int dim) {
    CMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
    Eigen::HouseholderQR<CMatrix> qr(m);
    CMatrix q = qr.householderQ();
    return q;
}

inline CMatrix random_pd(Rng& rng, int dim, double min_eig = 0.2) {
    CMatrix u = random_unitary(rng, dim);
    RVector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = min_eig + rng.uniform();
    return u * v.asDiagonal() * u.adjoint();
}

/// Random density operator of the requested rank, support eigenvalues
/// bounded away from zero so conditioning stays benign.
inline DensityOp random_density(Rng& rng, int dim, int rank) {
    CMatrix u = random_unitary(rng, dim);
    RVector v = RVector::Zero(dim);
    double total = 0.0;
    for (int i = 0; i < rank; ++i) {
        v[i] = 0.05 + rng.uniform();
        total += v[i];
    }
    v /= total;
    CMatrix m = u.leftCols(rank) * v.head(rank).asDiagonal() * u.leftCols(rank).adjoint();
    return DensityOp(CMatrix(0.5 * (m + m.adjoint().eval())));
}

/// Mutually absolutely continuous partner of rho: e^{K/2} rho e^{K/2},
/// renormalized (which only shifts K by a multiple of the identity).
inline DensityOp mac_partner(Rng& rng, const DensityOp& rho, double kick = 0.7) {
    HermitianOp k(random_hermitian(rng, rho.dim(), kick));
    CMatrix ek = CMatrix::Zero(rho.dim(), rho.dim());
    {
        Eigh e = eigh(k);
        RVector ex = e.eigenvalues.unaryExpr([](double x) { return std::exp(0.5 * x); });
        ek = e.eigenvectors * ex.asDiagonal() * e.eigenvectors.adjoint();
    }
    CMatrix m = ek * rho.mat() * ek.adjoint().eval();
    m /= m.trace().real();
    return DensityOp(CMatrix(0.5 * (m + m.adjoint().eval())));
}

} // namespace qlanlab::testutil

#endif
