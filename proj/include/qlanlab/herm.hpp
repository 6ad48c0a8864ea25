#ifndef QLANLAB_HERM_HPP
#define QLANLAB_HERM_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "qlanlab/errors.hpp"

namespace qlanlab {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Construction tolerance for accepting a matrix as Hermitian.
inline constexpr double kHermTol = 1e-12;
/// Relative eigenvalue threshold below which spectrum entries count as zero
/// for rank and support decisions. Shared by every module.
inline constexpr double kRankRelTol = 1e-12;

/// Dense Hermitian operator. Inputs are checked against kHermTol and then
/// symmetrized exactly, so downstream eigendecompositions always see
/// (H + H^dagger)/2.
class HermitianOp {
public:
    explicit HermitianOp(CMatrix m);

    static HermitianOp zero(int dim);
    static HermitianOp identity(int dim);

    const CMatrix& mat() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

    HermitianOp operator+(const HermitianOp& o) const { return HermitianOp(m_ + o.m_); }
    HermitianOp operator-(const HermitianOp& o) const { return HermitianOp(m_ - o.m_); }
    HermitianOp operator*(double c) const { return HermitianOp(c * m_); }

private:
    CMatrix m_;
};

inline HermitianOp operator*(double c, const HermitianOp& h) { return h * c; }

struct Eigh {
    RVector eigenvalues;  // ascending
    CMatrix eigenvectors; // unitary, columns match eigenvalue order
};

/// Full spectral decomposition H = U diag(lambda) U^dagger.
Eigh eigh(const HermitianOp& h);

/// Functional calculus U diag(f(lambda)) U^dagger. Throws numeric_error if f
/// is undefined (non-finite) at some eigenvalue; `fname` labels the message.
HermitianOp func_calc(const HermitianOp& h, const std::function<double(double)>& f,
                      const std::string& fname = "f");

/// Operator geometric mean A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}.
/// A must be positive definite, B positive semidefinite.
HermitianOp geometric_mean(const HermitianOp& a, const HermitianOp& b);

/// Trace norm of a Hermitian operator: sum of absolute eigenvalues.
double trace_abs(const HermitianOp& a);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Places A at site k (1-based) of an n-fold tensor product, identity elsewhere.
HermitianOp site_embed(const HermitianOp& a, int n, int k);

/// Tensor-product dimension cap. Defaults to 4096; the QLANLAB_MEMCAP_DIM
/// environment variable or set_dim_cap override it.
int dim_cap();
void set_dim_cap(int cap);

/// Checks dim^n against the cap and returns it. Throws resource_error with the
/// required dimension otherwise.
long long check_power_dim(int dim, int n);

/// Number of eigenvalues exceeding kRankRelTol relative to the largest magnitude.
int numeric_rank(const RVector& eigenvalues);

double frob_norm(const CMatrix& m);

} // namespace qlanlab

#endif
