#ifndef QLANLAB_STATES_HPP
#define QLANLAB_STATES_HPP

#include "qlanlab/herm.hpp"

namespace qlanlab {

/// Density operator: unit-trace positive semidefinite Hermitian matrix.
/// Eigenvalues in [-1e-10, 0) are clipped to zero at construction; anything
/// more negative, or a trace off unity by more than 1e-10, is rejected.
class DensityOp {
public:
    explicit DensityOp(HermitianOp h);
    explicit DensityOp(CMatrix m) : DensityOp(HermitianOp(std::move(m))) {}

    static DensityOp maximally_mixed(int dim);
    static DensityOp pure(const CVector& psi);

    const CMatrix& mat() const { return op_.mat(); }
    const HermitianOp& op() const { return op_; }
    int dim() const { return op_.dim(); }

    /// Spectrum ascending, basis columns aligned; cached at construction.
    const RVector& eigenvalues() const { return evals_; }
    const CMatrix& eigenbasis() const { return evecs_; }
    int rank() const { return rank_; }
    bool faithful() const { return rank_ == dim(); }

private:
    HermitianOp op_;
    RVector evals_;
    CMatrix evecs_;
    int rank_;
};

struct LogLikelihoodRatio {
    HermitianOp L;
    DensityOp rho_ref;
    DensityOp sigma_ref;
};

/// True iff sigma restricted to the support of rho is positive definite
/// (minimum eigenvalue of the excision > tol) and the numeric ranks agree.
bool mutually_abs_continuous(const DensityOp& rho, const DensityOp& sigma, double tol = 1e-12);

/// Quantum log-likelihood ratio L with sigma = e^{L/2} rho e^{L/2}.
///
/// Faithful pairs use the closed form 2 log(rho^{-1/2} (rho^{1/2} sigma
/// rho^{1/2})^{1/2} rho^{-1/2}); otherwise the support/kernel block
/// construction with the kernel block of e^{L/2} set to the identity, so L is
/// reported on the full space. Throws model_error naming the failed
/// absolute-continuity condition when none exists.
LogLikelihoodRatio qllr(const DensityOp& rho, const DensityOp& sigma);

/// Fidelity Tr (rho^{1/2} sigma rho^{1/2})^{1/2}, clamped into [0, 1].
double fidelity(const DensityOp& rho, const DensityOp& sigma);

namespace detail {
/// Block construction with an explicit scalar kernel block gamma * I; exposed
/// so tests can probe the non-uniqueness class of the ratio. gamma = 1 is the
/// production choice.
HermitianOp qllr_with_gamma(const DensityOp& rho, const DensityOp& sigma, double gamma);
} // namespace detail

} // namespace qlanlab

#endif
