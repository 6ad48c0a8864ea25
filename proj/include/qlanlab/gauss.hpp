#ifndef QLANLAB_GAUSS_HPP
#define QLANLAB_GAUSS_HPP

#include <cstdint>
#include <vector>

#include "qlanlab/states.hpp"

namespace qlanlab {

/// Quantum Gaussian state N(h, J): J = V + iS with V the real covariance and
/// S the commutator form. All expectations evaluate through the closed-form
/// quasi-characteristic function; no operator representation is built.
struct GaussianState {
    RVector h;
    CMatrix J;

    GaussianState(RVector mean, CMatrix second);
    int d() const { return static_cast<int>(h.size()); }
};

/// Shift family h -> N(tau h, Sigma) with tau real of full column rank.
struct GaussianShiftModel {
    RMatrix tau;   // r x d
    CMatrix Sigma; // r x r, Re Sigma positive definite

    GaussianShiftModel(RMatrix shift_map, CMatrix second);
    int r() const { return static_cast<int>(Sigma.rows()); }
    int d() const { return static_cast<int>(tau.cols()); }
};

/// Quasi-characteristic function of an ordered product of exponentials
/// e^{i xi_t . X} under N(h, J); xi entries may be complex. Empty list -> 1.
Complex quasi_char(const GaussianState& state, const std::vector<CVector>& xis);

struct GaussMoments {
    RVector mean;
    CMatrix second; // centered second moments, (j i)-ordered
};

/// First and centered second moments, cross-validated against numerical
/// differentiation of the quasi-characteristic function at xi = 0.
GaussMoments gauss_moments(const GaussianState& state);

struct GaussianSld {
    RMatrix coeff; // r x d: L_k = sum_l coeff(l, k) (X_l - shift_l I)
    RVector shift; // tau h
};

/// SLDs of the Gaussian shift model at h: coeff = (Re Sigma)^-1 tau. The
/// moment identities  phi(Lt_j Lt_i) = Sigma_ij  and  Re phi(L_j Lt_i) = tau_ij
/// are evaluated numerically and must hold within 1e-8.
GaussianSld gauss_sld(const GaussianShiftModel& model, const RVector& h);

struct AncillaSystem {
    DensityOp sigma;              // |0><0| on dimension d+1
    std::vector<HermitianOp> B;   // Tr sigma B_i = 0, Tr sigma B_j B_i = J_ij
};

/// Finite-dimensional realization of an arbitrary PSD Gram matrix J:
/// B_i = |l_i><0| + |0><l_i| with |l_i> = sum_k sqrt(J)_ik |k>.
AncillaSystem ancilla_from_gram(const CMatrix& J);

/// Given a unit vector psi and observables A_i whose Gram <psi|A_j A_i|psi>
/// is real, returns K_i with [A_i + K_i, A_j + K_j] = 0 and K_i psi = 0.
/// The shared eigenbasis is found by seeded random orthogonal mixing of a
/// real-structure basis until every overlap |<e_k|psi>| clears 1e-3
/// (64 retries).
std::vector<HermitianOp> commuting_completion(const CVector& psi,
                                              const std::vector<HermitianOp>& A,
                                              std::uint64_t seed = 7);

} // namespace qlanlab

#endif
