#ifndef QLANLAB_BOUNDS_HPP
#define QLANLAB_BOUNDS_HPP

#include <cstdint>

#include "qlanlab/herm.hpp"

namespace qlanlab {

/// Real symmetric positive-definite weight for the covariance functional.
class WeightMatrix {
public:
    explicit WeightMatrix(RMatrix g);
    static WeightMatrix identity(int d);

    const RMatrix& mat() const { return g_; }
    const RMatrix& sqrt() const { return sqrt_; }
    const RMatrix& inv_sqrt() const { return inv_sqrt_; }
    int d() const { return static_cast<int>(g_.rows()); }

private:
    RMatrix g_, sqrt_, inv_sqrt_;
};

struct HolevoOptions {
    int restarts = 16;
    std::uint64_t seed = 20130829;
    double per_restart_fatol = 1e-12;
    double agree_rel_tol = 1e-6;
    int max_evals_per_restart = 20000;
};

struct BoundResult {
    double value = 0.0;
    RMatrix F_star;   // r x d, tF * Re(tau) = I
    CMatrix Z;        // tF Sigma F
    RMatrix V_tilde;  // Re Z
    RMatrix V_hat;    // sqrt(G^-1) |sqrt(G) Im Z sqrt(G)| sqrt(G^-1)
    CMatrix Z_hat;    // V_hat - i Im Z
    int restarts_used = 0;
    bool converged = false;
};

/// Holevo bound as a minimum over r x d real matrices F with tF Re(tau) = I of
///   Tr G Re(tF Sigma F) + Tr |sqrt(G) Im(tF Sigma F) sqrt(G)|.
/// F is parametrized affinely (feasibility holds exactly throughout) and the
/// residual directions are searched by seeded multi-restart Nelder-Mead.
/// When r == d the feasible point is unique and no search runs.
BoundResult holevo_bound(const CMatrix& Sigma, const CMatrix& tau, const WeightMatrix& G,
                         const HolevoOptions& opts = {});

/// Closed form for a commutation-invariant tangent span:
///   Tr G K + Tr |sqrt(G) Im K sqrt(G)|,  K = (Re J)^-1 J (Re J)^-1.
double holevo_closed_dinv(const CMatrix& J, const WeightMatrix& G);

/// Separable-measurement bound (Tr sqrt( sqrt(G) J_S^-1 sqrt(G) ))^2.
double hgm_nagaoka_bound(const RMatrix& J_S, const WeightMatrix& G);

struct VhatSplit {
    RMatrix V_tilde;
    RMatrix V_hat;
    CMatrix Z_hat;
};

/// Splits Z into the attainable covariance pieces: V_tilde = Re Z,
/// V_hat = sqrt(G^-1)|sqrt(G) Im Z sqrt(G)|sqrt(G^-1), Z_hat = V_hat - i Im Z.
VhatSplit split_vhat(const CMatrix& Z, const WeightMatrix& G);

} // namespace qlanlab

#endif
