#ifndef QLANLAB_ASYMP_HPP
#define QLANLAB_ASYMP_HPP

#include <cstdint>
#include <vector>

#include "qlanlab/bounds.hpp"
#include "qlanlab/gauss.hpp"
#include "qlanlab/model.hpp"

namespace qlanlab {

/// Smoothed-lattice measurement parameters: m lattice density, ell extent,
/// q kernel sharpness, p buffer cutoff (p < ell).
struct LatticeConfig {
    int m = 8;
    double ell = 4.0;
    double q = 16.0;
    double p = 3.0;

    void validate() const;
};

struct PovmOutcome {
    RVector omega;
    HermitianOp element;
};

/// Positive elements summing to the identity; outcomes[0] is the default
/// outcome omega = 0 that aggregates the buffer zone.
struct Povm {
    std::vector<PovmOutcome> outcomes;
    int dim() const { return outcomes.empty() ? 0 : outcomes.front().element.dim(); }
};

struct EstimatorStats {
    RVector mean;
    RMatrix cov;
    double weighted_trace = 0.0;
    RVector mean_se; // standard errors where sampling is involved, else empty
};

/// (1/sqrt(n)) sum_k I x ... x A x ... x I with A at site k.
HermitianOp collective_observable(const HermitianOp& a, int n);

/// Quasi-characteristic function of collective observables under rho^{(x) n},
/// evaluated as the n-th power of the single-copy ordered product trace; no
/// tensor space is materialized, so n may be large. Requires Tr rho A_i = 0.
Complex iid_quasi_char(const DensityOp& rho, const std::vector<HermitianOp>& a, double n,
                       const std::vector<CVector>& xis);

struct CltRow {
    double n;
    double sup_error;
};

struct CltReport {
    std::vector<CltRow> rows;
    bool decreasing_trend = false; // every step reduces the error (10% slack)
};

/// Sup over the xi grid of |iid_quasi_char - quasi_char(N(0,J))| with
/// J_ij = Tr rho A_j A_i, tabulated over the n schedule.
CltReport clt_convergence_report(const DensityOp& rho, const std::vector<HermitianOp>& a,
                                 const std::vector<std::vector<CVector>>& xis_grid,
                                 const std::vector<double>& n_schedule);

/// Real xi vectors spanning the first two parameter axes (singles and an
/// ordered pair). On these directions the Gaussian limit is approached at
/// rate 1/n for the built-in qubit families; directions with a nonvanishing
/// third moment converge at rate 1/sqrt(n) and are exercised separately.
std::vector<std::vector<CVector>> default_xi_grid(int d);

struct QlanResidual {
    double p_norm;      // operator norm of P(n)
    double sqrtn_trace; // sqrt(n) Tr rho P(n)
};

/// Single-copy expansion residual of the local log-likelihood ratio:
///   P(n) = sqrt(n) ( L(rho_{theta0+h/sqrt(n)} | rho_theta0)
///                    - h.L/sqrt(n) + (h'Jh/2n) I ).
QlanResidual qlan_residual(const ParamModel& model, const RVector& theta0, const RVector& h,
                           double n);

/// Smoothed-lattice POVM over the cube [-ell, ell]^d built from Gaussian
/// kernel factors of the (possibly non-commuting) observables X. Elements are
/// R (C*C + I/(2m)^d) R with R = (T + I)^{-1/2}, so completeness is exact and
/// every element is PSD by construction. Outcomes outside [-p, p]^d aggregate
/// into the default outcome 0.
Povm lattice_povm(const std::vector<HermitianOp>& x, const LatticeConfig& cfg);

/// Outcome mean and covariance of the POVM under rho. Probabilities are
/// clipped at -1e-12 and renormalized; a probability sum off unity by more
/// than 1e-8 is a POVM integrity error.
EstimatorStats povm_stats(const DensityOp& rho, const Povm& povm, const WeightMatrix& weight);

struct PipelineResult {
    EstimatorStats stats;
    double target = 0.0; // Tr G (V_tilde + V_hat), the bound being approached
    BoundResult bound;
};

/// Operator-level estimation round at finite n: geometry -> bound -> ancilla
/// realization of Z_hat -> collective observables X = F*.X x I + I x Y ->
/// lattice POVM -> statistics under rho_{theta0+h/sqrt(n)}^n x sigma^n.
PipelineResult achievability_pipeline(const ParamModel& model, const RVector& theta0,
                                      const WeightMatrix& G, const RVector& h, int n,
                                      const LatticeConfig& cfg);

/// Classical limit of the lattice measurement: x ~ N(h, V), then a lattice
/// outcome from the smoothing kernel (f_omega(x) + 1/(2m)^d) / (normalizer),
/// buffer outcomes mapped to 0. Seeded and deterministic; antithetic pairs
/// keep the Gaussian draws exactly centered on h.
EstimatorStats classical_limit_sim(const RMatrix& v, const RVector& h, const LatticeConfig& cfg,
                                   std::int64_t samples, std::uint64_t seed);

} // namespace qlanlab

#endif
