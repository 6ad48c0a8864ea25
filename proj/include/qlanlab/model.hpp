#ifndef QLANLAB_MODEL_HPP
#define QLANLAB_MODEL_HPP

#include <memory>
#include <vector>

#include "qlanlab/states.hpp"

namespace qlanlab {

enum class ModelKind { Qubit3d, Qubit2d, QubitPure, Affine, Tensor };

/// Differentiable parametric family theta -> rho_theta.
///
/// Built-in qubit families:
///   qubit3d    rho = (I + theta.sigma)/2 on the open unit ball, d = 3
///   qubit2d    rho = (I + theta1 s1 + theta2 s2 + z0 sqrt(1-|theta|^2) s3)/2, d = 2
///   qubit_pure |psi(theta)>, psi = e^{(theta1 s1 + theta2 s2)/2} |0> / sqrt(cosh|theta|)
/// plus affine families rho0 + sum_i theta_i G_i loaded from model files, and
/// i.i.d. tensor extensions of any of the above.
class ParamModel {
public:
    static ParamModel qubit3d();
    static ParamModel qubit2d(double z0);
    static ParamModel qubit_pure();
    static ParamModel affine(DensityOp rho0, std::vector<HermitianOp> generators);

    DensityOp eval(const RVector& theta) const;

    int dim() const { return dim_; }
    int d() const { return d_; }
    ModelKind kind() const { return kind_; }
    double z0() const { return z0_; }
    int copies() const { return copies_; }
    const ParamModel& base() const { return base_ ? *base_ : *this; }

    double deriv_step() const { return deriv_step_; }
    void set_deriv_step(double s) { deriv_step_ = s; }

    friend ParamModel tensor_extend(const ParamModel& model, int n);

private:
    ParamModel() = default;

    ModelKind kind_ = ModelKind::Qubit3d;
    int dim_ = 2;
    int d_ = 3;
    double z0_ = 0.0;
    double deriv_step_ = 1e-5;
    std::shared_ptr<const DensityOp> rho0_;
    std::vector<HermitianOp> generators_;
    std::shared_ptr<const ParamModel> base_;
    int copies_ = 1;
};

DensityOp eval_model(const ParamModel& model, const RVector& theta);

/// i.i.d. extension theta -> rho_theta^{(x) n}.
ParamModel tensor_extend(const ParamModel& model, int n);

/// Symmetric logarithmic derivatives at theta0: Hermitian L_i with
/// d_i rho = (L_i rho + rho L_i)/2, minimal-norm representatives (components
/// on the kernel-kernel block set to zero). Derivatives come from central
/// differences with one Richardson step.
std::vector<HermitianOp> sld(const ParamModel& model, const RVector& theta0);

/// Gram matrix G_ij = Tr rho b_j a_i (note the reversed operator order).
CMatrix sld_gram(const DensityOp& rho, const std::vector<HermitianOp>& ops_a,
                 const std::vector<HermitianOp>& ops_b);

/// Commutation operator D_rho: solves D(X) rho + rho D(X) = i (X rho - rho X),
/// with kernel-kernel components set to zero.
HermitianOp commutation_apply(const DensityOp& rho, const HermitianOp& x);

/// Basis of the smallest real span containing the centered inputs and closed
/// under the commutation operator. Inputs are centered, kept raw (not
/// orthonormalized) and listed first; closure directions are appended as
/// centered commutation images. `tol` is the relative independence threshold
/// of the Gram-Schmidt bookkeeping in the <.,.>_rho inner product.
std::vector<HermitianOp> d_invariant_extension(const DensityOp& rho,
                                               const std::vector<HermitianOp>& slds,
                                               double tol = 1e-10);

/// Sigma_ij = Tr rho D_j D_i (r x r) and tau_ij = Tr rho L_j D_i (r x d).
std::pair<CMatrix, CMatrix> sigma_tau(const DensityOp& rho,
                                      const std::vector<HermitianOp>& d_basis,
                                      const std::vector<HermitianOp>& slds);

/// Geometry bundle of a model at theta0 feeding the bound computations.
struct GeometryReport {
    RVector theta0;
    DensityOp rho;
    std::vector<HermitianOp> slds;
    CMatrix J;   // J_ij = Tr rho L_j L_i
    RMatrix J_S; // Re J
    std::vector<HermitianOp> d_basis;
    CMatrix Sigma;
    CMatrix tau;
};

GeometryReport geometry_report(const ParamModel& model, const RVector& theta0);

} // namespace qlanlab

#endif
