#include "qlanlab/model.hpp"

#include <cmath>
#include <deque>
#include <sstream>

namespace qlanlab {

namespace {

const CMatrix& pauli(int i) {
    static const CMatrix s1 = (CMatrix(2, 2) << 0, 1, 1, 0).finished();
    static const CMatrix s2 = (CMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
    static const CMatrix s3 = (CMatrix(2, 2) << 1, 0, 0, -1).finished();
    switch (i) {
        case 1: return s1;
        case 2: return s2;
        default: return s3;
    }
}

void require_d(const ParamModel& m, const RVector& theta) {
    if (theta.size() != m.d()) {
        std::ostringstream os;
        os << "model expects " << m.d() << " parameters, got " << theta.size();
        throw model_error(os.str());
    }
}

} // namespace

ParamModel ParamModel::qubit3d() {
    ParamModel m;
    m.kind_ = ModelKind::Qubit3d;
    m.dim_ = 2;
    m.d_ = 3;
    return m;
}

ParamModel ParamModel::qubit2d(double z0) {
    if (z0 < 0.0 || z0 >= 1.0) throw model_error("qubit2d: z0 must lie in [0, 1)");
    ParamModel m;
    m.kind_ = ModelKind::Qubit2d;
    m.dim_ = 2;
    m.d_ = 2;
    m.z0_ = z0;
    return m;
}

ParamModel ParamModel::qubit_pure() {
    ParamModel m;
    m.kind_ = ModelKind::QubitPure;
    m.dim_ = 2;
    m.d_ = 2;
    return m;
}

ParamModel ParamModel::affine(DensityOp rho0, std::vector<HermitianOp> generators) {
    if (generators.empty()) throw model_error("affine model needs at least one generator");
    for (const auto& g : generators) {
        if (g.dim() != rho0.dim()) throw model_error("affine generator dimension mismatch");
    }
    ParamModel m;
    m.kind_ = ModelKind::Affine;
    m.dim_ = rho0.dim();
    m.d_ = static_cast<int>(generators.size());
    m.rho0_ = std::make_shared<DensityOp>(std::move(rho0));
    m.generators_ = std::move(generators);
    return m;
}

ParamModel tensor_extend(const ParamModel& model, int n) {
    if (n < 1) throw model_error("tensor_extend: n must be >= 1");
    if (n == 1) return model;
    check_power_dim(model.dim(), n);
    ParamModel m;
    m.kind_ = ModelKind::Tensor;
    m.dim_ = 1;
    for (int i = 0; i < n; ++i) m.dim_ *= model.dim();
    m.d_ = model.d();
    m.deriv_step_ = model.deriv_step();
    m.base_ = std::make_shared<ParamModel>(model);
    m.copies_ = n;
    return m;
}

DensityOp ParamModel::eval(const RVector& theta) const {
    require_d(*this, theta);
    switch (kind_) {
        case ModelKind::Qubit3d: {
            if (theta.norm() >= 1.0) throw model_error("qubit3d: |theta| must be < 1");
            CMatrix m = CMatrix::Identity(2, 2);
            for (int i = 0; i < 3; ++i) m += theta[i] * pauli(i + 1);
            return DensityOp(CMatrix(0.5 * m));
        }
        case ModelKind::Qubit2d: {
            const double n2 = theta.squaredNorm();
            if (n2 >= 1.0) throw model_error("qubit2d: |theta| must be < 1");
            CMatrix m = CMatrix::Identity(2, 2);
            m += theta[0] * pauli(1) + theta[1] * pauli(2);
            m += z0_ * std::sqrt(1.0 - n2) * pauli(3);
            return DensityOp(CMatrix(0.5 * m));
        }
        case ModelKind::QubitPure: {
            const double t = theta.norm();
            CMatrix a = 0.5 * (theta[0] * pauli(1) + theta[1] * pauli(2));
            // exp(a) = cosh(t/2) I + sinh(t/2)/(t/2) * a, since a^2 = (t/2)^2 I
            const double half = 0.5 * t;
            const double sh = t > 1e-12 ? std::sinh(half) / half : 1.0 + half * half / 6.0;
            CMatrix ea = std::cosh(half) * CMatrix::Identity(2, 2) + sh * a;
            CVector psi = ea.col(0) / std::sqrt(std::cosh(t));
            return DensityOp::pure(psi);
        }
        case ModelKind::Affine: {
            CMatrix m = rho0_->mat();
            for (int i = 0; i < d_; ++i) m += theta[i] * generators_[i].mat();
            try {
                return DensityOp(m);
            } catch (const model_error& e) {
                std::ostringstream os;
                os << "affine model leaves the state space at theta: " << e.what();
                throw model_error(os.str());
            }
        }
        case ModelKind::Tensor: {
            DensityOp one = base_->eval(theta);
            check_power_dim(one.dim(), copies_);
            CMatrix acc = one.mat();
            for (int i = 1; i < copies_; ++i) acc = kron(acc, one.mat());
            return DensityOp(std::move(acc));
        }
    }
    throw model_error("unreachable model kind");
}

DensityOp eval_model(const ParamModel& model, const RVector& theta) { return model.eval(theta); }

namespace {

CMatrix model_derivative(const ParamModel& model, const RVector& theta0, int i) {
    const double h = model.deriv_step();
    RVector e = RVector::Zero(theta0.size());
    e[i] = h;
    CMatrix d1 = (model.eval(theta0 + e).mat() - model.eval(theta0 - e).mat()) / (2.0 * h);
    e[i] = 0.5 * h;
    CMatrix d2 = (model.eval(theta0 + e).mat() - model.eval(theta0 - e).mat()) / h;
    CMatrix d = (4.0 * d2 - d1) / 3.0;
    const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
    if ((d - d.adjoint().eval()).cwiseAbs().maxCoeff() > 1e-7 * scale) {
        throw model_error("model derivative is not Hermitian; parametrization is invalid");
    }
    return 0.5 * (d + d.adjoint().eval());
}

} // namespace

std::vector<HermitianOp> sld(const ParamModel& model, const RVector& theta0) {
    require_d(model, theta0);
    const DensityOp rho = model.eval(theta0);
    const RVector& s = rho.eigenvalues();
    const CMatrix& u = rho.eigenbasis();
    const double thr = kRankRelTol * std::max(1.0, s.cwiseAbs().maxCoeff());

    std::vector<HermitianOp> out;
    out.reserve(model.d());
    for (int i = 0; i < model.d(); ++i) {
        CMatrix dr = model_derivative(model, theta0, i);
        CMatrix dru = u.adjoint() * dr * u;
        CMatrix lu = CMatrix::Zero(rho.dim(), rho.dim());
        for (int a = 0; a < rho.dim(); ++a) {
            for (int b = 0; b < rho.dim(); ++b) {
                const double den = s[a] + s[b];
                if (den > thr) lu(a, b) = 2.0 * dru(a, b) / den;
            }
        }
        CMatrix l = u * lu * u.adjoint();
        HermitianOp L(0.5 * (l + l.adjoint().eval()));
        const double resid =
            frob_norm(dr - 0.5 * (L.mat() * rho.mat() + rho.mat() * L.mat()));
        if (resid > 1e-7) {
            std::ostringstream os;
            os << "sld: defining-equation residual " << resid << " in direction " << i;
            throw numeric_error(os.str());
        }
        out.push_back(std::move(L));
    }
    return out;
}

CMatrix sld_gram(const DensityOp& rho, const std::vector<HermitianOp>& ops_a,
                 const std::vector<HermitianOp>& ops_b) {
    for (const auto& a : ops_a)
        if (a.dim() != rho.dim()) throw model_error("sld_gram: operator dimension mismatch");
    for (const auto& b : ops_b)
        if (b.dim() != rho.dim()) throw model_error("sld_gram: operator dimension mismatch");
    CMatrix g(ops_a.size(), ops_b.size());
    for (std::size_t i = 0; i < ops_a.size(); ++i) {
        for (std::size_t j = 0; j < ops_b.size(); ++j) {
            g(i, j) = (rho.mat() * ops_b[j].mat() * ops_a[i].mat()).trace();
        }
    }
    return g;
}

HermitianOp commutation_apply(const DensityOp& rho, const HermitianOp& x) {
    if (x.dim() != rho.dim()) throw model_error("commutation_apply: dimension mismatch");
    const RVector& s = rho.eigenvalues();
    const CMatrix& u = rho.eigenbasis();
    const double thr = kRankRelTol * std::max(1.0, s.cwiseAbs().maxCoeff());
    CMatrix xu = u.adjoint() * x.mat() * u;
    CMatrix du = CMatrix::Zero(rho.dim(), rho.dim());
    for (int a = 0; a < rho.dim(); ++a) {
        for (int b = 0; b < rho.dim(); ++b) {
            const double den = s[a] + s[b];
            if (den > thr) du(a, b) = Complex(0, 1) * (s[b] - s[a]) / den * xu(a, b);
        }
    }
    CMatrix d = u * du * u.adjoint();
    return HermitianOp(0.5 * (d + d.adjoint().eval()));
}

namespace {

double rho_ip(const DensityOp& rho, const HermitianOp& x, const HermitianOp& y) {
    return (rho.mat() * x.mat() * y.mat()).trace().real();
}

HermitianOp centered(const DensityOp& rho, const HermitianOp& x) {
    const double mean = (rho.mat() * x.mat()).trace().real();
    return HermitianOp(x.mat() - mean * CMatrix::Identity(x.dim(), x.dim()));
}

} // namespace

std::vector<HermitianOp> d_invariant_extension(const DensityOp& rho,
                                               const std::vector<HermitianOp>& slds,
                                               double tol) {
    std::vector<HermitianOp> basis;       // raw centered operators, in insertion order
    std::vector<HermitianOp> ortho;       // orthonormal bookkeeping copies
    const int max_r = rho.dim() * rho.dim() - 1;

    auto try_add = [&](const HermitianOp& raw) -> bool {
        HermitianOp c = centered(rho, raw);
        const double norm = std::sqrt(std::max(0.0, rho_ip(rho, c, c)));
        if (norm <= tol) return false; // zero element of L^2(rho)
        CMatrix res = c.mat();
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : ortho) {
                const double coef = (rho.mat() * HermitianOp(res).mat() * q.mat()).trace().real();
                res -= coef * q.mat();
            }
        }
        HermitianOp r(0.5 * (res + res.adjoint().eval()));
        const double rnorm = std::sqrt(std::max(0.0, rho_ip(rho, r, r)));
        if (rnorm <= tol * norm) return false;
        if (static_cast<int>(basis.size()) >= max_r) {
            throw numeric_error("d_invariant_extension: span exceeded dim^2 - 1");
        }
        basis.push_back(c);
        ortho.push_back(HermitianOp(r.mat() / rnorm));
        return true;
    };

    for (const auto& l : slds) try_add(l);

    std::deque<HermitianOp> queue(basis.begin(), basis.end());
    while (!queue.empty()) {
        HermitianOp b = queue.front();
        queue.pop_front();
        HermitianOp img = commutation_apply(rho, b);
        if (try_add(img)) queue.push_back(basis.back());
    }
    return basis;
}

std::pair<CMatrix, CMatrix> sigma_tau(const DensityOp& rho,
                                      const std::vector<HermitianOp>& d_basis,
                                      const std::vector<HermitianOp>& slds) {
    return {sld_gram(rho, d_basis, d_basis), sld_gram(rho, d_basis, slds)};
}

namespace {

// Closure basis of the 2-D family at |theta0| = r > 0. The tangent pair is
// completed by the centered operator
//   D3 = s3 - z(r) * s_perp - z(r) I,   s_perp = u2 s1 - u1 s2,  u = theta0/r,
// with z(r) = z0 sqrt(1-r^2), reproducing the published second-moment layout
// of this family.
std::vector<HermitianOp> qubit2d_closure_basis(const RVector& theta0, double z0,
                                               std::vector<HermitianOp> slds) {
    const double r = theta0.norm();
    const double z = z0 * std::sqrt(1.0 - r * r);
    const double u1 = theta0[0] / r;
    const double u2 = theta0[1] / r;
    CMatrix perp = u2 * pauli(1) - u1 * pauli(2);
    CMatrix d3 = pauli(3) - z * perp - z * CMatrix::Identity(2, 2);
    slds.push_back(HermitianOp(std::move(d3)));
    return slds;
}

} // namespace

GeometryReport geometry_report(const ParamModel& model, const RVector& theta0) {
    GeometryReport rep{theta0, model.eval(theta0), sld(model, theta0), {}, {}, {}, {}, {}};
    rep.J = sld_gram(rep.rho, rep.slds, rep.slds);
    rep.J_S = rep.J.real();
    if (model.kind() == ModelKind::Qubit2d && theta0.norm() > 1e-12 && model.z0() > 0.0) {
        rep.d_basis = qubit2d_closure_basis(theta0, model.z0(), rep.slds);
    } else {
        rep.d_basis = d_invariant_extension(rep.rho, rep.slds);
    }
    auto st = sigma_tau(rep.rho, rep.d_basis, rep.slds);
    rep.Sigma = std::move(st.first);
    rep.tau = std::move(st.second);
    return rep;
}

} // namespace qlanlab
