#include "qlanlab/gauss.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "qlanlab/rng.hpp"

namespace qlanlab {

namespace {

void check_gram(const CMatrix& j, const char* who) {
    if (j.rows() != j.cols()) throw model_error(std::string(who) + ": matrix must be square");
    const double scale = std::max(1.0, j.cwiseAbs().maxCoeff());
    if ((j - j.adjoint().eval()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw model_error(std::string(who) + ": matrix must be Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(j);
    if (es.eigenvalues()[0] < -1e-9 * scale) {
        std::ostringstream os;
        os << who << ": matrix must be PSD (min eigenvalue " << es.eigenvalues()[0] << ")";
        throw model_error(os.str());
    }
}

} // namespace

GaussianState::GaussianState(RVector mean, CMatrix second)
    : h(std::move(mean)), J(std::move(second)) {
    if (J.rows() != h.size()) throw model_error("GaussianState: dimension mismatch");
    check_gram(J, "GaussianState");
    J = 0.5 * (J + J.adjoint().eval());
}

GaussianShiftModel::GaussianShiftModel(RMatrix shift_map, CMatrix second)
    : tau(std::move(shift_map)), Sigma(std::move(second)) {
    if (Sigma.rows() != tau.rows()) throw model_error("GaussianShiftModel: dimension mismatch");
    check_gram(Sigma, "GaussianShiftModel");
    Sigma = 0.5 * (Sigma + Sigma.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(RMatrix(Sigma.real()));
    if (es.eigenvalues()[0] <= 0.0) {
        throw model_error("GaussianShiftModel: Re Sigma must be positive definite");
    }
    Eigen::JacobiSVD<RMatrix> svd(tau);
    if (svd.rank() < tau.cols()) {
        throw model_error("GaussianShiftModel: tau must have full column rank");
    }
}

Complex quasi_char(const GaussianState& state, const std::vector<CVector>& xis) {
    const CMatrix jt = state.J.transpose();
    Complex expo(0, 0);
    for (std::size_t t = 0; t < xis.size(); ++t) {
        const CVector& xi = xis[t];
        if (xi.size() != state.d()) throw model_error("quasi_char: xi dimension mismatch");
        Complex lin(0, 0);
        for (int i = 0; i < state.d(); ++i) lin += xi[i] * state.h[i];
        expo += Complex(0, 1) * lin - 0.5 * (xi.transpose() * jt * xi)(0, 0);
        for (std::size_t s = t + 1; s < xis.size(); ++s) {
            expo -= (xi.transpose() * jt * xis[s])(0, 0);
        }
    }
    return std::exp(expo);
}

GaussMoments gauss_moments(const GaussianState& state) {
    const int d = state.d();
    GaussMoments m{state.h, state.J};

    // Cross-check against numerical derivatives of the quasi-characteristic
    // function: phi(X_i) = -i d/de qc([e e_i]) and
    // phi(X_j X_i) = -d^2/(de df) qc([e e_j, f e_i]) at zero.
    const double step = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
        CVector ei = CVector::Zero(d);
        ei[i] = 1.0;
        const Complex plus = quasi_char(state, {CVector(step * ei)});
        const Complex minus = quasi_char(state, {CVector(-step * ei)});
        const Complex deriv = (plus - minus) / (2.0 * step);
        worst = std::max(worst, std::abs(Complex(0, -1) * deriv - Complex(state.h[i], 0)));
    }
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            CVector ej = CVector::Zero(d), ei = CVector::Zero(d);
            ej[j] = 1.0;
            ei[i] = 1.0;
            auto qc2 = [&](double a, double b) {
                return quasi_char(state, {CVector(a * ej), CVector(b * ei)});
            };
            const Complex dd = (qc2(step, step) - qc2(step, -step) - qc2(-step, step) +
                                qc2(-step, -step)) /
                               (4.0 * step * step);
            const Complex second = -dd - Complex(state.h[j] * state.h[i], 0);
            worst = std::max(worst, std::abs(second - state.J(i, j)));
        }
    }
    if (worst > 1e-4) {
        std::ostringstream os;
        os << "gauss_moments: quasi-characteristic derivative mismatch " << worst;
        throw numeric_error(os.str());
    }
    return m;
}

GaussianSld gauss_sld(const GaussianShiftModel& model, const RVector& h) {
    if (h.size() != model.d()) throw model_error("gauss_sld: h dimension mismatch");
    const RMatrix re = model.Sigma.real();
    GaussianSld out;
    out.coeff = re.ldlt().solve(model.tau);
    out.shift = model.tau * h;

    // Moment-algebra consistency. With Lt_k = X_k - shift_k I:
    //   phi(Lt_j Lt_i) = Sigma_ij          (second moments of N(tau h, Sigma))
    //   Re phi(L_j Lt_i) = tau_ij          (L_j = sum_l coeff(l,j) Lt_l)
    GaussianState st(out.shift, model.Sigma);
    const CMatrix second = gauss_moments(st).second;
    const double sig_resid = (second - model.Sigma).cwiseAbs().maxCoeff();
    const CMatrix mixed = second * out.coeff.cast<Complex>();
    const double tau_resid = (mixed.real() - model.tau).cwiseAbs().maxCoeff();
    if (sig_resid > 1e-8 || tau_resid > 1e-8) {
        std::ostringstream os;
        os << "gauss_sld: moment identities violated (Sigma residual " << sig_resid
           << ", tau residual " << tau_resid << ")";
        throw numeric_error(os.str());
    }
    return out;
}

AncillaSystem ancilla_from_gram(const CMatrix& J) {
    check_gram(J, "ancilla_from_gram");
    const int d = static_cast<int>(J.rows());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (J + J.adjoint().eval()));
    RVector sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    CMatrix root = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().adjoint();

    CVector ground = CVector::Zero(d + 1);
    ground[0] = 1.0;
    AncillaSystem out{DensityOp::pure(ground), {}};
    out.B.reserve(d);
    for (int i = 0; i < d; ++i) {
        CVector li = CVector::Zero(d + 1);
        for (int k = 0; k < d; ++k) li[k + 1] = root(i, k);
        CMatrix b = li * ground.adjoint() + ground * li.adjoint();
        out.B.push_back(HermitianOp(std::move(b)));
    }
    return out;
}

std::vector<HermitianOp> commuting_completion(const CVector& psi,
                                              const std::vector<HermitianOp>& A,
                                              std::uint64_t seed) {
    const int n = static_cast<int>(psi.size());
    if (std::abs(psi.norm() - 1.0) > 1e-10) {
        throw model_error("commuting_completion: psi must be a unit vector");
    }
    const int d = static_cast<int>(A.size());
    std::vector<CVector> ls(d);
    for (int i = 0; i < d; ++i) {
        if (A[i].dim() != n) throw model_error("commuting_completion: dimension mismatch");
        ls[i] = A[i].mat() * psi;
    }
    // Precondition: all Gram entries <l_j | l_i> and <psi | l_i> must be real.
    for (int i = 0; i < d; ++i) {
        if (std::abs(std::imag(psi.dot(ls[i]))) > 1e-9) {
            throw numeric_error("commuting_completion: <psi|A_i|psi> is not real");
        }
        for (int j = 0; j < d; ++j) {
            if (std::abs(std::imag(ls[j].dot(ls[i]))) > 1e-9) {
                throw numeric_error("commuting_completion: Gram matrix is not real");
            }
        }
    }

    // Real-coefficient Gram-Schmidt over {psi, l_1, ..., l_d}: real pairwise
    // inner products make the coefficients real, so psi and every l_i have
    // real coordinates in the resulting orthonormal vectors.
    std::vector<CVector> vs;
    auto add_real_span = [&](const CVector& w) {
        CVector res = w;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& v : vs) res -= v.dot(res).real() * v;
        }
        if (res.norm() > 1e-10) vs.push_back(res / res.norm());
    };
    add_real_span(psi);
    for (const auto& l : ls) add_real_span(l);
    // Complete to a full orthonormal basis; added directions carry zero
    // components of psi and l_i, so realness is preserved.
    for (int k = 0; k < n && static_cast<int>(vs.size()) < n; ++k) {
        CVector e = CVector::Zero(n);
        e[k] = 1.0;
        CVector res = e;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& v : vs) res -= v.dot(res) * v;
        }
        if (res.norm() > 1e-8) vs.push_back(res / res.norm());
    }
    if (static_cast<int>(vs.size()) != n) {
        throw numeric_error("commuting_completion: failed to complete the basis");
    }

    const double floor = 1e-3;
    Rng rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        RMatrix gauss(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) gauss(i, j) = rng.normal();
        Eigen::HouseholderQR<RMatrix> qr(gauss);
        RMatrix q = qr.householderQ();

        std::vector<CVector> es(n, CVector::Zero(n));
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < n; ++j) es[k] += q(j, k) * vs[j];
        }
        bool ok = true;
        for (int k = 0; k < n && ok; ++k) {
            if (std::abs(es[k].dot(psi).real()) < floor) ok = false;
        }
        if (!ok) continue;

        std::vector<HermitianOp> out;
        out.reserve(d);
        for (int i = 0; i < d; ++i) {
            CMatrix atilde = CMatrix::Zero(n, n);
            for (int k = 0; k < n; ++k) {
                const double num = es[k].dot(ls[i]).real();
                const double den = es[k].dot(psi).real();
                atilde += (num / den) * (es[k] * es[k].adjoint());
            }
            CMatrix kmat = atilde - A[i].mat();
            out.push_back(HermitianOp(0.5 * (kmat + kmat.adjoint().eval())));
        }
        return out;
    }
    throw numeric_error(
        "commuting_completion: no basis with all overlaps above the floor after 64 tries");
}

} // namespace qlanlab
