#include "qlanlab/bounds.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "qlanlab/nelder_mead.hpp"
#include "qlanlab/rng.hpp"

namespace qlanlab {

namespace {

RMatrix sym_sqrt(const RMatrix& g, bool invert) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(g);
    RVector v = es.eigenvalues();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = invert ? 1.0 / std::sqrt(v[i]) : std::sqrt(v[i]);
    }
    return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().transpose();
}

/// Tr |M| for the nearly antisymmetric real matrix M via the Hermitian
/// eigendecomposition of i*M, together with |M| itself.
RMatrix abs_antisym(const RMatrix& m, double* trace_out) {
    RMatrix a = 0.5 * (m - m.transpose()); // enforce exact antisymmetry
    CMatrix h = Complex(0, 1) * a.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    RVector av = es.eigenvalues().cwiseAbs();
    if (trace_out) *trace_out = av.sum();
    CMatrix abs_h = es.eigenvectors() * av.asDiagonal() * es.eigenvectors().adjoint();
    return abs_h.real();
}

} // namespace

WeightMatrix::WeightMatrix(RMatrix g) {
    if (g.rows() != g.cols() || g.rows() == 0) {
        throw model_error("WeightMatrix: must be square");
    }
    if ((g - g.transpose().eval()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, g.cwiseAbs().maxCoeff())) {
        throw model_error("WeightMatrix: must be symmetric");
    }
    g_ = 0.5 * (g + g.transpose().eval());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(g_);
    if (es.eigenvalues()[0] <= 0.0) {
        std::ostringstream os;
        os << "WeightMatrix: must be positive definite (min eigenvalue "
           << es.eigenvalues()[0] << ")";
        throw model_error(os.str());
    }
    sqrt_ = sym_sqrt(g_, false);
    inv_sqrt_ = sym_sqrt(g_, true);
}

WeightMatrix WeightMatrix::identity(int d) { return WeightMatrix(RMatrix::Identity(d, d)); }

VhatSplit split_vhat(const CMatrix& Z, const WeightMatrix& G) {
    VhatSplit out;
    out.V_tilde = Z.real();
    RMatrix m = G.sqrt() * Z.imag() * G.sqrt();
    RMatrix abs_m = abs_antisym(m, nullptr);
    out.V_hat = G.inv_sqrt() * abs_m * G.inv_sqrt();
    out.V_hat = 0.5 * (out.V_hat + out.V_hat.transpose().eval());
    out.Z_hat = out.V_hat.cast<Complex>() - Complex(0, 1) * Z.imag().cast<Complex>();
    return out;
}

namespace {

double objective_value(const CMatrix& Z, const WeightMatrix& G) {
    double tn = 0.0;
    RMatrix m = G.sqrt() * Z.imag() * G.sqrt();
    abs_antisym(m, &tn);
    return (G.mat() * Z.real()).trace() + tn;
}

} // namespace

BoundResult holevo_bound(const CMatrix& Sigma, const CMatrix& tau, const WeightMatrix& G,
                         const HolevoOptions& opts) {
    const int r = static_cast<int>(Sigma.rows());
    const int d = static_cast<int>(tau.cols());
    if (Sigma.cols() != r || tau.rows() != r) {
        throw model_error("holevo_bound: Sigma must be r x r and tau r x d");
    }
    if (G.d() != d) throw model_error("holevo_bound: weight dimension mismatch");
    if (r < d) throw numeric_error("holevo_bound: fewer span directions than parameters");
    {
        Eigen::SelfAdjointEigenSolver<RMatrix> es(RMatrix(Sigma.real()));
        if (es.eigenvalues()[0] <= 0.0) {
            throw numeric_error("holevo_bound: Re Sigma is not positive definite");
        }
    }

    const RMatrix A = tau.real();
    Eigen::JacobiSVD<RMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeThinV);
    const double smin = svd.singularValues()[d - 1];
    if (smin <= 1e-12 * std::max(1.0, svd.singularValues()[0])) {
        throw numeric_error("holevo_bound: Re tau is rank deficient");
    }
    const RMatrix F0 = A * (A.transpose() * A).ldlt().solve(RMatrix::Identity(d, d));

    auto make_result = [&](const RMatrix& F, int restarts_used, bool converged) {
        BoundResult res;
        res.F_star = F;
        res.Z = F.transpose().cast<Complex>() * Sigma * F.cast<Complex>();
        res.Z = 0.5 * (res.Z + res.Z.adjoint().eval());
        VhatSplit split = split_vhat(res.Z, G);
        res.V_tilde = std::move(split.V_tilde);
        res.V_hat = std::move(split.V_hat);
        res.Z_hat = std::move(split.Z_hat);
        res.value = (G.mat() * (res.V_tilde + res.V_hat)).trace();
        res.restarts_used = restarts_used;
        res.converged = converged;
        return res;
    };

    if (r == d) {
        return make_result(F0, 0, true);
    }

    const RMatrix N = svd.matrixU().rightCols(r - d); // orthonormal null space of tA
    const int k = (r - d) * d;

    auto objective = [&](const Eigen::VectorXd& kvec) {
        RMatrix K = Eigen::Map<const RMatrix>(kvec.data(), r - d, d);
        RMatrix F = F0 + N * K;
        CMatrix Z = F.transpose().cast<Complex>() * Sigma * F.cast<Complex>();
        return objective_value(Z, G);
    };

    struct Candidate {
        double value;
        double knorm;
        Eigen::VectorXd k;
    };
    std::vector<Candidate> cands;
    Rng rng(opts.seed);
    for (int s = 0; s <= opts.restarts; ++s) {
        Eigen::VectorXd start = Eigen::VectorXd::Zero(k);
        if (s > 0) {
            for (int i = 0; i < k; ++i) start[i] = rng.normal();
        }
        NmResult nm = nelder_mead(objective, start, 0.5, opts.per_restart_fatol, 1e-10,
                                  opts.max_evals_per_restart);
        // polish with a tighter simplex around the found point
        nm = nelder_mead(objective, nm.x, 1e-4, opts.per_restart_fatol, 1e-11,
                         opts.max_evals_per_restart);
        cands.push_back({nm.fval, nm.x.norm(), nm.x});
    }

    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.knorm < b.knorm;
    });
    const double best = cands.front().value;
    const double band = opts.agree_rel_tol * std::max(1.0, std::abs(best));
    int agreeing = 0;
    const Candidate* pick = &cands.front();
    for (const auto& c : cands) {
        if (c.value <= best + band) {
            ++agreeing;
            if (c.knorm < pick->knorm) pick = &c;
        }
    }
    RMatrix K = Eigen::Map<const RMatrix>(pick->k.data(), r - d, d);
    return make_result(F0 + N * K, static_cast<int>(cands.size()), agreeing >= 2);
}

double holevo_closed_dinv(const CMatrix& J, const WeightMatrix& G) {
    const int d = static_cast<int>(J.rows());
    if (J.cols() != d || G.d() != d) throw model_error("holevo_closed_dinv: dimension mismatch");
    RMatrix re = J.real();
    Eigen::SelfAdjointEigenSolver<RMatrix> es(re);
    if (es.eigenvalues()[0] <= 1e-14 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff())) {
        throw numeric_error("holevo_closed_dinv: Re J is singular");
    }
    RMatrix re_inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                     es.eigenvectors().transpose();
    CMatrix k = re_inv.cast<Complex>() * J * re_inv.cast<Complex>();
    double tn = 0.0;
    abs_antisym(RMatrix(G.sqrt() * k.imag() * G.sqrt()), &tn);
    return (G.mat() * k.real()).trace() + tn;
}

double hgm_nagaoka_bound(const RMatrix& J_S, const WeightMatrix& G) {
    const int d = static_cast<int>(J_S.rows());
    if (J_S.cols() != d || G.d() != d) throw model_error("hgm_nagaoka_bound: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<RMatrix> es(RMatrix(0.5 * (J_S + J_S.transpose())));
    if (es.eigenvalues()[0] <= 0.0) {
        throw numeric_error("hgm_nagaoka_bound: J_S must be positive definite");
    }
    RMatrix inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                  es.eigenvectors().transpose();
    RMatrix w = G.sqrt() * inv * G.sqrt();
    Eigen::SelfAdjointEigenSolver<RMatrix> ew(RMatrix(0.5 * (w + w.transpose())));
    double root_trace = 0.0;
    for (Eigen::Index i = 0; i < ew.eigenvalues().size(); ++i) {
        root_trace += std::sqrt(std::max(0.0, ew.eigenvalues()[i]));
    }
    return root_trace * root_trace;
}

} // namespace qlanlab
