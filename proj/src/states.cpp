#include "qlanlab/states.hpp"

#include <cmath>
#include <sstream>

namespace qlanlab {

namespace {
constexpr double kTraceTol = 1e-10;
constexpr double kNegEigTol = 1e-10;
}

DensityOp::DensityOp(HermitianOp h) : op_(std::move(h)) {
    const double tr = op_.mat().trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
        std::ostringstream os;
        os << "DensityOp: trace " << tr << " deviates from 1 beyond " << kTraceTol;
        throw model_error(os.str());
    }
    Eigh e = eigh(op_);
    if (e.eigenvalues[0] < -kNegEigTol) {
        std::ostringstream os;
        os << "DensityOp: negative eigenvalue " << e.eigenvalues[0];
        throw model_error(os.str());
    }
    bool clipped = false;
    for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
        if (e.eigenvalues[i] < 0.0) {
            e.eigenvalues[i] = 0.0;
            clipped = true;
        }
    }
    if (clipped) {
        CMatrix m = e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
        op_ = HermitianOp(0.5 * (m + m.adjoint().eval()));
    }
    evals_ = std::move(e.eigenvalues);
    evecs_ = std::move(e.eigenvectors);
    rank_ = numeric_rank(evals_);
}

DensityOp DensityOp::maximally_mixed(int dim) {
    return DensityOp(CMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim)));
}

DensityOp DensityOp::pure(const CVector& psi) {
    const double n = psi.norm();
    if (n == 0.0) throw model_error("DensityOp::pure: zero vector");
    CVector v = psi / n;
    return DensityOp(CMatrix(v * v.adjoint()));
}

namespace {

// Columns of the eigenbasis spanning the support (eigenvalues above the rank
// threshold), ordered by decreasing eigenvalue.
CMatrix support_basis(const DensityOp& rho) {
    const RVector& w = rho.eigenvalues();
    const double thr = kRankRelTol * std::max(1.0, w.cwiseAbs().maxCoeff());
    CMatrix cols(rho.dim(), rho.rank());
    int c = 0;
    for (Eigen::Index i = w.size() - 1; i >= 0; --i) {
        if (std::abs(w[i]) > thr) cols.col(c++) = rho.eigenbasis().col(i);
    }
    return cols;
}

double excision_min_eig(const DensityOp& rho, const DensityOp& sigma) {
    const CMatrix p = support_basis(rho);
    HermitianOp exc(CMatrix(p.adjoint() * sigma.mat() * p));
    return eigh(exc).eigenvalues[0];
}

} // namespace

bool mutually_abs_continuous(const DensityOp& rho, const DensityOp& sigma, double tol) {
    if (rho.dim() != sigma.dim()) {
        throw model_error("mutually_abs_continuous: dimension mismatch");
    }
    if (rho.rank() != sigma.rank()) return false;
    return excision_min_eig(rho, sigma) > tol;
}

namespace {

HermitianOp qllr_faithful(const DensityOp& rho, const DensityOp& sigma) {
    const Eigh er = eigh(rho.op());
    RVector sq = er.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    CMatrix r_half = er.eigenvectors * sq.asDiagonal() * er.eigenvectors.adjoint();
    CMatrix r_mhalf = er.eigenvectors * sq.cwiseInverse().asDiagonal() * er.eigenvectors.adjoint();
    HermitianOp inner(CMatrix(r_half * sigma.mat() * r_half.adjoint().eval()));
    const Eigh ei = eigh(inner);
    RVector isq = ei.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    CMatrix inner_sqrt = ei.eigenvectors * isq.asDiagonal() * ei.eigenvectors.adjoint();
    HermitianOp root(CMatrix(r_mhalf * inner_sqrt * r_mhalf.adjoint().eval()));
    return func_calc(root, [](double x) { return 2.0 * std::log(x); }, "2*log");
}

// Support/kernel block construction. In the eigenbasis of rho with the
// support block first,
//   e^{L/2} = E^dagger diag(rho0^{-1} # sigma0, gamma I) E,
//   E = [[I, sigma0^{-1} alpha], [0, I]],
// which maps back to the original basis.
HermitianOp qllr_block(const DensityOp& rho, const DensityOp& sigma, double gamma) {
    const int n = rho.dim();
    const int k = rho.rank();
    // Basis: support columns (descending eigenvalue) then kernel columns.
    CMatrix u(n, n);
    {
        const RVector& w = rho.eigenvalues();
        const double thr = kRankRelTol * std::max(1.0, w.cwiseAbs().maxCoeff());
        int c = 0;
        for (Eigen::Index i = w.size() - 1; i >= 0; --i) {
            if (std::abs(w[i]) > thr) u.col(c++) = rho.eigenbasis().col(i);
        }
        for (Eigen::Index i = w.size() - 1; i >= 0; --i) {
            if (std::abs(w[i]) <= thr) u.col(c++) = rho.eigenbasis().col(i);
        }
    }
    CMatrix rho_u = u.adjoint() * rho.mat() * u;
    CMatrix sig_u = u.adjoint() * sigma.mat() * u;

    HermitianOp rho0(CMatrix(rho_u.topLeftCorner(k, k)));
    HermitianOp sigma0(CMatrix(sig_u.topLeftCorner(k, k)));
    CMatrix alpha = sig_u.topRightCorner(k, n - k);

    HermitianOp rho0_inv = func_calc(rho0, [](double x) { return 1.0 / x; }, "inverse");
    HermitianOp gm = geometric_mean(rho0_inv, sigma0);

    CMatrix e_mat = CMatrix::Identity(n, n);
    e_mat.topRightCorner(k, n - k) = sigma0.mat().partialPivLu().solve(alpha);

    CMatrix d = gamma * CMatrix::Identity(n, n);
    d.topLeftCorner(k, k) = gm.mat();

    HermitianOp root(CMatrix(e_mat.adjoint() * d * e_mat));
    HermitianOp l_u = func_calc(root, [](double x) { return 2.0 * std::log(x); }, "2*log");
    CMatrix back = u * l_u.mat() * u.adjoint();
    return HermitianOp(0.5 * (back + back.adjoint().eval()));
}

} // namespace

LogLikelihoodRatio qllr(const DensityOp& rho, const DensityOp& sigma) {
    if (rho.dim() != sigma.dim()) throw model_error("qllr: dimension mismatch");
    if (rho.rank() != sigma.rank()) {
        std::ostringstream os;
        os << "qllr: states are not mutually absolutely continuous: rank " << rho.rank()
           << " != rank " << sigma.rank();
        throw model_error(os.str());
    }
    const double exc = excision_min_eig(rho, sigma);
    if (exc <= 1e-12) {
        std::ostringstream os;
        os << "qllr: states are not mutually absolutely continuous: excision of sigma onto "
              "supp(rho) has minimum eigenvalue "
           << exc;
        throw model_error(os.str());
    }
    HermitianOp L = rho.faithful() ? qllr_faithful(rho, sigma) : qllr_block(rho, sigma, 1.0);
    return LogLikelihoodRatio{std::move(L), rho, sigma};
}

namespace detail {
HermitianOp qllr_with_gamma(const DensityOp& rho, const DensityOp& sigma, double gamma) {
    if (gamma <= 0.0) throw model_error("qllr_with_gamma: gamma must be positive");
    return qllr_block(rho, sigma, gamma);
}
} // namespace detail

double fidelity(const DensityOp& rho, const DensityOp& sigma) {
    if (rho.dim() != sigma.dim()) throw model_error("fidelity: dimension mismatch");
    const Eigh er = eigh(rho.op());
    RVector sq = er.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    CMatrix r_half = er.eigenvectors * sq.asDiagonal() * er.eigenvectors.adjoint();
    HermitianOp inner(CMatrix(r_half * sigma.mat() * r_half.adjoint().eval()));
    const Eigh ei = eigh(inner);
    double f = 0.0;
    for (Eigen::Index i = 0; i < ei.eigenvalues.size(); ++i) {
        f += std::sqrt(std::max(0.0, ei.eigenvalues[i]));
    }
    return std::min(1.0, std::max(0.0, f));
}

} // namespace qlanlab
