#include "qlanlab/herm.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace qlanlab {

HermitianOp::HermitianOp(CMatrix m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw model_error("HermitianOp: matrix must be square and non-empty");
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double dev = (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
    if (dev > kHermTol * scale) {
        std::ostringstream os;
        os << "HermitianOp: matrix deviates from Hermitian by " << dev
           << " (tolerance " << kHermTol * scale << ")";
        throw model_error(os.str());
    }
    m_ = 0.5 * (m + m.adjoint().eval());
}

HermitianOp HermitianOp::zero(int dim) { return HermitianOp(CMatrix::Zero(dim, dim)); }

HermitianOp HermitianOp::identity(int dim) { return HermitianOp(CMatrix::Identity(dim, dim)); }

Eigh eigh(const HermitianOp& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.mat());
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eigh: eigensolver failed to converge on a " << h.dim() << "x" << h.dim()
           << " matrix, max |entry| = " << h.mat().cwiseAbs().maxCoeff();
        throw numeric_error(os.str());
    }
    return Eigh{solver.eigenvalues(), solver.eigenvectors()};
}

HermitianOp func_calc(const HermitianOp& h, const std::function<double(double)>& f,
                      const std::string& fname) {
    const Eigh e = eigh(h);
    RVector fv(e.eigenvalues.size());
    for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
        const double y = f(e.eigenvalues[i]);
        if (!std::isfinite(y)) {
            std::ostringstream os;
            os << "func_calc: " << fname << " undefined at eigenvalue " << e.eigenvalues[i];
            throw numeric_error(os.str());
        }
        fv[i] = y;
    }
    CMatrix out = e.eigenvectors * fv.asDiagonal() * e.eigenvectors.adjoint();
    return HermitianOp(0.5 * (out + out.adjoint().eval()));
}

namespace {

// Power with negative eigenvalues clipped to zero; used for square roots of
// operators that are PSD up to floating error.
HermitianOp psd_pow(const HermitianOp& h, double p) {
    const Eigh e = eigh(h);
    RVector fv(e.eigenvalues.size());
    for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
        fv[i] = e.eigenvalues[i] > 0.0 ? std::pow(e.eigenvalues[i], p) : 0.0;
    }
    CMatrix out = e.eigenvectors * fv.asDiagonal() * e.eigenvectors.adjoint();
    return HermitianOp(0.5 * (out + out.adjoint().eval()));
}

} // namespace

HermitianOp geometric_mean(const HermitianOp& a, const HermitianOp& b) {
    const Eigh ea = eigh(a);
    const double scale = std::max(std::abs(ea.eigenvalues[0]),
                                  std::abs(ea.eigenvalues[ea.eigenvalues.size() - 1]));
    if (ea.eigenvalues[0] <= kRankRelTol * std::max(1.0, scale)) {
        throw numeric_error("geometric_mean: first argument is singular or indefinite");
    }
    RVector sq = ea.eigenvalues.cwiseSqrt();
    CMatrix a_half = ea.eigenvectors * sq.asDiagonal() * ea.eigenvectors.adjoint();
    CMatrix a_mhalf = ea.eigenvectors * sq.cwiseInverse().asDiagonal() * ea.eigenvectors.adjoint();
    HermitianOp mid(a_mhalf * b.mat() * a_mhalf.adjoint().eval());
    HermitianOp mid_sqrt = psd_pow(mid, 0.5);
    CMatrix out = a_half * mid_sqrt.mat() * a_half.adjoint().eval();
    return HermitianOp(0.5 * (out + out.adjoint().eval()));
}

double trace_abs(const HermitianOp& a) {
    const Eigh e = eigh(a);
    return e.eigenvalues.cwiseAbs().sum();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace {
std::atomic<int> g_dim_cap{0}; // 0 = uninitialized
}

int dim_cap() {
    int cap = g_dim_cap.load();
    if (cap == 0) {
        cap = 4096;
        if (const char* env = std::getenv("QLANLAB_MEMCAP_DIM")) {
            const int v = std::atoi(env);
            if (v > 0) cap = v;
        }
        g_dim_cap.store(cap);
    }
    return cap;
}

void set_dim_cap(int cap) {
    if (cap <= 0) throw usage_error("dimension cap must be positive");
    g_dim_cap.store(cap);
}

long long check_power_dim(int dim, int n) {
    long long total = 1;
    for (int i = 0; i < n; ++i) {
        total *= dim;
        if (total > dim_cap()) {
            std::ostringstream os;
            os << "tensor product requires dimension ";
            double req = std::pow(static_cast<double>(dim), n);
            os << req << " exceeding cap " << dim_cap();
            throw resource_error(os.str());
        }
    }
    return total;
}

HermitianOp site_embed(const HermitianOp& a, int n, int k) {
    if (k < 1 || k > n) throw model_error("site_embed: site index out of range");
    check_power_dim(a.dim(), n);
    CMatrix out = CMatrix::Identity(1, 1);
    for (int site = 1; site <= n; ++site) {
        if (site == k) {
            out = kron(out, a.mat());
        } else {
            out = kron(out, CMatrix::Identity(a.dim(), a.dim()));
        }
    }
    return HermitianOp(std::move(out));
}

int numeric_rank(const RVector& eigenvalues) {
    const double scale = eigenvalues.cwiseAbs().maxCoeff();
    const double thr = kRankRelTol * std::max(1.0, scale);
    int rank = 0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (std::abs(eigenvalues[i]) > thr) ++rank;
    }
    return rank;
}

double frob_norm(const CMatrix& m) { return m.norm(); }

} // namespace qlanlab
