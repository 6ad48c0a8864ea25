#include "qlanlab/asymp.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

#include "qlanlab/rng.hpp"

namespace qlanlab {

void LatticeConfig::validate() const {
    if (m < 1) throw model_error("LatticeConfig: m must be >= 1");
    if (ell <= 0.0) throw model_error("LatticeConfig: ell must be positive");
    if (q <= 0.0) throw model_error("LatticeConfig: q must be positive");
    if (!(p > 0.0 && p < ell)) throw model_error("LatticeConfig: need 0 < p < ell");
}

HermitianOp collective_observable(const HermitianOp& a, int n) {
    if (n < 1) throw model_error("collective_observable: n must be >= 1");
    check_power_dim(a.dim(), n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    HermitianOp acc = site_embed(a, n, 1);
    for (int k = 2; k <= n; ++k) acc = acc + site_embed(a, n, k);
    return acc * scale;
}

Complex iid_quasi_char(const DensityOp& rho, const std::vector<HermitianOp>& a, double n,
                       const std::vector<CVector>& xis) {
    if (n < 1.0) throw model_error("iid_quasi_char: n must be >= 1");
    for (const auto& op : a) {
        const double mean = (rho.mat() * op.mat()).trace().real();
        if (std::abs(mean) > 1e-10) {
            std::ostringstream os;
            os << "iid_quasi_char: observable not centered (Tr rho A = " << mean << ")";
            throw model_error(os.str());
        }
    }
    const int dim = rho.dim();
    CMatrix prod = CMatrix::Identity(dim, dim);
    const Complex is = Complex(0, 1) / std::sqrt(n);
    for (const auto& xi : xis) {
        if (xi.size() != static_cast<Eigen::Index>(a.size())) {
            throw model_error("iid_quasi_char: xi dimension mismatch");
        }
        CMatrix gen = CMatrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < xi.size(); ++i) gen += xi[i] * a[i].mat();
        prod = prod * (is * gen).exp().eval();
    }
    const Complex w = (rho.mat() * prod).trace();
    return std::pow(w, n);
}

CltReport clt_convergence_report(const DensityOp& rho, const std::vector<HermitianOp>& a,
                                 const std::vector<std::vector<CVector>>& xis_grid,
                                 const std::vector<double>& n_schedule) {
    const CMatrix j = sld_gram(rho, a, a);
    const GaussianState limit(RVector::Zero(a.size()), j);
    CltReport rep;
    for (double n : n_schedule) {
        double sup = 0.0;
        for (const auto& xis : xis_grid) {
            sup = std::max(sup, std::abs(iid_quasi_char(rho, a, n, xis) - quasi_char(limit, xis)));
        }
        rep.rows.push_back({n, sup});
    }
    rep.decreasing_trend = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (rep.rows[i].sup_error > 1.1 * rep.rows[i - 1].sup_error) rep.decreasing_trend = false;
    }
    return rep;
}

std::vector<std::vector<CVector>> default_xi_grid(int d) {
    auto vec = [d](std::initializer_list<double> entries) {
        CVector v = CVector::Zero(d);
        int i = 0;
        for (double e : entries) {
            if (i < d) v[i] = e;
            ++i;
        }
        return v;
    };
    std::vector<std::vector<CVector>> grid;
    if (d == 1) {
        grid.push_back({vec({0.5})});
        grid.push_back({vec({1.0})});
        grid.push_back({vec({0.5}), vec({0.5})});
        return grid;
    }
    grid.push_back({vec({0.6, 0.0})});
    grid.push_back({vec({0.0, 0.6})});
    grid.push_back({vec({0.5, 0.5})});
    grid.push_back({vec({0.8, 0.0})});
    grid.push_back({vec({0.3, -0.6})});
    grid.push_back({vec({0.5, 0.0}), vec({0.0, 0.5})});
    return grid;
}

QlanResidual qlan_residual(const ParamModel& model, const RVector& theta0, const RVector& h,
                           double n) {
    if (h.size() != model.d()) throw model_error("qlan_residual: h dimension mismatch");
    const double root = std::sqrt(n);
    const DensityOp rho = model.eval(theta0);
    const DensityOp sig = model.eval(theta0 + h / root);
    const HermitianOp L = qllr(rho, sig).L;
    const std::vector<HermitianOp> slds_v = sld(model, theta0);
    const CMatrix j = sld_gram(rho, slds_v, slds_v);

    CMatrix drift = CMatrix::Zero(model.dim(), model.dim());
    for (int i = 0; i < model.d(); ++i) drift += h[i] * slds_v[i].mat();
    double jhh = 0.0;
    for (int i = 0; i < model.d(); ++i)
        for (int k = 0; k < model.d(); ++k) jhh += (j(i, k) * h[i] * h[k]).real();

    CMatrix pn = root * (L.mat() - drift / root +
                         (jhh / (2.0 * n)) * CMatrix::Identity(model.dim(), model.dim()));
    HermitianOp p(0.5 * (pn + pn.adjoint().eval()));
    const Eigh e = eigh(p);
    QlanResidual out;
    out.p_norm = e.eigenvalues.cwiseAbs().maxCoeff();
    out.sqrtn_trace = root * (rho.mat() * p.mat()).trace().real();
    return out;
}

namespace {

// g_s(t) = (q/2pi)^{1/4} exp(-q (t-s)^2 / 4)
double kernel_g(double q, double s, double t) {
    return std::pow(q / (2.0 * M_PI), 0.25) * std::exp(-0.25 * q * (t - s) * (t - s));
}

std::vector<double> lattice_axis(const LatticeConfig& cfg) {
    std::vector<double> s;
    s.reserve(2 * cfg.m);
    const double step = cfg.ell / cfg.m;
    for (int j = -cfg.m; j < cfg.m; ++j) s.push_back(step * (j + 0.5));
    return s;
}

} // namespace

Povm lattice_povm(const std::vector<HermitianOp>& x, const LatticeConfig& cfg) {
    cfg.validate();
    const int d = static_cast<int>(x.size());
    if (d == 0) throw model_error("lattice_povm: need at least one observable");
    const int dim = x.front().dim();
    for (const auto& op : x) {
        if (op.dim() != dim) throw model_error("lattice_povm: observable dimension mismatch");
    }
    const std::vector<double> axis = lattice_axis(cfg);
    const long long n_axis = static_cast<long long>(axis.size());
    long long count = 1;
    for (int i = 0; i < d; ++i) {
        count *= n_axis;
        if (count * static_cast<long long>(dim) * dim > (1LL << 24)) {
            std::ostringstream os;
            os << "lattice_povm: " << count << "+ elements of dimension " << dim
               << " exceed the compute budget";
            throw resource_error(os.str());
        }
    }

    // Per-axis kernel factors g_s(X_i), via one eigendecomposition per axis.
    std::vector<std::vector<CMatrix>> factors(d);
    for (int i = 0; i < d; ++i) {
        const Eigh e = eigh(x[i]);
        factors[i].reserve(axis.size());
        for (double s : axis) {
            RVector fv(e.eigenvalues.size());
            for (Eigen::Index k = 0; k < e.eigenvalues.size(); ++k) {
                fv[k] = kernel_g(cfg.q, s, e.eigenvalues[k]);
            }
            factors[i].push_back(e.eigenvectors * fv.asDiagonal() * e.eigenvectors.adjoint());
        }
    }

    // Enumerate lattice points, building f = C*C with C the ascending-axis
    // kernel product; this order makes every element PSD.
    std::vector<CMatrix> f_list(count);
    std::vector<RVector> omegas(count);
    CMatrix t_sum = CMatrix::Zero(dim, dim);
    std::vector<int> idx(d, 0);
    for (long long flat = 0; flat < count; ++flat) {
        CMatrix c = factors[0][idx[0]];
        RVector omega(d);
        omega[0] = axis[idx[0]];
        for (int i = 1; i < d; ++i) {
            c = c * factors[i][idx[i]];
            omega[i] = axis[idx[i]];
        }
        f_list[flat] = c.adjoint() * c;
        omegas[flat] = omega;
        t_sum += f_list[flat];
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[i] < n_axis) break;
            idx[i] = 0;
        }
    }

    HermitianOp t_op(0.5 * (t_sum + t_sum.adjoint().eval()));
    const Eigh et = eigh(t_op);
    RVector rinv(et.eigenvalues.size());
    for (Eigen::Index k = 0; k < et.eigenvalues.size(); ++k) {
        rinv[k] = 1.0 / std::sqrt(std::max(0.0, et.eigenvalues[k]) + 1.0);
    }
    const CMatrix r = et.eigenvectors * rinv.asDiagonal() * et.eigenvectors.adjoint();

    const double c_floor = 1.0 / static_cast<double>(count);
    const CMatrix id = CMatrix::Identity(dim, dim);

    Povm povm;
    povm.outcomes.push_back({RVector::Zero(d), HermitianOp::zero(dim)});
    CMatrix buffer = CMatrix::Zero(dim, dim);
    for (long long flat = 0; flat < count; ++flat) {
        CMatrix el = r * (f_list[flat] + c_floor * id) * r;
        el = 0.5 * (el + el.adjoint().eval());
        const bool inside = (omegas[flat].cwiseAbs().maxCoeff() <= cfg.p);
        if (inside) {
            povm.outcomes.push_back({omegas[flat], HermitianOp(std::move(el))});
        } else {
            buffer += el;
        }
    }
    povm.outcomes.front().element = HermitianOp(0.5 * (buffer + buffer.adjoint().eval()));
    return povm;
}

EstimatorStats povm_stats(const DensityOp& rho, const Povm& povm, const WeightMatrix& weight) {
    if (povm.dim() != rho.dim()) throw model_error("povm_stats: dimension mismatch");
    const int d = static_cast<int>(povm.outcomes.front().omega.size());
    std::vector<double> probs;
    probs.reserve(povm.outcomes.size());
    double total = 0.0;
    for (const auto& oc : povm.outcomes) {
        double p = (rho.mat() * oc.element.mat()).trace().real();
        if (p < -1e-12) {
            std::ostringstream os;
            os << "povm_stats: outcome probability " << p << " below clipping floor";
            throw numeric_error(os.str());
        }
        p = std::max(0.0, p);
        probs.push_back(p);
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "povm_stats: probabilities sum to " << total;
        throw numeric_error(os.str());
    }
    EstimatorStats st;
    st.mean = RVector::Zero(d);
    for (std::size_t k = 0; k < probs.size(); ++k) {
        st.mean += (probs[k] / total) * povm.outcomes[k].omega;
    }
    st.cov = RMatrix::Zero(d, d);
    for (std::size_t k = 0; k < probs.size(); ++k) {
        RVector dev = povm.outcomes[k].omega - st.mean;
        st.cov += (probs[k] / total) * (dev * dev.transpose());
    }
    st.weighted_trace = (weight.mat() * st.cov).trace();
    return st;
}

PipelineResult achievability_pipeline(const ParamModel& model, const RVector& theta0,
                                      const WeightMatrix& G, const RVector& h, int n,
                                      const LatticeConfig& cfg) {
    cfg.validate();
    if (n < 1) throw model_error("achievability_pipeline: n must be >= 1");
    const GeometryReport rep = geometry_report(model, theta0);
    const int d = model.d();

    PipelineResult out;
    out.bound = holevo_bound(rep.Sigma, rep.tau, G);
    out.target = out.bound.value;

    const AncillaSystem anc = ancilla_from_gram(out.bound.Z_hat);
    const int adim = anc.sigma.dim();
    check_power_dim(model.dim() * adim, n);

    const long long mdimn = check_power_dim(model.dim(), n);
    const long long adimn = check_power_dim(adim, n);
    const CMatrix id_m = CMatrix::Identity(mdimn, mdimn);
    const CMatrix id_a = CMatrix::Identity(adimn, adimn);

    std::vector<HermitianOp> xbar;
    xbar.reserve(d);
    for (int i = 0; i < d; ++i) {
        CMatrix combo = CMatrix::Zero(model.dim(), model.dim());
        for (std::size_t k = 0; k < rep.d_basis.size(); ++k) {
            combo += out.bound.F_star(k, i) * rep.d_basis[k].mat();
        }
        const HermitianOp xt = collective_observable(HermitianOp(std::move(combo)), n);
        const HermitianOp y = collective_observable(anc.B[i], n);
        xbar.push_back(HermitianOp(kron(xt.mat(), id_a) + kron(id_m, y.mat())));
    }

    const DensityOp rho_local = model.eval(theta0 + h / std::sqrt(static_cast<double>(n)));
    CMatrix rho_n = rho_local.mat();
    for (int k = 1; k < n; ++k) rho_n = kron(rho_n, rho_local.mat());
    CMatrix sig_n = anc.sigma.mat();
    for (int k = 1; k < n; ++k) sig_n = kron(sig_n, anc.sigma.mat());
    const DensityOp rho_bar{CMatrix(kron(rho_n, sig_n))};

    const Povm povm = lattice_povm(xbar, cfg);
    out.stats = povm_stats(rho_bar, povm, G);
    return out;
}

EstimatorStats classical_limit_sim(const RMatrix& v, const RVector& h, const LatticeConfig& cfg,
                                   std::int64_t samples, std::uint64_t seed) {
    cfg.validate();
    const int d = static_cast<int>(v.rows());
    if (v.cols() != d || h.size() != d) throw model_error("classical_limit_sim: dimension mismatch");
    if (samples < 1) throw model_error("classical_limit_sim: samples must be >= 1");
    Eigen::LLT<RMatrix> llt(0.5 * (v + v.transpose().eval()));
    if (llt.info() != Eigen::Success) {
        throw numeric_error("classical_limit_sim: V must be positive definite");
    }
    const RMatrix chol = llt.matrixL();

    const std::vector<double> axis = lattice_axis(cfg);
    const int n_axis = static_cast<int>(axis.size());
    const double qc = cfg.q;
    const double kfac = std::sqrt(qc / (2.0 * M_PI));

    // Two decoupled streams: Gaussian draws and lattice-mixing uniforms. Each
    // sample consumes a fixed number of variates from each, so runs with the
    // same seed stay aligned across different lattice configurations.
    Rng gauss_rng(seed);
    Rng mix_rng(seed ^ 0x9E3779B97F4A7C15ull);

    RVector z = RVector::Zero(d);
    RVector x(d), omega(d);
    RMatrix kernel(d, n_axis);   // per-axis smoothing weights at the current x
    RVector axis_norm(d);
    std::vector<double> usample(d + 1);

    RVector sum = RVector::Zero(d);
    RMatrix sum2 = RMatrix::Zero(d, d);

    for (std::int64_t s = 0; s < samples; ++s) {
        if (s % 2 == 0) {
            for (int i = 0; i < d; ++i) z[i] = gauss_rng.normal();
        } else {
            z = -z; // antithetic partner
        }
        x = h + chol * z;
        for (int i = 0; i <= d; ++i) usample[i] = mix_rng.uniform();

        double fmass = 1.0;
        for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n_axis; ++j) {
                const double dt = axis[j] - x[i];
                const double w = kfac * std::exp(-0.5 * qc * dt * dt);
                kernel(i, j) = w;
                acc += w;
            }
            axis_norm[i] = acc;
            fmass *= acc;
        }
        const double w_total = fmass + 1.0;

        if (usample[d] < 1.0 / w_total) {
            // flat floor component: uniform lattice point
            for (int i = 0; i < d; ++i) {
                int j = static_cast<int>(usample[i] * n_axis);
                if (j >= n_axis) j = n_axis - 1;
                omega[i] = axis[j];
            }
        } else {
            for (int i = 0; i < d; ++i) {
                const double target = usample[i] * axis_norm[i];
                double acc = 0.0;
                int pick = n_axis - 1;
                for (int j = 0; j < n_axis; ++j) {
                    acc += kernel(i, j);
                    if (acc >= target) {
                        pick = j;
                        break;
                    }
                }
                omega[i] = axis[pick];
            }
        }
        if (omega.cwiseAbs().maxCoeff() > cfg.p) omega.setZero();

        sum += omega;
        sum2 += omega * omega.transpose();
    }

    const double n = static_cast<double>(samples);
    EstimatorStats st;
    st.mean = sum / n;
    st.cov = sum2 / n - st.mean * st.mean.transpose();
    st.cov = 0.5 * (st.cov + st.cov.transpose().eval());
    st.weighted_trace = st.cov.trace();
    st.mean_se = (st.cov.diagonal() / n).cwiseMax(0.0).cwiseSqrt();
    return st;
}

} // namespace qlanlab
