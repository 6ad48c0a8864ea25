#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qlanlab/asymp.hpp"
#include "qlanlab/modelfile.hpp"

namespace qlanlab::cli {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

struct CommonOpts {
    std::string model = "qubit3d";
    std::string theta0;
    std::string weight = "sld";
    double z0 = 0.25;
    std::uint64_t seed = 20130829;
    int restarts = 16;
    std::string out_path;
    std::string lattice;
    long long samples = 100000;
    double n = 1;
    std::string ns;
    std::string h;
    std::string obs = "sz";
    bool figure1_left = false;
    bool figure1_right = false;
    int memcap = 0;
};

RVector parse_vector(const std::string& text, const char* what) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            vals.push_back(std::stod(tok));
        } catch (...) {
            throw usage_error(std::string("cannot parse ") + what + " entry '" + tok + "'");
        }
    }
    if (vals.empty()) throw usage_error(std::string(what) + " must be a comma-separated list");
    RVector v(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
    return v;
}

LatticeConfig parse_lattice(const std::string& text, const LatticeConfig& dflt) {
    if (text.empty()) return dflt;
    RVector v = parse_vector(text, "--lattice");
    if (v.size() != 4) throw usage_error("--lattice expects m,ell,q,p");
    LatticeConfig cfg{static_cast<int>(v[0]), v[1], v[2], v[3]};
    cfg.validate();
    return cfg;
}

ParamModel resolve_model(const CommonOpts& o) {
    if (o.model == "qubit3d") return ParamModel::qubit3d();
    if (o.model == "qubit2d") return ParamModel::qubit2d(o.z0);
    if (o.model == "qubit_pure") return ParamModel::qubit_pure();
    return model_from_file(load_model_file(o.model));
}

RVector resolve_theta0(const CommonOpts& o, const ParamModel& m) {
    if (o.theta0.empty()) {
        if (o.model != "qubit3d" && o.model != "qubit2d" && o.model != "qubit_pure") {
            return load_model_file(o.model).theta0;
        }
        return RVector::Zero(m.d());
    }
    RVector t = parse_vector(o.theta0, "--theta0");
    if (t.size() != m.d()) throw usage_error("--theta0 has the wrong number of entries");
    return t;
}

RMatrix parse_weight_file(const std::string& path, int d) {
    std::ifstream in(path);
    if (!in) throw model_error("weight file: cannot open " + path);
    std::vector<double> vals;
    double v;
    while (in >> v) vals.push_back(v);
    if (static_cast<int>(vals.size()) != d * d) {
        throw model_error("weight file: expected " + std::to_string(d * d) + " numbers");
    }
    RMatrix g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = vals[r * d + c];
    return g;
}

WeightMatrix resolve_weight(const CommonOpts& o, const GeometryReport& rep) {
    if (o.weight == "sld") return WeightMatrix(rep.J_S);
    if (o.weight == "identity") return WeightMatrix::identity(static_cast<int>(rep.J_S.rows()));
    std::string path = o.weight;
    if (path.rfind("file:", 0) == 0) path = path.substr(5);
    return WeightMatrix(parse_weight_file(path, static_cast<int>(rep.J_S.rows())));
}

std::vector<double> parse_schedule(const std::string& text, std::vector<double> dflt) {
    if (text.empty()) return dflt;
    RVector v = parse_vector(text, "--ns");
    std::vector<double> out(v.data(), v.data() + v.size());
    return out;
}

// ---- commands -------------------------------------------------------------

void emit_bounds_row(std::ostream& os, double key, const ParamModel& model, const RVector& theta0,
                     const CommonOpts& o) {
    const GeometryReport rep = geometry_report(model, theta0);
    const WeightMatrix g = resolve_weight(o, rep);
    HolevoOptions hopts;
    hopts.seed = o.seed;
    hopts.restarts = o.restarts;
    const BoundResult b = holevo_bound(rep.Sigma, rep.tau, g, hopts);
    const double hgm = hgm_nagaoka_bound(rep.J_S, g);
    std::string closed;
    if (rep.d_basis.size() == rep.slds.size()) {
        closed = fmt(holevo_closed_dinv(rep.J, g));
    }
    os << fmt(key) << "," << fmt(b.value) << "," << fmt(hgm) << "," << closed << ","
       << (b.converged ? 1 : 0) << "\n";
}

void cmd_bounds(std::ostream& os, const CommonOpts& o) {
    os << "r,holevo,hgm_nagaoka,holevo_closed,converged\n";
    if (o.figure1_left || o.figure1_right) {
        const ParamModel model =
            o.figure1_left ? ParamModel::qubit3d() : ParamModel::qubit2d(0.25);
        for (int i = 0; i < 100; ++i) {
            const double r = 0.01 * i;
            RVector theta0 = RVector::Zero(model.d());
            theta0[model.d() - 1] = r;
            CommonOpts row = o;
            row.weight = "sld";
            emit_bounds_row(os, r, model, theta0, row);
        }
        return;
    }
    const ParamModel model = resolve_model(o);
    const RVector theta0 = resolve_theta0(o, model);
    emit_bounds_row(os, theta0.norm(), model, theta0, o);
}

void emit_matrix(std::ostream& os, const char* name, const CMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            os << name << "," << i + 1 << "," << j + 1 << "," << fmt(m(i, j).real()) << ","
               << fmt(m(i, j).imag()) << "\n";
        }
    }
}

void cmd_geometry(std::ostream& os, const CommonOpts& o) {
    const ParamModel model = resolve_model(o);
    const RVector theta0 = resolve_theta0(o, model);
    const GeometryReport rep = geometry_report(model, theta0);
    os << "matrix,i,j,re,im\n";
    emit_matrix(os, "J", rep.J);
    emit_matrix(os, "J_S", rep.J_S.cast<Complex>());
    emit_matrix(os, "Sigma", rep.Sigma);
    emit_matrix(os, "tau", rep.tau);
}

void cmd_clt(std::ostream& os, const CommonOpts& o) {
    const ParamModel model = resolve_model(o);
    const RVector theta0 = resolve_theta0(o, model);
    const DensityOp rho = model.eval(theta0);
    const std::vector<HermitianOp> slds_v = sld(model, theta0);
    const auto grid = default_xi_grid(model.d());
    const auto schedule = parse_schedule(o.ns, {1e4, 2e4, 4e4, 8e4, 1.6e5});
    const CltReport rep = clt_convergence_report(rho, slds_v, grid, schedule);
    os << "n,sup_error\n";
    for (const auto& row : rep.rows) {
        os << fmt(row.n) << "," << fmt(row.sup_error) << "\n";
    }
}

void cmd_qlan(std::ostream& os, const CommonOpts& o) {
    const ParamModel model = resolve_model(o);
    const RVector theta0 = resolve_theta0(o, model);
    if (o.h.empty()) throw usage_error("qlan requires --h");
    const RVector h = parse_vector(o.h, "--h");
    const auto schedule = parse_schedule(o.ns, {1e2, 1e3, 1e4, 1e5, 1e6});
    os << "n,p_norm,sqrtn_trace\n";
    for (double n : schedule) {
        const QlanResidual res = qlan_residual(model, theta0, h, n);
        os << fmt(n) << "," << fmt(res.p_norm) << "," << fmt(res.sqrtn_trace) << "\n";
    }
}

HermitianOp named_pauli(const std::string& name) {
    CMatrix m(2, 2);
    if (name == "sx") {
        m << 0, 1, 1, 0;
    } else if (name == "sy") {
        m << 0, Complex(0, -1), Complex(0, 1), 0;
    } else if (name == "sz") {
        m << 1, 0, 0, -1;
    } else {
        throw usage_error("--obs entries must be sx, sy or sz");
    }
    return HermitianOp(m);
}

void cmd_povm(std::ostream& os, const CommonOpts& o) {
    std::vector<HermitianOp> obs;
    {
        std::stringstream ss(o.obs);
        std::string tok;
        while (std::getline(ss, tok, ',')) obs.push_back(named_pauli(tok));
    }
    if (obs.empty()) throw usage_error("--obs must name at least one observable");
    const LatticeConfig cfg = parse_lattice(o.lattice, LatticeConfig{1, 1.0, 16.0, 0.9});
    const Povm povm = lattice_povm(obs, cfg);

    CMatrix total = CMatrix::Zero(povm.dim(), povm.dim());
    for (const auto& oc : povm.outcomes) total += oc.element.mat();
    const double completeness =
        (total - CMatrix::Identity(povm.dim(), povm.dim())).cwiseAbs().maxCoeff();

    os << "outcome";
    for (std::size_t i = 0; i < obs.size(); ++i) os << ",omega" << i + 1;
    os << ",min_eig,completeness_residual\n";
    for (std::size_t k = 0; k < povm.outcomes.size(); ++k) {
        const auto& oc = povm.outcomes[k];
        os << k;
        for (Eigen::Index i = 0; i < oc.omega.size(); ++i) os << "," << fmt(oc.omega[i]);
        os << "," << fmt(eigh(oc.element).eigenvalues[0]) << "," << fmt(completeness) << "\n";
    }
}

void cmd_gausslimit(std::ostream& os, const CommonOpts& o) {
    const ParamModel model = resolve_model(o);
    RVector theta0 = resolve_theta0(o, model);
    if (o.theta0.empty() && o.model == "qubit3d") theta0 << 0, 0, 0.5;
    const GeometryReport rep = geometry_report(model, theta0);
    const WeightMatrix g = resolve_weight(o, rep);
    HolevoOptions hopts;
    hopts.seed = o.seed;
    hopts.restarts = o.restarts;
    const BoundResult b = holevo_bound(rep.Sigma, rep.tau, g, hopts);
    const RMatrix v = b.V_tilde + b.V_hat;

    RVector h = RVector::Zero(model.d());
    if (!o.h.empty()) {
        h = parse_vector(o.h, "--h");
        if (h.size() != model.d()) throw usage_error("--h has the wrong number of entries");
    }
    const LatticeConfig cfg = parse_lattice(o.lattice, LatticeConfig{64, 8.0, 64.0, 6.0});
    const EstimatorStats st = classical_limit_sim(v, h, cfg, o.samples, o.seed);

    const double vscale = v.cwiseAbs().maxCoeff();
    const double bias = (st.mean - h).cwiseAbs().maxCoeff();
    const double cov_dev = (st.cov - v).cwiseAbs().maxCoeff() / vscale;

    os << "component,h,mean,se,target_var,var\n";
    for (int i = 0; i < model.d(); ++i) {
        os << i + 1 << "," << fmt(h[i]) << "," << fmt(st.mean[i]) << "," << fmt(st.mean_se[i])
           << "," << fmt(v(i, i)) << "," << fmt(st.cov(i, i)) << "\n";
    }
    os << "summary," << fmt(bias) << "," << fmt(cov_dev) << "," << fmt(b.value) << ",,\n";
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"quantum local-model estimation toolbox"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");

    CommonOpts o;
    auto add_common = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "print help");
        sub->add_option("--model", o.model, "builtin name (qubit3d, qubit2d, qubit_pure) or model file path");
        sub->add_option("--theta0", o.theta0, "reference point, comma separated");
        sub->add_option("--weight", o.weight, "sld | identity | file:PATH");
        sub->add_option("--z0", o.z0, "qubit2d pole height");
        sub->add_option("--seed", o.seed, "RNG seed");
        sub->add_option("--restarts", o.restarts, "optimizer restarts");
        sub->add_option("--out", o.out_path, "write CSV here instead of stdout");
        sub->add_option("--memcap-dim", o.memcap, "tensor dimension cap override");
    };

    CLI::App* bounds = app.add_subcommand("bounds", "estimation bounds and sweeps");
    add_common(bounds);
    bounds->add_flag("--figure1-left", o.figure1_left, "3-parameter family sweep, SLD weight");
    bounds->add_flag("--figure1-right", o.figure1_right, "2-parameter family sweep, z0=0.25");

    CLI::App* geometry = app.add_subcommand("geometry", "J, Sigma, tau at theta0");
    add_common(geometry);

    CLI::App* clt = app.add_subcommand("clt", "Gaussian-limit convergence table");
    add_common(clt);
    clt->add_option("--ns", o.ns, "n schedule, comma separated");

    CLI::App* qlan = app.add_subcommand("qlan", "local expansion residual table");
    add_common(qlan);
    qlan->add_option("--h", o.h, "local parameter, comma separated");
    qlan->add_option("--ns", o.ns, "n schedule, comma separated");

    CLI::App* povm = app.add_subcommand("povm", "lattice measurement diagnostics");
    add_common(povm);
    povm->add_option("--obs", o.obs, "comma list from sx, sy, sz");
    povm->add_option("--lattice", o.lattice, "m,ell,q,p");

    CLI::App* gausslimit = app.add_subcommand("gausslimit", "classical limiting estimator");
    add_common(gausslimit);
    gausslimit->add_option("--h", o.h, "shift parameter, comma separated");
    gausslimit->add_option("--lattice", o.lattice, "m,ell,q,p");
    gausslimit->add_option("--samples", o.samples, "Monte Carlo samples");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (o.memcap > 0) set_dim_cap(o.memcap);
        std::ostringstream csv;
        if (bounds->parsed()) cmd_bounds(csv, o);
        else if (geometry->parsed()) cmd_geometry(csv, o);
        else if (clt->parsed()) cmd_clt(csv, o);
        else if (qlan->parsed()) cmd_qlan(csv, o);
        else if (povm->parsed()) cmd_povm(csv, o);
        else if (gausslimit->parsed()) cmd_gausslimit(csv, o);
        if (!o.out_path.empty()) {
            std::ofstream f(o.out_path, std::ios::binary);
            if (!f) throw usage_error("cannot open --out file " + o.out_path);
            f << csv.str();
        } else {
            out << csv.str();
        }
        return 0;
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const model_error& e) {
        err << "model error: " << e.what() << "\n";
        return 2;
    } catch (const resource_error& e) {
        err << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const numeric_error& e) {
        err << "numeric error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace qlanlab::cli
