#include "qlanlab/modelfile.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qlanlab {

namespace {

using nlohmann::json;

CMatrix parse_cmatrix(const json& j, int dim, const std::string& name) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim) {
        throw model_error("model file: " + name + " must be a " + std::to_string(dim) +
                          "-row matrix");
    }
    CMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const json& row = j.at(r);
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            throw model_error("model file: " + name + " row " + std::to_string(r) +
                              " must have " + std::to_string(dim) + " entries");
        }
        for (int c = 0; c < dim; ++c) {
            const json& e = row.at(c);
            if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() || !e.at(1).is_number()) {
                throw model_error("model file: " + name + " entries must be [re, im] pairs");
            }
            m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return m;
}

} // namespace

ModelFile parse_model_file(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw model_error(std::string("model file: invalid JSON: ") + e.what());
    }
    ModelFile mf;
    try {
        mf.dim = j.at("dim").get<int>();
        mf.d = j.at("d").get<int>();
        mf.type = j.at("type").get<std::string>();
    } catch (const json::exception& e) {
        throw model_error(std::string("model file: missing field: ") + e.what());
    }
    if (mf.type != "affine") throw model_error("model file: type must be \"affine\"");
    if (mf.dim < 1 || mf.d < 1) throw model_error("model file: dim and d must be positive");

    mf.rho0 = parse_cmatrix(j.at("rho0"), mf.dim, "rho0");
    const json& gens = j.at("generators");
    if (!gens.is_array() || static_cast<int>(gens.size()) != mf.d) {
        throw model_error("model file: generators must list d matrices");
    }
    for (int i = 0; i < mf.d; ++i) {
        mf.generators.push_back(parse_cmatrix(gens.at(i), mf.dim, "generator " + std::to_string(i)));
    }
    if (j.contains("theta0")) {
        const json& th = j.at("theta0");
        if (!th.is_array() || static_cast<int>(th.size()) != mf.d) {
            throw model_error("model file: theta0 must have d entries");
        }
        mf.theta0 = RVector(mf.d);
        for (int i = 0; i < mf.d; ++i) mf.theta0[i] = th.at(i).get<double>();
    } else {
        mf.theta0 = RVector::Zero(mf.d);
    }
    return mf;
}

ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw model_error("model file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model_file(ss.str());
}

ParamModel model_from_file(const ModelFile& mf) {
    DensityOp rho0{HermitianOp(mf.rho0)};
    std::vector<HermitianOp> gens;
    gens.reserve(mf.generators.size());
    for (const auto& g : mf.generators) gens.push_back(HermitianOp(g));
    ParamModel model = ParamModel::affine(std::move(rho0), std::move(gens));
    model.eval(mf.theta0); // validates the reference point
    return model;
}

std::string format_cmatrix_json(const CMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(row);
    }
    return rows.dump();
}

} // namespace qlanlab
