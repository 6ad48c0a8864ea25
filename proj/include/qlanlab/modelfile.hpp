#ifndef QLANLAB_MODELFILE_HPP
#define QLANLAB_MODELFILE_HPP

#include <cstdint>
#include <map>
#include <string>

#include "qlanlab/model.hpp"

namespace qlanlab {

/// Affine model description loaded from a JSON document:
///   { "dim": .., "d": .., "type": "affine",
///     "rho0": [[[re,im],...],...], "generators": [ matrix, ... ],
///     "theta0": [..] }
/// Complex entries are [re, im] pairs, matrices row-major nested arrays.
struct ModelFile {
    int dim = 0;
    int d = 0;
    std::string type;
    CMatrix rho0;
    std::vector<CMatrix> generators;
    RVector theta0;
};

ModelFile parse_model_file(const std::string& json_text);
ModelFile load_model_file(const std::string& path);

/// Builds the ParamModel described by a model file; generators must be
/// Hermitian and the state at theta0 a valid density operator.
ParamModel model_from_file(const ModelFile& mf);

/// Run-wide knobs with documented defaults, all overridable from the CLI.
struct RunConfig {
    std::uint64_t seed = 20130829;
    int memory_cap_dim = 4096;
    int restarts = 16;
    std::map<std::string, double> tolerances;
};

std::string format_cmatrix_json(const CMatrix& m);

} // namespace qlanlab

#endif
