#ifndef QLANLAB_ERRORS_HPP
#define QLANLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qlanlab {

/// Bad command-line usage or malformed invocation arguments.
struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid model definition, out-of-domain parameter, or violated input contract.
struct model_error : std::runtime_error {
    explicit model_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: solver breakdown, singular matrix, failed consistency check.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Requested computation exceeds a configured resource cap.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qlanlab

#endif
