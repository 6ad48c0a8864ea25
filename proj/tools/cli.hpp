#ifndef QLANLAB_CLI_HPP
#define QLANLAB_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace qlanlab::cli {

/// Runs the full command-line interface on the given arguments (without the
/// program name), writing CSV to `out` (or the --out file) and diagnostics to
/// `err`. Returns the process exit code: 0 ok, 1 usage, 2 model, 3 numeric.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 12-significant-digit float formatting used for every CSV field.
std::string fmt(double v);

} // namespace qlanlab::cli

#endif
