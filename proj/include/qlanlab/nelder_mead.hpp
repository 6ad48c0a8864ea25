#ifndef QLANLAB_NELDER_MEAD_HPP
#define QLANLAB_NELDER_MEAD_HPP

#include <Eigen/Dense>
#include <functional>

namespace qlanlab {

struct NmResult {
    Eigen::VectorXd x;
    double fval = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Downhill-simplex minimizer. Stops when the simplex function spread falls
/// below `fatol` and the vertex spread below `xatol`, or after `max_evals`.
NmResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                     const Eigen::VectorXd& x0, double initial_step, double fatol,
                     double xatol, int max_evals);

} // namespace qlanlab

#endif
