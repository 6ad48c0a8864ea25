#include "qlanlab/nelder_mead.hpp"

#include <algorithm>
#include <vector>

namespace qlanlab {

NmResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                     const Eigen::VectorXd& x0, double initial_step, double fatol,
                     double xatol, int max_evals) {
    const int n = static_cast<int>(x0.size());
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<Eigen::VectorXd> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    int evals = 0;
    for (int i = 1; i <= n; ++i) xs[i][i - 1] += initial_step;
    for (int i = 0; i <= n; ++i) {
        fs[i] = f(xs[i]);
        ++evals;
    }

    std::vector<int> order(n + 1);
    auto sort_simplex = [&]() {
        for (int i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::vector<Eigen::VectorXd> xs2(n + 1);
        std::vector<double> fs2(n + 1);
        for (int i = 0; i <= n; ++i) {
            xs2[i] = xs[order[i]];
            fs2[i] = fs[order[i]];
        }
        xs.swap(xs2);
        fs.swap(fs2);
    };

    NmResult res;
    while (evals < max_evals) {
        sort_simplex();
        double xspread = 0.0;
        for (int i = 1; i <= n; ++i) xspread = std::max(xspread, (xs[i] - xs[0]).cwiseAbs().maxCoeff());
        if (fs[n] - fs[0] <= fatol && xspread <= xatol) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += xs[i];
        centroid /= n;

        Eigen::VectorXd xr = centroid + alpha * (centroid - xs[n]);
        double fr = f(xr);
        ++evals;
        if (fr < fs[0]) {
            Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
            double fe = f(xe);
            ++evals;
            if (fe < fr) {
                xs[n] = xe;
                fs[n] = fe;
            } else {
                xs[n] = xr;
                fs[n] = fr;
            }
        } else if (fr < fs[n - 1]) {
            xs[n] = xr;
            fs[n] = fr;
        } else {
            Eigen::VectorXd xc;
            if (fr < fs[n]) {
                xc = centroid + rho * (xr - centroid);
            } else {
                xc = centroid - rho * (centroid - xs[n]);
            }
            double fc = f(xc);
            ++evals;
            if (fc < std::min(fr, fs[n])) {
                xs[n] = xc;
                fs[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    xs[i] = xs[0] + sigma * (xs[i] - xs[0]);
                    fs[i] = f(xs[i]);
                    ++evals;
                }
            }
        }
    }
    sort_simplex();
    res.x = xs[0];
    res.fval = fs[0];
    res.evaluations = evals;
    return res;
}

} // namespace qlanlab
