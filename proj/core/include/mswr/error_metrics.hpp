#pragma once

#include <string>
#include <vector>

#include "mswr/wr_solver.hpp"

namespace mswr {

// Grid errors against the analytic solution at time t. err_l2 is the
// L2-type norm (1/dx)*sqrt(sum of squared differences); err_max the
// componentwise maximum.
double err_l2(const Vector& numerical, double t, double dx = 1.0);
double err_max(const Vector& numerical, double t);

struct ErrorSeries {
    std::string label;
    std::vector<double> t;
    std::vector<double> l2;
    std::vector<double> max_err;
};

ErrorSeries error_series(const Trajectory& traj, const std::string& label, double dx = 1.0);

}  // namespace mswr
