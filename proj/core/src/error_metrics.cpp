#include "mswr/error_metrics.hpp"

#include <cmath>

#include "mswr/dae_problem.hpp"

namespace mswr {

double err_l2(const Vector& numerical, double t, double dx) {
    Vector exact = analytic_solution(t, static_cast<int>(numerical.size()));
    double s = 0.0;
    for (size_t i = 0; i < exact.size(); ++i) {
        double d = numerical[i] - exact[i];
        s += d * d;
    }
    return std::sqrt(s) / dx;
}

double err_max(const Vector& numerical, double t) {
    Vector exact = analytic_solution(t, static_cast<int>(numerical.size()));
    double worst = 0.0;
    for (size_t i = 0; i < exact.size(); ++i)
        worst = std::max(worst, std::abs(numerical[i] - exact[i]));
    return worst;
}

ErrorSeries error_series(const Trajectory& traj, const std::string& label, double dx) {
    ErrorSeries series;
    series.label = label;
    for (size_t n = 0; n < traj.states.size(); ++n) {
        double t = traj.time(static_cast<int>(n));
        series.t.push_back(t);
        series.l2.push_back(err_l2(traj.states[n], t, dx));
        series.max_err.push_back(err_max(traj.states[n], t));
    }
    return series;
}

}  // namespace mswr
