#pragma once

#include <functional>
#include <string>
#include <utility>

#include "mswr/band_solver.hpp"
#include "mswr/dae_problem.hpp"
#include "mswr/splittings.hpp"
#include "mswr/trace.hpp"

namespace mswr {

enum class StageDepth { One = 1, Two = 2, Three = 3 };
enum class TimeLoopMode { Stepwise, Windowed };

// ErrorBound: iterate until the update norm drops to tol, with the same cap
// (and tol) applied to each nesting level. FixedIters: exactly K outer, nu
// inner, mu innermost iterations, no early exit.
struct StoppingCriterion {
    enum class Kind { ErrorBound, FixedIters };
    Kind kind = Kind::ErrorBound;
    double tol = 1e-3;
    int cap = 200;
    int K = 20, nu = 4, mu = 2;

    static StoppingCriterion error_bound(double tol, int cap);
    static StoppingCriterion fixed_iters(int K, int nu, int mu);
};

struct Trajectory {
    double t0 = 0.0;
    double h = 0.1;
    std::vector<Vector> states;

    int steps() const { return static_cast<int>(states.size()) - 1; }
    double time(int n) const { return t0 + n * h; }
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, int step_, double last_update_, SolveTrace trace_)
        : Error(what), step(step_), last_update(last_update_), trace(std::move(trace_)) {}

    int step;
    double last_update;
    SolveTrace trace;
};

// Implicit Euler on (A + hB) y_{n+1} = A y_n + h f_{n+1}; the common fixed
// point of every relaxation scheme here, used as the convergence oracle.
Trajectory direct_euler(const DaeProblem& dae, SolveTrace* trace = nullptr);

// Nested waveform relaxation. Stepwise iterates each time step to the
// stopping criterion before advancing; windowed sweeps the whole time window
// per outer iteration (one trace record per sweep). The left-hand matrix
// M_A + h*M_depth is factorized once per run.
std::pair<Trajectory, SolveTrace> wr_run(const DaeProblem& dae, const StageSplittings& s,
                                         StageDepth depth, const StoppingCriterion& stop,
                                         TimeLoopMode mode);

// Homogeneous part of one outer iteration, suitable for power iteration.
// Depth One maps v to solve(M_A + h*M_1, (h*N_1 + N_A) v); deeper stages
// compose nu (and mu) inner sweeps around the same map.
std::function<Vector(const Vector&)> iteration_operator(const StageSplittings& s, StageDepth depth,
                                                        double h, int nu = 4, int mu = 2);

}  // namespace mswr
