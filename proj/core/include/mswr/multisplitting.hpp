#pragma once

#include <array>
#include <functional>
#include <optional>

#include "mswr/wr_solver.hpp"

namespace mswr {

enum class MSKind { Jacobi, GSSerial, GSDecoupled, GSCoupled };

struct MSMethod {
    MSKind kind = MSKind::Jacobi;
    int fast = 1;  // GSCoupled: which processor finishes first
};

enum class GuardDecision { Mix, Off };

// Guard decisions for one time step. The check needs a previous iterate, so
// decisions[i] is the evaluation at outer iteration k = i+1; after a
// switch-off the step finishes on subproblem 1 alone and nothing more is
// logged.
struct StepGuardLog {
    std::vector<GuardDecision> decisions;
    bool switched_off = false;
    int switch_iteration = -1;
};

struct MixingGuardState {
    std::vector<StepGuardLog> steps;
};

struct MSResult {
    Trajectory trajectory;
    SolveTrace trace;
    MixingGuardState guard;
};

// Mix while the mixed vectors track each subproblem at least as closely as
// the subproblems track themselves; otherwise fall back to subproblem 1.
// GSSerial's second inequality mixes with the already-updated y^{1,k+1},
// passed as y1kp1 (the current y1k is used when absent).
GuardDecision mixing_guard_check(const Vector& y1k, const Vector& y2k, const Vector& y1km1,
                                 const Vector& y2km1, const PartitionOfUnity& P, MSMethod method,
                                 const Vector* y1kp1 = nullptr);

// Two-subproblem multisplitting relaxation, stepwise in time. The reported
// global iterate mixes the subproblem iterates with the weights of
// mixing_row (1 or 2); the stopping criterion watches that mixed iterate
// (FixedIters runs exactly K outer iterations). GSDecoupled/GSCoupled absorb
// the E_{l,l} self-coupling into the left-hand matrix; all left-hand
// matrices are factorized once per run.
MSResult ms_run(const DaeProblem& dae, const std::array<SubproblemSplitting, 2>& subs,
                const PartitionOfUnity& P, MSMethod method, const StoppingCriterion& stop,
                bool guard_enabled, int mixing_row = 1);

// Joint linear map (v1, v2) -> (v1', v2') of one guardless outer iteration,
// stacked as a single length-2m vector for power iteration.
std::function<Vector(const Vector&)> ms_iteration_operator(
    const DaeProblem& dae, const std::array<SubproblemSplitting, 2>& subs,
    const PartitionOfUnity& P, MSMethod method);

}  // namespace mswr
