#pragma once

#include <array>
#include <vector>

namespace mswr {

// Per-step iteration counts. Windowed runs log one record per sweep over the
// whole window instead of one per time step.
struct StepRecord {
    int outer = 0;
    int inner = 0;      // total inner iterations across all outer iterations
    int innermost = 0;  // total innermost iterations across all inner iterations
    double final_update = 0.0;
};

struct SolveTrace {
    std::vector<StepRecord> steps;
    long factorizations = 0;
    long diagonal_solves = 0;
    long tridiagonal_solves = 0;
    long banded_solves = 0;
    std::array<long, 2> subproblem_solves{0, 0};
    double wall_seconds = 0.0;

    long total_solves() const { return diagonal_solves + tridiagonal_solves + banded_solves; }
};

}  // namespace mswr
