#pragma once

#include <array>
#include <string>
#include <vector>

#include "mswr/block_matrix.hpp"
#include "mswr/dae_problem.hpp"

namespace mswr {

// Nested splitting family A = MA - NA, B = M1 - N1, M1 = M2 - N2,
// M2 = M3 - N3. Deeper stages trade iteration count for cheaper left-hand
// matrices: MA + h*M1 is block tridiagonal, MA + h*M2 and MA + h*M3 are
// diagonal.
struct StageSplittings {
    StructuredMatrix MA, NA;
    StructuredMatrix M1, N1;
    StructuredMatrix M2, N2;
    StructuredMatrix M3, N3;
};

// Overlapping subproblem splitting l: MA = A + NA_l, M1 = B + N1_l.
struct SubproblemSplitting {
    int index = 1;  // 1 or 2
    StructuredMatrix NA, MA;
    StructuredMatrix N1, M1;
};

// Diagonal weight grid for mixing two subproblem iterates. E[l][j] scales
// subproblem j+1's iterate in mixing row l+1; each row sums to the identity
// exactly and all weights are nonnegative.
struct PartitionOfUnity {
    int L = 2;
    std::array<std::array<Vector, 2>, 2> E;
    int overlap = 1;
    std::array<double, 4> alphas{0.5, 0.5, 0.5, 0.5};

    int m() const { return static_cast<int>(E[0][0].size()); }
};

struct ValidationReport {
    struct Entry {
        std::string name;
        bool passed = true;
        double deviation = 0.0;
        std::string detail;
    };
    std::vector<Entry> entries;

    bool passed() const;
    std::string to_string() const;
};

// The n1_scale knob scales N1 before the derived members are computed, so
// all four identities keep holding; values far from 1 destroy contractivity
// and give a clean divergent test case. With validated=false the result is
// returned unchecked so callers can inspect the report themselves.
StageSplittings build_stage_splittings(const DaeProblem& dae, double n1_scale = 1.0,
                                       bool validated = true);

// Identity deviations (pass at <= 1e-12) plus factorization probes of the
// three shifted matrices. Failures are report entries, never exceptions.
ValidationReport validate_stage(const StageSplittings& s, const StructuredMatrix& A,
                                const StructuredMatrix& B, double h);

std::array<SubproblemSplitting, 2> build_subproblem_splittings(const DaeProblem& dae,
                                                               double n1_scale = 1.0,
                                                               bool validated = true);

ValidationReport validate_subproblem(const SubproblemSplitting& s, const StructuredMatrix& A,
                                     const StructuredMatrix& B, double h);

// o = 1: subproblem 1 owns the leading half, weights split at one shared row.
// o = m/2 - 1 (m even): everything except the two end rows is shared.
PartitionOfUnity build_partition(int m, int p, int o, const std::array<double, 4>& alphas);

ValidationReport validate_partition(const PartitionOfUnity& P);

}  // namespace mswr
