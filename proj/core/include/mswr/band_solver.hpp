#pragma once

#include <memory>
#include <vector>

#include "mswr/block_matrix.hpp"
#include "mswr/trace.hpp"

namespace mswr {

enum class SolvePath {
    Diagonal,     // elementwise divide
    BlockThomas,  // independent tridiagonal blocks, no pivoting
    GeneralBand,  // banded LU with partial pivoting
};

// LU factorization of a StructuredMatrix, specialized by sparsity pattern.
// Diagonal matrices divide; block-diagonal matrices with tridiagonal blocks
// run Thomas per block (falling back to the pivoted band solver if a pivot
// degenerates); everything else goes through a banded LU with row pivoting.
// Singularity is flagged when a pivot drops below 1e-14 times the max
// magnitude of its original row.
class BandFactorization {
public:
    explicit BandFactorization(const StructuredMatrix& M);

    SolvePath path() const { return path_; }
    int size() const { return m_; }

    Vector solve(const Vector& rhs) const;

private:
    void factor_diagonal(const StructuredMatrix& M);
    bool factor_thomas(const StructuredMatrix& M);  // false: needs pivoting
    void factor_band(const StructuredMatrix& M);

    int m_ = 0;
    int p_ = 0;
    SolvePath path_ = SolvePath::Diagonal;

    Vector diag_;  // Diagonal path

    // BlockThomas path: per block, lower multipliers l[1..p-1], pivots u[0..p-1],
    // and the (unchanged) superdiagonal c.
    struct ThomasBlock {
        Vector l, u, c;
    };
    std::vector<ThomasBlock> thomas_;

    // GeneralBand path: LAPACK-style storage, row j of the band matrix holds
    // entry (i, j) at ab_[ku_work_ + i - j][j]; kl_ extra rows keep multipliers.
    int kl_ = 0, ku_ = 0, ku_work_ = 0;
    std::vector<Vector> ab_;
    std::vector<int> pivot_;
};

// Bump the matching counter for one factorized solve.
void count_solve(SolveTrace& trace, const BandFactorization& F);

}  // namespace mswr
