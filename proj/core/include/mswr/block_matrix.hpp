#pragma once

#include <cmath>
#include <variant>
#include <vector>

#include "mswr/errors.hpp"

namespace mswr {

using Vector = std::vector<double>;

// Block kinds for a p x p block. Tridiagonal stores a constant stencil;
// DiagonalBlock a varying diagonal; DenseBlock a row-major p*p grid.
struct ZeroBlock {};
struct ScaledIdentity {
    double s = 0.0;
};
struct TridiagBlock {
    double sub = 0.0, diag = 0.0, sup = 0.0;
};
struct DiagonalBlock {
    std::vector<double> d;
};
struct DenseBlock {
    std::vector<double> a;
};

using BlockKind = std::variant<ZeroBlock, ScaledIdentity, TridiagBlock, DiagonalBlock, DenseBlock>;

// m x m matrix stored as a q x q grid of p x p symbolic blocks. Immutable in
// spirit: construct, fill with set_block, then share read-only.
class StructuredMatrix {
public:
    StructuredMatrix(int p, int q);

    int p() const { return p_; }
    int q() const { return q_; }
    int m() const { return p_ * q_; }

    const BlockKind& block(int bi, int bj) const;
    // Stores the block, canonicalizing value-preserving special cases
    // (ScaledIdentity(0) -> Zero, stencil with empty off-diagonals -> ScaledIdentity).
    void set_block(int bi, int bj, BlockKind k);

    // Scalar entry, O(1). Indices 0-based over the full m x m matrix.
    double entry(int i, int j) const;

    // Structure queries used to pick solve paths and assert block patterns.
    bool is_diagonal() const;
    bool is_block_diag_tridiagonal() const;
    // Scalar band widths {below, above} inferred from the block pattern;
    // DenseBlock contents are scanned for their actual band.
    std::pair<int, int> bandwidth() const;

    // Row-major dense expansion; reserved for small-instance oracles.
    std::vector<double> to_dense() const;

private:
    int p_, q_;
    std::vector<BlockKind> blocks_;
};

Vector matvec(const StructuredMatrix& M, const Vector& v);

inline double norm2(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double diff_norm2(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// a*M + b*N, merging block kinds without losing value. Zero absorbs, like
// kinds stay like, mixed kinds promote (to DiagonalBlock or DenseBlock).
StructuredMatrix combine(double a, const StructuredMatrix& M, double b, const StructuredMatrix& N);

// M * diag(w): column j scaled by w[j].
StructuredMatrix scale_columns(const StructuredMatrix& M, const Vector& w);

double max_abs_entry_diff(const StructuredMatrix& M, const StructuredMatrix& N);

}  // namespace mswr
