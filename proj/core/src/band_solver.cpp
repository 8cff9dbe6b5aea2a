#include "mswr/band_solver.hpp"

#include <algorithm>
#include <cmath>

#include "mswr/errors.hpp"

namespace mswr {

namespace {
constexpr double kPivotTol = 1e-14;
}

BandFactorization::BandFactorization(const StructuredMatrix& M) : m_(M.m()), p_(M.p()) {
    if (M.is_diagonal()) {
        path_ = SolvePath::Diagonal;
        factor_diagonal(M);
        return;
    }
    if (M.is_block_diag_tridiagonal()) {
        path_ = SolvePath::BlockThomas;
        if (factor_thomas(M)) return;
        thomas_.clear();  // a pivot degenerated, redo with row pivoting
    }
    path_ = SolvePath::GeneralBand;
    factor_band(M);
}

void BandFactorization::factor_diagonal(const StructuredMatrix& M) {
    diag_.resize(m_);
    for (int i = 0; i < m_; ++i) {
        diag_[i] = M.entry(i, i);
        if (diag_[i] == 0.0) throw SingularMatrixError(i, "diagonal factorization");
    }
}

bool BandFactorization::factor_thomas(const StructuredMatrix& M) {
    thomas_.resize(M.q());
    for (int b = 0; b < M.q(); ++b) {
        double sub = 0.0, dia = 0.0, sup = 0.0;
        Vector dvec;
        const BlockKind& k = M.block(b, b);
        if (const auto* si = std::get_if<ScaledIdentity>(&k)) {
            dia = si->s;
        } else if (const auto* tr = std::get_if<TridiagBlock>(&k)) {
            sub = tr->sub;
            dia = tr->diag;
            sup = tr->sup;
        } else if (const auto* dg = std::get_if<DiagonalBlock>(&k)) {
            dvec = dg->d;
        }
        auto bval = [&](int i) { return dvec.empty() ? dia : dvec[i]; };

        ThomasBlock& tb = thomas_[b];
        tb.l.assign(p_, 0.0);
        tb.u.assign(p_, 0.0);
        tb.c.assign(p_, sup);
        double rowmax0 = std::max(std::abs(bval(0)), p_ > 1 ? std::abs(sup) : 0.0);
        tb.u[0] = bval(0);
        if (std::abs(tb.u[0]) <= kPivotTol * rowmax0) return false;
        for (int i = 1; i < p_; ++i) {
            double rowmax = std::max({std::abs(sub), std::abs(bval(i)),
                                      i + 1 < p_ ? std::abs(sup) : 0.0});
            tb.l[i] = sub / tb.u[i - 1];
            tb.u[i] = bval(i) - tb.l[i] * tb.c[i - 1];
            if (std::abs(tb.u[i]) <= kPivotTol * rowmax) return false;
        }
    }
    return true;
}

void BandFactorization::factor_band(const StructuredMatrix& M) {
    auto [kl, ku] = M.bandwidth();
    kl_ = kl;
    ku_ = ku;
    ku_work_ = kl_ + ku_;
    ab_.assign(2 * kl_ + ku_ + 1, Vector(m_, 0.0));
    for (int j = 0; j < m_; ++j)
        for (int i = std::max(0, j - ku_); i <= std::min(m_ - 1, j + kl_); ++i)
            ab_[ku_work_ + i - j][j] = M.entry(i, j);

    Vector rmax(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
        for (int j = std::max(0, i - kl_); j <= std::min(m_ - 1, i + ku_); ++j)
            rmax[i] = std::max(rmax[i], std::abs(M.entry(i, j)));
        if (rmax[i] == 0.0) throw SingularMatrixError(i, "banded LU");
    }

    pivot_.resize(m_);
    for (int j = 0; j < m_; ++j) {
        int ilast = std::min(m_ - 1, j + kl_);
        int imax = j;
        double amax = std::abs(ab_[ku_work_][j]);
        for (int i = j + 1; i <= ilast; ++i) {
            double a = std::abs(ab_[ku_work_ + i - j][j]);
            if (a > amax) {
                amax = a;
                imax = i;
            }
        }
        pivot_[j] = imax;
        if (imax != j) {
            int jlast = std::min(m_ - 1, j + ku_work_);
            for (int jj = j; jj <= jlast; ++jj)
                std::swap(ab_[ku_work_ + j - jj][jj], ab_[ku_work_ + imax - jj][jj]);
            std::swap(rmax[j], rmax[imax]);
        }
        double pv = ab_[ku_work_][j];
        if (std::abs(pv) < kPivotTol * rmax[j]) throw SingularMatrixError(j, "banded LU");
        for (int i = j + 1; i <= ilast; ++i) {
            double mult = ab_[ku_work_ + i - j][j] / pv;
            ab_[ku_work_ + i - j][j] = mult;
            int jlast = std::min(m_ - 1, j + ku_work_);
            for (int jj = j + 1; jj <= jlast; ++jj)
                ab_[ku_work_ + i - jj][jj] -= mult * ab_[ku_work_ + j - jj][jj];
        }
    }
}

Vector BandFactorization::solve(const Vector& rhs) const {
    if (static_cast<int>(rhs.size()) != m_)
        throw DimensionError("solve rhs length", m_, static_cast<long>(rhs.size()));
    Vector x = rhs;
    switch (path_) {
        case SolvePath::Diagonal:
            for (int i = 0; i < m_; ++i) x[i] /= diag_[i];
            return x;
        case SolvePath::BlockThomas:
            for (size_t b = 0; b < thomas_.size(); ++b) {
                const ThomasBlock& tb = thomas_[b];
                double* xs = x.data() + b * p_;
                for (int i = 1; i < p_; ++i) xs[i] -= tb.l[i] * xs[i - 1];
                xs[p_ - 1] /= tb.u[p_ - 1];
                for (int i = p_ - 2; i >= 0; --i) xs[i] = (xs[i] - tb.c[i] * xs[i + 1]) / tb.u[i];
            }
            return x;
        case SolvePath::GeneralBand:
            for (int j = 0; j < m_; ++j) {
                if (pivot_[j] != j) std::swap(x[j], x[pivot_[j]]);
                int ilast = std::min(m_ - 1, j + kl_);
                for (int i = j + 1; i <= ilast; ++i) x[i] -= ab_[ku_work_ + i - j][j] * x[j];
            }
            for (int i = m_ - 1; i >= 0; --i) {
                double acc = x[i];
                int jlast = std::min(m_ - 1, i + ku_work_);
                for (int j = i + 1; j <= jlast; ++j) acc -= ab_[ku_work_ + i - j][j] * x[j];
                x[i] = acc / ab_[ku_work_][i];
            }
            return x;
    }
    return x;
}

void count_solve(SolveTrace& trace, const BandFactorization& F) {
    switch (F.path()) {
        case SolvePath::Diagonal: ++trace.diagonal_solves; break;
        case SolvePath::BlockThomas: ++trace.tridiagonal_solves; break;
        case SolvePath::GeneralBand: ++trace.banded_solves; break;
    }
}

}  // namespace mswr
