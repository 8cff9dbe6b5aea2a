#include "mswr/block_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace mswr {

namespace {

BlockKind scale_kind(double c, const BlockKind& k, int p) {
    if (c == 0.0) return ZeroBlock{};
    if (std::holds_alternative<ZeroBlock>(k)) return ZeroBlock{};
    if (const auto* si = std::get_if<ScaledIdentity>(&k)) return ScaledIdentity{c * si->s};
    if (const auto* tr = std::get_if<TridiagBlock>(&k))
        return TridiagBlock{c * tr->sub, c * tr->diag, c * tr->sup};
    if (const auto* dg = std::get_if<DiagonalBlock>(&k)) {
        DiagonalBlock out = *dg;
        for (double& x : out.d) x *= c;
        return out;
    }
    DenseBlock out = std::get<DenseBlock>(k);
    for (double& x : out.a) x *= c;
    (void)p;
    return out;
}

DenseBlock densify(const BlockKind& k, int p) {
    DenseBlock out;
    out.a.assign(static_cast<size_t>(p) * p, 0.0);
    if (std::holds_alternative<ZeroBlock>(k)) return out;
    if (const auto* si = std::get_if<ScaledIdentity>(&k)) {
        for (int i = 0; i < p; ++i) out.a[static_cast<size_t>(i) * p + i] = si->s;
        return out;
    }
    if (const auto* tr = std::get_if<TridiagBlock>(&k)) {
        for (int i = 0; i < p; ++i) {
            out.a[static_cast<size_t>(i) * p + i] = tr->diag;
            if (i + 1 < p) {
                out.a[static_cast<size_t>(i) * p + i + 1] = tr->sup;
                out.a[static_cast<size_t>(i + 1) * p + i] = tr->sub;
            }
        }
        return out;
    }
    if (const auto* dg = std::get_if<DiagonalBlock>(&k)) {
        for (int i = 0; i < p; ++i) out.a[static_cast<size_t>(i) * p + i] = dg->d[i];
        return out;
    }
    return std::get<DenseBlock>(k);
}

// a*X + b*Y for one block pair, preserving value exactly and keeping the
// narrowest kind that can represent the sum.
BlockKind combine_kind(double a, const BlockKind& X, double b, const BlockKind& Y, int p) {
    if (std::holds_alternative<ZeroBlock>(X)) return scale_kind(b, Y, p);
    if (std::holds_alternative<ZeroBlock>(Y)) return scale_kind(a, X, p);

    const auto* xsi = std::get_if<ScaledIdentity>(&X);
    const auto* ysi = std::get_if<ScaledIdentity>(&Y);
    const auto* xtr = std::get_if<TridiagBlock>(&X);
    const auto* ytr = std::get_if<TridiagBlock>(&Y);
    const auto* xdg = std::get_if<DiagonalBlock>(&X);
    const auto* ydg = std::get_if<DiagonalBlock>(&Y);

    if (xsi && ysi) return ScaledIdentity{a * xsi->s + b * ysi->s};
    if (xsi && ytr) return TridiagBlock{b * ytr->sub, a * xsi->s + b * ytr->diag, b * ytr->sup};
    if (xtr && ysi) return TridiagBlock{a * xtr->sub, a * xtr->diag + b * ysi->s, a * xtr->sup};
    if (xtr && ytr)
        return TridiagBlock{a * xtr->sub + b * ytr->sub, a * xtr->diag + b * ytr->diag,
                            a * xtr->sup + b * ytr->sup};
    if ((xsi || xdg) && (ysi || ydg)) {
        DiagonalBlock out;
        out.d.resize(p);
        for (int i = 0; i < p; ++i) {
            double xv = xsi ? xsi->s : xdg->d[i];
            double yv = ysi ? ysi->s : ydg->d[i];
            out.d[i] = a * xv + b * yv;
        }
        return out;
    }

    DenseBlock dx = densify(X, p), dy = densify(Y, p);
    DenseBlock out;
    out.a.resize(dx.a.size());
    for (size_t i = 0; i < out.a.size(); ++i) out.a[i] = a * dx.a[i] + b * dy.a[i];
    return out;
}

}  // namespace

StructuredMatrix::StructuredMatrix(int p, int q) : p_(p), q_(q) {
    if (p < 1 || q < 1) throw ConfigError("block sizes must be positive");
    blocks_.assign(static_cast<size_t>(q) * q, ZeroBlock{});
}

const BlockKind& StructuredMatrix::block(int bi, int bj) const {
    return blocks_[static_cast<size_t>(bi) * q_ + bj];
}

void StructuredMatrix::set_block(int bi, int bj, BlockKind k) {
    if (bi < 0 || bi >= q_ || bj < 0 || bj >= q_) throw DimensionError("block index", bi, bj);
    if (const auto* tr = std::get_if<TridiagBlock>(&k)) {
        if (p_ == 1 || (tr->sub == 0.0 && tr->sup == 0.0)) k = ScaledIdentity{tr->diag};
    }
    if (const auto* dg = std::get_if<DiagonalBlock>(&k)) {
        if (static_cast<int>(dg->d.size()) != p_)
            throw DimensionError("diagonal block length", static_cast<long>(dg->d.size()), p_);
    }
    if (const auto* de = std::get_if<DenseBlock>(&k)) {
        if (static_cast<long>(de->a.size()) != static_cast<long>(p_) * p_)
            throw DimensionError("dense block size", static_cast<long>(de->a.size()),
                                 static_cast<long>(p_) * p_);
    }
    if (const auto* si = std::get_if<ScaledIdentity>(&k)) {
        if (si->s == 0.0) k = ZeroBlock{};
    }
    if (const auto* dg = std::get_if<DiagonalBlock>(&k)) {
        if (std::all_of(dg->d.begin(), dg->d.end(), [](double x) { return x == 0.0; }))
            k = ZeroBlock{};
    }
    blocks_[static_cast<size_t>(bi) * q_ + bj] = std::move(k);
}

double StructuredMatrix::entry(int i, int j) const {
    const BlockKind& k = block(i / p_, j / p_);
    int ii = i % p_, jj = j % p_;
    if (std::holds_alternative<ZeroBlock>(k)) return 0.0;
    if (const auto* si = std::get_if<ScaledIdentity>(&k)) return ii == jj ? si->s : 0.0;
    if (const auto* tr = std::get_if<TridiagBlock>(&k)) {
        if (ii == jj) return tr->diag;
        if (ii == jj + 1) return tr->sub;
        if (ii + 1 == jj) return tr->sup;
        return 0.0;
    }
    if (const auto* dg = std::get_if<DiagonalBlock>(&k)) return ii == jj ? dg->d[ii] : 0.0;
    return std::get<DenseBlock>(k).a[static_cast<size_t>(ii) * p_ + jj];
}

bool StructuredMatrix::is_diagonal() const {
    for (int bi = 0; bi < q_; ++bi)
        for (int bj = 0; bj < q_; ++bj) {
            const BlockKind& k = block(bi, bj);
            if (bi != bj) {
                if (!std::holds_alternative<ZeroBlock>(k)) return false;
            } else if (!std::holds_alternative<ZeroBlock>(k) &&
                       !std::holds_alternative<ScaledIdentity>(k) &&
                       !std::holds_alternative<DiagonalBlock>(k)) {
                return false;
            }
        }
    return true;
}

bool StructuredMatrix::is_block_diag_tridiagonal() const {
    for (int bi = 0; bi < q_; ++bi)
        for (int bj = 0; bj < q_; ++bj) {
            const BlockKind& k = block(bi, bj);
            if (bi != bj) {
                if (!std::holds_alternative<ZeroBlock>(k)) return false;
            } else if (std::holds_alternative<DenseBlock>(k)) {
                return false;
            }
        }
    return true;
}

std::pair<int, int> StructuredMatrix::bandwidth() const {
    int kl = 0, ku = 0;
    for (int bi = 0; bi < q_; ++bi)
        for (int bj = 0; bj < q_; ++bj) {
            const BlockKind& k = block(bi, bj);
            if (std::holds_alternative<ZeroBlock>(k)) continue;
            int off = (bi - bj) * p_;  // scalar offset of the block diagonal
            int lo = 0, hi = 0;        // band of the block's own content
            if (const auto* tr = std::get_if<TridiagBlock>(&k)) {
                lo = tr->sub != 0.0 ? 1 : 0;
                hi = tr->sup != 0.0 ? 1 : 0;
            } else if (const auto* de = std::get_if<DenseBlock>(&k)) {
                for (int ii = 0; ii < p_; ++ii)
                    for (int jj = 0; jj < p_; ++jj)
                        if (de->a[static_cast<size_t>(ii) * p_ + jj] != 0.0) {
                            lo = std::max(lo, ii - jj);
                            hi = std::max(hi, jj - ii);
                        }
            }
            kl = std::max(kl, off + lo);
            ku = std::max(ku, -off + hi);
        }
    return {kl, ku};
}

std::vector<double> StructuredMatrix::to_dense() const {
    if (m() > 64) throw Error("dense expansion is limited to m <= 64");
    std::vector<double> out(static_cast<size_t>(m()) * m(), 0.0);
    for (int i = 0; i < m(); ++i)
        for (int j = 0; j < m(); ++j) out[static_cast<size_t>(i) * m() + j] = entry(i, j);
    return out;
}

Vector matvec(const StructuredMatrix& M, const Vector& v) {
    if (static_cast<int>(v.size()) != M.m())
        throw DimensionError("matvec operand length", M.m(), static_cast<long>(v.size()));
    int p = M.p(), q = M.q();
    Vector out(M.m(), 0.0);
    for (int bi = 0; bi < q; ++bi) {
        double* o = out.data() + static_cast<size_t>(bi) * p;
        for (int bj = 0; bj < q; ++bj) {
            const BlockKind& k = M.block(bi, bj);
            if (std::holds_alternative<ZeroBlock>(k)) continue;
            const double* x = v.data() + static_cast<size_t>(bj) * p;
            if (const auto* si = std::get_if<ScaledIdentity>(&k)) {
                for (int i = 0; i < p; ++i) o[i] += si->s * x[i];
            } else if (const auto* tr = std::get_if<TridiagBlock>(&k)) {
                for (int i = 0; i < p; ++i) {
                    double acc = tr->diag * x[i];
                    if (i > 0) acc += tr->sub * x[i - 1];
                    if (i + 1 < p) acc += tr->sup * x[i + 1];
                    o[i] += acc;
                }
            } else if (const auto* dg = std::get_if<DiagonalBlock>(&k)) {
                for (int i = 0; i < p; ++i) o[i] += dg->d[i] * x[i];
            } else {
                const auto& a = std::get<DenseBlock>(k).a;
                for (int i = 0; i < p; ++i) {
                    double acc = 0.0;
                    for (int j = 0; j < p; ++j) acc += a[static_cast<size_t>(i) * p + j] * x[j];
                    o[i] += acc;
                }
            }
        }
    }
    return out;
}

StructuredMatrix combine(double a, const StructuredMatrix& M, double b, const StructuredMatrix& N) {
    if (M.p() != N.p() || M.q() != N.q())
        throw DimensionError("combine operand shape", M.m(), N.m());
    StructuredMatrix out(M.p(), M.q());
    for (int bi = 0; bi < M.q(); ++bi)
        for (int bj = 0; bj < M.q(); ++bj)
            out.set_block(bi, bj, combine_kind(a, M.block(bi, bj), b, N.block(bi, bj), M.p()));
    return out;
}

StructuredMatrix scale_columns(const StructuredMatrix& M, const Vector& w) {
    if (static_cast<int>(w.size()) != M.m())
        throw DimensionError("scale_columns weight length", M.m(), static_cast<long>(w.size()));
    int p = M.p(), q = M.q();
    StructuredMatrix out(p, q);
    for (int bi = 0; bi < q; ++bi)
        for (int bj = 0; bj < q; ++bj) {
            const BlockKind& k = M.block(bi, bj);
            if (std::holds_alternative<ZeroBlock>(k)) continue;
            const double* ws = w.data() + static_cast<size_t>(bj) * p;
            if (const auto* si = std::get_if<ScaledIdentity>(&k)) {
                DiagonalBlock dg;
                dg.d.resize(p);
                for (int i = 0; i < p; ++i) dg.d[i] = si->s * ws[i];
                out.set_block(bi, bj, std::move(dg));
            } else if (const auto* dg = std::get_if<DiagonalBlock>(&k)) {
                DiagonalBlock nd = *dg;
                for (int i = 0; i < p; ++i) nd.d[i] *= ws[i];
                out.set_block(bi, bj, std::move(nd));
            } else {
                DenseBlock de = densify(k, p);
                for (int i = 0; i < p; ++i)
                    for (int j = 0; j < p; ++j) de.a[static_cast<size_t>(i) * p + j] *= ws[j];
                out.set_block(bi, bj, std::move(de));
            }
        }
    return out;
}

double max_abs_entry_diff(const StructuredMatrix& M, const StructuredMatrix& N) {
    if (M.p() != N.p() || M.q() != N.q()) throw DimensionError("entry diff shape", M.m(), N.m());
    double worst = 0.0;
    for (int i = 0; i < M.m(); ++i)
        for (int j = 0; j < M.m(); ++j)
            worst = std::max(worst, std::abs(M.entry(i, j) - N.entry(i, j)));
    return worst;
}

}  // namespace mswr
