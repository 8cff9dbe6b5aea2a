#include "mswr/splittings.hpp"

#include <cmath>

#include "mswr/band_solver.hpp"
#include "mswr/errors.hpp"
#include "mswr/format.hpp"

namespace mswr {

namespace {

constexpr double kIdentityTol = 1e-12;

StructuredMatrix scaled_block_identity(int p, int q, int block, double s) {
    StructuredMatrix M(p, q);
    M.set_block(block, block, ScaledIdentity{s});
    return M;
}

// dcoef * block-tridiagonal(I, diag_factor*I, I)
StructuredMatrix block_tridiag_identity(int p, int q, double dcoef, double diag_factor) {
    StructuredMatrix M(p, q);
    for (int b = 0; b < q; ++b) {
        M.set_block(b, b, ScaledIdentity{diag_factor * dcoef});
        if (b + 1 < q) {
            M.set_block(b, b + 1, ScaledIdentity{dcoef});
            M.set_block(b + 1, b, ScaledIdentity{dcoef});
        }
    }
    return M;
}

void check_identity(ValidationReport& rep, const std::string& name, const StructuredMatrix& lhs,
                    double a, const StructuredMatrix& X, double b, const StructuredMatrix& Y) {
    double dev = max_abs_entry_diff(lhs, combine(a, X, b, Y));
    rep.entries.push_back({name, dev <= kIdentityTol, dev,
                           dev <= kIdentityTol ? "" : "max deviation " + format_double(dev)});
}

void check_factorizes(ValidationReport& rep, const std::string& name, const StructuredMatrix& M) {
    try {
        BandFactorization F(M);
        rep.entries.push_back({name, true, 0.0, ""});
    } catch (const SingularMatrixError& e) {
        rep.entries.push_back({name, false, 0.0, e.what()});
    }
}

}  // namespace

bool ValidationReport::passed() const {
    for (const Entry& e : entries)
        if (!e.passed) return false;
    return true;
}

std::string ValidationReport::to_string() const {
    std::string out;
    for (const Entry& e : entries) {
        out += e.passed ? "pass  " : "FAIL  ";
        out += e.name;
        if (!e.detail.empty()) {
            out += ": ";
            out += e.detail;
        }
        out += '\n';
    }
    return out;
}

StageSplittings build_stage_splittings(const DaeProblem& dae, double n1_scale, bool validated) {
    int p = dae.p(), q = dae.q();
    double d = dae.dcoef;

    StructuredMatrix NA = scaled_block_identity(p, q, q - 2, 0.01);
    StructuredMatrix N1base = block_tridiag_identity(p, q, d, 2.0);
    StructuredMatrix N1 = combine(n1_scale, N1base, 0.0, N1base);
    StructuredMatrix MA = combine(1.0, dae.A, 1.0, NA);
    StructuredMatrix M1 = combine(1.0, dae.B, 1.0, N1);

    StructuredMatrix M2(p, q), M3(p, q);
    for (int b = 0; b < q; ++b) {
        M2.set_block(b, b, ScaledIdentity{8.0 * d});
        M3.set_block(b, b, ScaledIdentity{10.0 * d});
    }
    StructuredMatrix N2 = combine(1.0, M2, -1.0, M1);
    StructuredMatrix N3 = combine(1.0, M3, -1.0, M2);

    StageSplittings s{std::move(MA), std::move(NA), std::move(M1), std::move(N1),
                      std::move(M2), std::move(N2), std::move(M3), std::move(N3)};
    if (validated) {
        ValidationReport rep = validate_stage(s, dae.A, dae.B, dae.h);
        if (!rep.passed()) throw ValidationError("stage splitting rejected:\n" + rep.to_string());
    }
    return s;
}

ValidationReport validate_stage(const StageSplittings& s, const StructuredMatrix& A,
                                const StructuredMatrix& B, double h) {
    ValidationReport rep;
    check_identity(rep, "A = M_A - N_A", A, 1.0, s.MA, -1.0, s.NA);
    check_identity(rep, "B = M_1 - N_1", B, 1.0, s.M1, -1.0, s.N1);
    check_identity(rep, "M_1 = M_2 - N_2", s.M1, 1.0, s.M2, -1.0, s.N2);
    check_identity(rep, "M_2 = M_3 - N_3", s.M2, 1.0, s.M3, -1.0, s.N3);
    check_factorizes(rep, "M_A + h M_1 nonsingular", combine(1.0, s.MA, h, s.M1));
    check_factorizes(rep, "M_A + h M_2 nonsingular", combine(1.0, s.MA, h, s.M2));
    check_factorizes(rep, "M_A + h M_3 nonsingular", combine(1.0, s.MA, h, s.M3));
    return rep;
}

std::array<SubproblemSplitting, 2> build_subproblem_splittings(const DaeProblem& dae,
                                                               double n1_scale, bool validated) {
    int p = dae.p(), q = dae.q();
    double d = dae.dcoef;

    std::array<SubproblemSplitting, 2> subs{
        SubproblemSplitting{1, scaled_block_identity(p, q, q - 2, 0.01), StructuredMatrix(p, q),
                            block_tridiag_identity(p, q, d, 2.0), StructuredMatrix(p, q)},
        SubproblemSplitting{2, scaled_block_identity(p, q, q - 1, 0.01), StructuredMatrix(p, q),
                            block_tridiag_identity(p, q, d, 3.0), StructuredMatrix(p, q)},
    };
    for (SubproblemSplitting& s : subs) {
        s.N1 = combine(n1_scale, s.N1, 0.0, s.N1);
        s.MA = combine(1.0, dae.A, 1.0, s.NA);
        s.M1 = combine(1.0, dae.B, 1.0, s.N1);
        if (!validated) continue;
        ValidationReport rep = validate_subproblem(s, dae.A, dae.B, dae.h);
        if (!rep.passed())
            throw ValidationError("subproblem splitting rejected:\n" + rep.to_string());
    }
    return subs;
}

ValidationReport validate_subproblem(const SubproblemSplitting& s, const StructuredMatrix& A,
                                     const StructuredMatrix& B, double h) {
    std::string l = std::to_string(s.index);
    ValidationReport rep;
    check_identity(rep, "M_A_" + l + " = A + N_A_" + l, s.MA, 1.0, A, 1.0, s.NA);
    check_identity(rep, "M_1_" + l + " = B + N_1_" + l, s.M1, 1.0, B, 1.0, s.N1);
    // the collapse behind the stationarity of every multisplitting variant
    StructuredMatrix lhs = combine(1.0, s.MA, h, s.M1);
    StructuredMatrix ahb = combine(1.0, A, h, B);
    check_identity(rep, "(M_A_" + l + " + h M_1_" + l + ") - (h N_1_" + l + " + N_A_" + l +
                            ") = A + h B",
                   ahb, 1.0, lhs, -1.0, combine(h, s.N1, 1.0, s.NA));
    check_factorizes(rep, "M_A_" + l + " + h M_1_" + l + " nonsingular", lhs);
    return rep;
}

PartitionOfUnity build_partition(int m, int p, int o, const std::array<double, 4>& alphas) {
    (void)p;
    auto [a1, a2, a3, a4] = alphas;
    for (int i = 0; i < 4; ++i)
        if (alphas[i] < 0.0)
            throw ConfigError("alpha" + std::to_string(i + 1) + " = " + format_double(alphas[i]) +
                              " < 0");
    if (a1 + a2 != 1.0)
        throw ConfigError("alpha1 + alpha2 = " + format_double(a1 + a2) + " != 1");
    if (a3 + a4 != 1.0)
        throw ConfigError("alpha3 + alpha4 = " + format_double(a3 + a4) + " != 1");
    if (m < 3) throw ConfigError("partition needs m >= 3");

    PartitionOfUnity P;
    P.overlap = o;
    P.alphas = alphas;
    for (auto& row : P.E)
        for (auto& e : row) e.assign(m, 0.0);

    if (o == 1) {
        // one shared row in the middle; odd m puts it at (m-1)/2
        int shared = (m + 1) / 2 - 1;
        for (int i = 0; i < m; ++i) {
            double lead1 = i < shared ? 1.0 : (i == shared ? a1 : 0.0);
            double lead3 = i < shared ? 1.0 : (i == shared ? a3 : 0.0);
            P.E[0][0][i] = lead1;
            P.E[0][1][i] = i == shared ? a2 : 1.0 - lead1;
            P.E[1][0][i] = lead3;
            P.E[1][1][i] = i == shared ? a4 : 1.0 - lead3;
        }
    } else if (m % 2 == 0 && o == m / 2 - 1) {
        for (int i = 0; i < m; ++i) {
            bool interior = i > 0 && i < m - 1;
            P.E[0][0][i] = interior ? a1 : (i == 0 ? 1.0 : 0.0);
            P.E[0][1][i] = interior ? a2 : (i == 0 ? 0.0 : 1.0);
            P.E[1][0][i] = interior ? a3 : (i == 0 ? 1.0 : 0.0);
            P.E[1][1][i] = interior ? a4 : (i == 0 ? 0.0 : 1.0);
        }
    } else {
        throw ConfigError("overlap o = " + std::to_string(o) + " not in {1, m/2 - 1} for m = " +
                          std::to_string(m));
    }
    return P;
}

ValidationReport validate_partition(const PartitionOfUnity& P) {
    ValidationReport rep;
    auto [a1, a2, a3, a4] = P.alphas;

    for (int l = 0; l < 2; ++l) {
        bool exact = true;
        double dev = 0.0;
        for (size_t i = 0; i < P.E[l][0].size(); ++i) {
            double sum = P.E[l][0][i] + P.E[l][1][i];
            if (sum != 1.0) exact = false;
            dev = std::max(dev, std::abs(sum - 1.0));
        }
        rep.entries.push_back({"row " + std::to_string(l + 1) + " sums exactly to identity", exact,
                               dev, exact ? "" : "max deviation " + format_double(dev)});
    }

    bool nonneg = true;
    double worst = 0.0;
    for (const auto& row : P.E)
        for (const auto& e : row)
            for (double x : e)
                if (x < 0.0) {
                    nonneg = false;
                    worst = std::min(worst, x);
                }
    rep.entries.push_back({"weights nonnegative", nonneg, std::abs(worst),
                           nonneg ? "" : "smallest weight " + format_double(worst)});

    bool s12 = a1 + a2 == 1.0;
    rep.entries.push_back({"alpha1 + alpha2 = 1", s12, std::abs(a1 + a2 - 1.0),
                           s12 ? "" : "alpha1 + alpha2 = " + format_double(a1 + a2) + " != 1"});
    bool s34 = a3 + a4 == 1.0;
    rep.entries.push_back({"alpha3 + alpha4 = 1", s34, std::abs(a3 + a4 - 1.0),
                           s34 ? "" : "alpha3 + alpha4 = " + format_double(a3 + a4) + " != 1"});
    bool apos = a1 >= 0.0 && a2 >= 0.0 && a3 >= 0.0 && a4 >= 0.0;
    rep.entries.push_back({"alphas nonnegative", apos, 0.0, ""});
    return rep;
}

}  // namespace mswr
