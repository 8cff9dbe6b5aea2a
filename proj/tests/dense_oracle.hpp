// Independent dense reference implementations for the tests. Everything here
// is written directly against the problem definitions with plain loops and
// dense storage, deliberately sharing no code with the library under test.

#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

inline Mat zeros(int n) { return Mat(n, Vec(n, 0.0)); }

inline Mat eye(int n, double s = 1.0) {
    Mat a = zeros(n);
    for (int i = 0; i < n; ++i) a[i][i] = s;
    return a;
}

inline Mat add(const Mat& a, const Mat& b, double sb = 1.0) {
    int n = static_cast<int>(a.size());
    Mat c = zeros(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c[i][j] = a[i][j] + sb * b[i][j];
    return c;
}

inline Mat scale(double s, const Mat& a) {
    Mat c = a;
    for (auto& row : c)
        for (double& x : row) x *= s;
    return c;
}

inline Vec matvec(const Mat& a, const Vec& x) {
    int n = static_cast<int>(a.size());
    Vec y(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) y[i] += a[i][j] * x[j];
    return y;
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// dense LU with partial pivoting, for small systems only
inline Vec lu_solve(Mat a, Vec b) {
    int n = static_cast<int>(a.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (a[piv][k] == 0.0) throw std::runtime_error("oracle: singular matrix");
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            double l = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= l * a[k][j];
            b[i] -= l * b[k];
        }
    }
    Vec x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

// A has p x p identity blocks 0 .. q-3 and zero blocks q-2, q-1
inline Mat build_A(int p, int q) {
    int m = p * q;
    Mat a = zeros(m);
    for (int b = 0; b <= q - 3; ++b)
        for (int i = 0; i < p; ++i) a[b * p + i][b * p + i] = 1.0;
    return a;
}

// B is d times the block tridiagonal matrix with tridiag(-1, 4, -1) diagonal
// blocks and -I off-diagonal blocks
inline Mat build_B(int p, int q, double d) {
    int m = p * q;
    Mat a = zeros(m);
    for (int b = 0; b < q; ++b) {
        for (int i = 0; i < p; ++i) {
            int r = b * p + i;
            a[r][r] = 4.0 * d;
            if (i > 0) a[r][r - 1] = -d;
            if (i + 1 < p) a[r][r + 1] = -d;
            if (b > 0) a[r][r - p] = -d;
            if (b + 1 < q) a[r][r + p] = -d;
        }
    }
    return a;
}

// 0.01 I restricted to one diagonal block
inline Mat build_NA(int p, int q, int block) {
    Mat a = zeros(p * q);
    for (int i = 0; i < p; ++i) a[block * p + i][block * p + i] = 0.01;
    return a;
}

// d times the block tridiagonal matrix with diag_factor * I diagonal blocks
// and +I off-diagonal blocks
inline Mat build_N1(int p, int q, double d, double diag_factor) {
    int m = p * q;
    Mat a = zeros(m);
    for (int b = 0; b < q; ++b) {
        for (int i = 0; i < p; ++i) {
            int r = b * p + i;
            a[r][r] = diag_factor * d;
            if (b > 0) a[r][r - p] = d;
            if (b + 1 < q) a[r][r + p] = d;
        }
    }
    return a;
}

inline Vec analytic(double t, int m) {
    Vec y(m);
    for (int i = 0; i < m; i += 3) {
        y[i] = std::cos(t);
        y[i + 1] = std::sin(t);
        y[i + 2] = t;
    }
    return y;
}

inline Vec analytic_deriv(double t, int m) {
    Vec y(m);
    for (int i = 0; i < m; i += 3) {
        y[i] = -std::sin(t);
        y[i + 1] = std::cos(t);
        y[i + 2] = 1.0;
    }
    return y;
}

inline Vec forcing(const Mat& A, const Mat& B, double t) {
    int m = static_cast<int>(A.size());
    Vec f = matvec(A, analytic_deriv(t, m));
    Vec g = matvec(B, analytic(t, m));
    for (int i = 0; i < m; ++i) f[i] += g[i];
    return f;
}

// implicit Euler on A y' + B y = f with the analytic forcing
inline std::vector<Vec> direct_euler(const Mat& A, const Mat& B, const Vec& y0, double t0,
                                     double h, int steps) {
    int m = static_cast<int>(A.size());
    Mat F = add(A, B, h);
    std::vector<Vec> out{y0};
    Vec y = y0;
    for (int n = 0; n < steps; ++n) {
        Vec rhs = matvec(A, y);
        Vec f = forcing(A, B, t0 + (n + 1) * h);
        for (int i = 0; i < m; ++i) rhs[i] += h * f[i];
        y = lu_solve(F, rhs);
        out.push_back(y);
    }
    return out;
}

struct StageMats {
    Mat MA, NA, M1, N1, M2, N2, M3, N3;
};

inline StageMats build_stage(int p, int q, double d, double n1_scale = 1.0) {
    StageMats s;
    Mat A = build_A(p, q);
    Mat B = build_B(p, q, d);
    s.NA = build_NA(p, q, q - 2);
    s.MA = add(A, s.NA);
    s.N1 = scale(n1_scale, build_N1(p, q, d, 2.0));
    s.M1 = add(B, s.N1);
    s.M2 = eye(p * q, 8.0 * d);
    s.N2 = add(s.M2, s.M1, -1.0);
    s.M3 = eye(p * q, 10.0 * d);
    s.N3 = add(s.M3, s.M2, -1.0);
    return s;
}

// one/two/three stage waveform relaxation over one implicit Euler step,
// written out exactly as the nested recurrences with fixed iteration counts
inline Vec wr_step_fixed(const StageMats& s, const Mat& A, const Mat& B, const Vec& yn, double h,
                         const Vec& f_next, int depth, int K, int nu, int mu) {
    int m = static_cast<int>(A.size());
    Mat F1 = add(s.MA, s.M1, h);
    Mat F2 = add(s.MA, s.M2, h);
    Mat F3 = add(s.MA, s.M3, h);
    Vec c = matvec(s.MA, yn);
    Vec nay = matvec(s.NA, yn);
    for (int i = 0; i < m; ++i) c[i] += -nay[i] + h * f_next[i];

    Vec y = yn;
    for (int k = 0; k < K; ++k) {
        Vec r1 = matvec(s.N1, y);
        Vec na = matvec(s.NA, y);
        Vec base(m);
        for (int i = 0; i < m; ++i) base[i] = h * r1[i] + na[i] + c[i];
        if (depth == 1) {
            y = lu_solve(F1, base);
            continue;
        }
        Vec z = y;
        for (int v = 0; v < nu; ++v) {
            Vec n2z = matvec(s.N2, z);
            if (depth == 2) {
                Vec rhs(m);
                for (int i = 0; i < m; ++i) rhs[i] = h * n2z[i] + base[i];
                z = lu_solve(F2, rhs);
                continue;
            }
            Vec zt = z;
            for (int u = 0; u < mu; ++u) {
                Vec n3z = matvec(s.N3, zt);
                Vec rhs(m);
                for (int i = 0; i < m; ++i) rhs[i] = h * n3z[i] + h * n2z[i] + base[i];
                zt = lu_solve(F3, rhs);
            }
            z = zt;
        }
        y = z;
    }
    return y;
}

}  // namespace oracle
