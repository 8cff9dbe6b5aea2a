#include "mswr/dae_problem.hpp"

#include <cmath>

#include "mswr/errors.hpp"

namespace mswr {

Vector analytic_solution(double t, int m) {
    if (m < 3 || m % 3 != 0) throw ConfigError("analytic solution needs m divisible by 3");
    Vector y(m);
    for (int i = 0; i < m; i += 3) {
        y[i] = std::cos(t);
        y[i + 1] = std::sin(t);
        y[i + 2] = t;
    }
    return y;
}

Vector analytic_derivative(double t, int m) {
    if (m < 3 || m % 3 != 0) throw ConfigError("analytic solution needs m divisible by 3");
    Vector dy(m);
    for (int i = 0; i < m; i += 3) {
        dy[i] = -std::sin(t);
        dy[i + 1] = std::cos(t);
        dy[i + 2] = 1.0;
    }
    return dy;
}

Vector forcing(const DaeProblem& dae, double t) {
    Vector f = matvec(dae.A, analytic_derivative(t, dae.m()));
    Vector by = matvec(dae.B, analytic_solution(t, dae.m()));
    for (int i = 0; i < dae.m(); ++i) f[i] += by[i];
    return f;
}

DaeProblem build_reference_problem(int p, int q, double dcoef) {
    if (p < 1) throw ConfigError("p must be at least 1");
    if (q < 3) throw ConfigError("q must be at least 3");
    if ((static_cast<long>(p) * q) % 3 != 0) throw ConfigError("p*q must be divisible by 3");

    StructuredMatrix A(p, q);
    for (int b = 0; b < q - 2; ++b) A.set_block(b, b, ScaledIdentity{1.0});

    StructuredMatrix B(p, q);
    for (int b = 0; b < q; ++b) {
        B.set_block(b, b, TridiagBlock{-dcoef, 4.0 * dcoef, -dcoef});
        if (b + 1 < q) {
            B.set_block(b, b + 1, ScaledIdentity{-dcoef});
            B.set_block(b + 1, b, ScaledIdentity{-dcoef});
        }
    }

    DaeProblem dae{std::move(A), std::move(B), dcoef, 0.0, 0.1, 20, {}};
    dae.y0 = analytic_solution(dae.t0, p * q);
    return dae;
}

}  // namespace mswr
