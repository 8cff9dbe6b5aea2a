#pragma once

#include "mswr/block_matrix.hpp"

namespace mswr {

// Linear constant-coefficient DAE  A y' + B y = f(t)  on [t0, t0 + steps*h],
// with A allowed to be singular. The forcing is manufactured from a known
// analytic solution so every run can be checked against it.
struct DaeProblem {
    StructuredMatrix A;
    StructuredMatrix B;
    double dcoef = 1.0;
    double t0 = 0.0;
    double h = 0.1;
    int steps = 20;
    Vector y0;

    int p() const { return A.p(); }
    int q() const { return A.q(); }
    int m() const { return A.m(); }
};

// Reference solution [cos t, sin t, t] tiled m/3 times. m must be a multiple
// of 3.
Vector analytic_solution(double t, int m);
Vector analytic_derivative(double t, int m);

// f(t) = A y'(t) + B y(t) for the problem's own A and B.
Vector forcing(const DaeProblem& dae, double t);

// Semi-discretized heat-type test system: A is a block identity with the last
// two block rows zeroed (those components are algebraic), B is the familiar
// block tridiagonal [-I, tridiag(-1,4,-1), -I] scaled by dcoef. Requires
// p >= 1, q >= 3 and p*q divisible by 3. B's nonsingularity is not checked
// here; it surfaces when a solver factorizes the shifted matrices.
DaeProblem build_reference_problem(int p, int q, double dcoef);

}  // namespace mswr
