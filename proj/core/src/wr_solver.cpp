#include "mswr/wr_solver.hpp"

#include <memory>

#include "mswr/format.hpp"

namespace mswr {

StoppingCriterion StoppingCriterion::error_bound(double tol, int cap) {
    if (tol <= 0.0) throw ConfigError("tolerance must be positive");
    if (cap < 1) throw ConfigError("iteration cap must be at least 1");
    StoppingCriterion s;
    s.kind = Kind::ErrorBound;
    s.tol = tol;
    s.cap = cap;
    return s;
}

StoppingCriterion StoppingCriterion::fixed_iters(int K, int nu, int mu) {
    if (K < 1 || nu < 1 || mu < 1) throw ConfigError("iteration counts must be at least 1");
    StoppingCriterion s;
    s.kind = Kind::FixedIters;
    s.K = K;
    s.nu = nu;
    s.mu = mu;
    return s;
}

Trajectory direct_euler(const DaeProblem& dae, SolveTrace* trace) {
    BandFactorization F(combine(1.0, dae.A, dae.h, dae.B));
    if (trace) ++trace->factorizations;
    Trajectory traj{dae.t0, dae.h, {dae.y0}};
    traj.states.reserve(dae.steps + 1);
    for (int n = 0; n < dae.steps; ++n) {
        Vector rhs = matvec(dae.A, traj.states.back());
        Vector f = forcing(dae, dae.t0 + (n + 1) * dae.h);
        for (int i = 0; i < dae.m(); ++i) rhs[i] += dae.h * f[i];
        if (trace) {
            count_solve(*trace, F);
            trace->steps.push_back({1, 0, 0, 0.0});
        }
        traj.states.push_back(F.solve(rhs));
    }
    return traj;
}

namespace {

const StructuredMatrix& stage_matrix(const StageSplittings& s, StageDepth depth) {
    switch (depth) {
        case StageDepth::One: return s.M1;
        case StageDepth::Two: return s.M2;
        case StageDepth::Three: return s.M3;
    }
    return s.M1;
}

struct WrContext {
    const DaeProblem& dae;
    const StageSplittings& s;
    StageDepth depth;
    const StoppingCriterion& stop;
    StructuredMatrix R1;  // h N_1 + N_A
    BandFactorization F;  // of M_A + h M_depth
    SolveTrace trace;

    bool tol_mode() const { return stop.kind == StoppingCriterion::Kind::ErrorBound; }
    int outer_limit() const { return tol_mode() ? stop.cap : stop.K; }
    int inner_limit() const { return tol_mode() ? stop.cap : stop.nu; }
    int innermost_limit() const { return tol_mode() ? stop.cap : stop.mu; }
};

// One outer iteration at the configured depth: from outer iterate y to the
// next one, accumulating inner counts. rhs_base = (h N_1 + N_A) y + c stays
// fixed while the z levels iterate.
Vector outer_update(WrContext& ctx, const Vector& y, const Vector& c, StepRecord& rec) {
    double h = ctx.dae.h;
    Vector rhs_base = matvec(ctx.R1, y);
    for (size_t i = 0; i < rhs_base.size(); ++i) rhs_base[i] += c[i];
    if (ctx.depth == StageDepth::One) {
        count_solve(ctx.trace, ctx.F);
        return ctx.F.solve(rhs_base);
    }

    Vector z = y;
    for (int j = 0; j < ctx.inner_limit(); ++j) {
        Vector zn;
        if (ctx.depth == StageDepth::Two) {
            Vector rhs = matvec(ctx.s.N2, z);
            for (size_t i = 0; i < rhs.size(); ++i) rhs[i] = h * rhs[i] + rhs_base[i];
            count_solve(ctx.trace, ctx.F);
            zn = ctx.F.solve(rhs);
        } else {
            Vector n2z = matvec(ctx.s.N2, z);
            Vector zt = z;
            for (int i2 = 0; i2 < ctx.innermost_limit(); ++i2) {
                Vector rhs = matvec(ctx.s.N3, zt);
                for (size_t i = 0; i < rhs.size(); ++i)
                    rhs[i] = h * rhs[i] + h * n2z[i] + rhs_base[i];
                count_solve(ctx.trace, ctx.F);
                Vector ztn = ctx.F.solve(rhs);
                ++rec.innermost;
                if (ctx.tol_mode()) {
                    double d = diff_norm2(ztn, zt);
                    zt = std::move(ztn);
                    if (d <= ctx.stop.tol) break;
                } else {
                    zt = std::move(ztn);
                }
            }
            zn = std::move(zt);
        }
        ++rec.inner;
        if (ctx.tol_mode()) {
            double d = diff_norm2(zn, z);
            z = std::move(zn);
            if (d <= ctx.stop.tol) break;
        } else {
            z = std::move(zn);
        }
    }
    return z;
}

std::pair<Trajectory, SolveTrace> run_stepwise(WrContext& ctx) {
    const DaeProblem& dae = ctx.dae;
    Trajectory traj{dae.t0, dae.h, {dae.y0}};
    traj.states.reserve(dae.steps + 1);
    for (int n = 0; n < dae.steps; ++n) {
        const Vector& yn = traj.states.back();
        Vector c = matvec(ctx.s.MA, yn);
        Vector nay = matvec(ctx.s.NA, yn);
        Vector f = forcing(dae, dae.t0 + (n + 1) * dae.h);
        for (int i = 0; i < dae.m(); ++i) c[i] += dae.h * f[i] - nay[i];

        Vector y = yn;
        StepRecord rec;
        bool converged = false;
        double upd = 0.0;
        for (int k = 0; k < ctx.outer_limit(); ++k) {
            Vector ynew = outer_update(ctx, y, c, rec);
            upd = diff_norm2(ynew, y);
            y = std::move(ynew);
            ++rec.outer;
            if (ctx.tol_mode() && upd <= ctx.stop.tol) {
                converged = true;
                break;
            }
        }
        rec.final_update = upd;
        ctx.trace.steps.push_back(rec);
        if (ctx.tol_mode() && !converged)
            throw ConvergenceError("waveform relaxation stalled at time step " +
                                       std::to_string(n + 1) + ": update " + format_double(upd) +
                                       " after " + std::to_string(ctx.stop.cap) + " iterations",
                                   n + 1, upd, ctx.trace);
        traj.states.push_back(std::move(y));
    }
    return {std::move(traj), std::move(ctx.trace)};
}

std::pair<Trajectory, SolveTrace> run_windowed(WrContext& ctx) {
    const DaeProblem& dae = ctx.dae;
    double h = dae.h;
    int J = dae.steps;
    std::vector<Vector> f(J);
    for (int n = 0; n < J; ++n) f[n] = forcing(dae, dae.t0 + (n + 1) * h);

    std::vector<Vector> Y(J + 1, dae.y0);

    // one window sweep of the current z level; prev_z is the deeper level's
    // previous waveform (null for depth one), outer is y^k
    auto sweep = [&](const std::vector<Vector>& z, const std::vector<Vector>* prev_z,
                     const std::vector<Vector>& outer) {
        std::vector<Vector> zn = z;
        zn[0] = dae.y0;
        for (int n = 0; n < J; ++n) {
            Vector rhs = matvec(ctx.R1, outer[n + 1]);
            Vector man = matvec(ctx.s.MA, zn[n]);
            Vector nan = matvec(ctx.s.NA, outer[n]);
            for (int i = 0; i < dae.m(); ++i) rhs[i] += man[i] - nan[i] + h * f[n][i];
            if (ctx.depth != StageDepth::One) {
                Vector n2z = matvec(ctx.s.N2, (prev_z ? *prev_z : z)[n + 1]);
                for (int i = 0; i < dae.m(); ++i) rhs[i] += h * n2z[i];
            }
            if (prev_z) {
                Vector n3z = matvec(ctx.s.N3, z[n + 1]);
                for (int i = 0; i < dae.m(); ++i) rhs[i] += h * n3z[i];
            }
            count_solve(ctx.trace, ctx.F);
            zn[n + 1] = ctx.F.solve(rhs);
        }
        return zn;
    };

    auto wave_diff = [J](const std::vector<Vector>& a, const std::vector<Vector>& b) {
        double worst = 0.0;
        for (int n = 0; n <= J; ++n) worst = std::max(worst, diff_norm2(a[n], b[n]));
        return worst;
    };

    bool converged = false;
    double upd = 0.0;
    for (int k = 0; k < ctx.outer_limit(); ++k) {
        StepRecord rec;
        rec.outer = 1;
        std::vector<Vector> Ynew;
        if (ctx.depth == StageDepth::One) {
            Ynew = sweep(Y, nullptr, Y);
        } else if (ctx.depth == StageDepth::Two) {
            std::vector<Vector> Z = Y;
            for (int j = 0; j < ctx.inner_limit(); ++j) {
                std::vector<Vector> Zn = sweep(Z, nullptr, Y);
                ++rec.inner;
                double d = wave_diff(Zn, Z);
                Z = std::move(Zn);
                if (ctx.tol_mode() && d <= ctx.stop.tol) break;
            }
            Ynew = std::move(Z);
        } else {
            std::vector<Vector> Z = Y;
            for (int j = 0; j < ctx.inner_limit(); ++j) {
                std::vector<Vector> Zt = Z;
                for (int i2 = 0; i2 < ctx.innermost_limit(); ++i2) {
                    std::vector<Vector> Ztn = sweep(Zt, &Z, Y);
                    ++rec.innermost;
                    double d = wave_diff(Ztn, Zt);
                    Zt = std::move(Ztn);
                    if (ctx.tol_mode() && d <= ctx.stop.tol) break;
                }
                ++rec.inner;
                double dz = wave_diff(Zt, Z);
                Z = std::move(Zt);
                if (ctx.tol_mode() && dz <= ctx.stop.tol) break;
            }
            Ynew = std::move(Z);
        }
        upd = wave_diff(Ynew, Y);
        Y = std::move(Ynew);
        rec.final_update = upd;
        ctx.trace.steps.push_back(rec);
        if (ctx.tol_mode() && upd <= ctx.stop.tol) {
            converged = true;
            break;
        }
    }
    if (ctx.tol_mode() && !converged)
        throw ConvergenceError("windowed relaxation stalled: update " + format_double(upd) +
                                   " after " + std::to_string(ctx.stop.cap) + " sweeps",
                               -1, upd, ctx.trace);

    Trajectory traj{dae.t0, h, std::move(Y)};
    return {std::move(traj), std::move(ctx.trace)};
}

}  // namespace

std::pair<Trajectory, SolveTrace> wr_run(const DaeProblem& dae, const StageSplittings& s,
                                         StageDepth depth, const StoppingCriterion& stop,
                                         TimeLoopMode mode) {
    WrContext ctx{dae,
                  s,
                  depth,
                  stop,
                  combine(dae.h, s.N1, 1.0, s.NA),
                  BandFactorization(combine(1.0, s.MA, dae.h, stage_matrix(s, depth))),
                  {}};
    ++ctx.trace.factorizations;
    if (mode == TimeLoopMode::Stepwise) return run_stepwise(ctx);
    return run_windowed(ctx);
}

std::function<Vector(const Vector&)> iteration_operator(const StageSplittings& s, StageDepth depth,
                                                        double h, int nu, int mu) {
    auto F = std::make_shared<BandFactorization>(combine(1.0, s.MA, h, stage_matrix(s, depth)));
    StructuredMatrix R1 = combine(h, s.N1, 1.0, s.NA);
    if (depth == StageDepth::One)
        return [F, R1](const Vector& v) { return F->solve(matvec(R1, v)); };

    if (depth == StageDepth::Two) {
        StructuredMatrix N2 = s.N2;
        return [F, R1, N2, h, nu](const Vector& v) {
            Vector rhs_base = matvec(R1, v);
            Vector z = v;
            for (int j = 0; j < nu; ++j) {
                Vector rhs = matvec(N2, z);
                for (size_t i = 0; i < rhs.size(); ++i) rhs[i] = h * rhs[i] + rhs_base[i];
                z = F->solve(rhs);
            }
            return z;
        };
    }

    StructuredMatrix N2 = s.N2, N3 = s.N3;
    return [F, R1, N2, N3, h, nu, mu](const Vector& v) {
        Vector rhs_base = matvec(R1, v);
        Vector z = v;
        for (int j = 0; j < nu; ++j) {
            Vector n2z = matvec(N2, z);
            Vector zt = z;
            for (int i2 = 0; i2 < mu; ++i2) {
                Vector rhs = matvec(N3, zt);
                for (size_t i = 0; i < rhs.size(); ++i)
                    rhs[i] = h * rhs[i] + h * n2z[i] + rhs_base[i];
                zt = F->solve(rhs);
            }
            z = std::move(zt);
        }
        return z;
    };
}

}  // namespace mswr
