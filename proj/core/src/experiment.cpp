#include "mswr/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mswr/format.hpp"
#include "mswr/spectral.hpp"

namespace mswr {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& v) {
    int out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError("config key " + key + ": expected an integer, got '" + v + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError("config key " + key + ": expected an unsigned integer, got '" + v + "'");
    return out;
}

double parse_real(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError("config key " + key + ": expected a number, got '" + v + "'");
    return out;
}

bool parse_on_off(const std::string& key, const std::string& v) {
    if (v == "on") return true;
    if (v == "off") return false;
    throw ConfigError("config key " + key + ": expected on or off, got '" + v + "'");
}

bool is_one_of(const std::string& v, const std::vector<std::string>& allowed) {
    for (const auto& a : allowed)
        if (v == a) return true;
    return false;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
    return out;
}

const std::vector<std::string> kStopNames{"error-bound", "fixed-iters"};
const std::vector<std::string> kModeNames{"stepwise", "windowed"};

}  // namespace

const std::vector<std::string> kMethodNames{"direct",       "one-stage",       "two-stage",
                                            "three-stage",  "ms-jacobi",       "ms-gs-serial",
                                            "ms-gs-decoupled", "ms-gs-coupled"};

void ConfigBuilder::set(const std::string& key, const std::string& value) {
    if (key == "method") cfg_.method = value;
    else if (key == "p") cfg_.p = parse_int(key, value);
    else if (key == "q") cfg_.q = parse_int(key, value);
    else if (key == "dcoef") cfg_.dcoef = parse_real(key, value);
    else if (key == "h") cfg_.h = parse_real(key, value);
    else if (key == "steps") cfg_.steps = parse_int(key, value);
    else if (key == "t0") cfg_.t0 = parse_real(key, value);
    else if (key == "stop") cfg_.stop = value;
    else if (key == "tol") cfg_.tol = parse_real(key, value);
    else if (key == "outer") cfg_.outer = parse_int(key, value);
    else if (key == "inner") cfg_.inner = parse_int(key, value);
    else if (key == "innermost") cfg_.innermost = parse_int(key, value);
    else if (key == "cap") cfg_.cap = parse_int(key, value);
    else if (key == "mode") cfg_.mode = value;
    else if (key == "overlap") cfg_.overlap = parse_int(key, value);
    else if (key == "alpha1") { cfg_.alpha1 = parse_real(key, value); set_a1_ = true; }
    else if (key == "alpha2") { cfg_.alpha2 = parse_real(key, value); set_a2_ = true; }
    else if (key == "alpha3") { cfg_.alpha3 = parse_real(key, value); set_a3_ = true; }
    else if (key == "alpha4") { cfg_.alpha4 = parse_real(key, value); set_a4_ = true; }
    else if (key == "guard") cfg_.guard = parse_on_off(key, value);
    else if (key == "fast") cfg_.fast = parse_int(key, value);
    else if (key == "mixing_row") cfg_.mixing_row = parse_int(key, value);
    else if (key == "seed") cfg_.seed = parse_u64(key, value);
    else if (key == "n1_scale") cfg_.n1_scale = parse_real(key, value);
    else throw ConfigError("unknown config key: " + key);
}

ExperimentConfig ConfigBuilder::finish() {
    if (set_a1_ && !set_a2_) cfg_.alpha2 = 1.0 - cfg_.alpha1;
    if (set_a2_ && !set_a1_) cfg_.alpha1 = 1.0 - cfg_.alpha2;
    if (set_a3_ && !set_a4_) cfg_.alpha4 = 1.0 - cfg_.alpha3;
    if (set_a4_ && !set_a3_) cfg_.alpha3 = 1.0 - cfg_.alpha4;
    if (!is_one_of(cfg_.method, kMethodNames))
        throw ConfigError("unknown method '" + cfg_.method + "' (expected one of " +
                          join(kMethodNames) + ")");
    if (!is_one_of(cfg_.stop, kStopNames))
        throw ConfigError("unknown stop criterion '" + cfg_.stop + "' (expected one of " +
                          join(kStopNames) + ")");
    if (!is_one_of(cfg_.mode, kModeNames))
        throw ConfigError("unknown mode '" + cfg_.mode + "' (expected one of " + join(kModeNames) +
                          ")");
    if (cfg_.steps < 0) throw ConfigError("steps must be nonnegative");
    return cfg_;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ConfigBuilder builder;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        builder.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return builder.finish();
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    auto kv = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
    kv("method", cfg.method);
    kv("p", std::to_string(cfg.p));
    kv("q", std::to_string(cfg.q));
    kv("dcoef", format_double(cfg.dcoef));
    kv("h", format_double(cfg.h));
    kv("steps", std::to_string(cfg.steps));
    kv("t0", format_double(cfg.t0));
    kv("stop", cfg.stop);
    kv("tol", format_double(cfg.tol));
    kv("outer", std::to_string(cfg.outer));
    kv("inner", std::to_string(cfg.inner));
    kv("innermost", std::to_string(cfg.innermost));
    kv("cap", std::to_string(cfg.cap));
    kv("mode", cfg.mode);
    kv("overlap", std::to_string(cfg.overlap));
    kv("alpha1", format_double(cfg.alpha1));
    kv("alpha2", format_double(cfg.alpha2));
    kv("alpha3", format_double(cfg.alpha3));
    kv("alpha4", format_double(cfg.alpha4));
    kv("guard", cfg.guard ? "on" : "off");
    kv("fast", std::to_string(cfg.fast));
    kv("mixing_row", std::to_string(cfg.mixing_row));
    kv("seed", std::to_string(cfg.seed));
    kv("n1_scale", format_double(cfg.n1_scale));
    return out;
}

namespace {

DaeProblem problem_from(const ExperimentConfig& cfg) {
    DaeProblem dae = build_reference_problem(cfg.p, cfg.q, cfg.dcoef);
    dae.t0 = cfg.t0;
    dae.h = cfg.h;
    dae.steps = cfg.steps;
    dae.y0 = analytic_solution(cfg.t0, dae.m());
    return dae;
}

StoppingCriterion stop_from(const ExperimentConfig& cfg) {
    if (cfg.stop == "fixed-iters")
        return StoppingCriterion::fixed_iters(cfg.outer, cfg.inner, cfg.innermost);
    return StoppingCriterion::error_bound(cfg.tol, cfg.cap);
}

MSMethod ms_method_from(const ExperimentConfig& cfg) {
    MSMethod m;
    m.fast = cfg.fast;
    if (cfg.method == "ms-jacobi") m.kind = MSKind::Jacobi;
    else if (cfg.method == "ms-gs-serial") m.kind = MSKind::GSSerial;
    else if (cfg.method == "ms-gs-decoupled") m.kind = MSKind::GSDecoupled;
    else m.kind = MSKind::GSCoupled;
    return m;
}

bool is_ms_method(const std::string& method) { return method.rfind("ms-", 0) == 0; }

void check_series(const ErrorSeries& s) {
    for (size_t i = 0; i < s.t.size(); ++i)
        if (!std::isfinite(s.l2[i]) || !std::isfinite(s.max_err[i]))
            throw Error("non-finite error in series " + s.label + " at t = " + format_double(s.t[i]));
    if (!s.l2.empty() && (s.l2[0] != 0.0 || s.max_err[0] != 0.0))
        throw Error("series " + s.label + " does not start exactly at the initial condition");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    try {
        DaeProblem dae = problem_from(cfg);
        ExperimentResult result;
        if (cfg.method == "direct") {
            Trajectory traj = direct_euler(dae, &result.trace);
            result.series = error_series(traj, cfg.method);
        } else if (is_ms_method(cfg.method)) {
            if (cfg.mode != "stepwise")
                throw ConfigError("multisplitting methods run stepwise only");
            auto subs = build_subproblem_splittings(dae, cfg.n1_scale);
            PartitionOfUnity P = build_partition(
                dae.m(), cfg.p, cfg.overlap, {cfg.alpha1, cfg.alpha2, cfg.alpha3, cfg.alpha4});
            MSResult res = ms_run(dae, subs, P, ms_method_from(cfg), stop_from(cfg), cfg.guard,
                                  cfg.mixing_row);
            result.series = error_series(res.trajectory, cfg.method);
            result.trace = std::move(res.trace);
        } else {
            StageSplittings s = build_stage_splittings(dae, cfg.n1_scale);
            StageDepth depth = cfg.method == "one-stage" ? StageDepth::One
                               : cfg.method == "two-stage" ? StageDepth::Two
                                                           : StageDepth::Three;
            TimeLoopMode mode =
                cfg.mode == "windowed" ? TimeLoopMode::Windowed : TimeLoopMode::Stepwise;
            auto [traj, trace] = wr_run(dae, s, depth, stop_from(cfg), mode);
            result.series = error_series(traj, cfg.method);
            result.trace = std::move(trace);
        }
        check_series(result.series);
        return result;
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string(e.what()) + "\nconfig:\n" + serialize_config(cfg),
                               e.step, e.last_update, e.trace);
    }
}

ComparisonTable compare_methods(const std::vector<ExperimentConfig>& cfgs) {
    if (cfgs.empty()) throw ConfigError("comparison needs at least one config");
    const ExperimentConfig& base = cfgs.front();
    for (const ExperimentConfig& cfg : cfgs) {
        if (cfg.p != base.p || cfg.q != base.q || cfg.dcoef != base.dcoef || cfg.h != base.h ||
            cfg.steps != base.steps || cfg.t0 != base.t0)
            throw ConfigError("mismatched grids: method " + cfg.method +
                              " departs from the shared problem parameters");
    }

    ComparisonTable table;
    for (int n = 0; n <= base.steps; ++n) table.t.push_back(base.t0 + n * base.h);
    for (const ExperimentConfig& cfg : cfgs) {
        try {
            ExperimentResult res = run_experiment(cfg);
            table.series.push_back(std::move(res.series));
            table.work.emplace_back(cfg.method, std::move(res.trace));
        } catch (const ConvergenceError&) {
            table.diverged.push_back(cfg.method);
        }
    }
    return table;
}

std::string to_csv(const ErrorSeries& series) {
    std::string out = "t,err_l2,err_max\n";
    for (size_t i = 0; i < series.t.size(); ++i)
        out += format_double(series.t[i]) + "," + format_double(series.l2[i]) + "," +
               format_double(series.max_err[i]) + "\n";
    return out;
}

std::string to_csv(const ComparisonTable& table) {
    std::string out = "t";
    for (const ErrorSeries& s : table.series) out += "," + s.label + "_l2," + s.label + "_max";
    out += "\n";
    for (size_t i = 0; i < table.t.size(); ++i) {
        out += format_double(table.t[i]);
        for (const ErrorSeries& s : table.series)
            out += "," + format_double(s.l2[i]) + "," + format_double(s.max_err[i]);
        out += "\n";
    }
    for (const auto& [label, trace] : table.work) {
        long outer_total = 0;
        for (const StepRecord& r : trace.steps) outer_total += r.outer;
        out += "# work," + label + ",factorizations=" + std::to_string(trace.factorizations) +
               ",tridiagonal_solves=" + std::to_string(trace.tridiagonal_solves) +
               ",diagonal_solves=" + std::to_string(trace.diagonal_solves) +
               ",banded_solves=" + std::to_string(trace.banded_solves) +
               ",subproblem_solves=" + std::to_string(trace.subproblem_solves[0]) + "+" +
               std::to_string(trace.subproblem_solves[1]) +
               ",outer_iterations=" + std::to_string(outer_total) + "\n";
    }
    for (const std::string& label : table.diverged) out += "# diverged," + label + "\n";
    return out;
}

std::vector<std::pair<std::string, double>> radius_estimates(const ExperimentConfig& cfg,
                                                             int iterations) {
    DaeProblem dae = problem_from(cfg);
    StageSplittings s = build_stage_splittings(dae, cfg.n1_scale);
    auto subs = build_subproblem_splittings(dae, cfg.n1_scale);
    PartitionOfUnity P = build_partition(dae.m(), cfg.p, cfg.overlap,
                                         {cfg.alpha1, cfg.alpha2, cfg.alpha3, cfg.alpha4});

    std::vector<std::pair<std::string, double>> out;
    auto wr_entry = [&](const std::string& label, StageDepth depth) {
        auto op = iteration_operator(s, depth, dae.h, cfg.inner, cfg.innermost);
        out.emplace_back(label, spectral_radius_estimate(op, dae.m(), iterations, cfg.seed));
    };
    wr_entry("one-stage", StageDepth::One);
    wr_entry("two-stage", StageDepth::Two);
    wr_entry("three-stage", StageDepth::Three);

    auto ms_entry = [&](const std::string& label, MSKind kind) {
        MSMethod method{kind, cfg.fast};
        auto op = ms_iteration_operator(dae, subs, P, method);
        out.emplace_back(label, spectral_radius_estimate(op, 2 * dae.m(), iterations, cfg.seed));
    };
    ms_entry("ms-jacobi", MSKind::Jacobi);
    ms_entry("ms-gs-serial", MSKind::GSSerial);
    ms_entry("ms-gs-decoupled", MSKind::GSDecoupled);
    ms_entry("ms-gs-coupled", MSKind::GSCoupled);
    return out;
}

ValidationSummary validate_experiment(const ExperimentConfig& cfg) {
    DaeProblem dae = problem_from(cfg);
    ValidationSummary summary;
    summary.passed = true;

    StageSplittings s = build_stage_splittings(dae, cfg.n1_scale, false);
    ValidationReport stage = validate_stage(s, dae.A, dae.B, dae.h);
    summary.text += "stage splittings:\n" + stage.to_string();
    summary.passed = summary.passed && stage.passed();

    auto subs = build_subproblem_splittings(dae, cfg.n1_scale, false);
    for (const SubproblemSplitting& sub : subs) {
        ValidationReport rep = validate_subproblem(sub, dae.A, dae.B, dae.h);
        summary.text += "subproblem " + std::to_string(sub.index) + ":\n" + rep.to_string();
        summary.passed = summary.passed && rep.passed();
    }

    summary.text += "partition of unity:\n";
    try {
        PartitionOfUnity P = build_partition(dae.m(), cfg.p, cfg.overlap,
                                             {cfg.alpha1, cfg.alpha2, cfg.alpha3, cfg.alpha4});
        ValidationReport rep = validate_partition(P);
        summary.text += rep.to_string();
        summary.passed = summary.passed && rep.passed();
    } catch (const ConfigError& e) {
        summary.text += std::string("FAIL  ") + e.what() + "\n";
        summary.passed = false;
    }
    return summary;
}

}  // namespace mswr
