#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mswr/error_metrics.hpp"
#include "mswr/multisplitting.hpp"

namespace mswr {

// Flat key-value run description. Every field is a config-file key and an
// identically named CLI flag; unknown keys are rejected. The seed only feeds
// spectral-radius start vectors, all solvers are deterministic.
struct ExperimentConfig {
    std::string method = "one-stage";
    int p = 50;
    int q = 6;
    double dcoef = 1.0;
    double h = 0.1;
    int steps = 20;
    double t0 = 0.0;
    std::string stop = "error-bound";  // or "fixed-iters"
    double tol = 1e-3;
    int outer = 20;
    int inner = 4;
    int innermost = 2;
    int cap = 200;
    std::string mode = "stepwise";  // or "windowed"
    int overlap = 1;
    double alpha1 = 0.5, alpha2 = 0.5, alpha3 = 0.5, alpha4 = 0.5;
    bool guard = true;
    int fast = 1;
    int mixing_row = 1;
    std::uint64_t seed = 12345;
    double n1_scale = 1.0;

    bool operator==(const ExperimentConfig&) const = default;
};

// Accumulates key-value assignments (config file first, CLI overrides after)
// and resolves the alpha complements: setting alpha1 without alpha2 yields
// alpha2 = 1 - alpha1, which sums to exactly 1 in floating point, and
// likewise for the other pairings.
class ConfigBuilder {
public:
    void set(const std::string& key, const std::string& value);
    ExperimentConfig finish();

private:
    ExperimentConfig cfg_;
    bool set_a1_ = false, set_a2_ = false, set_a3_ = false, set_a4_ = false;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

extern const std::vector<std::string> kMethodNames;  // incl. the direct oracle

struct ExperimentResult {
    ErrorSeries series;
    SolveTrace trace;
};

// Builds the problem and splittings from cfg, dispatches on cfg.method
// ("direct" runs the oracle), and evaluates both error norms on the whole
// grid. Solver errors propagate with the config echoed into the message.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct ComparisonTable {
    std::vector<double> t;
    std::vector<ErrorSeries> series;                        // converged methods only
    std::vector<std::pair<std::string, SolveTrace>> work;   // label -> counters
    std::vector<std::string> diverged;                      // labels that failed
};

// Runs each config (all must share the problem grid) and aligns the error
// series rowwise.
ComparisonTable compare_methods(const std::vector<ExperimentConfig>& cfgs);

std::string to_csv(const ErrorSeries& series);
std::string to_csv(const ComparisonTable& table);

// Power-iteration estimates for each method's iteration operator on the
// configured problem, in canonical method order.
std::vector<std::pair<std::string, double>> radius_estimates(const ExperimentConfig& cfg,
                                                             int iterations = 200);

struct ValidationSummary {
    std::string text;
    bool passed = false;
};

// Stage, subproblem, and partition validators for cfg's problem, collected
// into one printable report.
ValidationSummary validate_experiment(const ExperimentConfig& cfg);

}  // namespace mswr
