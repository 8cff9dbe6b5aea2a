// Command line front end: run experiments, compare methods, validate
// splittings, and estimate iteration operator radii.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "mswr/experiment.hpp"
#include "mswr/format.hpp"

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

const std::vector<std::string> kConfigKeys{
    "method", "p",       "q",         "dcoef",  "h",      "steps",  "t0",     "stop",
    "tol",    "outer",   "inner",     "innermost", "cap", "mode",   "overlap", "alpha1",
    "alpha2", "alpha3",  "alpha4",    "guard",  "fast",   "mixing_row", "seed", "n1_scale"};

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    Overrides overrides;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    // the step size override is spelled --h, so keep only the long help flag
    sub->set_help_flag("--help", "print help");
    sub->add_option("--config", args.config_path, "flat key = value config file");
    sub->add_option("--out", args.out_path, "write output to this file instead of stdout");
    for (const std::string& key : kConfigKeys) {
        sub->add_option(
            "--" + key,
            [&args, key](const CLI::results_t& res) {
                for (const std::string& v : res) args.overrides.emplace_back(key, v);
                return true;
            },
            "override config key " + key);
    }
}

// Later assignments win inside the builder, so appending CLI overrides after
// the file contents gives flags precedence over the config file.
mswr::ExperimentConfig load_config(const CommonArgs& args) {
    std::string text;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw mswr::ConfigError("cannot open config file: " + args.config_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
        if (!text.empty() && text.back() != '\n') text += '\n';
    }
    for (const auto& [key, value] : args.overrides) text += key + " = " + value + "\n";
    return mswr::parse_config_text(text);
}

void emit(const CommonArgs& args, const std::string& payload) {
    if (args.out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) throw mswr::ConfigError("cannot open output file: " + args.out_path);
    out << payload;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        size_t a = item.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        size_t b = item.find_last_not_of(" \t");
        out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"waveform relaxation and multisplitting experiments for linear DAE systems"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    int exit_code = 0;

    CommonArgs run_args;
    CLI::App* run = app.add_subcommand("run", "run one method and emit its error series as CSV");
    add_common(run, run_args);
    run->callback([&] {
        mswr::ExperimentResult res = mswr::run_experiment(load_config(run_args));
        emit(run_args, mswr::to_csv(res.series));
    });

    CommonArgs cmp_args;
    std::string methods_list =
        "direct,one-stage,two-stage,three-stage,ms-jacobi,ms-gs-serial,ms-gs-decoupled,"
        "ms-gs-coupled";
    CLI::App* cmp = app.add_subcommand(
        "compare", "run several methods on one problem and emit a combined CSV table");
    add_common(cmp, cmp_args);
    cmp->add_option("--methods", methods_list, "comma separated list of methods to compare");
    cmp->callback([&] {
        std::vector<std::string> methods = split_list(methods_list);
        if (methods.empty()) throw mswr::ConfigError("empty method list");
        std::vector<mswr::ExperimentConfig> cfgs;
        for (const std::string& m : methods) {
            CommonArgs per = cmp_args;
            per.overrides.emplace_back("method", m);
            cfgs.push_back(load_config(per));
        }
        emit(cmp_args, mswr::to_csv(mswr::compare_methods(cfgs)));
    });

    CommonArgs val_args;
    CLI::App* val = app.add_subcommand(
        "validate", "check splitting identities, factorizability, and the partition of unity");
    add_common(val, val_args);
    val->callback([&] {
        mswr::ValidationSummary summary = mswr::validate_experiment(load_config(val_args));
        emit(val_args, summary.text + (summary.passed ? "overall: PASS\n" : "overall: FAIL\n"));
        if (!summary.passed) exit_code = 4;
    });

    CommonArgs rad_args;
    int iterations = 200;
    CLI::App* rad = app.add_subcommand(
        "radius", "estimate the spectral radius of each method's iteration operator");
    add_common(rad, rad_args);
    rad->add_option("--iterations", iterations, "power iteration count");
    rad->callback([&] {
        auto estimates = mswr::radius_estimates(load_config(rad_args), iterations);
        std::string payload = "method,radius\n";
        for (const auto& [label, rho] : estimates)
            payload += label + "," + mswr::format_double(rho) + "\n";
        emit(rad_args, payload);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const mswr::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mswr::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mswr::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const mswr::SingularMatrixError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const mswr::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
