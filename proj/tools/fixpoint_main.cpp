#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fixpoint/config.hpp"
#include "fixpoint/counterexample.hpp"
#include "fixpoint/errors.hpp"
#include "fixpoint/rational.hpp"
#include "fixpoint/report.hpp"
#include "fixpoint/scheme.hpp"
#include "fixpoint/trace_io.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDivergence = 2;
constexpr int kExitCheckFailure = 3;

//! Worst-outcome ordering for sweep: config errors dominate divergence,
//! which dominates check failures.
int worse(int a, int b) {
    const auto rank = [](int code) {
        switch (code) {
            case kExitConfig: return 3;
            case kExitDivergence: return 2;
            case kExitCheckFailure: return 1;
            default: return 0;
        }
    };
    return rank(a) >= rank(b) ? a : b;
}

fixpoint::ExperimentConfig load_with_env(const std::string& path) {
    fixpoint::ExperimentConfig config = fixpoint::load_config(path);
    if (const char* seed = std::getenv("FIXPOINT_SEED")) {
        fixpoint::apply_seed_override(config, seed, "env:FIXPOINT_SEED");
    }
    return config;
}

std::string default_out(const std::string& config_path, const char* suffix) {
    fs::path p(config_path);
    p.replace_extension();
    p += suffix;
    return p.string();
}

//! "out" inside a config is relative to the config file's directory, so
//! sweep directories stay self-contained.
std::string config_relative(const std::string& config_path, const std::string& out) {
    fs::path o(out);
    if (o.is_absolute()) return o.string();
    return (fs::path(config_path).parent_path() / o).string();
}

std::string resolve_out(const std::string& config_path, const std::optional<std::string>& cli_out,
                        const fixpoint::ExperimentConfig& config, bool config_out_applies,
                        const char* suffix) {
    if (cli_out) return *cli_out;
    if (config_out_applies && config.out) return config_relative(config_path, *config.out);
    return default_out(config_path, suffix);
}

void print_seed(const fixpoint::ExperimentConfig& config) {
    std::cout << "seed: " << config.seed << " (" << config.seed_source << ")\n";
}

const char* yesno(bool v) { return v ? "true" : "false"; }

int do_iterate(const fixpoint::ExperimentConfig& config, const std::string& config_path,
               const std::optional<std::string>& cli_out) {
    if (!config.iterate) {
        throw fixpoint::ConfigError(config_path + ": config has no 'iterate' section");
    }
    const fixpoint::IterationConfig& it = *config.iterate;
    const std::string out =
        resolve_out(config_path, cli_out, config, /*config_out_applies=*/true, ".csv");
    const fixpoint::TraceShape shape{it.x1.dim(), it.stage_count() - 1};

    print_seed(config);
    const fixpoint::HypothesisReport hyp = fixpoint::classify_hypotheses(it);
    std::cout << "hypotheses: cond_i=" << yesno(hyp.cond_i) << " cond_ii=" << yesno(hyp.cond_ii)
              << " p_valid=" << yesno(hyp.p_valid) << "\n";
    std::cout << "hypothesis notes: " << hyp.notes << "\n";

    try {
        const fixpoint::RunResult result = fixpoint::run(it);
        fixpoint::write_trace_csv_file(out, result.trace, shape);
        if (result.termination == fixpoint::Termination::converged) {
            std::cout << "termination: converged at n = " << result.final_n;
        } else {
            std::cout << "termination: reached n_max = " << it.n_max;
        }
        if (result.final_residual) {
            std::cout << ", residual = " << fixpoint::format_double17(*result.final_residual);
        }
        std::cout << "\n";
        std::cout << "trace: " << out << " (" << result.trace.size() << " records)\n";
        return kExitOk;
    } catch (const fixpoint::DivergenceError& e) {
        fixpoint::write_trace_csv_file(out, e.partial_trace(), shape);
        std::cout << "divergence: " << e.stage() << " at step n = " << e.step_index() << "\n";
        std::cout << "partial trace: " << out << " (" << e.partial_trace().size()
                  << " records)\n";
        return kExitDivergence;
    }
}

int do_classify(const fixpoint::ExperimentConfig& config, const std::string& config_path,
                const std::optional<std::string>& cli_out) {
    if (!config.classify) {
        throw fixpoint::ConfigError(config_path + ": config has no 'classify' section");
    }
    // The config-level "out" belongs to the iterate section when both exist.
    const bool out_applies = !config.iterate;
    const std::string out =
        resolve_out(config_path, cli_out, config, out_applies, ".report.json");

    print_seed(config);
    const fixpoint::ClassifyRun run =
        fixpoint::run_classify(*config.classify, config.norm, config.seed, config.seed_source);
    fixpoint::write_report_file(out, run.report);

    std::size_t passed = 0;
    for (const auto& section : run.report["checks"]) {
        if (section["passed"].get<bool>()) ++passed;
    }
    std::cout << "report: " << out << "\n";
    std::cout << "checks passed: " << passed << "/" << run.report["checks"].size() << "\n";
    return run.all_passed ? kExitOk : kExitCheckFailure;
}

int do_counterexample(unsigned long n_max, const std::optional<std::string>& epsilon_text) {
    using fixpoint::Rational;

    const fixpoint::GapSurvey survey = fixpoint::verify_note_claims(n_max);
    std::cout << "doubling gap survey: n = 1.." << n_max << "\n";
    std::vector<unsigned long> sampled;
    for (unsigned long n = 1; n <= n_max && n <= 8; ++n) sampled.push_back(n);
    for (unsigned long n = 16; n <= n_max && n <= 64; n *= 2) sampled.push_back(n);
    for (unsigned long n : sampled) {
        std::cout << "  gap(" << n << ") = " << fixpoint::gap(n).str() << "\n";
    }
    std::cout << "  all exact claims hold: |y_n - x_{n+1}| = 2/n, gap(n) = 2^{n+1}/n >= 1, "
                 "2^{n+1} >= n\n";
    std::cout << "  min gap = " << survey.min_gap.str() << " at n =";
    for (unsigned long n : survey.min_gap_at) std::cout << " " << n;
    std::cout << "\n";

    if (epsilon_text) {
        const Rational eps = Rational::from_string(*epsilon_text);
        const unsigned long threshold = fixpoint::epsilon_threshold(eps);
        std::cout << "pair gap 2/n < epsilon = " << eps.str() << " first at n = " << threshold
                  << "\n";
    }

    const Rational half(1, 2);
    const Rational one(1, 1);
    const fixpoint::ContractionDemo demo = fixpoint::corrected_demo(half, n_max, one, one);
    std::cout << "corrected diagnostic: T x = x/2, M = 1, L = 1, n = 1.." << n_max << "\n";
    std::cout << "  d_n = M (1/2)^n (2/n) <= M L (2/n) exactly; strictly decreasing\n";
    for (unsigned long n0 = 1; n0 <= n_max && n0 <= 64; n0 *= 2) {
        std::cout << "  tail max over n >= " << n0 << ": " << demo.tail_max(n0).str() << "\n";
    }
    const Rational micro(1, 1000000);
    for (unsigned long n0 = 1; n0 <= n_max; ++n0) {
        if (demo.tail_max(n0) < micro) {
            std::cout << "  first n0 with tail max < 1/1000000: " << n0 << "\n";
            break;
        }
    }
    std::cout << "all exact checks passed\n";
    return kExitOk;
}

int do_sweep(const std::string& dir) {
    std::vector<std::string> configs;
    {
        std::error_code ec;
        fs::directory_iterator it(dir, ec);
        if (ec) {
            std::cerr << "config error: cannot read sweep directory: " << dir << "\n";
            return kExitConfig;
        }
        for (const auto& entry : it) {
            if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
            // Reports written by an earlier sweep are outputs, not configs.
            if (entry.path().string().ends_with(".report.json")) continue;
            configs.push_back(entry.path().string());
        }
    }
    std::sort(configs.begin(), configs.end());
    if (configs.empty()) {
        std::cerr << "config error: no .json configs in " << dir << "\n";
        return kExitConfig;
    }

    int worst = kExitOk;
    std::size_t ok = 0;
    for (const std::string& path : configs) {
        try {
            const fixpoint::ExperimentConfig config = load_with_env(path);
            int code = kExitOk;
            if (config.iterate) {
                std::cout << "sweep: " << path << " [iterate]\n";
                code = worse(code, do_iterate(config, path, std::nullopt));
            }
            if (config.classify) {
                std::cout << "sweep: " << path << " [classify]\n";
                code = worse(code, do_classify(config, path, std::nullopt));
            }
            if (code == kExitOk) ++ok;
            worst = worse(worst, code);
        } catch (const fixpoint::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            worst = worse(worst, kExitConfig);
        } catch (const fixpoint::InvalidInput& e) {
            std::cerr << "config error: " << e.what() << "\n";
            worst = worse(worst, kExitConfig);
        }
    }
    std::cout << "sweep summary: " << ok << "/" << configs.size() << " configs clean\n";
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-point iteration laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;

    CLI::App* iterate = app.add_subcommand("iterate", "run the multi-step scheme from a config");
    iterate->add_option("--config", config_path, "experiment config (JSON)")->required();
    CLI::Option* iterate_out = iterate->add_option("--out", out_path, "trace CSV path");

    CLI::App* classify = app.add_subcommand("classify", "run operator-class checks from a config");
    classify->add_option("--config", config_path, "experiment config (JSON)")->required();
    CLI::Option* classify_out = classify->add_option("--out", out_path, "report JSON path");

    unsigned long ce_n = 4096;
    std::string epsilon_text;
    CLI::App* counter = app.add_subcommand(
        "counterexample", "verify the doubling-map gap facts in exact arithmetic");
    counter->add_option("--n", ce_n, "verify all n up to this horizon")
        ->check(CLI::PositiveNumber);
    CLI::Option* eps_opt = counter->add_option(
        "--epsilon", epsilon_text, "exact threshold query, e.g. 1e-3 or 1/1000");

    std::string sweep_dir;
    CLI::App* sweep = app.add_subcommand("sweep", "run every .json config in a directory");
    sweep->add_option("--dir", sweep_dir, "directory of configs")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (iterate->parsed()) {
            const auto cli_out = iterate_out->count()
                                     ? std::optional<std::string>(out_path)
                                     : std::nullopt;
            return do_iterate(load_with_env(config_path), config_path, cli_out);
        }
        if (classify->parsed()) {
            const auto cli_out = classify_out->count()
                                     ? std::optional<std::string>(out_path)
                                     : std::nullopt;
            return do_classify(load_with_env(config_path), config_path, cli_out);
        }
        if (counter->parsed()) {
            const auto eps = eps_opt->count() ? std::optional<std::string>(epsilon_text)
                                              : std::nullopt;
            return do_counterexample(ce_n, eps);
        }
        if (sweep->parsed()) {
            return do_sweep(sweep_dir);
        }
    } catch (const fixpoint::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fixpoint::InvalidInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fixpoint::DivergenceError& e) {
        std::cerr << "divergence: " << e.stage() << " at step n = " << e.step_index() << "\n";
        return kExitDivergence;
    } catch (const fixpoint::PowerOverflow& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::logic_error& e) {
        std::cerr << "check failure: " << e.what() << "\n";
        return kExitCheckFailure;
    }
    return kExitOk;
}
