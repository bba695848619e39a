#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>

#include "qpso/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;
constexpr int kAnalysisError = 3;

qpso::ExperimentConfig load(const std::string& path, std::optional<std::uint64_t> seed) {
    auto config = qpso::load_config(path);
    if (seed)
        config.seed = *seed;
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-behaved particle swarm optimization with diversity control"};
    app.require_subcommand(1);

    auto* functions = app.add_subcommand("functions", "List the registered objective functions");

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string algorithm;
    std::size_t run_index = 0;
    unsigned jobs = 0;

    auto* run = app.add_subcommand("run", "Run one algorithm once and emit its trace");
    run->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    run->add_option("--algorithm", algorithm, "Algorithm tag (default: first in the config)");
    run->add_option("--run", run_index, "Run index used to derive the random stream");
    run->add_option("--seed", seed, "Override the master seed");
    run->add_option("--out", out, "Write the trace CSV to this file instead of stdout");

    auto* campaign = app.add_subcommand("campaign", "Run every configured algorithm for all runs");
    campaign->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    campaign->add_option("--seed", seed, "Override the master seed");
    campaign->add_option("--out", out, "Archive directory (default: output.dir)");
    campaign->add_option("--jobs", jobs, "Worker threads (default: run.jobs)");

    std::string archive;
    std::string mode = "summary";
    auto* analyze = app.add_subcommand("analyze", "Summarize, correlate or compare a campaign archive");
    analyze->add_option("archive", archive, "Campaign archive directory")->required();
    analyze->add_option("--mode", mode, "Report type")->check(CLI::IsMember({"summary", "correlation", "compare"}));
    analyze->add_option("--out", out, "Report directory (default: the archive)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (functions->parsed()) {
        for (const auto& e : qpso::function_registry())
            std::cout << fmt::format("{:<18} [{}, {}]^N  {}\n", e.id, e.lower, e.upper, e.description);
        return kOk;
    }

    if (analyze->parsed()) {
        const auto m = mode == "summary"       ? qpso::AnalysisMode::summary
                       : mode == "correlation" ? qpso::AnalysisMode::correlation
                                               : qpso::AnalysisMode::compare;
        try {
            for (const auto& path : qpso::analyze(archive, m, out.empty() ? archive : out))
                std::cout << path.string() << '\n';
            return kOk;
        } catch (const std::exception& e) {
            std::cerr << "analysis error: " << e.what() << '\n';
            return kAnalysisError;
        }
    }

    qpso::ExperimentConfig config;
    try {
        config = load(config_path, seed);
        if (jobs > 0)
            config.jobs = jobs;
        if (run->parsed() && algorithm.empty())
            algorithm = config.algorithms.front().tag;
        if (run->parsed())
            config.algorithm(algorithm);
        qpso::build_objective(config);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (run->parsed()) {
            const auto result = qpso::run_single(config, algorithm, run_index);
            if (out.empty()) {
                qpso::write_trace_csv(std::cout, result.trace);
            } else {
                std::ofstream file(out, std::ios::binary);
                qpso::write_trace_csv(file, result.trace);
                if (!file)
                    throw std::runtime_error("cannot write " + out);
            }
            if (!result.ok) {
                std::cerr << "run failed: " << result.error << '\n';
                return kRuntimeError;
            }
            std::cerr << fmt::format("final best fitness {:.17g}\n", result.final_best);
            return kOk;
        }

        const std::string dir = out.empty() ? config.output_dir : out;
        const auto index = qpso::run_campaign(config, dir, {config.jobs, std::nullopt});
        std::size_t failed = 0;
        for (const auto& e : index) {
            if (!e.ok) {
                ++failed;
                std::cerr << "run failed: " << e.error << '\n';
            }
        }
        std::cerr << fmt::format("{} runs written to {} ({} failed)\n", index.size(), dir, failed);
        return failed == 0 ? kOk : kRuntimeError;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kRuntimeError;
    }
}
