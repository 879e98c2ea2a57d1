// SPDX-License-Identifier: Apache-2.0
// Monte Carlo driver: `run` executes a campaign, `summarize` re-aggregates a
// trials CSV.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include "hgcma/error.hpp"
#include "hgcma/harness.hpp"

namespace {

int do_run(const std::string& config_path, std::optional<std::string> out, std::size_t jobs,
           std::optional<std::size_t> trials, std::optional<std::uint64_t> seed) {
    hgcma::ExperimentConfig config = hgcma::ExperimentConfig::load(config_path);
    if (trials) config.trials = *trials;
    if (seed) config.seed = *seed;
    config.validate();
    std::filesystem::path path;
    if (out) path = *out;
    else if (config.out) path = *config.out;
    else throw hgcma::Error(hgcma::ErrorCode::Config, "no output path: pass --out or set 'out' in the config");

    const auto records = hgcma::run_campaign(config, jobs);
    hgcma::write_campaign(path, records);
    std::size_t failed = 0;
    for (const auto& r : records) failed += r.metrics.error.empty() ? 0 : 1;
    std::fprintf(stderr, "wrote %zu rows to %s (%zu failed), summary %s\n", records.size(), path.string().c_str(),
                 failed, hgcma::summary_path_for(path).string().c_str());
    return 0;
}

int do_summarize(const std::string& in_path, const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw hgcma::Error(hgcma::ErrorCode::Io, "cannot open " + in_path);
    std::vector<hgcma::TrialRecord> records;
    try {
        records = hgcma::read_trials_csv(in);
    } catch (const hgcma::Error& e) {
        throw hgcma::Error(e.code(), in_path + ": " + e.what());
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw hgcma::Error(hgcma::ErrorCode::Io, "cannot write " + out_path);
    hgcma::write_summary_csv(out, hgcma::summarize(records));
    if (!out) throw hgcma::Error(hgcma::ErrorCode::Io, "write failed for " + out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blind source separation Monte Carlo campaigns"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a campaign and write trials and summary CSVs");
    std::string config_path;
    std::optional<std::string> out;
    std::size_t jobs = 1;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    run->add_option("--config", config_path, "key = value campaign file")->required();
    run->add_option("--out", out, "trials CSV path; the summary goes to <stem>_summary.csv");
    run->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    run->add_option("--trials", trials, "override the trial count");
    run->add_option("--seed", seed, "override the base seed");

    auto* sum = app.add_subcommand("summarize", "aggregate a trials CSV");
    std::string in_path, sum_out;
    sum->add_option("--in", in_path, "trials CSV")->required();
    sum->add_option("--out", sum_out, "summary CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return do_run(config_path, out, jobs, trials, seed);
        return do_summarize(in_path, sum_out);
    } catch (const hgcma::Error& e) {
        std::fprintf(stderr, "error (%s): %s\n", std::string(hgcma::to_string(e.code())).c_str(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
