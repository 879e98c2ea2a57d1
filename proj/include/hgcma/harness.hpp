// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hgcma/adaptive.hpp"
#include "hgcma/rotations.hpp"
#include "hgcma/signal.hpp"

namespace hgcma {

enum class AlgorithmKind { Gcma, Hgcma, Lscma, AdaptiveHgcma };

struct AlgorithmSpec {
    AlgorithmKind kind = AlgorithmKind::Hgcma;
    ShearVariant variant = ShearVariant::Linear;                  // Hgcma
    RotationStrategy strategy = RotationStrategy::TwoMaxDeviation;  // AdaptiveHgcma

    /// "gcma", "hgcma:{exact,semi,linear}", "lscma",
    /// "adaptive-hgcma:{sweep,single,two}". A bare "hgcma" is the linear
    /// variant, a bare "adaptive-hgcma" the two-rotation strategy.
    static AlgorithmSpec parse(std::string_view text);

    std::string_view name() const noexcept;     // CSV "algorithm" column
    std::string_view variant_name() const noexcept;  // CSV "variant" column, empty when not applicable

    friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

/// Flat "key = value" file, '#' starts a comment, lists are comma-separated.
///   algorithms     list of algorithm names (required)
///   M, N, K        integer lists (required); every N must be >= every M
///   snr_db         real list (required)
///   constellation  psk8 | qam16 (default psk8)
///   sweeps         batch HG-CMA / G-CMA sweeps (default 10)
///   trials         default 1
///   seed           base seed (default 1)
///   window         adaptive window lengths; defaults to the K list
///   steps          adaptive stream length (default 1000)
///   lscma_iters    default 50
///   out            trials CSV path (optional; the CLI --out flag overrides it)
struct ExperimentConfig {
    std::vector<AlgorithmSpec> algorithms;
    std::vector<std::size_t> m, n, k;
    std::vector<double> snr_db;
    Constellation constellation = Constellation::psk8();
    std::size_t sweeps = 10;
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    std::vector<std::size_t> window;
    std::size_t steps = 1000;
    std::size_t lscma_iters = 50;
    std::optional<std::filesystem::path> out;

    /// Throws Error(Config) with the offending line number.
    static ExperimentConfig parse(std::string_view text);
    static ExperimentConfig load(const std::filesystem::path& path);

    /// Throws Error(Config) on empty lists or out-of-range values.
    void validate() const;
};

/// One cell of the parameter grid. For adaptive algorithms k is the window length.
struct ConfigPoint {
    AlgorithmSpec algorithm;
    std::size_t m = 0, n = 0, k = 0;
    double snr_db = 0.0;
};

struct TrialMetrics {
    double sinr_db = 0.0;
    std::vector<double> per_output_db;
    double ser = 0.0;
    double final_cost = 0.0;
    std::size_t rotations = 0;
    double wall_ms = 0.0;
    std::string error;                   // empty on success, else an error code name
    std::vector<double> sinr_trace_db;   // adaptive: one entry per post-warm-up step
};

/// Grid in output order: algorithm, M, N, K (or window), SNR.
std::vector<ConfigPoint> expand_grid(const ExperimentConfig& config);

/// Seed of a trial. The algorithm is not hashed, so every algorithm sees the
/// same channel, sources and noise at a given point and trial.
std::uint64_t trial_seed(const ExperimentConfig& config, const ConfigPoint& point, std::size_t trial);

/// Errors raised by the algorithm are caught and reported in `error`.
TrialMetrics run_trial(const ExperimentConfig& config, const ConfigPoint& point, std::size_t trial);

struct TrialRecord {
    ConfigPoint point;
    std::size_t trial = 0;
    TrialMetrics metrics;
};

/// Runs every point and trial on `jobs` worker threads (0 = hardware
/// concurrency). Records come back in grid order regardless of scheduling.
std::vector<TrialRecord> run_campaign(const ExperimentConfig& config, std::size_t jobs = 1);

/// "%.9g" with inf, -inf and nan spelled out.
std::string format_real(double x);

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);

struct SummaryRow {
    std::string algorithm, variant;
    std::size_t m = 0, n = 0, k = 0;
    double snr_db = 0.0;
    std::size_t trials = 0;
    std::size_t failed = 0;
    double mean_sinr_db = 0.0, se_sinr_db = 0.0;
    double mean_ser = 0.0, se_ser = 0.0;
    double mean_final_cost = 0.0;
    double mean_rotations = 0.0;
    double mean_wall_ms = 0.0;
};

/// Groups successful rows by point; failed rows are only counted.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Parses a trials CSV written by write_trials_csv. Throws Error(Io) on
/// malformed input.
std::vector<TrialRecord> read_trials_csv(std::istream& in);

/// "<stem>_summary.csv" next to the trials file.
std::filesystem::path summary_path_for(const std::filesystem::path& trials_csv);

/// Writes both files. Throws Error(Io) naming the path on failure.
void write_campaign(const std::filesystem::path& trials_csv, const std::vector<TrialRecord>& records);

}  // namespace hgcma
