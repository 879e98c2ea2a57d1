// SPDX-License-Identifier: Apache-2.0
#include "hgcma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "hgcma/error.hpp"
#include "hgcma/rng.hpp"
#include "hgcma/separators.hpp"
#include "hgcma/whitening.hpp"

namespace hgcma {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    for (;;) {
        const auto pos = s.find(sep);
        out.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    s = trim(s);
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return value;
}

std::optional<double> parse_real(std::string_view s) {
    s = trim(s);
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    return parse_number<double>(s);
}

[[noreturn]] void config_error(std::size_t line, const std::string& msg) {
    throw Error(ErrorCode::Config, "config line " + std::to_string(line) + ": " + msg);
}

template <typename T>
std::vector<T> parse_list(std::string_view value, std::size_t line, std::string_view key) {
    std::vector<T> out;
    for (std::string_view item : split(value, ',')) {
        std::optional<T> v;
        if constexpr (std::is_same_v<T, double>) v = parse_real(item);
        else v = parse_number<T>(item);
        if (!v) config_error(line, "bad value '" + std::string(trim(item)) + "' for " + std::string(key));
        out.push_back(*v);
    }
    return out;
}

template <typename T>
T parse_scalar(std::string_view value, std::size_t line, std::string_view key) {
    const auto v = parse_number<T>(value);
    if (!v) config_error(line, "bad value '" + std::string(value) + "' for " + std::string(key));
    return *v;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
    if (v.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double mu = mean_of(v);
    if (!std::isfinite(mu)) return std::numeric_limits<double>::quiet_NaN();
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

ComplexBlock columns(const ComplexBlock& b, std::size_t from, std::size_t to) {
    ComplexBlock out(b.rows(), to - from);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = from; j < to; ++j) out(i, j - from) = b(i, j);
    return out;
}

void fill_scores(TrialMetrics& tm, const SinrResult& s) {
    tm.sinr_db = to_db(s.average);
    tm.per_output_db.clear();
    for (double v : s.per_output) tm.per_output_db.push_back(to_db(v));
}

void run_batch(const ExperimentConfig& config, const ConfigPoint& pt, std::uint64_t seed, TrialMetrics& tm) {
    const ChannelScenario sc = make_scenario(pt.m, pt.n, pt.k, pt.snr_db, config.constellation, seed);
    const ComplexBlock s =
        gen_sources(pt.m, pt.k, config.constellation, derive_seed(seed, static_cast<std::uint64_t>(SeedStream::Sources)));
    const ComplexBlock y = observe(sc, s);

    SeparatorConfig sep;
    sep.sweeps = config.sweeps;
    sep.record_trace = false;
    sep.variant = pt.algorithm.variant;
    SeparatorState st;
    switch (pt.algorithm.kind) {
        case AlgorithmKind::Gcma: st = run_gcma(y, pt.m, sep); break;
        case AlgorithmKind::Hgcma: st = run_hgcma(y, pt.m, sep); break;
        case AlgorithmKind::Lscma: st = run_lscma(y, pt.m, config.lscma_iters); break;
        case AlgorithmKind::AdaptiveHgcma: break;
    }
    fill_scores(tm, sinr(st.w, sc.mixing, sc.noise_variance));
    tm.ser = ser(resolve_ambiguity(st.work, s).second, s, config.constellation);
    tm.final_cost = cm_cost(st.work);
    tm.rotations = st.rotations;
}

void run_adaptive(const ExperimentConfig& config, const ConfigPoint& pt, std::uint64_t seed, TrialMetrics& tm) {
    const std::size_t steps = config.steps;
    const ChannelScenario sc = make_scenario(pt.m, pt.n, steps, pt.snr_db, config.constellation, seed);
    const ComplexBlock s =
        gen_sources(pt.m, steps, config.constellation, derive_seed(seed, static_cast<std::uint64_t>(SeedStream::Sources)));
    ComplexBlock y = observe(sc, s);

    // A fixed whitener from the first window reduces N > M to the square case.
    ComplexBlock front = ComplexBlock::identity(pt.m);
    if (pt.n > pt.m) {
        front = fit_whitener(columns(y, 0, pt.k), pt.m).matrix;
        y = front * y;
    }

    AdaptiveState st = adaptive_init(pt.m, pt.k, pt.algorithm.strategy);
    ComplexBlock z(pt.m, steps);
    tm.sinr_trace_db.reserve(steps - pt.k);
    SinrResult last;
    for (std::size_t t = 0; t < steps; ++t) {
        const std::vector<cplx> col = y.column(t);
        z.set_column(t, adaptive_step(st, col));
        if (t >= pt.k) {
            last = sinr(st.w * front, sc.mixing, sc.noise_variance);
            tm.sinr_trace_db.push_back(to_db(last.average));
        }
    }
    fill_scores(tm, last);
    const std::size_t half = steps / 2;
    const ComplexBlock tail_s = columns(s, half, steps);
    tm.ser = ser(resolve_ambiguity(columns(z, half, steps), tail_s).second, tail_s, config.constellation);
    tm.final_cost = st.last_cost;
    tm.rotations = st.total_rotations;
}

}  // namespace

AlgorithmSpec AlgorithmSpec::parse(std::string_view text) {
    text = trim(text);
    const auto colon = text.find(':');
    const std::string_view base = text.substr(0, colon);
    const std::string_view var = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    AlgorithmSpec a;
    if (base == "gcma" && var.empty()) {
        a.kind = AlgorithmKind::Gcma;
    } else if (base == "lscma" && var.empty()) {
        a.kind = AlgorithmKind::Lscma;
    } else if (base == "hgcma") {
        a.kind = AlgorithmKind::Hgcma;
        if (var == "exact") a.variant = ShearVariant::Exact;
        else if (var == "semi") a.variant = ShearVariant::SemiExact;
        else if (var == "linear" || var.empty()) a.variant = ShearVariant::Linear;
        else throw Error(ErrorCode::Config, "unknown HG-CMA variant '" + std::string(var) + "'");
    } else if (base == "adaptive-hgcma") {
        a.kind = AlgorithmKind::AdaptiveHgcma;
        if (var == "sweep") a.strategy = RotationStrategy::FullSweep;
        else if (var == "single") a.strategy = RotationStrategy::SingleAuto;
        else if (var == "two" || var.empty()) a.strategy = RotationStrategy::TwoMaxDeviation;
        else throw Error(ErrorCode::Config, "unknown adaptive strategy '" + std::string(var) + "'");
    } else {
        throw Error(ErrorCode::Config, "unknown algorithm '" + std::string(text) + "'");
    }
    return a;
}

std::string_view AlgorithmSpec::name() const noexcept {
    switch (kind) {
        case AlgorithmKind::Gcma: return "gcma";
        case AlgorithmKind::Hgcma: return "hgcma";
        case AlgorithmKind::Lscma: return "lscma";
        case AlgorithmKind::AdaptiveHgcma: return "adaptive-hgcma";
    }
    return "";
}

std::string_view AlgorithmSpec::variant_name() const noexcept {
    if (kind == AlgorithmKind::Hgcma) {
        switch (variant) {
            case ShearVariant::Exact: return "exact";
            case ShearVariant::SemiExact: return "semi";
            case ShearVariant::Linear: return "linear";
        }
    }
    if (kind == AlgorithmKind::AdaptiveHgcma) {
        switch (strategy) {
            case RotationStrategy::FullSweep: return "sweep";
            case RotationStrategy::SingleAuto: return "single";
            case RotationStrategy::TwoMaxDeviation: return "two";
        }
    }
    return "";
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
    ExperimentConfig c;
    bool has_alg = false, has_m = false, has_n = false, has_k = false, has_snr = false;
    std::size_t line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) config_error(line_no, "expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (value.empty()) config_error(line_no, "empty value for " + std::string(key));

        if (key == "algorithms") {
            c.algorithms.clear();
            for (std::string_view item : split(value, ',')) {
                try {
                    c.algorithms.push_back(AlgorithmSpec::parse(item));
                } catch (const Error& e) {
                    config_error(line_no, e.what());
                }
            }
            has_alg = true;
        } else if (key == "M") {
            c.m = parse_list<std::size_t>(value, line_no, key);
            has_m = true;
        } else if (key == "N") {
            c.n = parse_list<std::size_t>(value, line_no, key);
            has_n = true;
        } else if (key == "K") {
            c.k = parse_list<std::size_t>(value, line_no, key);
            has_k = true;
        } else if (key == "snr_db") {
            c.snr_db = parse_list<double>(value, line_no, key);
            has_snr = true;
        } else if (key == "constellation") {
            try {
                c.constellation = Constellation::from_name(value);
            } catch (const Error& e) {
                config_error(line_no, e.what());
            }
        } else if (key == "sweeps") {
            c.sweeps = parse_scalar<std::size_t>(value, line_no, key);
        } else if (key == "trials") {
            c.trials = parse_scalar<std::size_t>(value, line_no, key);
        } else if (key == "seed") {
            c.seed = parse_scalar<std::uint64_t>(value, line_no, key);
        } else if (key == "window") {
            c.window = parse_list<std::size_t>(value, line_no, key);
        } else if (key == "steps") {
            c.steps = parse_scalar<std::size_t>(value, line_no, key);
        } else if (key == "lscma_iters") {
            c.lscma_iters = parse_scalar<std::size_t>(value, line_no, key);
        } else if (key == "out") {
            c.out = std::filesystem::path(std::string(value));
        } else {
            config_error(line_no, "unknown key '" + std::string(key) + "'");
        }
    }
    if (!has_alg) throw Error(ErrorCode::Config, "config: missing 'algorithms'");
    if (!has_m) throw Error(ErrorCode::Config, "config: missing 'M'");
    if (!has_n) throw Error(ErrorCode::Config, "config: missing 'N'");
    if (!has_k) throw Error(ErrorCode::Config, "config: missing 'K'");
    if (!has_snr) throw Error(ErrorCode::Config, "config: missing 'snr_db'");
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse(ss.str());
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

void ExperimentConfig::validate() const {
    if (algorithms.empty() || m.empty() || n.empty() || k.empty() || snr_db.empty())
        throw Error(ErrorCode::Config, "config: lists must be nonempty");
    if (trials == 0) throw Error(ErrorCode::Config, "config: trials must be at least 1");
    if (sweeps == 0) throw Error(ErrorCode::Config, "config: sweeps must be at least 1");
    if (lscma_iters == 0) throw Error(ErrorCode::Config, "config: lscma_iters must be at least 1");
    for (std::size_t mm : m)
        if (mm == 0) throw Error(ErrorCode::Config, "config: M must be positive");
    for (std::size_t mm : m)
        for (std::size_t nn : n)
            if (nn < mm) throw Error(ErrorCode::Config, "config: every N must be at least every M");
    for (double s : snr_db)
        if (!std::isfinite(s)) throw Error(ErrorCode::Config, "config: SNR must be finite");
    for (const AlgorithmSpec& a : algorithms) {
        if (a.kind != AlgorithmKind::AdaptiveHgcma) continue;
        for (std::size_t w : window.empty() ? k : window) {
            if (w < 2) throw Error(ErrorCode::Config, "config: adaptive window must be at least 2");
            if (steps <= w) throw Error(ErrorCode::Config, "config: steps must exceed the adaptive window");
        }
    }
}

std::vector<ConfigPoint> expand_grid(const ExperimentConfig& config) {
    std::vector<ConfigPoint> pts;
    for (const AlgorithmSpec& a : config.algorithms) {
        const auto& ks = a.kind == AlgorithmKind::AdaptiveHgcma && !config.window.empty() ? config.window : config.k;
        for (std::size_t m : config.m)
            for (std::size_t n : config.n)
                for (std::size_t k : ks)
                    for (double snr : config.snr_db) pts.push_back(ConfigPoint{a, m, n, k, snr});
    }
    return pts;
}

std::uint64_t trial_seed(const ExperimentConfig& config, const ConfigPoint& point, std::size_t trial) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "M=%zu;N=%zu;K=%zu;snr=%.17g;c=%s", point.m, point.n, point.k, point.snr_db,
                  std::string(config.constellation.name()).c_str());
    return derive_seed(config.seed ^ fnv1a64(buf), trial);
}

TrialMetrics run_trial(const ExperimentConfig& config, const ConfigPoint& point, std::size_t trial) {
    TrialMetrics tm;
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = trial_seed(config, point, trial);
    try {
        if (point.algorithm.kind == AlgorithmKind::AdaptiveHgcma) run_adaptive(config, point, seed, tm);
        else run_batch(config, point, seed, tm);
    } catch (const Error& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        tm = TrialMetrics{};
        tm.sinr_db = tm.ser = tm.final_cost = nan;
        tm.error = std::string(to_string(e.code()));
    }
    tm.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return tm;
}

std::vector<TrialRecord> run_campaign(const ExperimentConfig& config, std::size_t jobs) {
    config.validate();
    std::vector<TrialRecord> records;
    for (const ConfigPoint& pt : expand_grid(config))
        for (std::size_t t = 0; t < config.trials; ++t) records.push_back(TrialRecord{pt, t, {}});

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, records.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < records.size();)
            records[i].metrics = run_trial(config, records[i].point, records[i].trial);
    };
    std::vector<std::jthread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    pool.clear();
    return records;
}

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
    out << "algorithm,variant,M,N,K,snr_db,trial,sinr_db,ser,final_cost,rotations,wall_ms,error\n";
    for (const TrialRecord& r : records) {
        const ConfigPoint& p = r.point;
        const TrialMetrics& m = r.metrics;
        out << p.algorithm.name() << ',' << p.algorithm.variant_name() << ',' << p.m << ',' << p.n << ',' << p.k
            << ',' << format_real(p.snr_db) << ',' << r.trial << ',' << format_real(m.sinr_db) << ','
            << format_real(m.ser) << ',' << format_real(m.final_cost) << ',' << m.rotations << ','
            << format_real(m.wall_ms) << ',' << m.error << '\n';
    }
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
    using Key = std::tuple<std::size_t, std::string, std::string, std::size_t, std::size_t, std::size_t, double>;
    struct Acc {
        std::vector<double> sinr, ser, cost, rot, wall;
        std::size_t failed = 0;
    };
    // Points keep their first-appearance order.
    std::map<std::tuple<std::string, std::string, std::size_t, std::size_t, std::size_t, double>, std::size_t> index;
    std::vector<std::pair<Key, Acc>> groups;
    for (const TrialRecord& r : records) {
        const auto id = std::make_tuple(std::string(r.point.algorithm.name()), std::string(r.point.algorithm.variant_name()),
                                        r.point.m, r.point.n, r.point.k, r.point.snr_db);
        auto it = index.find(id);
        if (it == index.end()) {
            it = index.emplace(id, groups.size()).first;
            groups.push_back({Key{groups.size(), std::get<0>(id), std::get<1>(id), r.point.m, r.point.n, r.point.k,
                                  r.point.snr_db},
                              Acc{}});
        }
        Acc& acc = groups[it->second].second;
        if (!r.metrics.error.empty()) {
            ++acc.failed;
            continue;
        }
        acc.sinr.push_back(r.metrics.sinr_db);
        acc.ser.push_back(r.metrics.ser);
        acc.cost.push_back(r.metrics.final_cost);
        acc.rot.push_back(static_cast<double>(r.metrics.rotations));
        acc.wall.push_back(r.metrics.wall_ms);
    }
    std::vector<SummaryRow> rows;
    for (const auto& [key, acc] : groups) {
        SummaryRow s;
        s.algorithm = std::get<1>(key);
        s.variant = std::get<2>(key);
        s.m = std::get<3>(key);
        s.n = std::get<4>(key);
        s.k = std::get<5>(key);
        s.snr_db = std::get<6>(key);
        s.trials = acc.sinr.size() + acc.failed;
        s.failed = acc.failed;
        s.mean_sinr_db = mean_of(acc.sinr);
        s.se_sinr_db = stderr_of(acc.sinr);
        s.mean_ser = mean_of(acc.ser);
        s.se_ser = stderr_of(acc.ser);
        s.mean_final_cost = mean_of(acc.cost);
        s.mean_rotations = mean_of(acc.rot);
        s.mean_wall_ms = mean_of(acc.wall);
        rows.push_back(std::move(s));
    }
    return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "algorithm,variant,M,N,K,snr_db,trials,failed,mean_sinr_db,se_sinr_db,mean_ser,se_ser,mean_final_cost,"
           "mean_rotations,mean_wall_ms\n";
    for (const SummaryRow& s : rows)
        out << s.algorithm << ',' << s.variant << ',' << s.m << ',' << s.n << ',' << s.k << ',' << format_real(s.snr_db)
            << ',' << s.trials << ',' << s.failed << ',' << format_real(s.mean_sinr_db) << ','
            << format_real(s.se_sinr_db) << ',' << format_real(s.mean_ser) << ',' << format_real(s.se_ser) << ','
            << format_real(s.mean_final_cost) << ',' << format_real(s.mean_rotations) << ','
            << format_real(s.mean_wall_ms) << '\n';
}

std::vector<TrialRecord> read_trials_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Io, "trials csv: empty input");
    if (trim(line) != "algorithm,variant,M,N,K,snr_db,trial,sinr_db,ser,final_cost,rotations,wall_ms,error")
        throw Error(ErrorCode::Io, "trials csv: unexpected header");
    std::vector<TrialRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split(trim(line), ',');
        const auto bad = [&] { return Error(ErrorCode::Io, "trials csv line " + std::to_string(line_no) + ": malformed row"); };
        if (f.size() != 13) throw bad();
        TrialRecord r;
        try {
            std::string alg(f[0]);
            if (!f[1].empty()) alg += ":" + std::string(f[1]);
            r.point.algorithm = AlgorithmSpec::parse(alg);
        } catch (const Error&) {
            throw bad();
        }
        const auto m = parse_number<std::size_t>(f[2]), n = parse_number<std::size_t>(f[3]),
                   k = parse_number<std::size_t>(f[4]), trial = parse_number<std::size_t>(f[6]),
                   rot = parse_number<std::size_t>(f[10]);
        const auto snr = parse_real(f[5]), sinr_db = parse_real(f[7]), ser_v = parse_real(f[8]),
                   cost = parse_real(f[9]), wall = parse_real(f[11]);
        if (!m || !n || !k || !trial || !rot || !snr || !sinr_db || !ser_v || !cost || !wall) throw bad();
        r.point.m = *m;
        r.point.n = *n;
        r.point.k = *k;
        r.point.snr_db = *snr;
        r.trial = *trial;
        r.metrics.sinr_db = *sinr_db;
        r.metrics.ser = *ser_v;
        r.metrics.final_cost = *cost;
        r.metrics.rotations = *rot;
        r.metrics.wall_ms = *wall;
        r.metrics.error = std::string(f[12]);
        out.push_back(std::move(r));
    }
    return out;
}

std::filesystem::path summary_path_for(const std::filesystem::path& trials_csv) {
    std::filesystem::path p = trials_csv;
    p.replace_filename(trials_csv.stem().string() + "_summary.csv");
    return p;
}

void write_campaign(const std::filesystem::path& trials_csv, const std::vector<TrialRecord>& records) {
    {
        std::ofstream out(trials_csv, std::ios::binary);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + trials_csv.string());
        write_trials_csv(out, records);
        if (!out) throw Error(ErrorCode::Io, "write failed for " + trials_csv.string());
    }
    const auto spath = summary_path_for(trials_csv);
    std::ofstream out(spath, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + spath.string());
    write_summary_csv(out, summarize(records));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + spath.string());
}

}  // namespace hgcma
