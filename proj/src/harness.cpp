#include "qpso/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <deque>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "qpso/diversity.hpp"

namespace qpso {

namespace fs = std::filesystem;

namespace {

std::string real(double v) { return fmt::format("{:.17g}", v); }

std::string optional_real(const std::optional<double>& v) { return v ? real(*v) : std::string("undefined"); }

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

double parse_real(const std::string& token, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used == token.size())
            return v;
    } catch (const std::exception&) {
    }
    throw AnalysisError(where + ": bad number '" + token + "'");
}

long parse_long(const std::string& token, const std::string& where) {
    try {
        std::size_t used = 0;
        const long v = std::stol(token, &used);
        if (used == token.size())
            return v;
    } catch (const std::exception&) {
    }
    throw AnalysisError(where + ": bad integer '" + token + "'");
}

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

std::string cds_label(CdsTrigger t) {
    switch (t) {
    case CdsTrigger::below:
        return "low";
    case CdsTrigger::above:
        return "high";
    default:
        return "ok";
    }
}

} // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
    out << kTraceHeader << '\n';
    for (const auto& r : trace) {
        out << r.run << ',' << r.n << ',' << real(r.best_f) << ',' << real(r.d_x) << ',' << real(r.d_p) << ','
            << real(r.s_x) << ',' << real(r.s_p) << ',' << real(r.alpha) << ',' << r.phase << '\n';
    }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader)
        throw AnalysisError(source + ":1: missing or unexpected trace header");
    std::vector<TraceRecord> trace;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const std::string where = source + ":" + std::to_string(line_no);
        const auto f = split_csv(line);
        if (f.size() != 9)
            throw AnalysisError(where + ": expected 9 fields, got " + std::to_string(f.size()));
        TraceRecord r;
        const long run = parse_long(f[0], where);
        if (run < 0)
            throw AnalysisError(where + ": negative run id");
        r.run = static_cast<std::size_t>(run);
        r.n = parse_long(f[1], where);
        r.best_f = parse_real(f[2], where);
        r.d_x = parse_real(f[3], where);
        r.d_p = parse_real(f[4], where);
        r.s_x = parse_real(f[5], where);
        r.s_p = parse_real(f[6], where);
        r.alpha = parse_real(f[7], where);
        r.phase = f[8];
        trace.push_back(std::move(r));
    }
    return trace;
}

RunResult run_single(const ExperimentConfig& config, const ObjectiveFunction& f, const AlgorithmConfig& algorithm,
                     std::size_t run) {
    RunResult result;
    result.algorithm = algorithm.tag;
    result.run = run;

    Engine rng = make_engine(derive_seed(config.seed, algorithm.tag, run));
    const long n_max = config.iterations;
    const long horizon = std::max(1L, n_max);
    long n = 0;
    try {
        const bool classical = algorithm.family == Family::pso;
        SwarmState state = initialize_swarm(f, config.swarm_size, rng, classical);
        const double diagonal = domain_diagonal(f);

        const CoefficientSchedule alpha = algorithm.alpha_schedule(n_max);
        std::optional<TdcPolicy> tdc;
        std::optional<CdsPolicy> cds;
        std::optional<ClassicalPsoParams> pso;
        if (algorithm.family == Family::tdc)
            tdc = algorithm.tdc_policy(n_max);
        if (algorithm.family == Family::cds)
            cds = algorithm.cds_policy(distance_to_average(state.x, diagonal));
        if (classical)
            pso = algorithm.pso_params(f, n_max);

        for (n = 0;; ++n) {
            const DiversitySample sample = sample_diversities(state, diagonal);
            ControlDecision decision{0.0, false};
            std::string phase = "-";
            switch (algorithm.family) {
            case Family::qpso:
                decision.alpha = alpha.at(n);
                break;
            case Family::tdc:
                decision = tdc->decide(sample.d_x, n);
                phase = std::to_string(tdc->phase());
                break;
            case Family::cds:
                decision = cds_decide(*cds, sample.d_x, n, horizon);
                phase = cds_label(cds_trigger(*cds, sample.d_x, n, horizon));
                break;
            case Family::pso:
                decision.alpha =
                    pso->kind == ClassicalPsoParams::Kind::inertia ? pso->inertia.at(n) : pso->chi;
                break;
            }

            if (n % config.stride == 0 || n == n_max) {
                result.trace.push_back({run, n, sample.best_f, sample.d_x, sample.d_p, sample.s_x, sample.s_p,
                                        decision.alpha, phase});
            }
            if (n == n_max)
                break;

            if (classical) {
                classical_pso_step(state, f, *pso, rng, config.boundary);
            } else {
                qpso_step(state, f, algorithm.qpso_type, decision.alpha, rng, config.boundary);
                if (decision.collapse_pbest) {
                    apply_pbest_collapse(state, rng);
                    if (algorithm.reevaluate_after_collapse)
                        reevaluate_pbests(state, f);
                }
            }
        }
        result.final_best = state.best_fitness();
    } catch (const std::exception& e) {
        result.ok = false;
        result.error = "algorithm " + algorithm.tag + ", run " + std::to_string(run) + ", iteration " +
                       std::to_string(n) + ": " + e.what();
    }
    return result;
}

RunResult run_single(const ExperimentConfig& config, const std::string& tag, std::size_t run) {
    return run_single(config, build_objective(config), config.algorithm(tag), run);
}

std::vector<IndexEntry> run_campaign(const ExperimentConfig& config, const fs::path& out_dir,
                                     const CampaignOptions& options) {
    const ObjectiveFunction f = build_objective(config);
    const std::size_t runs = static_cast<std::size_t>(config.runs);

    struct Task {
        std::size_t slot;
        std::size_t algorithm;
        std::size_t run;
    };
    std::vector<Task> tasks;
    for (std::size_t a = 0; a < config.algorithms.size(); ++a)
        for (std::size_t r = 0; r < runs; ++r)
            tasks.push_back({tasks.size(), a, r});
    if (options.shuffle_seed) {
        Engine rng = make_engine(*options.shuffle_seed);
        std::shuffle(tasks.begin(), tasks.end(), rng);
    }

    fs::create_directories(out_dir / "traces");
    for (const auto& a : config.algorithms)
        fs::create_directories(out_dir / "traces" / a.tag);

    std::vector<IndexEntry> index(tasks.size());
    std::mutex mutex;
    std::condition_variable ready;
    std::deque<std::pair<std::size_t, RunResult>> done;
    std::atomic<std::size_t> next{0};

    const auto worker = [&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++) {
            const Task& t = tasks[k];
            RunResult r = run_single(config, f, config.algorithms[t.algorithm], t.run);
            {
                std::lock_guard lock(mutex);
                done.emplace_back(t.slot, std::move(r));
            }
            ready.notify_one();
        }
    };

    const unsigned jobs = std::max(1U, std::min<unsigned>(options.jobs, static_cast<unsigned>(tasks.size())));
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < jobs; ++w)
        pool.emplace_back(worker);

    // Single collector: only this thread touches the filesystem.
    for (std::size_t collected = 0; collected < tasks.size(); ++collected) {
        std::pair<std::size_t, RunResult> item;
        {
            std::unique_lock lock(mutex);
            ready.wait(lock, [&] { return !done.empty(); });
            item = std::move(done.front());
            done.pop_front();
        }
        auto& [slot, r] = item;
        const fs::path rel = fs::path("traces") / r.algorithm / ("run_" + std::to_string(r.run) + ".csv");
        std::ofstream out(out_dir / rel, std::ios::binary);
        write_trace_csv(out, r.trace);
        if (!out)
            throw std::runtime_error("cannot write " + (out_dir / rel).string());
        index[slot] = {r.algorithm, r.run, r.ok, r.final_best, rel.generic_string(), sanitize(r.error)};
    }
    pool.clear();

    {
        std::ofstream out(out_dir / "index.csv", std::ios::binary);
        out << "algorithm,run,status,final_best_f,trace,error\n";
        for (const auto& e : index) {
            out << e.algorithm << ',' << e.run << ',' << (e.ok ? "ok" : "failed") << ','
                << (e.ok ? real(e.final_best) : std::string()) << ',' << e.trace << ',' << e.error << '\n';
        }
    }
    {
        std::ofstream out(out_dir / "config.txt", std::ios::binary);
        out << render_config(config);
    }
    {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        std::ofstream out(out_dir / "metadata.txt", std::ios::binary);
        out << "created = " << stamp << "\njobs = " << jobs << '\n';
    }
    return index;
}

std::vector<IndexEntry> read_index(const fs::path& archive) {
    const fs::path path = archive / "index.csv";
    std::ifstream in(path);
    if (!in)
        throw AnalysisError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "algorithm,run,status,final_best_f,trace,error")
        throw AnalysisError(path.string() + ":1: missing or unexpected index header");
    std::vector<IndexEntry> entries;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        const auto f = split_csv(line);
        if (f.size() != 6)
            throw AnalysisError(where + ": expected 6 fields, got " + std::to_string(f.size()));
        IndexEntry e;
        e.algorithm = f[0];
        const long run = parse_long(f[1], where);
        if (run < 0)
            throw AnalysisError(where + ": negative run id");
        e.run = static_cast<std::size_t>(run);
        if (f[2] != "ok" && f[2] != "failed")
            throw AnalysisError(where + ": status must be ok or failed");
        e.ok = f[2] == "ok";
        if (e.ok)
            e.final_best = parse_real(f[3], where);
        e.trace = f[4];
        e.error = f[5];
        entries.push_back(std::move(e));
    }
    return entries;
}

namespace {

std::vector<std::string> algorithms_in(const std::vector<IndexEntry>& index) {
    std::vector<std::string> names;
    for (const auto& e : index) {
        if (std::find(names.begin(), names.end(), e.algorithm) == names.end())
            names.push_back(e.algorithm);
    }
    return names;
}

std::vector<stats::AlgorithmResults> collect_results(const std::vector<IndexEntry>& index) {
    std::vector<stats::AlgorithmResults> results;
    for (const auto& name : algorithms_in(index)) {
        stats::AlgorithmResults r{name, {}, 0};
        for (const auto& e : index) {
            if (e.algorithm != name)
                continue;
            if (e.ok)
                r.finals.push_back(e.final_best);
            else
                ++r.failed;
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::string cell(double v) { return std::isnan(v) ? std::string("undefined") : fmt::format("{:.4e}", v); }

} // namespace

std::string render_summary_table(const stats::ComparisonReport& report, const std::vector<int>& ranks) {
    std::size_t width = 9;
    std::vector<std::string> cells;
    std::size_t cell_width = 0;
    for (const auto& row : report.rows) {
        width = std::max(width, row.name.size());
        cells.push_back(fmt::format("{} ({})", cell(row.mean), cell(row.std)));
        if (!ranks.empty())
            cell_width = std::max({cell_width, cells.back().size(), std::size_t{10}});
    }
    std::string out = fmt::format("{:<{}}  {:>5}  {:>6}  {:<{}}", "algorithm", width, "runs", "failed", "mean (std)",
                                  cell_width);
    out += ranks.empty() ? "\n" : "  rank\n";
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
        const auto& row = report.rows[k];
        out += fmt::format("{:<{}}  {:>5}  {:>6}  {:<{}}", row.name, width, row.runs, row.failed, cells[k], cell_width);
        if (!ranks.empty())
            out += fmt::format("  {:>4}", ranks[k]);
        if (row.failed > 0)
            out += "  [incomplete]";
        out += '\n';
    }
    return out;
}

stats::CheckpointSeries load_checkpoint_series(const fs::path& archive, const std::string& algorithm) {
    stats::CheckpointSeries series;
    bool first = true;
    for (const auto& e : read_index(archive)) {
        if (e.algorithm != algorithm || !e.ok)
            continue;
        const fs::path path = archive / e.trace;
        std::ifstream in(path);
        if (!in)
            throw AnalysisError("cannot open trace " + path.string());
        const auto trace = read_trace_csv(in, path.string());
        if (first) {
            for (const auto& r : trace)
                series.iterations.push_back(r.n);
            const std::size_t c = series.iterations.size();
            series.best_f.resize(c);
            series.d_x.resize(c);
            series.d_p.resize(c);
            series.s_x.resize(c);
            series.s_p.resize(c);
            first = false;
        }
        if (trace.size() != series.iterations.size())
            throw AnalysisError(path.string() + ": checkpoint count differs from the other runs");
        for (std::size_t c = 0; c < trace.size(); ++c) {
            if (trace[c].n != series.iterations[c])
                throw AnalysisError(path.string() + ": checkpoint iterations differ from the other runs");
            series.best_f[c].push_back(trace[c].best_f);
            series.d_x[c].push_back(trace[c].d_x);
            series.d_p[c].push_back(trace[c].d_p);
            series.s_x[c].push_back(trace[c].s_x);
            series.s_p[c].push_back(trace[c].s_p);
        }
    }
    return series;
}

std::vector<fs::path> analyze(const fs::path& archive, AnalysisMode mode, const fs::path& report_dir) {
    const auto index = read_index(archive);
    if (index.empty())
        throw AnalysisError(archive.string() + ": archive holds no runs");
    fs::create_directories(report_dir);
    std::vector<fs::path> written;
    const auto open = [&](const std::string& name) {
        written.push_back(report_dir / name);
        std::ofstream out(written.back(), std::ios::binary);
        if (!out)
            throw AnalysisError("cannot write " + written.back().string());
        return out;
    };

    if (mode == AnalysisMode::correlation) {
        auto out = open("correlation.csv");
        out << "algorithm,n,rho_d_X,rho_d_P,rho_s_X,rho_s_P\n";
        for (const auto& name : algorithms_in(index)) {
            const auto series = load_checkpoint_series(archive, name);
            for (const auto& rec : stats::fitness_diversity_correlations(series)) {
                out << name << ',' << rec.n << ',' << optional_real(rec.d_x) << ',' << optional_real(rec.d_p) << ','
                    << optional_real(rec.s_x) << ',' << optional_real(rec.s_p) << '\n';
            }
        }
        return written;
    }

    const auto report = stats::summarize(collect_results(index));
    if (mode == AnalysisMode::summary) {
        {
            auto out = open("summary.csv");
            out << "algorithm,runs,failed,mean,std,complete\n";
            for (const auto& row : report.rows) {
                out << row.name << ',' << row.runs << ',' << row.failed << ','
                    << (std::isnan(row.mean) ? "undefined" : real(row.mean)) << ','
                    << (std::isnan(row.std) ? "undefined" : real(row.std)) << ','
                    << (row.failed == 0 ? "yes" : "no") << '\n';
            }
        }
        auto out = open("summary.txt");
        out << "Mean and standard deviation of the final best fitness\n\n" << render_summary_table(report, {});
        return written;
    }

    constexpr double significance = 0.05;
    const auto ranks = stats::rank_algorithms(report, significance);
    {
        auto out = open("compare.csv");
        out << "algorithm_a,algorithm_b,t,df,p,se\n";
        for (const auto& pair : report.pairs) {
            out << report.rows[pair.a].name << ',' << report.rows[pair.b].name << ',';
            if (pair.welch)
                out << real(pair.welch->t) << ',' << real(pair.welch->df) << ',' << real(pair.welch->p) << ','
                    << real(pair.welch->se) << '\n';
            else
                out << "undefined,undefined,undefined,undefined\n";
        }
    }
    {
        auto out = open("ranks.csv");
        out << "algorithm,mean,std,rank\n";
        for (std::size_t k = 0; k < report.rows.size(); ++k) {
            const auto& row = report.rows[k];
            out << row.name << ',' << (std::isnan(row.mean) ? "undefined" : real(row.mean)) << ','
                << (std::isnan(row.std) ? "undefined" : real(row.std)) << ',' << ranks[k] << '\n';
        }
    }
    auto out = open("compare.txt");
    out << "Ranks: algorithms sorted by mean final fitness; an algorithm shares the rank of the best member of\n"
           "the current group when Welch's unequal-variance t test against it gives p >= "
        << significance
        << ".\nThis is a simplified stand-in for a stepdown multiple-comparison procedure.\n\n"
        << render_summary_table(report, ranks) << "\nPairwise Welch tests\n";
    for (const auto& pair : report.pairs) {
        out << fmt::format("  {} vs {}: ", report.rows[pair.a].name, report.rows[pair.b].name);
        if (pair.welch)
            out << fmt::format("t = {:.4f}, df = {:.2f}, p = {:.4g}, se = {:.4g}\n", pair.welch->t, pair.welch->df,
                               pair.welch->p, pair.welch->se);
        else
            out << "undefined (fewer than two completed runs)\n";
    }
    return written;
}

} // namespace qpso
