#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpso/config.hpp"
#include "qpso/stats.hpp"

namespace qpso {

class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One checkpoint row of a run.
///
/// Row n describes the state after n iterations together with the control
/// decision taken from that state (the alpha used for the step n -> n+1).
/// `phase` is "1"/"2"/"3" for TDC, "low"/"ok"/"high" for the CDS trigger
/// (below the desired schedule, inside the band, above the upper schedule)
/// and "-" for uncontrolled variants. For classical PSO `alpha` holds the
/// inertia weight or constriction factor.
struct TraceRecord {
    std::size_t run = 0;
    long n = 0;
    double best_f = 0.0;
    double d_x = 0.0;
    double d_p = 0.0;
    double s_x = 0.0;
    double s_p = 0.0;
    double alpha = 0.0;
    std::string phase = "-";
};

inline constexpr const char* kTraceHeader = "run,n,best_f,d_X,d_P,s_X,s_P,alpha,phase";

/// Writes header and rows; reals use 17 significant digits, LF endings.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
/// Throws AnalysisError naming `source` and the line on malformed input.
std::vector<TraceRecord> read_trace_csv(std::istream& in, const std::string& source);

struct RunResult {
    std::string algorithm;
    std::size_t run = 0;
    bool ok = true;
    std::string error;  ///< diagnostic of a failed run
    double final_best = 0.0;
    std::vector<TraceRecord> trace;
};

/// Executes config.iterations iterations of one variant and records a row at
/// n = 0, every config.stride iterations and at the end. Failures are
/// reported in the result, never thrown.
RunResult run_single(const ExperimentConfig& config, const ObjectiveFunction& f, const AlgorithmConfig& algorithm,
                     std::size_t run);
RunResult run_single(const ExperimentConfig& config, const std::string& tag, std::size_t run);

struct IndexEntry {
    std::string algorithm;
    std::size_t run = 0;
    bool ok = true;
    double final_best = 0.0;
    std::string trace;  ///< path relative to the archive root
    std::string error;
};

struct CampaignOptions {
    unsigned jobs = 1;
    /// Shuffles the execution order; outputs must not change.
    std::optional<std::uint64_t> shuffle_seed;
};

/// Runs every (algorithm, run) pair and writes an archive:
///   index.csv, config.txt, metadata.txt (timestamps), traces/<tag>/run_<k>.csv
/// Returns the index in (algorithm, run) order.
std::vector<IndexEntry> run_campaign(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                     const CampaignOptions& options = {});

std::vector<IndexEntry> read_index(const std::filesystem::path& archive);

enum class AnalysisMode { summary, correlation, compare };

/// Cross-run checkpoint samples of one algorithm from the archive (ok runs only).
stats::CheckpointSeries load_checkpoint_series(const std::filesystem::path& archive, const std::string& algorithm);

/// Writes the reports of `mode` into `report_dir` and returns their paths.
/// summary: summary.csv, summary.txt; correlation: correlation.csv;
/// compare: compare.csv, ranks.csv, compare.txt.
std::vector<std::filesystem::path> analyze(const std::filesystem::path& archive, AnalysisMode mode,
                                           const std::filesystem::path& report_dir);

/// Renders `mean (std)` rows in the style of a results table.
std::string render_summary_table(const stats::ComparisonReport& report, const std::vector<int>& ranks);

} // namespace qpso
