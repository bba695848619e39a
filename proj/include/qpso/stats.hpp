#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qpso::stats {

/// Ranks starting at 1; tied values share the mean of their positions.
std::vector<double> midranks(std::span<const double> values);

/// Spearman rank correlation 1 - 6 sum d^2 / (J^3 - J) on midranks.
///
/// Returns nullopt ("undefined") for fewer than two items or when either
/// input is constant. Throws std::invalid_argument on a length mismatch.
std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys);

struct WelchResult {
    double t = 0.0;
    double p = 1.0;   ///< two-sided
    double se = 0.0;  ///< sqrt(s_a^2 / n_a + s_b^2 / n_b)
    double df = 0.0;  ///< Welch-Satterthwaite degrees of freedom

    /// One-sided p for the alternative mean(a) < mean(b).
    double p_less() const;
    /// One-sided p for the alternative mean(a) > mean(b).
    double p_greater() const;
};

/// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

/// Welch's unequal-variance two-sample t test. Throws std::invalid_argument
/// when either sample has fewer than two values.
WelchResult unpaired_t_test(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1 denominator); NaN below two values.
double sample_std(std::span<const double> values);

struct AlgorithmResults {
    std::string name;
    std::vector<double> finals;  ///< final best fitness of each completed run
    std::size_t failed = 0;      ///< runs that aborted
};

struct AlgorithmSummary {
    std::string name;
    std::size_t runs = 0;
    std::size_t failed = 0;
    double mean = 0.0;
    double std = 0.0;
};

struct PairwiseTest {
    std::size_t a = 0;  ///< index into ComparisonReport::rows
    std::size_t b = 0;
    std::optional<WelchResult> welch;  ///< empty when a side has < 2 runs
};

struct ComparisonReport {
    std::vector<AlgorithmSummary> rows;
    std::vector<PairwiseTest> pairs;  ///< every a < b

    const PairwiseTest* find(std::size_t a, std::size_t b) const;
};

ComparisonReport summarize(const std::vector<AlgorithmResults>& results);

/// Mean-sorted grouping: walking algorithms from best to worst mean, an
/// algorithm joins the current group when its Welch p against the group's
/// best member is >= significance, and otherwise opens a new group. A group
/// takes the 1-based sorted position of its best member as rank (1, 1, 3).
/// Ranks are returned in report row order.
std::vector<int> rank_algorithms(const ComparisonReport& report, double significance = 0.05);

/// Cross-run samples at fixed checkpoints; inner vectors are indexed by run.
struct CheckpointSeries {
    std::vector<long> iterations;
    std::vector<std::vector<double>> best_f;
    std::vector<std::vector<double>> d_x;
    std::vector<std::vector<double>> d_p;
    std::vector<std::vector<double>> s_x;
    std::vector<std::vector<double>> s_p;

    /// Throws std::invalid_argument if the per-checkpoint vectors are ragged.
    void validate() const;
};

struct CorrelationRecord {
    long n = 0;
    std::optional<double> d_x;
    std::optional<double> d_p;
    std::optional<double> s_x;
    std::optional<double> s_p;
};

/// Spearman between best fitness and each diversity measure at every
/// checkpoint, on raw values (positive means low fitness goes with low diversity).
std::vector<CorrelationRecord> fitness_diversity_correlations(const CheckpointSeries& series);

/// Sup distance between the empirical CDF of `samples` and `cdf`.
template <class Cdf>
double ks_distance(std::vector<double> samples, Cdf cdf);

} // namespace qpso::stats

#include <algorithm>
#include <cmath>

template <class Cdf>
double qpso::stats::ks_distance(std::vector<double> samples, Cdf cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double sup = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double f = cdf(samples[k]);
        sup = std::max({sup, std::abs(f - static_cast<double>(k) / n), std::abs(static_cast<double>(k + 1) / n - f)});
    }
    return sup;
}
