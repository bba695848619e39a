#include "qpso/stats.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qpso::stats {

std::vector<double> midranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t k = 0;
    while (k < n) {
        std::size_t end = k + 1;
        while (end < n && values[order[end]] == values[order[k]])
            ++end;
        // positions k..end-1 (0-based) share rank mean((k+1)..end)
        const double rank = 0.5 * static_cast<double>(k + 1 + end);
        for (std::size_t q = k; q < end; ++q)
            ranks[order[q]] = rank;
        k = end;
    }
    return ranks;
}

std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("spearman: inputs differ in length");
    const std::size_t j = xs.size();
    if (j < 2)
        return std::nullopt;
    const auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    };
    if (constant(xs) || constant(ys))
        return std::nullopt;

    const auto rx = midranks(xs);
    const auto ry = midranks(ys);
    double sum_d2 = 0.0;
    for (std::size_t k = 0; k < j; ++k) {
        const double d = rx[k] - ry[k];
        sum_d2 += d * d;
    }
    const double jd = static_cast<double>(j);
    const double rho = 1.0 - 6.0 * sum_d2 / (jd * jd * jd - jd);
    return std::clamp(rho, -1.0, 1.0);
}

double WelchResult::p_less() const { return t <= 0.0 ? 0.5 * p : 1.0 - 0.5 * p; }

double WelchResult::p_greater() const { return t >= 0.0 ? 0.5 * p : 1.0 - 0.5 * p; }

double student_t_cdf(double t, double df) {
    if (std::isnan(t) || !(df > 0.0))
        return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t))
        return t > 0.0 ? 1.0 : 0.0;
    // P(|T| > |t|) = I_{df / (df + t^2)}(df / 2, 1 / 2)
    const double tail = boost::math::ibeta(0.5 * df, 0.5, df / (df + t * t));
    return t < 0.0 ? 0.5 * tail : 1.0 - 0.5 * tail;
}

double mean(std::span<const double> values) {
    if (values.empty())
        return std::numeric_limits<double>::quiet_NaN();
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

namespace {

double sample_variance(std::span<const double> values, double m) {
    double ss = 0.0;
    for (double v : values)
        ss += (v - m) * (v - m);
    return ss / static_cast<double>(values.size() - 1);
}

} // namespace

double sample_std(std::span<const double> values) {
    if (values.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(sample_variance(values, mean(values)));
}

WelchResult unpaired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("unpaired t test needs at least two values per sample");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean(a);
    const double mb = mean(b);
    const double qa = sample_variance(a, ma) / na;
    const double qb = sample_variance(b, mb) / nb;

    WelchResult r;
    r.se = std::sqrt(qa + qb);
    if (r.se == 0.0) {
        r.df = na + nb - 2.0;
        if (ma == mb) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
            r.p = 0.0;
        }
        return r;
    }
    r.t = (ma - mb) / r.se;
    r.df = (qa + qb) * (qa + qb) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    r.p = std::min(1.0, boost::math::ibeta(0.5 * r.df, 0.5, r.df / (r.df + r.t * r.t)));
    return r;
}

const PairwiseTest* ComparisonReport::find(std::size_t a, std::size_t b) const {
    for (const auto& pair : pairs) {
        if ((pair.a == a && pair.b == b) || (pair.a == b && pair.b == a))
            return &pair;
    }
    return nullptr;
}

ComparisonReport summarize(const std::vector<AlgorithmResults>& results) {
    ComparisonReport report;
    for (const auto& r : results)
        report.rows.push_back({r.name, r.finals.size(), r.failed, mean(r.finals), sample_std(r.finals)});
    for (std::size_t a = 0; a < results.size(); ++a) {
        for (std::size_t b = a + 1; b < results.size(); ++b) {
            PairwiseTest test{a, b, std::nullopt};
            if (results[a].finals.size() >= 2 && results[b].finals.size() >= 2)
                test.welch = unpaired_t_test(results[a].finals, results[b].finals);
            report.pairs.push_back(test);
        }
    }
    return report;
}

std::vector<int> rank_algorithms(const ComparisonReport& report, double significance) {
    const std::size_t n = report.rows.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Rows without results sort last.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const double mx = report.rows[x].mean;
        const double my = report.rows[y].mean;
        if (std::isnan(mx) || std::isnan(my))
            return !std::isnan(mx) && std::isnan(my);
        return mx < my;
    });

    std::vector<int> ranks(n, 0);
    std::size_t leader = 0;
    for (std::size_t pos = 0; pos < n; ++pos) {
        const std::size_t row = order[pos];
        bool joins = false;
        if (pos > 0) {
            const PairwiseTest* test = report.find(order[leader], row);
            joins = test && test->welch && test->welch->p >= significance;
        }
        if (!joins)
            leader = pos;
        ranks[row] = static_cast<int>(leader + 1);
    }
    return ranks;
}

void CheckpointSeries::validate() const {
    const std::size_t c = iterations.size();
    for (const auto* field : {&best_f, &d_x, &d_p, &s_x, &s_p}) {
        if (field->size() != c)
            throw std::invalid_argument("checkpoint series: field count differs from checkpoint count");
    }
    if (c == 0)
        return;
    const std::size_t runs = best_f.front().size();
    for (const auto* field : {&best_f, &d_x, &d_p, &s_x, &s_p}) {
        for (const auto& per_run : *field) {
            if (per_run.size() != runs)
                throw std::invalid_argument("checkpoint series: ragged run vectors");
        }
    }
}

std::vector<CorrelationRecord> fitness_diversity_correlations(const CheckpointSeries& series) {
    series.validate();
    std::vector<CorrelationRecord> out;
    out.reserve(series.iterations.size());
    for (std::size_t c = 0; c < series.iterations.size(); ++c) {
        CorrelationRecord rec;
        rec.n = series.iterations[c];
        rec.d_x = spearman(series.best_f[c], series.d_x[c]);
        rec.d_p = spearman(series.best_f[c], series.d_p[c]);
        rec.s_x = spearman(series.best_f[c], series.s_x[c]);
        rec.s_p = spearman(series.best_f[c], series.s_p[c]);
        out.push_back(rec);
    }
    return out;
}

} // namespace qpso::stats
