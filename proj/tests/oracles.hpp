#pragma once

// Test-only reference implementations. They deliberately avoid the library
// code paths they are used to check.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

/// O(n^2) midrank: count smaller values, split ties evenly.
inline std::vector<double> brute_ranks(const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double less = 0.0;
        double equal = 0.0;
        for (double w : v) {
            if (w < v[i])
                less += 1.0;
            else if (w == v[i])
                equal += 1.0;
        }
        r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
}

inline double brute_spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = brute_ranks(x);
    const auto ry = brute_ranks(y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    const double j = static_cast<double>(x.size());
    return 1.0 - 6.0 * s / (j * j * j - j);
}

/// Distance-to-average diversity written out index by index.
inline double brute_diversity(const std::vector<std::vector<double>>& pts, double a) {
    const std::size_t m = pts.size();
    const std::size_t n = pts[0].size();
    std::vector<double> centre(n, 0.0);
    for (const auto& p : pts)
        for (std::size_t j = 0; j < n; ++j)
            centre[j] += p[j] / static_cast<double>(m);
    double sum = 0.0;
    for (const auto& p : pts) {
        double sq = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            sq += (p[j] - centre[j]) * (p[j] - centre[j]);
        sum += std::sqrt(sq);
    }
    return sum / (static_cast<double>(m) * a);
}

/// Proportional entropy for strictly positive values.
inline double brute_entropy(const std::vector<double>& f) {
    double total = 0.0;
    for (double v : f)
        total += v;
    double h = 0.0;
    for (double v : f)
        h -= (v / total) * std::log(v / total) / std::log(2.0);
    return h;
}

/// CDF of the symmetric double exponential with unit scale.
inline double laplace_cdf(double x) { return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x); }

struct WelchCase {
    std::vector<double> a;
    std::vector<double> b;
    double t;
    double p;
    double se;
    double df;
};

/// Reference values from scipy.stats.ttest_ind(a, b, equal_var=False).
inline const std::vector<WelchCase>& welch_cases() {
    static const std::vector<WelchCase> cases{
        {{-0.5532, 0.2885, 0.6999, 0.6157, 0.6376, 1.1718, 2.0169, 1.1224, 3.0386, 0.069},
         {-0.9809, -1.9182, -1.4171, -0.8665, -0.6649},
         5.307336046123529, 0.00014287263965210594, 0.39195558410502473, 12.97795495860657},
        {{0.8403, 0.6424, 1.1614, 0.7307, 1.3677, -0.212},
         {0.742, 0.1948, 0.1642, -0.1956, 0.1782, 0.7892, 0.7314, -1.0205, -0.0041, 2.3376},
         1.0253241198510892, 0.3227197801945817, 0.3543887501506408, 13.90328320988759},
        {{4.2935, 0.015, 3.0229, 1.5042},
         {-7.4332, -1.0999, -1.6639},
         2.51928398649976, 0.09082424633083433, 2.2259896184993018, 2.84441357819113},
        {{-0.3267, -6.6691, -2.4352},
         {-0.7616, -0.8896, -0.3346, -0.6736},
         -1.3265503247048984, 0.3149622237203534, 1.8686186422803819, 2.0162108448920986},
        {{0.6866, 0.4585, 2.6547, 0.7861, 3.4329, 1.4967, 3.7565, 3.0678},
         {-1.629, -2.3652, -2.7909, 0.5272, -1.8922, -2.2089, -2.1015, -0.6439, -0.7238, -2.7722},
         6.372697432905384, 2.221171892014257e-05, 0.5809965150521799, 13.272661318483456},
        {{1.0992, 1.6381, 0.013, 0.4603, 1.4669, 1.0734, 0.7233, 0.8066, -0.0753, 0.4206, -0.6784},
         {2.1862, 3.0204, -5.1339, -6.6399, -6.7597, 2.046, -5.1771, -0.0779, -0.6383, -4.4467},
         2.2526370444516894, 0.04921264040982751, 1.2401905126216641, 9.530007459914206},
        {{-0.6572, 1.7971, 0.7459, 0.0129, -3.5389, 0.6076, -2.8937, -1.8488},
         {-0.0226, 1.4267, -0.0734},
         -1.4096726325985012, 0.19550280128554554, 0.8267551910391723, 8.180216273820747},
        {{0.0267, 1.3386, -0.3122, -1.7756, 2.6344},
         {-1.5543, -1.7404, -1.303, -1.1101, -1.2378},
         2.335106374529081, 0.07692960795820078, 0.7586378159569954, 4.18394369772621},
        {{-1.1092, -1.4504, -1.0057, -1.1396, -1.4554, -0.1334, -2.4598, -1.6805},
         {1.3611, 1.2914, 1.0053, 0.5835, 0.6498, 0.692, 1.5742, 0.7073, 1.1053},
         -8.775952440279896, 3.620701689441206e-06, 0.2621830019263609, 10.53701275192671},
        {{0.0912, 4.0053, 1.4764, 5.2131, 5.0162, 4.694, 4.3565},
         {0.6525, 0.0457, 0.5229, -0.2235, 0.7631, 0.3235},
         4.207054053483371, 0.004703333203730577, 0.7613448762244927, 6.51064617300098},
    };
    return cases;
}

} // namespace oracle
