#include "qpso/diversity.hpp"

#include <cmath>
#include <stdexcept>

namespace qpso {

double distance_to_point(const Matrix& points, const Vector& center, double diagonal) {
    if (!(diagonal > 0.0))
        throw std::invalid_argument("diversity normalizer must be positive");
    if (points.rows() == 0)
        throw std::invalid_argument("diversity of an empty population");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        sum += (points.row(i).transpose() - center).norm();
    return sum / (static_cast<double>(points.rows()) * diagonal);
}

double distance_to_average(const Matrix& points, double diagonal) {
    if (points.rows() == 0)
        throw std::invalid_argument("diversity of an empty population");
    return distance_to_point(points, points.colwise().mean().transpose(), diagonal);
}

double fitness_entropy(const Vector& fitness) {
    const Eigen::Index m = fitness.size();
    if (m == 0)
        throw std::invalid_argument("entropy of an empty population");
    const double lowest = fitness.minCoeff();
    Vector shares = fitness;
    if (lowest <= 0.0) {
        const double eps = 1e-12 * std::max(1.0, std::abs(lowest));
        shares = (fitness.array() - lowest + eps).matrix();
    }
    // Scaling by the largest share keeps the sum finite for huge fitness values.
    const double top = shares.maxCoeff();
    if (!(top > 0.0) || !std::isfinite(top))
        return std::log2(static_cast<double>(m));
    shares /= top;
    const double total = shares.sum();

    double entropy = 0.0;
    for (double f : shares) {
        const double q = f / total;
        if (q > 0.0)
            entropy -= q * std::log2(q);
    }
    return entropy;
}

DiversitySample sample_diversities(const SwarmState& state, double diagonal) {
    DiversitySample s;
    s.n = state.iteration;
    s.d_x = distance_to_average(state.x, diagonal);
    s.d_p = distance_to_point(state.p, mean_best(state), diagonal);
    s.s_x = fitness_entropy(state.fx);
    s.s_p = fitness_entropy(state.fp);
    s.best_f = state.best_fitness();
    return s;
}

} // namespace qpso
