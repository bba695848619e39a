#pragma once

#include "qpso/swarm.hpp"

namespace qpso {

/// Diversity observables of one swarm snapshot.
struct DiversitySample {
    long n = 0;
    double d_x = 0.0;  ///< distance-to-average-point of X, normalized by the diagonal
    double d_p = 0.0;  ///< same for P, measured against mbest
    double s_x = 0.0;  ///< proportional fitness entropy of X, bits
    double s_p = 0.0;
    double best_f = 0.0;
};

/// Mean Euclidean distance of the rows of `points` from their centroid,
/// divided by `diagonal`. Throws std::invalid_argument if diagonal <= 0.
double distance_to_average(const Matrix& points, double diagonal);

/// Same measure against an explicit reference point.
double distance_to_point(const Matrix& points, const Vector& center, double diagonal);

/// Shannon entropy (bits) of q_i = f_i / sum f.
///
/// When some value is <= 0 the whole vector is shifted to
/// f_i - min f + eps, eps = 1e-12 * max(1, |min f|), first.
double fitness_entropy(const Vector& fitness);

DiversitySample sample_diversities(const SwarmState& state, double diagonal);

} // namespace qpso
