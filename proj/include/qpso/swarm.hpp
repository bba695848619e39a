#pragma once

#include <stdexcept>
#include <string>

#include "qpso/objectives.hpp"
#include "qpso/rng.hpp"

namespace qpso {

/// What happens to a coordinate that leaves the search box.
enum class BoundaryPolicy { clamp, none };

/// Positions are stored one particle per row.
struct SwarmState {
    Matrix x;   ///< current positions
    Matrix p;   ///< personal best positions
    Vector fx;  ///< f(x_i)
    Vector fp;  ///< f(p_i)
    Matrix v;   ///< velocities; empty for the quantum-behaved variants
    Eigen::Index g = 0;
    long iteration = 0;

    Eigen::Index size() const noexcept { return x.rows(); }
    Eigen::Index dimension() const noexcept { return x.cols(); }
    double best_fitness() const { return fp[g]; }
    Vector gbest() const { return p.row(g).transpose(); }
};

/// Raised when a step produces a position whose fitness cannot be computed.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(Eigen::Index particle, long iteration, const std::string& what);

    Eigen::Index particle() const noexcept { return particle_; }
    long iteration() const noexcept { return iteration_; }

private:
    Eigen::Index particle_;
    long iteration_;
};

/// Fixed or linearly varying coefficient (CE coefficient, inertia weight).
struct CoefficientSchedule {
    enum class Mode { fixed, linear };

    Mode mode = Mode::fixed;
    double start = 0.75;  ///< value in fixed mode, value at n = 0 in linear mode
    double end = 0.75;
    long horizon = 1;

    static CoefficientSchedule fixed(double value);
    static CoefficientSchedule linear(double start, double end, long horizon);

    /// n beyond the horizon clamps to the end value.
    double at(long n) const;
};

inline double alpha_at(const CoefficientSchedule& schedule, long n) { return schedule.at(n); }

enum class Topology { global, ring };

struct ClassicalPsoParams {
    enum class Kind { inertia, constriction };

    Kind kind = Kind::inertia;
    double c1 = 2.0;
    double c2 = 2.0;
    CoefficientSchedule inertia = CoefficientSchedule::linear(0.9, 0.4, 1);
    double chi = 0.7298;
    /// Per-dimension velocity cap; empty means uncapped.
    Vector v_max;
    Topology topology = Topology::global;

    /// Shi-Eberhart setup: w 0.9 -> 0.4, c1 = c2 = 2, v_max = half the range.
    static ClassicalPsoParams inertia_defaults(const ObjectiveFunction& f, long horizon);
    /// Clerc-Kennedy setup: chi = 0.7298, c1 = c2 = 2.05, no cap.
    static ClassicalPsoParams constriction_defaults();

    /// Throws std::invalid_argument on c1/c2 <= 0 or chi outside (0, 1).
    void validate() const;
};

/// Uniform initialization inside the bounds. P = X, g = argmin f.
/// Throws std::invalid_argument when m < 2.
SwarmState initialize_swarm(const ObjectiveFunction& f, Eigen::Index m, Engine& rng, bool with_velocity = false);

/// Replaces p_i by x_i only on strict improvement. Returns whether it did.
bool update_pbest(SwarmState& state, Eigen::Index i);

/// Index of the smallest personal best fitness, lowest index on ties.
Eigen::Index select_gbest(const Vector& fp);
inline Eigen::Index select_gbest(const SwarmState& state) { return select_gbest(state.fp); }

/// Mean of the personal best positions (mbest).
Vector mean_best(const SwarmState& state);

/// Random point of the box spanned by `pbest` and `gbest`, one phi per dimension.
Vector local_focus(const Vector& pbest, const Vector& gbest, Engine& rng);

enum class QpsoType { type1, type2 };

/// One QPSO iteration. Type 2 contracts around mbest (computed once at the
/// top of the iteration), type 1 around the particle's own focus. gbest is
/// refreshed after every particle. Throws EvaluationError on a non-finite
/// fitness.
void qpso_step(SwarmState& state, const ObjectiveFunction& f, QpsoType type, double alpha, Engine& rng,
               BoundaryPolicy boundary = BoundaryPolicy::clamp);

inline void qpso_step_type1(SwarmState& s, const ObjectiveFunction& f, double alpha, Engine& rng,
                            BoundaryPolicy b = BoundaryPolicy::clamp) {
    qpso_step(s, f, QpsoType::type1, alpha, rng, b);
}
inline void qpso_step_type2(SwarmState& s, const ObjectiveFunction& f, double alpha, Engine& rng,
                            BoundaryPolicy b = BoundaryPolicy::clamp) {
    qpso_step(s, f, QpsoType::type2, alpha, rng, b);
}

/// Best personal best among particles i-1, i, i+1 (cyclic).
Eigen::Index ring_best(const SwarmState& state, Eigen::Index i);

/// One iteration of PSO with inertia weight or constriction factor. The
/// inertia weight is taken at state.iteration.
void classical_pso_step(SwarmState& state, const ObjectiveFunction& f, const ClassicalPsoParams& params, Engine& rng,
                        BoundaryPolicy boundary = BoundaryPolicy::clamp);

/// Clamps row `i` of `x` into the search box when the policy asks for it.
void apply_boundary(Matrix& x, Eigen::Index i, const ObjectiveFunction& f, BoundaryPolicy boundary);

} // namespace qpso
