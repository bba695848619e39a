#include "qpso/swarm.hpp"

#include <algorithm>
#include <cmath>

namespace qpso {

EvaluationError::EvaluationError(Eigen::Index particle, long iteration, const std::string& what)
    : std::runtime_error("particle " + std::to_string(particle) + ", iteration " + std::to_string(iteration) + ": " +
                         what),
      particle_(particle), iteration_(iteration) {}

CoefficientSchedule CoefficientSchedule::fixed(double value) { return {Mode::fixed, value, value, 1}; }

CoefficientSchedule CoefficientSchedule::linear(double start, double end, long horizon) {
    if (horizon < 1)
        throw std::invalid_argument("linear schedule horizon must be positive");
    return {Mode::linear, start, end, horizon};
}

double CoefficientSchedule::at(long n) const {
    if (mode == Mode::fixed)
        return start;
    if (n <= 0)
        return start;
    if (n >= horizon)
        return end;
    return start + (end - start) * static_cast<double>(n) / static_cast<double>(horizon);
}

ClassicalPsoParams ClassicalPsoParams::inertia_defaults(const ObjectiveFunction& f, long horizon) {
    ClassicalPsoParams params;
    params.kind = Kind::inertia;
    params.c1 = params.c2 = 2.0;
    params.inertia = CoefficientSchedule::linear(0.9, 0.4, horizon);
    params.v_max = 0.5 * (f.upper() - f.lower());
    return params;
}

ClassicalPsoParams ClassicalPsoParams::constriction_defaults() {
    ClassicalPsoParams params;
    params.kind = Kind::constriction;
    params.c1 = params.c2 = 2.05;
    params.chi = 0.7298;
    return params;
}

void ClassicalPsoParams::validate() const {
    if (!(c1 > 0.0) || !(c2 > 0.0))
        throw std::invalid_argument("acceleration coefficients must be positive");
    if (kind == Kind::constriction && !(chi > 0.0 && chi < 1.0))
        throw std::invalid_argument("constriction factor must lie in (0, 1)");
    if (v_max.size() > 0 && (v_max.array() <= 0.0).any())
        throw std::invalid_argument("velocity cap must be positive");
}

namespace {

double evaluate_particle(const SwarmState& state, const ObjectiveFunction& f, Eigen::Index i) {
    double value = 0.0;
    try {
        value = f.evaluate(state.x.row(i).transpose());
    } catch (const ObjectiveError& e) {
        throw EvaluationError(i, state.iteration, e.what());
    }
    if (!std::isfinite(value))
        throw EvaluationError(i, state.iteration, "non-finite fitness");
    return value;
}

// pbest + gbest bookkeeping after x_i moved.
void settle_particle(SwarmState& state, const ObjectiveFunction& f, Eigen::Index i) {
    state.fx[i] = evaluate_particle(state, f, i);
    if (update_pbest(state, i)) {
        if (state.fp[i] < state.fp[state.g] || (state.fp[i] == state.fp[state.g] && i < state.g))
            state.g = i;
    }
}

} // namespace

void apply_boundary(Matrix& x, Eigen::Index i, const ObjectiveFunction& f, BoundaryPolicy boundary) {
    if (boundary != BoundaryPolicy::clamp)
        return;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        x(i, j) = std::clamp(x(i, j), f.lower()[j], f.upper()[j]);
}

SwarmState initialize_swarm(const ObjectiveFunction& f, Eigen::Index m, Engine& rng, bool with_velocity) {
    if (m < 2)
        throw std::invalid_argument("swarm size must be at least 2");
    const Eigen::Index n = f.dimension();
    SwarmState state;
    state.x.resize(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            state.x(i, j) = uniform(rng, f.lower()[j], f.upper()[j]);
    state.fx.resize(m);
    for (Eigen::Index i = 0; i < m; ++i)
        state.fx[i] = evaluate_particle(state, f, i);
    state.p = state.x;
    state.fp = state.fx;
    state.g = select_gbest(state.fp);
    state.iteration = 0;
    if (with_velocity)
        state.v = Matrix::Zero(m, n);
    return state;
}

bool update_pbest(SwarmState& state, Eigen::Index i) {
    if (state.fx[i] < state.fp[i]) {
        state.p.row(i) = state.x.row(i);
        state.fp[i] = state.fx[i];
        return true;
    }
    return false;
}

Eigen::Index select_gbest(const Vector& fp) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < fp.size(); ++i) {
        if (fp[i] < fp[best])
            best = i;
    }
    return best;
}

Vector mean_best(const SwarmState& state) { return state.p.colwise().mean().transpose(); }

Vector local_focus(const Vector& pbest, const Vector& gbest, Engine& rng) {
    Vector focus(pbest.size());
    for (Eigen::Index j = 0; j < pbest.size(); ++j) {
        const double phi = uniform01(rng);
        // Written around gbest so that pbest == gbest returns gbest bit-exactly;
        // the clamp removes rounding excursions outside the segment.
        const double v = gbest[j] + phi * (pbest[j] - gbest[j]);
        focus[j] = std::clamp(v, std::min(pbest[j], gbest[j]), std::max(pbest[j], gbest[j]));
    }
    return focus;
}

void qpso_step(SwarmState& state, const ObjectiveFunction& f, QpsoType type, double alpha, Engine& rng,
               BoundaryPolicy boundary) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("CE coefficient must be finite and non-negative");
    const Eigen::Index m = state.size();
    const Eigen::Index n = state.dimension();
    const Vector mbest = type == QpsoType::type2 ? mean_best(state) : Vector{};

    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index g = state.g;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double phi = uniform01(rng);
            const double pij = state.p(i, j);
            const double gj = state.p(g, j);
            const double focus =
                std::clamp(gj + phi * (pij - gj), std::min(pij, gj), std::max(pij, gj));
            const double u = uniform_open01(rng);
            const double anchor = type == QpsoType::type2 ? mbest[j] : focus;
            const double jump = alpha * std::abs(state.x(i, j) - anchor) * std::log(1.0 / u);
            state.x(i, j) = coin(rng) ? focus + jump : focus - jump;
        }
        apply_boundary(state.x, i, f, boundary);
        settle_particle(state, f, i);
    }
    ++state.iteration;
}

Eigen::Index ring_best(const SwarmState& state, Eigen::Index i) {
    const Eigen::Index m = state.size();
    const Eigen::Index prev = (i + m - 1) % m;
    const Eigen::Index next = (i + 1) % m;
    Eigen::Index best = std::min({prev, i, next});
    for (Eigen::Index k : {prev, i, next}) {
        if (state.fp[k] < state.fp[best] || (state.fp[k] == state.fp[best] && k < best))
            best = k;
    }
    return best;
}

void classical_pso_step(SwarmState& state, const ObjectiveFunction& f, const ClassicalPsoParams& params, Engine& rng,
                        BoundaryPolicy boundary) {
    if (state.v.rows() != state.size() || state.v.cols() != state.dimension())
        throw std::invalid_argument("classical PSO step requires a velocity matrix");
    const Eigen::Index m = state.size();
    const Eigen::Index n = state.dimension();
    const bool inertia = params.kind == ClassicalPsoParams::Kind::inertia;
    const double w = params.inertia.at(state.iteration);
    const bool capped = inertia && params.v_max.size() == n;

    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index nb = params.topology == Topology::ring ? ring_best(state, i) : state.g;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double r1 = uniform01(rng);
            const double r2 = uniform01(rng);
            const double pull = params.c1 * r1 * (state.p(i, j) - state.x(i, j)) +
                                params.c2 * r2 * (state.p(nb, j) - state.x(i, j));
            double vij = inertia ? w * state.v(i, j) + pull : params.chi * (state.v(i, j) + pull);
            if (capped)
                vij = std::clamp(vij, -params.v_max[j], params.v_max[j]);
            state.v(i, j) = vij;
            state.x(i, j) += vij;
        }
        apply_boundary(state.x, i, f, boundary);
        settle_particle(state, f, i);
    }
    ++state.iteration;
}

} // namespace qpso
