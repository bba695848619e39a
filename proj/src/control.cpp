#include "qpso/control.hpp"

#include <cmath>
#include <stdexcept>

namespace qpso {

void TdcParams::validate() const {
    if (!(d_lower > 0.0 && d_lower < d_upper))
        throw std::invalid_argument("TDC bounds must satisfy 0 < d_lower < d_upper");
    if (!(alpha2 > kExplosionThreshold))
        throw std::invalid_argument("TDC alpha2 must exceed e^gamma ~ 1.781");
    if (!(alpha3 < kExplosionThreshold) || !(alpha3 > 0.0))
        throw std::invalid_argument("TDC alpha3 must lie in (0, e^gamma)");
    if (n_phase1 < 0)
        throw std::invalid_argument("TDC n_phase1 must be non-negative");
}

TdcPolicy::TdcPolicy(TdcParams params) : params_(std::move(params)) { params_.validate(); }

TdcPolicy TdcPolicy::with_defaults(long n_max, CoefficientSchedule alpha1) {
    TdcParams params;
    params.n_phase1 = static_cast<long>(std::floor(0.9 * static_cast<double>(n_max)));
    params.alpha1 = alpha1;
    return TdcPolicy(params);
}

ControlDecision TdcPolicy::decide(double d_x, long n) {
    if (phase_ == 1 && d_x < params_.d_lower)
        phase_ = 2;
    else if (phase_ == 2 && d_x > params_.d_upper)
        phase_ = 3;
    else if (phase_ == 3 && d_x < params_.d_lower)
        phase_ = 2;

    switch (phase_) {
    case 1:
        return {params_.alpha1.at(n), n > params_.n_phase1};
    case 2:
        return {params_.alpha2, false};
    default:
        return {params_.alpha3, false};
    }
}

CdsPolicy CdsPolicy::with_defaults(double initial_diversity, CoefficientSchedule base) {
    CdsPolicy policy;
    policy.dd_initial = initial_diversity / 3.0;
    policy.du_initial = initial_diversity;
    policy.base = base;
    policy.validate();
    return policy;
}

void CdsPolicy::validate() const {
    if (!(r > 1.0))
        throw std::invalid_argument("CDS exponent r must exceed 1");
    if (!(dd_initial > dd_final && dd_final > 0.0))
        throw std::invalid_argument("CDS desired diversity must satisfy initial > final > 0");
    if (!(du_initial > du_final && du_final > 0.0))
        throw std::invalid_argument("CDS upper diversity must satisfy initial > final > 0");
    if (dd_initial > du_initial)
        throw std::invalid_argument("CDS desired initial diversity exceeds the upper initial bound");
    if (!(alpha1 > kExplosionThreshold))
        throw std::invalid_argument("CDS alpha1 must exceed e^gamma ~ 1.781");
}

namespace {

double remaining_fraction(long n, long n_max) {
    if (n_max <= 0)
        throw std::invalid_argument("schedule horizon must be positive");
    if (n <= 0)
        return 1.0;
    if (n >= n_max)
        return 0.0;
    return static_cast<double>(n_max - n) / static_cast<double>(n_max);
}

} // namespace

double cds_desired(const CdsPolicy& policy, long n, long n_max) {
    // Endpoints are returned verbatim; (a - b) + b need not round back to a.
    if (n <= 0)
        return policy.dd_initial;
    const double w = std::pow(remaining_fraction(n, n_max), policy.r);
    return w * (policy.dd_initial - policy.dd_final) + policy.dd_final;
}

double cds_upper(const CdsPolicy& policy, long n, long n_max) {
    if (n <= 0)
        return policy.du_initial;
    const double w = remaining_fraction(n, n_max);
    return w * (policy.du_initial - policy.du_final) + policy.du_final;
}

CdsTrigger cds_trigger(const CdsPolicy& policy, double d_x, long n, long n_max) {
    if (d_x < cds_desired(policy, n, n_max))
        return CdsTrigger::below;
    if (d_x > cds_upper(policy, n, n_max))
        return CdsTrigger::above;
    return CdsTrigger::within;
}

ControlDecision cds_decide(const CdsPolicy& policy, double d_x, long n, long n_max) {
    // Both triggers are tested independently; with dd <= du they are exclusive.
    ControlDecision decision{policy.base.at(n), false};
    if (d_x < cds_desired(policy, n, n_max))
        decision.alpha = policy.alpha1;
    if (d_x > cds_upper(policy, n, n_max))
        decision.collapse_pbest = true;
    return decision;
}

void apply_pbest_collapse(SwarmState& state, Engine& rng) {
    const Vector g = state.gbest();
    for (Eigen::Index i = 0; i < state.size(); ++i)
        state.p.row(i) = local_focus(state.p.row(i).transpose(), g, rng).transpose();
}

void reevaluate_pbests(SwarmState& state, const ObjectiveFunction& f) {
    for (Eigen::Index i = 0; i < state.size(); ++i) {
        const double value = f.evaluate(state.p.row(i).transpose());
        if (!std::isfinite(value))
            throw EvaluationError(i, state.iteration, "non-finite pbest fitness after collapse");
        state.fp[i] = value;
    }
    state.g = select_gbest(state.fp);
}

} // namespace qpso
