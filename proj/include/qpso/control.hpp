#pragma once

#include <cmath>
#include <numbers>

#include "qpso/swarm.hpp"

namespace qpso {

/// e^gamma ~ 1.781: CE coefficients above it make the swarm explode, below it
/// the swarm converges.
inline const double kExplosionThreshold = std::exp(std::numbers::egamma);

/// Per-iteration output of a diversity controller.
struct ControlDecision {
    double alpha = 0.0;
    bool collapse_pbest = false;
};

struct TdcParams {
    double d_lower = 1e-6;
    double d_upper = 0.2;
    long n_phase1 = 9000;
    CoefficientSchedule alpha1 = CoefficientSchedule::fixed(0.75);
    double alpha2 = 2.0;
    double alpha3 = 0.75;

    /// Throws std::invalid_argument when the bounds or coefficients are inconsistent.
    void validate() const;
};

/// Three-phase diversity control. Phase 1 converges with alpha1 until the
/// diversity of X drops below d_lower; afterwards the swarm alternates between
/// explosion (phase 2, alpha2) up to d_upper and convergence (phase 3, alpha3)
/// down to d_lower again. Phase 1 never recurs.
class TdcPolicy {
public:
    explicit TdcPolicy(TdcParams params);

    /// Library defaults for a run of n_max iterations: n_phase1 = 0.9 n_max.
    static TdcPolicy with_defaults(long n_max, CoefficientSchedule alpha1);

    /// Applies the phase transition for d_x, then picks alpha for iteration n.
    /// Pbest collapse is requested only while phase 1 overruns n_phase1.
    ControlDecision decide(double d_x, long n);

    int phase() const noexcept { return phase_; }
    const TdcParams& params() const noexcept { return params_; }

private:
    TdcParams params_;
    int phase_ = 1;
};

inline ControlDecision tdc_decide(TdcPolicy& policy, double d_x, long n) { return policy.decide(d_x, n); }

/// Parameters of the declining-speed controller.
struct CdsPolicy {
    double r = 4.0;
    double dd_initial = 0.0;
    double dd_final = 1e-8;
    double du_initial = 0.0;
    double du_final = 1e-8;
    double alpha1 = 2.0;
    CoefficientSchedule base = CoefficientSchedule::fixed(0.75);

    /// dd_initial = D(X0) / 3 and du_initial = D(X0).
    static CdsPolicy with_defaults(double initial_diversity, CoefficientSchedule base);

    void validate() const;
};

/// Lower diversity schedule, polynomial of degree r in the remaining budget.
double cds_desired(const CdsPolicy& policy, long n, long n_max);
/// Upper diversity schedule, linear in the remaining budget.
double cds_upper(const CdsPolicy& policy, long n, long n_max);

enum class CdsTrigger { below, within, above };

CdsTrigger cds_trigger(const CdsPolicy& policy, double d_x, long n, long n_max);

/// alpha1 below the lower schedule, base(n) otherwise; collapse above the upper schedule.
ControlDecision cds_decide(const CdsPolicy& policy, double d_x, long n, long n_max);

/// Moves every pbest to a fresh local focus between itself and gbest. Fitness
/// values and g are left untouched; P[g] equals gbest and so stays fixed.
void apply_pbest_collapse(SwarmState& state, Engine& rng);

/// Re-evaluates every pbest and reselects g (optional follow-up to a collapse).
void reevaluate_pbests(SwarmState& state, const ObjectiveFunction& f);

} // namespace qpso
