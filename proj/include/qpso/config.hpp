#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpso/control.hpp"
#include "qpso/objectives.hpp"
#include "qpso/swarm.hpp"

namespace qpso {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Family { qpso, tdc, cds, pso };

/// A registered algorithm variant plus its parameters. Schedules that depend
/// on the iteration budget are materialized per run.
struct AlgorithmConfig {
    std::string tag;
    Family family = Family::qpso;

    // QPSO family (also alpha1 of TDC and the base schedule of CDS)
    QpsoType qpso_type = QpsoType::type2;
    bool alpha_varying = false;
    double alpha = 0.75;
    double alpha_start = 1.0;
    double alpha_end = 0.5;

    // TDC
    double d_lower = 1e-6;
    double d_upper = 0.2;
    double phase1_fraction = 0.9;
    std::optional<long> n_phase1;
    double alpha2 = 2.0;
    double alpha3 = 0.75;

    // CDS
    double r = 4.0;
    double cds_alpha1 = 2.0;
    double dd_initial_ratio = 1.0 / 3.0;
    double du_initial_ratio = 1.0;
    double dd_final = 1e-8;
    double du_final = 1e-8;

    bool reevaluate_after_collapse = false;

    // Classical PSO
    ClassicalPsoParams::Kind pso_kind = ClassicalPsoParams::Kind::inertia;
    Topology topology = Topology::global;
    double c1 = 2.0;
    double c2 = 2.0;
    double w_start = 0.9;
    double w_end = 0.4;
    double chi = 0.7298;
    double vmax_fraction = 0.5;

    CoefficientSchedule alpha_schedule(long n_max) const;
    TdcPolicy tdc_policy(long n_max) const;
    CdsPolicy cds_policy(double initial_diversity) const;
    ClassicalPsoParams pso_params(const ObjectiveFunction& f, long n_max) const;
};

/// Tags accepted by make_algorithm().
const std::vector<std::string>& algorithm_tags();

/// Default configuration of a registered variant; throws ConfigError otherwise.
AlgorithmConfig make_algorithm(const std::string& tag);

/// Sets one `algorithm.<tag>.<key>` parameter; unknown keys are errors.
void set_algorithm_param(AlgorithmConfig& algorithm, const std::string& key, const std::string& value);

struct ExperimentConfig {
    int schema_version = 1;

    std::string objective = "sphere";
    long dimension = 5;
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<std::string> shift_file;
    std::optional<std::string> rotation_file;
    bool synthetic_shift = false;
    bool synthetic_rotation = false;
    double bias = 0.0;

    long swarm_size = 20;
    long iterations = 500;
    long runs = 100;
    std::uint64_t seed = 1;
    long stride = 10;
    BoundaryPolicy boundary = BoundaryPolicy::clamp;
    unsigned jobs = 1;
    std::string output_dir = "results";

    std::vector<AlgorithmConfig> algorithms;

    /// Throws ConfigError on violated invariants.
    void validate() const;
    const AlgorithmConfig& algorithm(const std::string& tag) const;
};

/// Parses the flat `key = value` format. `source` names the input in errors.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Canonical text form; parse_config(render_config(c)) reproduces c.
std::string render_config(const ExperimentConfig& config);

/// Objective described by the config, including shift/rotation wrapping.
ObjectiveFunction build_objective(const ExperimentConfig& config);

} // namespace qpso
