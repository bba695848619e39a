#include "qpso/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace qpso {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used == value.size() && std::isfinite(v))
            return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected a real number, got '" + value + "'");
}

long to_long(const std::string& key, const std::string& value) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + value + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true")
        return true;
    if (value == "false")
        return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + value + "'");
}

std::string real(double v) { return fmt::format("{:.17g}", v); }

} // namespace

const std::vector<std::string>& algorithm_tags() {
    static const std::vector<std::string> tags{
        "qpso-fc",     "qpso-vc",     "qpso1-fc",    "qpso1-vc", "qpso-tdc-fc",  "qpso-tdc-vc",
        "qpso-cds-fc", "qpso-cds-vc", "pso-in",      "pso-co",   "pso-in-lbest", "spso",
    };
    return tags;
}

AlgorithmConfig make_algorithm(const std::string& tag) {
    AlgorithmConfig a;
    a.tag = tag;
    const auto ends_with = [&](std::string_view suffix) {
        return tag.size() >= suffix.size() && tag.compare(tag.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (tag == "qpso-fc" || tag == "qpso-vc" || tag == "qpso1-fc" || tag == "qpso1-vc") {
        a.family = Family::qpso;
        a.qpso_type = tag.starts_with("qpso1") ? QpsoType::type1 : QpsoType::type2;
    } else if (tag == "qpso-tdc-fc" || tag == "qpso-tdc-vc") {
        a.family = Family::tdc;
    } else if (tag == "qpso-cds-fc" || tag == "qpso-cds-vc") {
        a.family = Family::cds;
    } else if (tag == "pso-in" || tag == "pso-in-lbest") {
        a.family = Family::pso;
        a.pso_kind = ClassicalPsoParams::Kind::inertia;
        a.topology = tag == "pso-in" ? Topology::global : Topology::ring;
        a.c1 = a.c2 = 2.0;
    } else if (tag == "pso-co" || tag == "spso") {
        a.family = Family::pso;
        a.pso_kind = ClassicalPsoParams::Kind::constriction;
        a.topology = tag == "pso-co" ? Topology::global : Topology::ring;
        a.c1 = a.c2 = 2.05;
    } else {
        throw ConfigError("unknown algorithm '" + tag + "'");
    }
    a.alpha_varying = a.family != Family::pso && ends_with("-vc");
    return a;
}

void set_algorithm_param(AlgorithmConfig& a, const std::string& key, const std::string& value) {
    const std::string full = "algorithm." + a.tag + "." + key;
    const bool quantum = a.family != Family::pso;
    if (quantum && key == "alpha") {
        a.alpha = to_double(full, value);
        a.alpha_varying = false;
    } else if (quantum && key == "alpha_start") {
        a.alpha_start = to_double(full, value);
        a.alpha_varying = true;
    } else if (quantum && key == "alpha_end") {
        a.alpha_end = to_double(full, value);
        a.alpha_varying = true;
    } else if (a.family == Family::tdc && key == "d_lower") {
        a.d_lower = to_double(full, value);
    } else if (a.family == Family::tdc && key == "d_upper") {
        a.d_upper = to_double(full, value);
    } else if (a.family == Family::tdc && key == "phase1_fraction") {
        a.phase1_fraction = to_double(full, value);
    } else if (a.family == Family::tdc && key == "n_phase1") {
        a.n_phase1 = to_long(full, value);
    } else if (a.family == Family::tdc && key == "alpha2") {
        a.alpha2 = to_double(full, value);
    } else if (a.family == Family::tdc && key == "alpha3") {
        a.alpha3 = to_double(full, value);
    } else if (a.family == Family::cds && key == "r") {
        a.r = to_double(full, value);
    } else if (a.family == Family::cds && key == "alpha1") {
        a.cds_alpha1 = to_double(full, value);
    } else if (a.family == Family::cds && key == "dd_initial_ratio") {
        a.dd_initial_ratio = to_double(full, value);
    } else if (a.family == Family::cds && key == "du_initial_ratio") {
        a.du_initial_ratio = to_double(full, value);
    } else if (a.family == Family::cds && key == "dd_final") {
        a.dd_final = to_double(full, value);
    } else if (a.family == Family::cds && key == "du_final") {
        a.du_final = to_double(full, value);
    } else if ((a.family == Family::tdc || a.family == Family::cds) && key == "reevaluate_after_collapse") {
        a.reevaluate_after_collapse = to_bool(full, value);
    } else if (!quantum && key == "c1") {
        a.c1 = to_double(full, value);
    } else if (!quantum && key == "c2") {
        a.c2 = to_double(full, value);
    } else if (!quantum && a.pso_kind == ClassicalPsoParams::Kind::inertia && key == "w_start") {
        a.w_start = to_double(full, value);
    } else if (!quantum && a.pso_kind == ClassicalPsoParams::Kind::inertia && key == "w_end") {
        a.w_end = to_double(full, value);
    } else if (!quantum && a.pso_kind == ClassicalPsoParams::Kind::inertia && key == "vmax_fraction") {
        a.vmax_fraction = to_double(full, value);
    } else if (!quantum && a.pso_kind == ClassicalPsoParams::Kind::constriction && key == "chi") {
        a.chi = to_double(full, value);
    } else {
        throw ConfigError("unknown key '" + full + "'");
    }
}

CoefficientSchedule AlgorithmConfig::alpha_schedule(long n_max) const {
    if (alpha_varying)
        return CoefficientSchedule::linear(alpha_start, alpha_end, std::max(1L, n_max));
    return CoefficientSchedule::fixed(alpha);
}

TdcPolicy AlgorithmConfig::tdc_policy(long n_max) const {
    TdcParams params;
    params.d_lower = d_lower;
    params.d_upper = d_upper;
    params.n_phase1 = n_phase1.value_or(static_cast<long>(std::floor(phase1_fraction * static_cast<double>(n_max))));
    params.alpha1 = alpha_schedule(n_max);
    params.alpha2 = alpha2;
    params.alpha3 = alpha3;
    return TdcPolicy(params);
}

CdsPolicy AlgorithmConfig::cds_policy(double initial_diversity) const {
    CdsPolicy policy;
    policy.r = r;
    policy.alpha1 = cds_alpha1;
    policy.dd_initial = dd_initial_ratio == 1.0 / 3.0 ? initial_diversity / 3.0 : dd_initial_ratio * initial_diversity;
    policy.du_initial = du_initial_ratio * initial_diversity;
    policy.dd_final = dd_final;
    policy.du_final = du_final;
    policy.validate();
    return policy;
}

ClassicalPsoParams AlgorithmConfig::pso_params(const ObjectiveFunction& f, long n_max) const {
    ClassicalPsoParams params;
    params.kind = pso_kind;
    params.c1 = c1;
    params.c2 = c2;
    params.topology = topology;
    params.chi = chi;
    params.inertia = CoefficientSchedule::linear(w_start, w_end, std::max(1L, n_max));
    if (pso_kind == ClassicalPsoParams::Kind::inertia)
        params.v_max = vmax_fraction * (f.upper() - f.lower());
    params.validate();
    return params;
}

void ExperimentConfig::validate() const {
    if (schema_version != 1)
        throw ConfigError("unsupported schema_version " + std::to_string(schema_version));
    if (dimension < 1)
        throw ConfigError("objective.dimension must be >= 1");
    if (swarm_size < 2)
        throw ConfigError("swarm.size must be >= 2");
    if (iterations < 0)
        throw ConfigError("run.iterations must be >= 0");
    if (runs < 1)
        throw ConfigError("run.runs must be >= 1");
    if (stride < 1)
        throw ConfigError("run.stride must be >= 1");
    if (jobs < 1)
        throw ConfigError("run.jobs must be >= 1");
    if (lower.has_value() != upper.has_value())
        throw ConfigError("objective.lower and objective.upper must be given together");
    if (lower && !(*lower < *upper))
        throw ConfigError("objective.lower must be below objective.upper");
    if (shift_file && synthetic_shift)
        throw ConfigError("objective.shift_file and objective.synthetic_shift are exclusive");
    if (rotation_file && synthetic_rotation)
        throw ConfigError("objective.rotation_file and objective.synthetic_rotation are exclusive");
    if (algorithms.empty())
        throw ConfigError("no algorithms configured");
    for (std::size_t k = 0; k < algorithms.size(); ++k) {
        for (std::size_t q = k + 1; q < algorithms.size(); ++q) {
            if (algorithms[k].tag == algorithms[q].tag)
                throw ConfigError("algorithm '" + algorithms[k].tag + "' listed twice");
        }
    }
    try {
        for (const auto& a : algorithms) {
            if (a.family == Family::tdc)
                a.tdc_policy(iterations);
            if (a.family == Family::cds)
                a.cds_policy(1.0);
            if (a.family == Family::pso) {
                ClassicalPsoParams p;
                p.kind = a.pso_kind;
                p.c1 = a.c1;
                p.c2 = a.c2;
                p.chi = a.chi;
                p.validate();
                if (!(a.vmax_fraction > 0.0))
                    throw std::invalid_argument("vmax_fraction must be positive");
            }
            if (a.family != Family::pso && (!(a.alpha >= 0.0) || !(a.alpha_start >= 0.0) || !(a.alpha_end >= 0.0)))
                throw std::invalid_argument("CE coefficients must be non-negative");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

const AlgorithmConfig& ExperimentConfig::algorithm(const std::string& tag) const {
    for (const auto& a : algorithms) {
        if (a.tag == tag)
            return a;
    }
    throw ConfigError("algorithm '" + tag + "' is not part of the configuration");
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
    ExperimentConfig config;
    std::map<std::string, std::pair<std::string, int>> entries;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string content = trim(line);
        if (content.empty())
            continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(content).substr(0, eq));
        const std::string value = trim(std::string_view(content).substr(eq + 1));
        if (key.empty())
            throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
        if (entries.count(key))
            throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        entries[key] = {value, line_no};
    }

    const auto located = [&](const std::string& key, auto&& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            throw ConfigError(source + ":" + std::to_string(entries.at(key).second) + ": " + e.what());
        }
    };

    if (!entries.count("schema_version"))
        throw ConfigError(source + ": missing schema_version");
    if (!entries.count("algorithms"))
        throw ConfigError(source + ": missing algorithms");

    // Algorithms first so their parameter keys can be routed.
    located("algorithms", [&] {
        std::istringstream list(entries.at("algorithms").first);
        std::string tag;
        while (std::getline(list, tag, ',')) {
            tag = trim(tag);
            if (!tag.empty())
                config.algorithms.push_back(make_algorithm(tag));
        }
    });

    for (const auto& [key, entry] : entries) {
        const std::string& value = entry.first;
        located(key, [&] {
            if (key == "schema_version")
                config.schema_version = static_cast<int>(to_long(key, value));
            else if (key == "algorithms")
                return;
            else if (key == "objective.id")
                config.objective = value;
            else if (key == "objective.dimension")
                config.dimension = to_long(key, value);
            else if (key == "objective.lower")
                config.lower = to_double(key, value);
            else if (key == "objective.upper")
                config.upper = to_double(key, value);
            else if (key == "objective.shift_file")
                config.shift_file = value;
            else if (key == "objective.rotation_file")
                config.rotation_file = value;
            else if (key == "objective.synthetic_shift")
                config.synthetic_shift = to_bool(key, value);
            else if (key == "objective.synthetic_rotation")
                config.synthetic_rotation = to_bool(key, value);
            else if (key == "objective.bias")
                config.bias = to_double(key, value);
            else if (key == "swarm.size")
                config.swarm_size = to_long(key, value);
            else if (key == "run.iterations")
                config.iterations = to_long(key, value);
            else if (key == "run.runs")
                config.runs = to_long(key, value);
            else if (key == "run.seed")
                config.seed = to_u64(key, value);
            else if (key == "run.stride")
                config.stride = to_long(key, value);
            else if (key == "run.jobs")
                config.jobs = static_cast<unsigned>(std::max(0L, to_long(key, value)));
            else if (key == "run.boundary") {
                if (value == "clamp")
                    config.boundary = BoundaryPolicy::clamp;
                else if (value == "none")
                    config.boundary = BoundaryPolicy::none;
                else
                    throw ConfigError("run.boundary must be 'clamp' or 'none'");
            } else if (key == "output.dir")
                config.output_dir = value;
            else if (key.starts_with("algorithm.")) {
                const std::string rest = key.substr(10);
                const auto dot = rest.find('.');
                if (dot == std::string::npos)
                    throw ConfigError("malformed algorithm key '" + key + "'");
                const std::string tag = rest.substr(0, dot);
                auto it = std::find_if(config.algorithms.begin(), config.algorithms.end(),
                                       [&](const AlgorithmConfig& a) { return a.tag == tag; });
                if (it == config.algorithms.end())
                    throw ConfigError("parameters for algorithm '" + tag + "' which is not listed in algorithms");
                set_algorithm_param(*it, rest.substr(dot + 1), value);
            } else
                throw ConfigError("unknown key '" + key + "'");
        });
    }

    try {
        config.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

std::string render_config(const ExperimentConfig& c) {
    std::string out;
    const auto put = [&](const std::string& key, const std::string& value) { out += key + " = " + value + "\n"; };
    put("schema_version", std::to_string(c.schema_version));
    put("objective.id", c.objective);
    put("objective.dimension", std::to_string(c.dimension));
    if (c.lower) {
        put("objective.lower", real(*c.lower));
        put("objective.upper", real(*c.upper));
    }
    if (c.shift_file)
        put("objective.shift_file", *c.shift_file);
    if (c.rotation_file)
        put("objective.rotation_file", *c.rotation_file);
    put("objective.synthetic_shift", c.synthetic_shift ? "true" : "false");
    put("objective.synthetic_rotation", c.synthetic_rotation ? "true" : "false");
    put("objective.bias", real(c.bias));
    put("swarm.size", std::to_string(c.swarm_size));
    put("run.iterations", std::to_string(c.iterations));
    put("run.runs", std::to_string(c.runs));
    put("run.seed", std::to_string(c.seed));
    put("run.stride", std::to_string(c.stride));
    put("run.boundary", c.boundary == BoundaryPolicy::clamp ? "clamp" : "none");
    put("run.jobs", std::to_string(c.jobs));
    put("output.dir", c.output_dir);
    std::string tags;
    for (const auto& a : c.algorithms)
        tags += (tags.empty() ? "" : ", ") + a.tag;
    put("algorithms", tags);
    for (const auto& a : c.algorithms) {
        const std::string p = "algorithm." + a.tag + ".";
        if (a.family != Family::pso) {
            if (a.alpha_varying) {
                put(p + "alpha_start", real(a.alpha_start));
                put(p + "alpha_end", real(a.alpha_end));
            } else {
                put(p + "alpha", real(a.alpha));
            }
        }
        if (a.family == Family::tdc) {
            put(p + "d_lower", real(a.d_lower));
            put(p + "d_upper", real(a.d_upper));
            if (a.n_phase1)
                put(p + "n_phase1", std::to_string(*a.n_phase1));
            else
                put(p + "phase1_fraction", real(a.phase1_fraction));
            put(p + "alpha2", real(a.alpha2));
            put(p + "alpha3", real(a.alpha3));
        }
        if (a.family == Family::cds) {
            put(p + "r", real(a.r));
            put(p + "alpha1", real(a.cds_alpha1));
            put(p + "dd_initial_ratio", real(a.dd_initial_ratio));
            put(p + "du_initial_ratio", real(a.du_initial_ratio));
            put(p + "dd_final", real(a.dd_final));
            put(p + "du_final", real(a.du_final));
        }
        if (a.family == Family::tdc || a.family == Family::cds)
            put(p + "reevaluate_after_collapse", a.reevaluate_after_collapse ? "true" : "false");
        if (a.family == Family::pso) {
            put(p + "c1", real(a.c1));
            put(p + "c2", real(a.c2));
            if (a.pso_kind == ClassicalPsoParams::Kind::inertia) {
                put(p + "w_start", real(a.w_start));
                put(p + "w_end", real(a.w_end));
                put(p + "vmax_fraction", real(a.vmax_fraction));
            } else {
                put(p + "chi", real(a.chi));
            }
        }
    }
    return out;
}

ObjectiveFunction build_objective(const ExperimentConfig& config) {
    std::optional<std::pair<double, double>> bounds;
    if (config.lower)
        bounds = std::pair{*config.lower, *config.upper};
    ObjectiveFunction base = [&] {
        try {
            return make_objective(config.objective, config.dimension, bounds);
        } catch (const ObjectiveError& e) {
            throw ConfigError(e.what());
        }
    }();

    const bool shifted = config.shift_file || config.synthetic_shift;
    const bool rotated = config.rotation_file || config.synthetic_rotation;
    if (!shifted && !rotated && config.bias == 0.0)
        return base;

    const Eigen::Index n = base.dimension();
    Vector shift = Vector::Zero(n);
    Matrix rotation = Matrix::Identity(n, n);
    try {
        if (config.shift_file) {
            shift = read_vector_file(*config.shift_file, n);
        } else if (config.synthetic_shift) {
            Engine rng = make_engine(derive_seed(config.seed, "objective.shift", 0));
            shift = random_shift(base, rng);
        }
        if (config.rotation_file) {
            rotation = read_matrix_file(*config.rotation_file, n);
        } else if (config.synthetic_rotation) {
            Engine rng = make_engine(derive_seed(config.seed, "objective.rotation", 0));
            rotation = random_rotation(n, rng);
        }
        return make_shifted_rotated(base, shift, rotation, config.bias);
    } catch (const ObjectiveError& e) {
        throw ConfigError(e.what());
    }
}

} // namespace qpso
