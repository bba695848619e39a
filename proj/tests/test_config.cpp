#include <doctest.h>

#include <string>

#include "qpso/config.hpp"

using namespace qpso;

namespace {

const char* const kBasic = R"(# two arms on Rastrigin
schema_version = 1
objective.id = rastrigin
objective.dimension = 10
swarm.size = 30
run.iterations = 200
run.runs = 7
run.seed = 99
algorithms = qpso-fc, qpso-cds-vc   # trailing comment
algorithm.qpso-fc.alpha = 0.8
)";

std::string error_of(const std::string& text) {
    try {
        parse_config(text, "cfg");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("parse a basic config") {
    const auto c = parse_config(kBasic);
    CHECK(c.objective == "rastrigin");
    CHECK(c.dimension == 10);
    CHECK(c.swarm_size == 30);
    CHECK(c.iterations == 200);
    CHECK(c.runs == 7);
    CHECK(c.seed == 99);
    CHECK(c.stride == 10);
    CHECK(c.boundary == BoundaryPolicy::clamp);
    REQUIRE(c.algorithms.size() == 2);
    CHECK(c.algorithm("qpso-fc").alpha == 0.8);
    CHECK_FALSE(c.algorithm("qpso-fc").alpha_varying);
    CHECK(c.algorithm("qpso-cds-vc").family == Family::cds);
    CHECK(c.algorithm("qpso-cds-vc").alpha_varying);
    CHECK_THROWS_AS(c.algorithm("pso-in"), ConfigError);
}

TEST_CASE("registered variants") {
    for (const auto& tag : algorithm_tags())
        CHECK(make_algorithm(tag).tag == tag);
    CHECK(make_algorithm("qpso1-fc").qpso_type == QpsoType::type1);
    CHECK(make_algorithm("pso-co").c1 == 2.05);
    CHECK(make_algorithm("pso-co").pso_kind == ClassicalPsoParams::Kind::constriction);
    CHECK(make_algorithm("pso-in-lbest").topology == Topology::ring);
    CHECK_FALSE(make_algorithm("pso-in").alpha_varying);
    CHECK_THROWS_AS(make_algorithm("qpso-xx"), ConfigError);

    const auto vc = make_algorithm("qpso-vc").alpha_schedule(500);
    CHECK(vc.at(0) == 1.0);
    CHECK(vc.at(500) == 0.5);
    CHECK(make_algorithm("qpso-fc").alpha_schedule(500).at(250) == 0.75);
}

TEST_CASE("materialized policies use the documented defaults") {
    const auto tdc = make_algorithm("qpso-tdc-fc").tdc_policy(3000);
    CHECK(tdc.params().n_phase1 == 2700);
    CHECK(tdc.params().d_upper == 0.2);
    const double d0 = 0.123456789;
    const auto cds = make_algorithm("qpso-cds-fc").cds_policy(d0);
    CHECK(cds.dd_initial == d0 / 3.0);
    CHECK(cds.du_initial == d0);
    const auto f = make_objective("sphere", 4);
    const auto pso = make_algorithm("pso-in").pso_params(f, 100);
    REQUIRE(pso.v_max.size() == 4);
    CHECK(pso.v_max.maxCoeff() == 100.0);
    CHECK(make_algorithm("pso-co").pso_params(f, 100).v_max.size() == 0);
}

TEST_CASE("parse errors carry source and line") {
    const std::string base = "schema_version = 1\nalgorithms = qpso-fc\n";
    CHECK(error_of(base + "objective.colour = red\n").find("cfg:3") != std::string::npos);
    CHECK(error_of(base + "objective.colour = red\n").find("objective.colour") != std::string::npos);
    CHECK(error_of(base + "\nrun.runs = 3\nrun.runs = 4\n").find("cfg:5: duplicate key") != std::string::npos);
    CHECK(error_of(base + "run.runs = many\n").find("cfg:3") != std::string::npos);
    CHECK(error_of(base + "just words\n").find("cfg:3") != std::string::npos);
    CHECK(error_of(base + "algorithm.qpso-fc.chi = 0.7\n").find("unknown key") != std::string::npos);
    CHECK(error_of(base + "algorithm.pso-in.c1 = 1\n").find("not listed") != std::string::npos);
    CHECK(error_of("algorithms = qpso-fc\n").find("schema_version") != std::string::npos);
    CHECK(error_of("schema_version = 2\nalgorithms = qpso-fc\n").find("schema_version") != std::string::npos);
    CHECK(error_of("schema_version = 1\nalgorithms = qpso-zz\n").find("cfg:2") != std::string::npos);
    CHECK(error_of(base + "swarm.size = 1\n") != "");
    CHECK(error_of(base + "objective.lower = 1\n") != "");
    CHECK(error_of(base + "run.boundary = wrap\n") != "");
    CHECK(error_of("schema_version = 1\nalgorithms = qpso-tdc-fc\nalgorithm.qpso-tdc-fc.alpha2 = 1.5\n") != "");
    CHECK(error_of(base + "run.runs = 3\n") == "");
}

TEST_CASE("render then parse reproduces the config") {
    auto c = parse_config(kBasic);
    c.lower = -3.0;
    c.upper = 0.1 + 0.2;
    c.synthetic_shift = true;
    c.bias = -450.0;
    c.boundary = BoundaryPolicy::none;
    c.algorithms.push_back(make_algorithm("qpso-tdc-vc"));
    c.algorithms.back().n_phase1 = 17;
    c.algorithms.push_back(make_algorithm("pso-in"));
    c.algorithms.push_back(make_algorithm("spso"));
    const std::string text = render_config(c);
    const auto back = parse_config(text);
    CHECK(render_config(back) == text);
    CHECK(*back.upper == 0.1 + 0.2);
    CHECK(back.algorithm("qpso-tdc-vc").n_phase1 == 17);
    CHECK(back.algorithm("qpso-cds-vc").dd_initial_ratio == 1.0 / 3.0);
    CHECK(back.boundary == BoundaryPolicy::none);
}

TEST_CASE("build_objective with a synthetic shift is seed-determined") {
    auto c = parse_config("schema_version = 1\nalgorithms = qpso-fc\nobjective.id = rastrigin\n"
                          "objective.dimension = 30\nobjective.synthetic_shift = true\n");
    const auto f = build_objective(c);
    const auto g = build_objective(c);
    Engine rng = make_engine(2);
    const Vector x = random_shift(f, rng);
    CHECK(f(x) == g(x));
    CHECK(f(Vector::Zero(30)) > 0.0);

    c.seed = 2;
    CHECK(build_objective(c)(x) != f(x));

    auto plain = c;
    plain.synthetic_shift = false;
    CHECK(build_objective(plain)(Vector::Zero(30)) == 0.0);

    auto missing = c;
    missing.synthetic_shift = false;
    missing.shift_file = "/nonexistent/shift.txt";
    CHECK_THROWS_AS(build_objective(missing), ConfigError);
}
