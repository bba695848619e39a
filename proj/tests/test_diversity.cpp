#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "qpso/diversity.hpp"

using namespace qpso;

namespace {

std::vector<std::vector<double>> rows_of(const Matrix& m) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out[static_cast<std::size_t>(i)].push_back(m(i, j));
    return out;
}

Matrix random_points(Engine& rng, Eigen::Index m, Eigen::Index n) {
    Matrix pts(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            pts(i, j) = uniform(rng, -10.0, 10.0);
    return pts;
}

} // namespace

TEST_CASE("distance_to_average basics") {
    CHECK(distance_to_average(Matrix::Constant(4, 3, 2.5), 1.0) == 0.0);
    Matrix two(2, 1);
    two << 0, 2;
    CHECK(distance_to_average(two, 1.0) == 1.0);
    CHECK_THROWS_AS(distance_to_average(two, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(distance_to_average(two, -1.0), std::invalid_argument);
}

TEST_CASE("distance_to_average is homogeneous, translation and permutation invariant") {
    Engine rng = make_engine(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index m = 2 + trial % 9;
        const Eigen::Index n = 1 + trial % 5;
        const Matrix pts = random_points(rng, m, n);
        const double a = 3.7;
        const double d = distance_to_average(pts, a);
        CHECK(distance_to_average(-2.5 * pts, a) == doctest::Approx(2.5 * d).epsilon(1e-12));

        Vector shift(n);
        for (Eigen::Index j = 0; j < n; ++j)
            shift[j] = uniform(rng, -100.0, 100.0);
        const Matrix moved = pts.rowwise() + shift.transpose();
        CHECK(distance_to_average(moved, a) == doctest::Approx(d).epsilon(1e-9));

        Matrix shuffled = pts;
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(m));
        std::iota(perm.begin(), perm.end(), 0);
        std::reverse(perm.begin(), perm.end());
        std::rotate(perm.begin(), perm.begin() + 1, perm.end());
        for (Eigen::Index i = 0; i < m; ++i)
            shuffled.row(i) = pts.row(perm[static_cast<std::size_t>(i)]);
        CHECK(distance_to_average(shuffled, a) == doctest::Approx(d).epsilon(1e-12));
        CHECK(d == doctest::Approx(oracle::brute_diversity(rows_of(pts), a)).epsilon(1e-12));
    }
}

TEST_CASE("fitness_entropy values") {
    CHECK(fitness_entropy(Vector::Constant(20, 3.2)) == doctest::Approx(4.3219).epsilon(1e-5));
    CHECK(fitness_entropy(Vector::Constant(20, 3.2)) == doctest::Approx(std::log2(20.0)).epsilon(1e-14));
    CHECK(fitness_entropy(Vector{{1.0, 1.0}}) == doctest::Approx(1.0));
    CHECK(fitness_entropy(Vector{{3.0, 1.0}}) == doctest::Approx(0.8112781244591328).epsilon(1e-14));
    CHECK(fitness_entropy(Vector{{7.0}}) == 0.0);
}

TEST_CASE("fitness_entropy transform for non-positive values") {
    // all-zero fitness: transformed values are all eps, uniform shares
    CHECK(fitness_entropy(Vector::Zero(8)) == doctest::Approx(3.0));
    // equal negative values: uniform
    CHECK(fitness_entropy(Vector::Constant(4, -100.0)) == doctest::Approx(2.0));
    // (-1, 1): shifted to (eps, 2 + eps); nearly all mass on one particle
    const double h = fitness_entropy(Vector{{-1.0, 1.0}});
    CHECK(h >= 0.0);
    CHECK(h < 1e-9);
    // invariant under adding a constant when a value is non-positive
    const Vector f{{-3.0, 0.0, 2.0, 5.0}};
    CHECK(fitness_entropy(f) == doctest::Approx(fitness_entropy((f.array() - 10.0).matrix())).epsilon(1e-9));
}

TEST_CASE("fitness_entropy is bounded by log2 M and permutation invariant") {
    Engine rng = make_engine(23);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index m = 1 + trial % 10;
        Vector f(m);
        for (Eigen::Index i = 0; i < m; ++i)
            f[i] = uniform(rng, trial % 2 ? -5.0 : 0.01, 10.0);
        const double h = fitness_entropy(f);
        CHECK(h >= 0.0);
        CHECK(h <= std::log2(static_cast<double>(m)) + 1e-12);
        Vector rev = f.reverse();
        CHECK(fitness_entropy(rev) == doctest::Approx(h).epsilon(1e-12));
        if (f.minCoeff() > 0.0) {
            std::vector<double> raw(f.data(), f.data() + m);
            CHECK(h == doctest::Approx(oracle::brute_entropy(raw)).epsilon(1e-12));
        }
    }
}

TEST_CASE("fitness_entropy survives huge values") {
    const Vector f = Vector::Constant(5, 1e307);
    CHECK(fitness_entropy(f) == doctest::Approx(std::log2(5.0)));
}

TEST_CASE("sample_diversities against a direct re-implementation") {
    const auto f = make_objective("rosenbrock", 5);
    Engine rng = make_engine(41);
    auto s = initialize_swarm(f, 20, rng);
    const double a = domain_diagonal(f);

    auto at_init = sample_diversities(s, a);
    CHECK(at_init.d_x == at_init.d_p);
    CHECK(at_init.s_x == at_init.s_p);
    CHECK(at_init.n == 0);

    for (int k = 0; k < 30; ++k)
        qpso_step_type2(s, f, 0.75, rng);
    const auto sample = sample_diversities(s, a);
    CHECK(sample.n == 30);
    CHECK(sample.best_f == s.fp.minCoeff());
    CHECK(sample.d_x == doctest::Approx(oracle::brute_diversity(rows_of(s.x), a)).epsilon(1e-12));
    CHECK(sample.d_p == doctest::Approx(oracle::brute_diversity(rows_of(s.p), a)).epsilon(1e-12));
    std::vector<double> fx(s.fx.data(), s.fx.data() + 20);
    std::vector<double> fp(s.fp.data(), s.fp.data() + 20);
    CHECK(sample.s_x == doctest::Approx(oracle::brute_entropy(fx)).epsilon(1e-12));
    CHECK(sample.s_p == doctest::Approx(oracle::brute_entropy(fp)).epsilon(1e-12));
    // the centroid of P is mbest
    CHECK(distance_to_point(s.p, mean_best(s), a) == doctest::Approx(distance_to_average(s.p, a)).epsilon(1e-14));
}

TEST_CASE("degenerate swarm has zero spread") {
    const auto f = make_objective("sphere", 3);
    SwarmState s;
    s.x = Matrix::Constant(5, 3, 1.0);
    s.p = s.x;
    s.fx = Vector::Constant(5, 3.0);
    s.fp = s.fx;
    const auto d = sample_diversities(s, domain_diagonal(f));
    CHECK(d.d_x == 0.0);
    CHECK(d.d_p == 0.0);
}
