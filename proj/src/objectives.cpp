#include "qpso/objectives.hpp"

#include <Eigen/QR>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qpso {

ObjectiveFunction::ObjectiveFunction(std::string id, Vector lower, Vector upper, Evaluator evaluator)
    : id_(std::move(id)), lower_(std::move(lower)), upper_(std::move(upper)), evaluator_(std::move(evaluator)) {
    if (lower_.size() == 0)
        throw ObjectiveError("objective '" + id_ + "': dimension must be positive");
    if (lower_.size() != upper_.size())
        throw ObjectiveError("objective '" + id_ + "': lower/upper bound sizes differ");
    for (Eigen::Index j = 0; j < lower_.size(); ++j) {
        if (!(lower_[j] < upper_[j]))
            throw ObjectiveError("objective '" + id_ + "': lower bound must be below upper bound in dimension " +
                                 std::to_string(j));
    }
    if (!evaluator_)
        throw ObjectiveError("objective '" + id_ + "': empty evaluator");
}

double ObjectiveFunction::evaluate(const Vector& x) const {
    if (x.size() != dimension()) {
        throw ObjectiveError("objective '" + id_ + "': expected " + std::to_string(dimension()) +
                             " components, got " + std::to_string(x.size()));
    }
    if (!x.allFinite())
        throw ObjectiveError("objective '" + id_ + "': non-finite input");
    return evaluator_(x);
}

double sphere(const Vector& x) { return x.squaredNorm(); }

double rosenbrock(const Vector& x) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = x[i] - 1.0;
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

double rastrigin_table1(const Vector& x) {
    double sum = 0.0;
    for (double v : x)
        sum += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v) - 10.0;
    return sum;
}

double rastrigin(const Vector& x) {
    double sum = 0.0;
    for (double v : x)
        sum += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v) + 10.0;
    return sum;
}

double griewank(const Vector& x) {
    double sum = 0.0;
    double prod = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        sum += x[i] * x[i];
        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sum / 4000.0 - prod + 1.0;
}

const std::vector<RegistryEntry>& function_registry() {
    static const std::vector<RegistryEntry> registry{
        {"sphere", -100.0, 100.0, "sum x_i^2"},
        {"rosenbrock", -30.0, 30.0, "sum 100 (x_{i+1} - x_i^2)^2 + (x_i - 1)^2"},
        {"rastrigin_table1", -5.12, 5.12, "sum x_i^2 - 10 cos(2 pi x_i) - 10 (minimum -20N)"},
        {"rastrigin", -5.12, 5.12, "sum x_i^2 - 10 cos(2 pi x_i) + 10"},
        {"griewank", -600.0, 600.0, "sum x_i^2 / 4000 - prod cos(x_i / sqrt(i)) + 1"},
    };
    return registry;
}

ObjectiveFunction make_objective(const std::string& id, Eigen::Index dimension,
                                 std::optional<std::pair<double, double>> bounds) {
    if (dimension <= 0)
        throw ObjectiveError("dimension must be positive");
    const RegistryEntry* entry = nullptr;
    for (const auto& e : function_registry()) {
        if (e.id == id)
            entry = &e;
    }
    if (!entry)
        throw ObjectiveError("unknown objective '" + id + "'");

    ObjectiveFunction::Evaluator eval;
    if (id == "sphere")
        eval = sphere;
    else if (id == "rosenbrock")
        eval = rosenbrock;
    else if (id == "rastrigin_table1")
        eval = rastrigin_table1;
    else if (id == "rastrigin")
        eval = rastrigin;
    else
        eval = griewank;

    const auto [lo, hi] = bounds.value_or(std::pair{entry->lower, entry->upper});
    return ObjectiveFunction(id, Vector::Constant(dimension, lo), Vector::Constant(dimension, hi), std::move(eval));
}

double orthogonality_error(const Matrix& q) {
    const Matrix residual = q.transpose() * q - Matrix::Identity(q.cols(), q.cols());
    return residual.cwiseAbs().maxCoeff();
}

ObjectiveFunction make_shifted_rotated(const ObjectiveFunction& base, const Vector& shift,
                                       const Matrix& rotation, double bias) {
    const Eigen::Index n = base.dimension();
    if (shift.size() != n)
        throw ObjectiveError("shift has " + std::to_string(shift.size()) + " components, expected " +
                             std::to_string(n));
    if (rotation.rows() != n || rotation.cols() != n)
        throw ObjectiveError("rotation must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!shift.allFinite() || !rotation.allFinite() || !std::isfinite(bias))
        throw ObjectiveError("shift, rotation and bias must be finite");
    if (orthogonality_error(rotation) > 1e-9)
        throw ObjectiveError("rotation matrix is not orthogonal (|Q^T Q - I| > 1e-9)");
    for (Eigen::Index j = 0; j < n; ++j) {
        if (shift[j] < base.lower()[j] || shift[j] > base.upper()[j])
            throw ObjectiveError("shift component " + std::to_string(j) + " lies outside the search bounds");
    }

    // The wrapper owns a copy of the base so it outlives its argument.
    auto eval = [base, shift, rotation, bias](const Vector& x) {
        const Vector z = rotation * (x - shift);
        return base.evaluate(z) + bias;
    };
    return ObjectiveFunction("shifted_" + base.id(), base.lower(), base.upper(), std::move(eval));
}

double domain_diagonal(const ObjectiveFunction& f) { return (f.upper() - f.lower()).norm(); }

namespace {

std::vector<double> read_reals(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ObjectiveError("cannot open data file '" + path + "'");
    std::vector<double> values;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size() || !std::isfinite(v))
            throw ObjectiveError("data file '" + path + "': bad token '" + token + "'");
        values.push_back(v);
    }
    return values;
}

} // namespace

Vector read_vector_file(const std::string& path, Eigen::Index n) {
    const auto values = read_reals(path);
    // CEC-style shift files often carry more entries than the problem dimension.
    if (static_cast<Eigen::Index>(values.size()) < n)
        throw ObjectiveError("data file '" + path + "': expected at least " + std::to_string(n) + " values, got " +
                             std::to_string(values.size()));
    Vector v(n);
    for (Eigen::Index j = 0; j < n; ++j)
        v[j] = values[static_cast<std::size_t>(j)];
    return v;
}

Matrix read_matrix_file(const std::string& path, Eigen::Index n) {
    const auto values = read_reals(path);
    if (static_cast<Eigen::Index>(values.size()) != n * n)
        throw ObjectiveError("data file '" + path + "': expected " + std::to_string(n * n) + " values, got " +
                             std::to_string(values.size()));
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            m(r, c) = values[static_cast<std::size_t>(r * n + c)];
    return m;
}

Vector random_shift(const ObjectiveFunction& f, Engine& rng) {
    Vector o(f.dimension());
    for (Eigen::Index j = 0; j < o.size(); ++j) {
        const double mid = 0.5 * (f.lower()[j] + f.upper()[j]);
        const double half = 0.4 * (f.upper()[j] - f.lower()[j]);
        o[j] = uniform(rng, mid - half, mid + half);
    }
    return o;
}

Matrix random_rotation(Eigen::Index n, Engine& rng) {
    Matrix g(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r)
            g(r, c) = standard_normal(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    // Sign fix so the distribution is Haar rather than QR-convention dependent.
    const Matrix rdiag = qr.matrixQR().diagonal().asDiagonal();
    for (Eigen::Index c = 0; c < n; ++c) {
        if (rdiag(c, c) < 0.0)
            q.col(c) = -q.col(c);
    }
    return q;
}

} // namespace qpso
