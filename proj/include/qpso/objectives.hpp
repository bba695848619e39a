#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpso/rng.hpp"

namespace qpso {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class ObjectiveError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A box-bounded objective f: R^N -> R to be minimized.
///
/// Immutable after construction; evaluate() may be called concurrently.
class ObjectiveFunction {
public:
    using Evaluator = std::function<double(const Vector&)>;

    ObjectiveFunction(std::string id, Vector lower, Vector upper, Evaluator evaluator);

    const std::string& id() const noexcept { return id_; }
    Eigen::Index dimension() const noexcept { return lower_.size(); }
    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }

    /// Throws ObjectiveError on a dimension mismatch or non-finite input.
    double evaluate(const Vector& x) const;
    double operator()(const Vector& x) const { return evaluate(x); }

private:
    std::string id_;
    Vector lower_;
    Vector upper_;
    Evaluator evaluator_;
};

// Raw formulas, no argument checking.
double sphere(const Vector& x);
double rosenbrock(const Vector& x);
/// Rastrigin with the "-10" constant per term; minimum is -20 N at the origin.
double rastrigin_table1(const Vector& x);
/// Conventional Rastrigin (+10 per term); minimum 0 at the origin.
double rastrigin(const Vector& x);
double griewank(const Vector& x);

struct RegistryEntry {
    std::string id;
    double lower;
    double upper;
    std::string description;
};

/// Registered base functions with their default symmetric domains.
const std::vector<RegistryEntry>& function_registry();

/// Builds a registered function in `dimension` dimensions. Bounds default to
/// the registry domain and can be overridden.
ObjectiveFunction make_objective(const std::string& id, Eigen::Index dimension,
                                 std::optional<std::pair<double, double>> bounds = std::nullopt);

/// Wraps `base` as x -> base(Q (x - shift)) + bias, copying base's bounds.
/// Throws ObjectiveError if Q is not orthogonal to 1e-9 or sizes disagree.
ObjectiveFunction make_shifted_rotated(const ObjectiveFunction& base, const Vector& shift,
                                       const Matrix& rotation, double bias = 0.0);

/// Length of the longest diagonal of the search box.
double domain_diagonal(const ObjectiveFunction& f);

/// Max |Q^T Q - I| entry.
double orthogonality_error(const Matrix& q);

// Plain text data files: whitespace-separated reals, matrices row-major.
Vector read_vector_file(const std::string& path, Eigen::Index n);
Matrix read_matrix_file(const std::string& path, Eigen::Index n);

/// Uniform random shift inside the central 80% of the box.
Vector random_shift(const ObjectiveFunction& f, Engine& rng);
/// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
Matrix random_rotation(Eigen::Index n, Engine& rng);

} // namespace qpso
