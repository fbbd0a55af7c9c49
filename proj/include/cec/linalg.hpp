#ifndef CEC_LINALG_HPP
#define CEC_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

/**
 * @file linalg.hpp
 *
 * @brief Small dense linear algebra used by the clustering code: an n x N
 * observation matrix, symmetric matrices, first/second moments with on-line
 * add/remove updates, and a Jacobi eigensolver.
 */

namespace cec {

using Vector = std::vector<double>;

/**
 * Row-major n x N observation matrix. Each row is one point.
 */
class DataMatrix {
public:
    DataMatrix() = default;
    DataMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}
    DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

    const std::vector<double>& values() const { return values_; }

    bool operator==(const DataMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/**
 * Square symmetric matrix with full storage. Writes through set() keep both
 * triangles equal.
 */
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t dim) : dim_(dim), values_(dim * dim, 0.0) {}

    /// Builds from a row-major N x N array; throws if it is not square or not symmetric within 1e-12 relative.
    static SymMatrix from_rows(std::size_t dim, std::span<const double> row_major);
    static SymMatrix identity(std::size_t dim);
    static SymMatrix diagonal(std::span<const double> diag);

    std::size_t dim() const { return dim_; }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * dim_ + j]; }

    void set(std::size_t i, std::size_t j, double v) {
        values_[i * dim_ + j] = v;
        values_[j * dim_ + i] = v;
    }

    void fill(double v);
    void scale(double factor);

    const std::vector<double>& values() const { return values_; }

    bool operator==(const SymMatrix&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> values_;
};

/**
 * Count, mean and divide-by-count covariance of a point set.
 * An empty set carries all-zero mean and covariance.
 */
struct Moments {
    std::size_t count = 0;
    Vector mean;
    SymMatrix cov;

    Moments() = default;
    explicit Moments(std::size_t dim) : mean(dim, 0.0), cov(dim) {}

    std::size_t dim() const { return mean.size(); }

    static Moments of_point(std::span<const double> x);
};

/// Mean and divide-by-n covariance over the selected rows.
Moments moments_of(const DataMatrix& data, std::span<const std::size_t> rows);

/// Moments of all rows.
Moments moments_of(const DataMatrix& data);

/// Moments of the disjoint union of the two underlying sets.
Moments merge(const Moments& a, const Moments& b);

/// Moments of a \ b where b is a proper subset of a.
Moments subtract(const Moments& a, const Moments& b);

/**
 * Single-point forms of merge/subtract writing into a preallocated result.
 * These are what the Hartigan sweep uses to price a candidate move without
 * allocating. `out` must already have the right dimension and must not alias `a`.
 */
void add_point_into(const Moments& a, std::span<const double> x, Moments& out);
void remove_point_into(const Moments& a, std::span<const double> x, Moments& out);

/// In-place variants of the above.
void add_point(Moments& m, std::span<const double> x);
void remove_point(Moments& m, std::span<const double> x);

double trace(const SymMatrix& m);

/// Determinant by LU factorisation with partial pivoting.
double det(const SymMatrix& m);

/// Throws NumericalError("singular matrix") when a pivot falls below 1e-12 times the largest entry.
SymMatrix inverse(const SymMatrix& m);

/// Eigenvalues sorted ascending.
std::vector<double> sym_eigenvalues(const SymMatrix& m);

/// Same, written to `out` (length dim). Allocation-free for dim <= 2.
void sym_eigenvalues_into(const SymMatrix& m, std::span<double> out);

struct SymEigen {
    std::vector<double> values;       ///< ascending
    std::vector<Vector> vectors;      ///< vectors[i] is the unit eigenvector for values[i]
};

/// Cyclic Jacobi rotations; stops once the off-diagonal Frobenius norm drops below 1e-12 of the matrix norm.
SymEigen sym_eigen(const SymMatrix& m);

/// Returns V diag(values) V^T for the given orthonormal vectors.
SymMatrix from_eigen(std::span<const double> values, const std::vector<Vector>& vectors);

/// tr(a b) without forming the product.
double trace_of_product(const SymMatrix& a, const SymMatrix& b);

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace cec

#endif  // CEC_LINALG_HPP
