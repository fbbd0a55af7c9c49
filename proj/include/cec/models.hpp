#ifndef CEC_MODELS_HPP
#define CEC_MODELS_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cec/linalg.hpp"

/**
 * @file models.hpp
 *
 * @brief The Gaussian subfamilies a cluster can be coded with, and the
 * closed-form optimal cross-entropy of a point set with respect to each.
 */

namespace cec {

enum class Family {
    All,               ///< any Gaussian
    Spherical,         ///< covariance s*I, s free
    FixedRadius,       ///< covariance r*I, r given
    Diagonal,          ///< diagonal covariance
    FixedCovariance,   ///< covariance given
    FixedEigenvalues,  ///< covariance with given spectrum, any rotation
};

/// Command-line spelling of each family: "all", "spherical", "fixedr", "diagonal", "covariance", "eigenvalues".
std::string_view family_name(Family f);

/// Parses a family name; also accepts "eigen" and "covariances". Throws ConfigError on anything else.
Family parse_family(std::string_view name);

/**
 * @brief A Gaussian subfamily together with its fixed parameters.
 *
 * Immutable once built. The fixed-covariance form keeps the inverse and
 * log-determinant so evaluation costs one trace of a product.
 */
class FamilySpec {
public:
    static FamilySpec all() { return FamilySpec(Family::All); }
    static FamilySpec spherical() { return FamilySpec(Family::Spherical); }
    static FamilySpec diagonal() { return FamilySpec(Family::Diagonal); }
    static FamilySpec fixed_radius(double r);
    static FamilySpec fixed_covariance(const SymMatrix& sigma);
    /// Eigenvalues may be given in any order; they are stored ascending.
    static FamilySpec fixed_eigenvalues(std::vector<double> lambdas);

    Family kind() const { return kind_; }
    double radius() const { return radius_; }
    const SymMatrix& sigma() const { return sigma_; }
    const SymMatrix& sigma_inverse() const { return sigma_inv_; }
    /// ln det of the fixed covariance, or the sum of ln lambda for fixed eigenvalues.
    double log_det_sigma() const { return log_det_sigma_; }
    const std::vector<double>& lambdas() const { return lambdas_; }

    /// Dimension fixed by the parameters, if any (covariance and eigenvalue families).
    std::optional<std::size_t> dimension() const;

    /// Throws ConfigError if the parameters cannot describe N-dimensional data.
    void check_dimension(std::size_t dim) const;

    std::string_view name() const { return family_name(kind_); }

    /// Parameters as a flat list: {r}, the row-major Sigma, the lambdas, or nothing.
    std::vector<double> parameters() const;

private:
    explicit FamilySpec(Family kind) : kind_(kind) {}

    Family kind_;
    double radius_ = 0.0;
    SymMatrix sigma_;
    SymMatrix sigma_inv_;
    double log_det_sigma_ = 0.0;
    std::vector<double> lambdas_;
};

/**
 * Optimal cross-entropy H(X || F) of a point set with the given covariance,
 * in nats. Returns +infinity when the set is degenerate for the family
 * (non-positive determinant for All, zero trace for Spherical, a zero variance
 * for Diagonal).
 */
double cross_entropy(const FamilySpec& family, const SymMatrix& cov);

inline double cross_entropy(const FamilySpec& family, const Moments& m) { return cross_entropy(family, m.cov); }

/**
 * The member of the family closest to the data: the covariance that attains
 * cross_entropy(). For fixed eigenvalues the prescribed spectrum is placed on
 * the data's eigenvectors, both sorted ascending.
 */
SymMatrix fitted_covariance(const FamilySpec& family, const Moments& m);

/// N-dimensional normal density. Throws NumericalError for a singular covariance.
double gaussian_density(std::span<const double> mean, const SymMatrix& cov, std::span<const double> x);

/**
 * Precomputed -ln N(mean, cov)(x) evaluator for repeated point costs.
 */
class GaussianCost {
public:
    /// Throws NumericalError if cov is not positive definite.
    GaussianCost(Vector mean, const SymMatrix& cov);

    double neg_log_density(std::span<const double> x) const;

private:
    Vector mean_;
    SymMatrix precision_;
    double log_norm_ = 0.0;  // (N/2) ln(2 pi) + (1/2) ln det cov
};

}  // namespace cec

#endif  // CEC_MODELS_HPP
