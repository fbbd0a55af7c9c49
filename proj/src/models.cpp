#include "cec/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "cec/error.hpp"

namespace cec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * std::numbers::pi);
const double kLog2PiE = std::log(2.0 * std::numbers::pi * std::numbers::e);

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::All: return "all";
        case Family::Spherical: return "spherical";
        case Family::FixedRadius: return "fixedr";
        case Family::Diagonal: return "diagonal";
        case Family::FixedCovariance: return "covariance";
        case Family::FixedEigenvalues: return "eigenvalues";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "all") return Family::All;
    if (name == "spherical") return Family::Spherical;
    if (name == "fixedr") return Family::FixedRadius;
    if (name == "diagonal") return Family::Diagonal;
    if (name == "covariance" || name == "covariances") return Family::FixedCovariance;
    if (name == "eigenvalues" || name == "eigen") return Family::FixedEigenvalues;
    throw ConfigError("unknown cluster type '" + std::string(name) + "'");
}

FamilySpec FamilySpec::fixed_radius(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("fixedr: radius must be positive");
    FamilySpec f(Family::FixedRadius);
    f.radius_ = r;
    return f;
}

FamilySpec FamilySpec::fixed_covariance(const SymMatrix& sigma) {
    if (sigma.dim() == 0) throw ConfigError("covariance: empty matrix");
    const auto eig = sym_eigenvalues(sigma);
    const double tr = trace(sigma);
    if (!(eig.front() > 1e-12 * tr)) throw ConfigError("covariance: matrix is not positive definite");
    FamilySpec f(Family::FixedCovariance);
    f.sigma_ = sigma;
    f.sigma_inv_ = inverse(sigma);
    double log_det = 0.0;
    for (double l : eig) log_det += std::log(l);
    f.log_det_sigma_ = log_det;
    return f;
}

FamilySpec FamilySpec::fixed_eigenvalues(std::vector<double> lambdas) {
    if (lambdas.empty()) throw ConfigError("eigenvalues: empty list");
    for (double l : lambdas) {
        if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("eigenvalues: values must be positive");
    }
    std::sort(lambdas.begin(), lambdas.end());
    FamilySpec f(Family::FixedEigenvalues);
    f.lambdas_ = std::move(lambdas);
    for (double l : f.lambdas_) f.log_det_sigma_ += std::log(l);
    return f;
}

std::optional<std::size_t> FamilySpec::dimension() const {
    if (kind_ == Family::FixedCovariance) return sigma_.dim();
    if (kind_ == Family::FixedEigenvalues) return lambdas_.size();
    return std::nullopt;
}

void FamilySpec::check_dimension(std::size_t dim) const {
    if (const auto d = dimension(); d && *d != dim) {
        throw ConfigError(std::string(name()) + ": parameter has dimension " + std::to_string(*d) +
                          " but data has dimension " + std::to_string(dim));
    }
}

std::vector<double> FamilySpec::parameters() const {
    switch (kind_) {
        case Family::FixedRadius: return {radius_};
        case Family::FixedCovariance: return sigma_.values();
        case Family::FixedEigenvalues: return lambdas_;
        default: return {};
    }
}

double cross_entropy(const FamilySpec& family, const SymMatrix& cov) {
    const std::size_t n = cov.dim();
    const double half_n = 0.5 * static_cast<double>(n);
    switch (family.kind()) {
        case Family::All: {
            const double d = det(cov);
            if (!(d > 0.0)) return kInf;
            return half_n * kLog2PiE + 0.5 * std::log(d);
        }
        case Family::Spherical: {
            const double tr = trace(cov);
            if (!(tr > 0.0)) return kInf;
            return half_n * std::log(2.0 * std::numbers::pi * std::numbers::e / static_cast<double>(n)) +
                   half_n * std::log(tr);
        }
        case Family::FixedRadius: {
            const double r = family.radius();
            return half_n * kLog2Pi + half_n * std::log(r) + trace(cov) / (2.0 * r);
        }
        case Family::Diagonal: {
            double log_det = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!(cov(i, i) > 0.0)) return kInf;
                log_det += std::log(cov(i, i));
            }
            return half_n * kLog2PiE + 0.5 * log_det;
        }
        case Family::FixedCovariance:
            return half_n * kLog2Pi + 0.5 * trace_of_product(family.sigma_inverse(), cov) +
                   0.5 * family.log_det_sigma();
        case Family::FixedEigenvalues: {
            constexpr std::size_t kSmall = 8;
            std::array<double, kSmall> small_buf;
            std::vector<double> heap_buf;
            std::span<double> data_eig(small_buf.data(), n);
            if (n > kSmall) {
                heap_buf.resize(n);
                data_eig = heap_buf;
            }
            sym_eigenvalues_into(cov, data_eig);
            const auto& lambdas = family.lambdas();
            double ratio = 0.0;
            for (std::size_t i = 0; i < n; ++i) ratio += data_eig[i] / lambdas[i];
            return half_n * kLog2Pi + 0.5 * ratio + 0.5 * family.log_det_sigma();
        }
    }
    return kInf;
}

SymMatrix fitted_covariance(const FamilySpec& family, const Moments& m) {
    const std::size_t n = m.dim();
    switch (family.kind()) {
        case Family::All: return m.cov;
        case Family::Spherical: {
            SymMatrix out = SymMatrix::identity(n);
            out.scale(trace(m.cov) / static_cast<double>(n));
            return out;
        }
        case Family::FixedRadius: {
            SymMatrix out = SymMatrix::identity(n);
            out.scale(family.radius());
            return out;
        }
        case Family::Diagonal: {
            SymMatrix out(n);
            for (std::size_t i = 0; i < n; ++i) out.set(i, i, m.cov(i, i));
            return out;
        }
        case Family::FixedCovariance: return family.sigma();
        case Family::FixedEigenvalues: {
            const auto eig = sym_eigen(m.cov);
            return from_eigen(family.lambdas(), eig.vectors);
        }
    }
    return m.cov;
}

GaussianCost::GaussianCost(Vector mean, const SymMatrix& cov) : mean_(std::move(mean)) {
    if (cov.dim() != mean_.size()) throw ConfigError("gaussian: mean/covariance dimension mismatch");
    const auto eig = sym_eigenvalues(cov);
    if (!(eig.front() > 0.0)) throw NumericalError("singular covariance");
    precision_ = inverse(cov);
    double log_det = 0.0;
    for (double l : eig) log_det += std::log(l);
    log_norm_ = 0.5 * static_cast<double>(mean_.size()) * kLog2Pi + 0.5 * log_det;
}

double GaussianCost::neg_log_density(std::span<const double> x) const {
    const std::size_t n = mean_.size();
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double di = x[i] - mean_[i];
        q += precision_(i, i) * di * di;
        for (std::size_t j = i + 1; j < n; ++j) q += 2.0 * precision_(i, j) * di * (x[j] - mean_[j]);
    }
    return log_norm_ + 0.5 * q;
}

double gaussian_density(std::span<const double> mean, const SymMatrix& cov, std::span<const double> x) {
    const GaussianCost cost(Vector(mean.begin(), mean.end()), cov);
    return std::exp(-cost.neg_log_density(x));
}

}  // namespace cec
