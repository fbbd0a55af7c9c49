#ifndef CEC_TESTS_SUPPORT_HPP
#define CEC_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cec/init.hpp"
#include "cec/linalg.hpp"

namespace cec::test {

/// Random SPD matrix: A A^T + shift * I with A standard normal.
inline SymMatrix random_spd(std::size_t n, Rng& rng, double shift = 0.5) {
    std::vector<double> a(n * n);
    for (auto& v : a) v = rng.normal();
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = i == j ? shift : 0.0;
            for (std::size_t k = 0; k < n; ++k) s += a[i * n + k] * a[j * n + k];
            m.set(i, j, s);
        }
    }
    return m;
}

inline SymMatrix random_symmetric(std::size_t n, Rng& rng) {
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) m.set(i, j, rng.normal());
    }
    return m;
}

inline DataMatrix random_data(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
    DataMatrix d(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) d(i, j) = scale * rng.normal();
    }
    return d;
}

/// Moments of a random cloud whose covariance is full rank.
inline Moments random_moments(std::size_t dim, Rng& rng) {
    const std::size_t count = dim + 5 + rng.below(30);
    DataMatrix d(count, dim);
    std::vector<double> stretch(dim);
    for (auto& s : stretch) s = 0.2 + 3.0 * rng.uniform();
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < dim; ++j) d(i, j) = stretch[j] * rng.normal() + (j > 0 ? 0.5 * d(i, j - 1) : 0.0);
    }
    return moments_of(d);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

/// Largest difference of mean and covariance entries, relative to the reference magnitude.
inline double relative_drift(const Moments& got, const Moments& want) {
    const double scale = std::max({1.0, max_abs(want.mean), max_abs(want.cov.values())});
    return std::max(max_abs_diff(got.mean, want.mean), max_abs_diff(got.cov.values(), want.cov.values())) / scale;
}

}  // namespace cec::test

#endif  // CEC_TESTS_SUPPORT_HPP
