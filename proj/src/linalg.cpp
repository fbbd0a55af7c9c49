#include "cec/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "cec/error.hpp"

namespace cec {

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) {
        throw DataError("data matrix: expected " + std::to_string(rows_ * cols_) + " values, got " +
                        std::to_string(values_.size()));
    }
}

SymMatrix SymMatrix::from_rows(std::size_t dim, std::span<const double> row_major) {
    if (row_major.size() != dim * dim) {
        throw ConfigError("matrix needs " + std::to_string(dim * dim) + " entries, got " +
                          std::to_string(row_major.size()));
    }
    double scale = 0.0;
    for (double v : row_major) scale = std::max(scale, std::abs(v));
    SymMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
            const double a = row_major[i * dim + j];
            const double b = row_major[j * dim + i];
            if (std::abs(a - b) > 1e-12 * std::max(scale, 1.0)) {
                throw ConfigError("matrix is not symmetric");
            }
            out.set(i, j, 0.5 * (a + b));
        }
    }
    return out;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
    SymMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i) out.set(i, i, 1.0);
    return out;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
    SymMatrix out(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) out.set(i, i, diag[i]);
    return out;
}

void SymMatrix::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

void SymMatrix::scale(double factor) {
    for (double& v : values_) v *= factor;
}

Moments Moments::of_point(std::span<const double> x) {
    Moments m(x.size());
    m.count = 1;
    std::copy(x.begin(), x.end(), m.mean.begin());
    return m;
}

Moments moments_of(const DataMatrix& data, std::span<const std::size_t> rows) {
    if (rows.empty()) throw DataError("empty sample");
    const std::size_t dim = data.cols();
    Moments m(dim);
    m.count = rows.size();
    for (std::size_t r : rows) {
        if (r >= data.rows()) throw DataError("row index " + std::to_string(r) + " out of range");
        const auto x = data.row(r);
        for (std::size_t j = 0; j < dim; ++j) m.mean[j] += x[j];
    }
    const double inv = 1.0 / static_cast<double>(rows.size());
    for (double& v : m.mean) v *= inv;

    Vector centered(dim);
    for (std::size_t r : rows) {
        const auto x = data.row(r);
        for (std::size_t j = 0; j < dim; ++j) centered[j] = x[j] - m.mean[j];
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = i; j < dim; ++j) {
                m.cov.set(i, j, m.cov(i, j) + centered[i] * centered[j]);
            }
        }
    }
    m.cov.scale(inv);
    return m;
}

Moments moments_of(const DataMatrix& data) {
    std::vector<std::size_t> rows(data.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return moments_of(data, rows);
}

namespace {

void check_same_dim(const Moments& a, const Moments& b) {
    if (a.dim() != b.dim()) throw ConfigError("moments dimension mismatch");
}

// out = wa * A + wb * B + wab * (ma - mb)(ma - mb)^T on the covariance; mean combined with (ma_w, mb_w).
void combine(const Moments& a, const Moments& b, double wa, double wb, double wab, double mean_wa, double mean_wb,
             Moments& out) {
    const std::size_t dim = a.dim();
    for (std::size_t i = 0; i < dim; ++i) {
        const double di = a.mean[i] - b.mean[i];
        for (std::size_t j = i; j < dim; ++j) {
            const double dj = a.mean[j] - b.mean[j];
            out.cov.set(i, j, wa * a.cov(i, j) + wb * b.cov(i, j) + wab * di * dj);
        }
    }
    for (std::size_t i = 0; i < dim; ++i) out.mean[i] = mean_wa * a.mean[i] + mean_wb * b.mean[i];
}

}  // namespace

Moments merge(const Moments& a, const Moments& b) {
    check_same_dim(a, b);
    if (a.count + b.count == 0) throw DataError("merge of two empty samples");
    if (b.count == 0) return a;
    if (a.count == 0) return b;
    const double total = static_cast<double>(a.count + b.count);
    const double p1 = static_cast<double>(a.count) / total;
    const double p2 = static_cast<double>(b.count) / total;
    Moments out(a.dim());
    out.count = a.count + b.count;
    combine(a, b, p1, p2, p1 * p2, p1, p2, out);
    return out;
}

Moments subtract(const Moments& a, const Moments& b) {
    check_same_dim(a, b);
    if (a.count <= b.count) throw DataError("difference would be empty or negative");
    if (b.count == 0) return a;
    const double diff = static_cast<double>(a.count - b.count);
    const double q1 = static_cast<double>(a.count) / diff;
    const double q2 = static_cast<double>(b.count) / diff;
    Moments out(a.dim());
    out.count = a.count - b.count;
    combine(a, b, q1, -q2, -q1 * q2, q1, -q2, out);
    return out;
}

void add_point_into(const Moments& a, std::span<const double> x, Moments& out) {
    const std::size_t dim = a.dim();
    out.count = a.count + 1;
    const double p1 = static_cast<double>(a.count) / static_cast<double>(out.count);
    const double p2 = 1.0 - p1;
    const double w = p1 * p2;
    for (std::size_t i = 0; i < dim; ++i) {
        const double di = a.mean[i] - x[i];
        for (std::size_t j = i; j < dim; ++j) {
            out.cov.set(i, j, p1 * a.cov(i, j) + w * di * (a.mean[j] - x[j]));
        }
    }
    for (std::size_t i = 0; i < dim; ++i) out.mean[i] = p1 * a.mean[i] + p2 * x[i];
}

void remove_point_into(const Moments& a, std::span<const double> x, Moments& out) {
    const std::size_t dim = a.dim();
    if (a.count == 0) throw DataError("difference would be empty or negative");
    if (a.count == 1) {
        out.count = 0;
        std::fill(out.mean.begin(), out.mean.end(), 0.0);
        out.cov.fill(0.0);
        return;
    }
    out.count = a.count - 1;
    const double q1 = static_cast<double>(a.count) / static_cast<double>(out.count);
    const double q2 = 1.0 / static_cast<double>(out.count);
    const double w = q1 * q2;
    for (std::size_t i = 0; i < dim; ++i) {
        const double di = a.mean[i] - x[i];
        for (std::size_t j = i; j < dim; ++j) {
            out.cov.set(i, j, q1 * a.cov(i, j) - w * di * (a.mean[j] - x[j]));
        }
    }
    for (std::size_t i = 0; i < dim; ++i) out.mean[i] = q1 * a.mean[i] - q2 * x[i];
}

void add_point(Moments& m, std::span<const double> x) {
    Moments out(m.dim());
    add_point_into(m, x, out);
    m = std::move(out);
}

void remove_point(Moments& m, std::span<const double> x) {
    Moments out(m.dim());
    remove_point_into(m, x, out);
    m = std::move(out);
}

double trace(const SymMatrix& m) {
    double t = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) t += m(i, i);
    return t;
}

double det(const SymMatrix& m) {
    const std::size_t n = m.dim();
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    // Stack storage for the sizes the clustering loop sees.
    constexpr std::size_t kSmall = 8;
    std::array<double, kSmall * kSmall> small_buf;
    std::vector<double> heap_buf;
    double* a = small_buf.data();
    if (n > kSmall) {
        heap_buf.resize(n * n);
        a = heap_buf.data();
    }
    std::copy(m.values().begin(), m.values().end(), a);
    double result = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        }
        const double pv = a[pivot * n + col];
        if (pv == 0.0) return 0.0;
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[pivot * n + j], a[col * n + j]);
            result = -result;
        }
        result *= pv;
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / pv;
            if (f == 0.0) continue;
            for (std::size_t j = col + 1; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
        }
    }
    return result;
}

SymMatrix inverse(const SymMatrix& m) {
    const std::size_t n = m.dim();
    double scale = 0.0;
    for (double v : m.values()) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw NumericalError("singular matrix");

    std::vector<double> a = m.values();
    std::vector<double> inv(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        }
        if (std::abs(a[pivot * n + col]) <= 1e-12 * scale) throw NumericalError("singular matrix");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a[pivot * n + j], a[col * n + j]);
                std::swap(inv[pivot * n + j], inv[col * n + j]);
            }
        }
        const double pv = a[col * n + col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col * n + j] /= pv;
            inv[col * n + j] /= pv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r * n + col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[r * n + j] -= f * a[col * n + j];
                inv[r * n + j] -= f * inv[col * n + j];
            }
        }
    }

    SymMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) out.set(i, j, 0.5 * (inv[i * n + j] + inv[j * n + i]));
    }
    return out;
}

SymEigen sym_eigen(const SymMatrix& m) {
    const std::size_t n = m.dim();
    std::vector<double> a = m.values();
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    double norm = 0.0;
    for (double x : a) norm += x * x;
    norm = std::sqrt(norm);
    const double tol = 1e-12 * norm;

    constexpr int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a[p * n + q] * a[p * n + q];
        }
        if (std::sqrt(off) <= tol) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });

    SymEigen out;
    out.values.reserve(n);
    out.vectors.reserve(n);
    for (std::size_t idx : order) {
        out.values.push_back(a[idx * n + idx]);
        Vector col(n);
        for (std::size_t k = 0; k < n; ++k) col[k] = v[k * n + idx];
        out.vectors.push_back(std::move(col));
    }
    return out;
}

void sym_eigenvalues_into(const SymMatrix& m, std::span<double> out) {
    if (m.dim() == 1) {
        out[0] = m(0, 0);
        return;
    }
    if (m.dim() == 2) {
        const double half_tr = 0.5 * (m(0, 0) + m(1, 1));
        const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
        const double r = std::sqrt(half_diff * half_diff + m(0, 1) * m(0, 1));
        // Larger-magnitude root first; the other from the determinant avoids cancellation.
        const double big = half_tr >= 0.0 ? half_tr + r : half_tr - r;
        const double small = big == 0.0 ? 0.0 : (m(0, 0) * m(1, 1) - m(0, 1) * m(0, 1)) / big;
        out[0] = std::min(small, big);
        out[1] = std::max(small, big);
        return;
    }
    const auto values = sym_eigen(m).values;
    std::copy(values.begin(), values.end(), out.begin());
}

std::vector<double> sym_eigenvalues(const SymMatrix& m) {
    std::vector<double> out(m.dim());
    sym_eigenvalues_into(m, out);
    return out;
}

SymMatrix from_eigen(std::span<const double> values, const std::vector<Vector>& vectors) {
    const std::size_t n = values.size();
    SymMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += vectors[k][i] * values[k] * vectors[k][j];
            out.set(i, j, s);
        }
    }
    return out;
}

double trace_of_product(const SymMatrix& a, const SymMatrix& b) {
    const auto& x = a.values();
    const auto& y = b.values();
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace cec
