#include "cec/init.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cec/error.hpp"

namespace cec {

std::size_t Rng::below(std::size_t bound) {
    if (bound == 0) throw ConfigError("Rng::below: empty range");
    const std::uint64_t b = bound;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % b;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return static_cast<std::size_t>(v % b);
}

double Rng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

void check_k(const DataMatrix& data, std::size_t k) {
    if (k == 0) throw ConfigError("number of centers must be at least 1");
    if (k > data.rows()) {
        throw ConfigError("cannot choose " + std::to_string(k) + " centers from " + std::to_string(data.rows()) +
                          " points");
    }
}

}  // namespace

std::size_t nearest_center(std::span<const double> x, const DataMatrix& data, std::span<const std::size_t> centers) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = squared_distance(x, data.row(centers[c]));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

Assignment assign_to_centers(const DataMatrix& data, std::span<const std::size_t> centers) {
    Assignment out(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        out[i] = static_cast<int>(nearest_center(data.row(i), data, centers)) + 1;
    }
    return out;
}

std::vector<std::size_t> choose_random_centers(const DataMatrix& data, std::size_t k, Rng& rng) {
    check_k(data, k);
    // Partial Fisher-Yates over row indices.
    std::vector<std::size_t> pool(data.rows());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    std::vector<std::size_t> centers;
    centers.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t j = c + rng.below(pool.size() - c);
        std::swap(pool[c], pool[j]);
        centers.push_back(pool[c]);
    }
    return centers;
}

std::vector<std::size_t> choose_kmeanspp_centers(const DataMatrix& data, std::size_t k, Rng& rng) {
    check_k(data, k);
    const std::size_t n = data.rows();
    std::vector<std::size_t> centers;
    centers.reserve(k);
    std::vector<char> chosen(n, 0);
    std::vector<double> weight(n, std::numeric_limits<double>::infinity());

    auto take = [&](std::size_t idx) {
        centers.push_back(idx);
        chosen[idx] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            weight[i] = std::min(weight[i], squared_distance(data.row(i), data.row(idx)));
        }
        weight[idx] = 0.0;
    };

    take(rng.below(n));
    while (centers.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!chosen[i]) total += weight[i];
        }
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            std::size_t pick = n;
            std::size_t last_positive = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i] || weight[i] <= 0.0) continue;
                last_positive = i;
                acc += weight[i];
                if (target < acc) {
                    pick = i;
                    break;
                }
            }
            take(pick < n ? pick : last_positive);
        } else {
            // Every remaining row coincides with a center: uniform among the unchosen.
            std::vector<std::size_t> rest;
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) rest.push_back(i);
            }
            take(rest[rng.below(rest.size())]);
        }
    }
    return centers;
}

Assignment init_random(const DataMatrix& data, std::size_t k, Rng& rng) {
    return assign_to_centers(data, choose_random_centers(data, k, rng));
}

Assignment init_kmeanspp(const DataMatrix& data, std::size_t k, Rng& rng) {
    return assign_to_centers(data, choose_kmeanspp_centers(data, k, rng));
}

Assignment init_partition(const DataMatrix& data, std::size_t k, Rng& rng) {
    if (k == 0) throw ConfigError("number of centers must be at least 1");
    if (k > data.rows()) throw ConfigError("more centers than points");
    Assignment labels(data.rows());
    for (auto& l : labels) l = static_cast<int>(rng.below(k)) + 1;
    return labels;
}

Assignment initial_assignment(const DataMatrix& data, std::size_t k, InitMethod method, Rng& rng) {
    switch (method) {
    case InitMethod::Random: return init_random(data, k, rng);
    case InitMethod::KMeansPlusPlus: return init_kmeanspp(data, k, rng);
    case InitMethod::Partition: return init_partition(data, k, rng);
    }
    throw ConfigError("unknown init method");
}

}  // namespace cec
