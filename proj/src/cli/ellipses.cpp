#include "cec/cli/ellipses.hpp"

#include <cmath>

#include "cec/error.hpp"

namespace cec::cli {

namespace {

void orient(Vector& v) {
    std::size_t big = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[big]) + 1e-12) big = i;
    }
    if (v[big] < 0.0) {
        for (double& x : v) x = -x;
    }
}

}  // namespace

std::vector<Ellipse> emit_ellipses(const CecResult& result) {
    std::vector<Ellipse> out;
    for (std::size_t c = 0; c < result.means.size(); ++c) {
        if (result.means[c].size() != 2) throw ConfigError("ellipse emission requires 2-D data");
        auto eig = sym_eigen(result.model_covariances[c]);
        Ellipse e;
        e.center = result.means[c];
        for (std::size_t j = 0; j < 2; ++j) {
            const std::size_t src = 1 - j;  // eigenvalues come ascending
            e.axes[j] = eig.vectors[src];
            orient(e.axes[j]);
            e.radii[j] = std::sqrt(std::max(eig.values[src], 0.0));
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace cec::cli
