#ifndef CEC_CLI_ELLIPSES_HPP
#define CEC_CLI_ELLIPSES_HPP

#include <array>
#include <vector>

#include "cec/engine.hpp"

namespace cec::cli {

/// Plotting data for one 2-D cluster: principal axes of the fitted covariance, major axis first.
struct Ellipse {
    Vector center;
    std::array<Vector, 2> axes;   ///< unit vectors, largest component made positive
    std::array<double, 2> radii;  ///< sqrt of the eigenvalues (one standard deviation)
};

/// One ellipse per cluster of the result. Throws ConfigError("ellipse emission requires 2-D data") otherwise.
std::vector<Ellipse> emit_ellipses(const CecResult& result);

}  // namespace cec::cli

#endif  // CEC_CLI_ELLIPSES_HPP
