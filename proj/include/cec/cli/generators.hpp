#ifndef CEC_CLI_GENERATORS_HPP
#define CEC_CLI_GENERATORS_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "cec/linalg.hpp"

namespace cec::cli {

struct GeneratedData {
    DataMatrix data;
    std::vector<int> labels;  ///< generating component of each row, 0-based
};

/**
 * Synthetic 2-D data sets:
 *  - "mouse": uniform on a unit disc with two tangent discs of radius 0.5
 *    centred at +-45 degrees from vertical (labels: 0 head, 1 and 2 ears);
 *  - "tset": uniform on a T made of two rectangles in the unit square;
 *  - "fourgauss": equal-weight mixture of four separated spherical Gaussians in the unit square;
 *  - "mixshapes": two discs (per-axis variance 350) and five thin filled
 *    ellipses (axis variances 9000 and 8), equal point counts; labels 0-1 are
 *    the discs, 2-6 the ellipses.
 * Throws ConfigError for an unknown name or n < 100.
 */
GeneratedData generate(std::string_view name, std::uint64_t seed, std::size_t n);

/// Uniform on a disc of the given radius.
GeneratedData generate_disc(std::uint64_t seed, std::size_t n, double radius = 1.0);

}  // namespace cec::cli

#endif  // CEC_CLI_GENERATORS_HPP
