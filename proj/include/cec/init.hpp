#ifndef CEC_INIT_HPP
#define CEC_INIT_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cec/linalg.hpp"

namespace cec {

/// Cluster label per row: 1..k, 0 for unassigned.
using Assignment = std::vector<int>;

enum class InitMethod {
    Random,          ///< k random rows as centers, nearest-center labels
    KMeansPlusPlus,  ///< D^2-seeded centers, nearest-center labels
    Partition,       ///< every row labelled uniformly at random
};

/**
 * @brief Seeded random stream that reproduces across platforms.
 *
 * Backed by std::mt19937_64, whose output sequence is fixed by the standard.
 * The conversions to doubles and bounded integers are done here rather than
 * through <random> distributions, whose algorithms are implementation-defined.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), rejection-sampled so there is no modulo bias.
    std::size_t below(std::size_t bound);

    /// Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Index of the nearest center by Euclidean distance, ties to the lower index.
std::size_t nearest_center(std::span<const double> x, const DataMatrix& data, std::span<const std::size_t> centers);

/// Labels every row 1..k by its nearest center row.
Assignment assign_to_centers(const DataMatrix& data, std::span<const std::size_t> centers);

/// k distinct rows drawn uniformly as centers.
std::vector<std::size_t> choose_random_centers(const DataMatrix& data, std::size_t k, Rng& rng);

/// k-means++ seeding: each further center drawn with probability proportional to D(x)^2.
std::vector<std::size_t> choose_kmeanspp_centers(const DataMatrix& data, std::size_t k, Rng& rng);

Assignment init_random(const DataMatrix& data, std::size_t k, Rng& rng);
Assignment init_kmeanspp(const DataMatrix& data, std::size_t k, Rng& rng);

/// Independent uniform label in 1..k for each row. All clusters start overlapping.
Assignment init_partition(const DataMatrix& data, std::size_t k, Rng& rng);

Assignment initial_assignment(const DataMatrix& data, std::size_t k, InitMethod method, Rng& rng);

}  // namespace cec

#endif  // CEC_INIT_HPP
