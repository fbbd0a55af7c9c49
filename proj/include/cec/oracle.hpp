#ifndef CEC_ORACLE_HPP
#define CEC_ORACLE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "cec/init.hpp"
#include "cec/linalg.hpp"
#include "cec/models.hpp"

/**
 * @file oracle.hpp
 *
 * @brief Exhaustive reference solutions for tiny instances, used to check the
 * iterative engine against the true global minimum.
 */

namespace cec {

/**
 * Enumerates set partitions of n items into at most k blocks as
 * restricted-growth strings (a[0] = 0, a[i] <= max(a[0..i-1]) + 1), so every
 * partition appears exactly once, in lexicographic order.
 */
class PartitionIterator {
public:
    PartitionIterator(std::size_t n, std::size_t k);

    const std::vector<int>& labels() const { return labels_; }  ///< 0-based block of each item
    bool next();                                                 ///< false once exhausted

private:
    std::size_t k_;
    std::vector<int> labels_;
    std::vector<int> prefix_max_;
};

struct OracleResult {
    double energy;
    Assignment labeling;  ///< 1-based
};

/// Energy of a labelling computed from scratch (no streaming updates). Labels are 1-based; families broadcast if size 1.
double energy_direct(const DataMatrix& data, const Assignment& labeling, std::span<const FamilySpec> families);

/**
 * Global minimum of the clustering energy over all labellings into at most k
 * blocks where every nonempty block has at least card_min rows. Block j is
 * coded by families[j]. Identical families use partition enumeration
 * (n <= 14, k <= 4); mixed families enumerate all k^n labellings (n <= 10, k <= 3).
 * Throws ConfigError("oracle size exceeded") beyond those limits.
 */
OracleResult brute_force_min(const DataMatrix& data, std::span<const FamilySpec> families, std::size_t k,
                             std::size_t card_min);

}  // namespace cec

#endif  // CEC_ORACLE_HPP
