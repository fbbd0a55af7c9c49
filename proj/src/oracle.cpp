#include "cec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cec/engine.hpp"
#include "cec/error.hpp"

namespace cec {

PartitionIterator::PartitionIterator(std::size_t n, std::size_t k) : k_(k), labels_(n, 0), prefix_max_(n, 0) {
    if (k == 0) throw ConfigError("partition iterator needs k >= 1");
}

bool PartitionIterator::next() {
    const std::size_t n = labels_.size();
    for (std::size_t i = n; i-- > 1;) {
        const int limit = std::min(prefix_max_[i - 1] + 1, static_cast<int>(k_) - 1);
        if (labels_[i] < limit) {
            ++labels_[i];
            prefix_max_[i] = std::max(prefix_max_[i - 1], labels_[i]);
            for (std::size_t j = i + 1; j < n; ++j) {
                labels_[j] = 0;
                prefix_max_[j] = prefix_max_[i];
            }
            return true;
        }
    }
    return false;
}

namespace {

bool same_family(const FamilySpec& a, const FamilySpec& b) {
    return a.kind() == b.kind() && a.parameters() == b.parameters();
}

std::vector<FamilySpec> broadcast(std::span<const FamilySpec> families, std::size_t k) {
    if (families.size() == 1) return std::vector<FamilySpec>(k, families.front());
    if (families.size() != k) throw ConfigError("oracle: family list must have length 1 or k");
    return {families.begin(), families.end()};
}

// Energy of a 0-based labelling with blocks of size below card_min reported as infeasible (NaN).
double labelled_energy(const DataMatrix& data, std::span<const int> labels, std::span<const FamilySpec> families,
                       std::size_t card_min, std::vector<std::vector<std::size_t>>& rows) {
    for (auto& r : rows) r.clear();
    for (std::size_t i = 0; i < labels.size(); ++i) rows[static_cast<std::size_t>(labels[i])].push_back(i);
    double e = 0.0;
    for (std::size_t b = 0; b < rows.size(); ++b) {
        if (rows[b].empty()) continue;
        if (rows[b].size() < card_min) return std::numeric_limits<double>::quiet_NaN();
        const Moments m = moments_of(data, rows[b]);
        e += cluster_cost(m.count, data.rows(), cross_entropy(families[b], m));
    }
    return e;
}

}  // namespace

double energy_direct(const DataMatrix& data, const Assignment& labeling, std::span<const FamilySpec> families) {
    if (labeling.size() != data.rows()) throw ConfigError("labelling length does not match the data");
    const int max_label = labeling.empty() ? 0 : *std::max_element(labeling.begin(), labeling.end());
    const std::size_t k = families.size() == 1 ? static_cast<std::size_t>(std::max(max_label, 1)) : families.size();
    const auto fams = broadcast(families, k);
    std::vector<int> zero_based(labeling.size());
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        if (labeling[i] < 1 || static_cast<std::size_t>(labeling[i]) > k) throw ConfigError("labelling has invalid labels");
        zero_based[i] = labeling[i] - 1;
    }
    std::vector<std::vector<std::size_t>> rows(k);
    return labelled_energy(data, zero_based, fams, 0, rows);
}

OracleResult brute_force_min(const DataMatrix& data, std::span<const FamilySpec> families, std::size_t k,
                             std::size_t card_min) {
    const std::size_t n = data.rows();
    if (k == 0) throw ConfigError("oracle needs k >= 1");
    const auto fams = broadcast(families, k);
    for (const auto& f : fams) f.check_dimension(data.cols());
    const bool homogeneous =
        std::all_of(fams.begin(), fams.end(), [&](const FamilySpec& f) { return same_family(f, fams.front()); });
    if (homogeneous ? (n > 14 || k > 4) : (n > 10 || k > 3)) throw ConfigError("oracle size exceeded");
    if (n == 0) throw DataError("oracle: empty data");

    std::vector<std::vector<std::size_t>> rows(k);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_labels(n, 0);
    bool found = false;

    auto consider = [&](std::span<const int> labels) {
        const double e = labelled_energy(data, labels, fams, card_min, rows);
        if (std::isnan(e)) return;
        if (!found || e < best) {
            best = e;
            best_labels.assign(labels.begin(), labels.end());
            found = true;
        }
    };

    if (homogeneous) {
        PartitionIterator it(n, k);
        do {
            consider(it.labels());
        } while (it.next());
    } else {
        std::vector<int> labels(n, 0);
        while (true) {
            consider(labels);
            std::size_t i = n;
            while (i > 0 && labels[i - 1] == static_cast<int>(k) - 1) labels[--i] = 0;
            if (i == 0) break;
            ++labels[i - 1];
        }
    }
    if (!found) throw ConfigError("oracle: no labelling satisfies card.min");

    OracleResult out{best, Assignment(n)};
    for (std::size_t i = 0; i < n; ++i) out.labeling[i] = best_labels[i] + 1;
    return out;
}

}  // namespace cec
