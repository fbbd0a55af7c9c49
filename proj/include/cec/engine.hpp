#ifndef CEC_ENGINE_HPP
#define CEC_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cec/init.hpp"
#include "cec/linalg.hpp"
#include "cec/models.hpp"

/**
 * @file engine.hpp
 *
 * @brief Cross-entropy clustering: energy of a partition, the Hartigan and
 * Lloyd iterations that minimise it while deleting clusters that stop paying
 * for themselves, and a multi-start driver.
 *
 * The energy of clusters X_1..X_k of a data set X is
 *
 *     sum_i p_i * (-ln p_i + H(X_i || F_i)),   p_i = |X_i| / |X|,
 *
 * i.e. the mean code length of a point when the cluster identity costs
 * -ln p_i nats and the point itself is coded by the best density of family F_i.
 */

namespace cec {

enum class Method { Hartigan, Lloyd };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

std::string_view init_name(InitMethod m);
InitMethod parse_init(std::string_view name);

/**
 * Minimum cluster size, either as a percentage of the data ("5%") or as an
 * absolute count ("20"). Either way it never resolves below dim + 1, since a
 * covariance estimate needs more points than dimensions.
 */
class CardMin {
public:
    static CardMin percent(double pct);
    static CardMin absolute(std::size_t count);
    /// Accepts "5%", "2.5%" or "12". Throws ConfigError otherwise.
    static CardMin parse(std::string_view text);

    std::size_t resolve(std::size_t n, std::size_t dim) const;
    std::string to_string() const;

    bool is_percent() const { return is_percent_; }
    double value() const { return value_; }

private:
    CardMin(bool is_percent, double value) : is_percent_(is_percent), value_(value) {}
    bool is_percent_;
    double value_;
};

struct CecConfig {
    std::size_t k = 1;
    /// One family broadcast to every cluster, or exactly k families bound to clusters in order.
    std::vector<FamilySpec> families = {FamilySpec::all()};
    std::size_t max_iterations = 100;
    CardMin card_min = CardMin::percent(5.0);
    InitMethod init = InitMethod::KMeansPlusPlus;
    std::size_t nstart = 1;
    std::uint64_t seed = 0;
    Method method = Method::Hartigan;
    /// Worker threads for restarts; 0 picks the hardware concurrency, 1 runs serially.
    std::size_t threads = 1;
    /// Optional warm start (labels 1..k, 0 = unassigned). Replaces seeding in every start.
    std::optional<Assignment> initial;

    /// Families expanded to length k. Throws ConfigError on a length mismatch.
    std::vector<FamilySpec> expanded_families() const;
};

struct ClusterState {
    Moments moments;
    FamilySpec family;
    bool alive = true;
};

/// Clusters plus the membership that produced them (labels 1..k, 0 = unassigned).
struct EngineState {
    std::vector<ClusterState> clusters;
    Assignment membership;
};

struct CecResult {
    Assignment membership;                   ///< 1-based labels into the arrays below
    std::vector<double> probabilities;
    std::vector<Vector> means;
    std::vector<SymMatrix> covariances;      ///< sample covariances of the clusters
    std::vector<SymMatrix> model_covariances;///< family-fitted covariances
    std::vector<FamilySpec> families;
    std::vector<std::size_t> source_clusters;///< original 0-based cluster index of each surviving cluster
    std::vector<double> energy_trace;
    std::vector<std::size_t> nclusters_trace;
    std::size_t iterations = 0;
    double final_energy = 0.0;
    double elapsed_seconds = 0.0;
    std::size_t card_min = 0;                ///< resolved minimum cluster size
    std::size_t best_start = 0;              ///< restart index that produced this result
};

/// p * (-ln p + h) for p = count / total_n; zero for an empty cluster.
double cluster_cost(std::size_t count, std::size_t total_n, double entropy);

/// Total energy over the alive clusters. +infinity if any alive cluster is degenerate for its family.
double energy(std::span<const ClusterState> clusters, std::size_t total_n);

/**
 * Builds cluster statistics from a membership vector. Rows labelled 0 stay
 * unassigned; clusters that receive no rows start dead.
 */
EngineState make_state(const DataMatrix& data, std::span<const FamilySpec> families, const Assignment& membership);

/// Recomputes every alive cluster's moments from its rows.
void recompute_moments(const DataMatrix& data, EngineState& state);

/**
 * Deletes clusters smaller than card_min one at a time, smallest first,
 * handing each one's rows to the clusters whose energy grows least, until
 * every cluster is large enough or one is left. Unassigned rows are placed
 * the same way. Used before the first pass so the trace starts from a feasible state.
 */
void enforce_card_min(const DataMatrix& data, EngineState& state, std::size_t card_min);

/// How a Hartigan move that would shrink its donor below card_min is handled.
enum class Removal {
    /// Priced as an ordinary move (a donor left degenerate counts as deleted);
    /// if taken, the donor is deleted and its members reassigned greedily.
    Forced,
    /// Priced as deleting the donor and greedily reassigning all of its
    /// members; taken only if that whole operation lowers the energy.
    Exact,
};

/**
 * One Hartigan sweep over the rows in index order. A point moves to the
 * cluster giving the largest energy decrease, if that decrease exceeds
 * 1e-12 |energy|. Unassigned rows go to the cheapest cluster. Returns whether
 * any label changed. With Removal::Exact every accepted step lowers the energy.
 */
bool hartigan_pass(const DataMatrix& data, EngineState& state, std::size_t card_min, Removal rule = Removal::Forced);

/**
 * One Lloyd step: every point goes to the cluster minimising
 * -ln p_i - ln f_i(x) under the current fitted models, then moments are
 * refitted and clusters below card_min are deleted.
 */
bool lloyd_pass(const DataMatrix& data, EngineState& state, std::size_t card_min);

/// One start with the given seed. Throws DataError if n <= dim.
CecResult run_single(const DataMatrix& data, const CecConfig& cfg, std::uint64_t seed);

/// cfg.nstart starts with seeds cfg.seed, cfg.seed + 1, ...; returns the lowest final energy (ties to the earliest start).
CecResult run(const DataMatrix& data, const CecConfig& cfg);

/// 1-based label of the cluster maximising p_i N(mean_i, model_cov_i)(x); ties to the lower label.
int classify(const CecResult& result, std::span<const double> x);

/// sum_i p_i N(mean_i, model_cov_i)(x).
double mixture_density(const CecResult& result, std::span<const double> x);

}  // namespace cec

#endif  // CEC_ENGINE_HPP
