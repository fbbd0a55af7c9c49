#include "cec/engine.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "cec/error.hpp"

namespace cec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Energy change when a cluster's cost goes from `before` to `after`, with
// degenerate (infinite) costs ordered sensibly: leaving a degenerate state is
// an unbounded gain, staying in one is no change.
double cost_change(double after, double before) {
    if (std::isinf(before)) return std::isinf(after) ? 0.0 : -kInf;
    return after - before;
}

double acceptance_tolerance(double energy) { return std::isfinite(energy) ? 1e-12 * std::abs(energy) : 0.0; }

int label_of(std::size_t cluster) { return static_cast<int>(cluster) + 1; }

}  // namespace

std::string_view method_name(Method m) { return m == Method::Hartigan ? "hartigan" : "lloyd"; }

Method parse_method(std::string_view name) {
    if (name == "hartigan") return Method::Hartigan;
    if (name == "lloyd") return Method::Lloyd;
    throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view init_name(InitMethod m) {
    switch (m) {
    case InitMethod::Random: return "random";
    case InitMethod::KMeansPlusPlus: return "kmeans++";
    case InitMethod::Partition: return "partition";
    }
    return "?";
}

InitMethod parse_init(std::string_view name) {
    if (name == "random") return InitMethod::Random;
    if (name == "kmeans++") return InitMethod::KMeansPlusPlus;
    if (name == "partition") return InitMethod::Partition;
    throw ConfigError("unknown init method '" + std::string(name) + "'");
}

CardMin CardMin::percent(double pct) {
    if (!(pct >= 0.0 && pct <= 100.0)) throw ConfigError("card.min percentage must lie in [0, 100]");
    return CardMin(true, pct);
}

CardMin CardMin::absolute(std::size_t count) { return CardMin(false, static_cast<double>(count)); }

CardMin CardMin::parse(std::string_view text) {
    if (text.empty()) throw ConfigError("card.min: empty value");
    const bool pct = text.back() == '%';
    const std::string_view body = pct ? text.substr(0, text.size() - 1) : text;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc() || ptr != body.data() + body.size() || body.empty()) {
        throw ConfigError("card.min: cannot parse '" + std::string(text) + "'");
    }
    if (pct) return percent(value);
    if (value < 0.0 || value != std::floor(value)) throw ConfigError("card.min: count must be a non-negative integer");
    return absolute(static_cast<std::size_t>(value));
}

std::size_t CardMin::resolve(std::size_t n, std::size_t dim) const {
    std::size_t count = 0;
    if (is_percent_) {
        count = static_cast<std::size_t>(std::ceil(value_ * static_cast<double>(n) / 100.0 - 1e-9));
    } else {
        count = static_cast<std::size_t>(value_);
    }
    return std::max(count, dim + 1);
}

std::string CardMin::to_string() const {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value_);
    std::string out(buf, ptr);
    if (is_percent_) out += '%';
    return out;
}

std::vector<FamilySpec> CecConfig::expanded_families() const {
    if (families.size() == 1) return std::vector<FamilySpec>(k, families.front());
    if (families.size() != k) {
        throw ConfigError("got " + std::to_string(families.size()) + " cluster types for " + std::to_string(k) +
                          " centers");
    }
    return families;
}

double cluster_cost(std::size_t count, std::size_t total_n, double entropy) {
    if (count == 0) return 0.0;
    if (std::isinf(entropy)) return kInf;
    const double p = static_cast<double>(count) / static_cast<double>(total_n);
    return p * (-std::log(p) + entropy);
}

double energy(std::span<const ClusterState> clusters, std::size_t total_n) {
    if (total_n == 0) throw ConfigError("energy: empty data set");
    double e = 0.0;
    for (const auto& c : clusters) {
        if (!c.alive || c.moments.count == 0) continue;
        e += cluster_cost(c.moments.count, total_n, cross_entropy(c.family, c.moments));
    }
    return e;
}

EngineState make_state(const DataMatrix& data, std::span<const FamilySpec> families, const Assignment& membership) {
    if (membership.size() != data.rows()) throw ConfigError("membership length does not match the data");
    const std::size_t k = families.size();
    EngineState state;
    state.membership = membership;
    state.clusters.reserve(k);
    for (const auto& f : families) {
        f.check_dimension(data.cols());
        state.clusters.push_back(ClusterState{Moments(data.cols()), f, true});
    }
    for (int label : membership) {
        if (label < 0 || static_cast<std::size_t>(label) > k) {
            throw ConfigError("membership label " + std::to_string(label) + " outside 0.." + std::to_string(k));
        }
    }
    recompute_moments(data, state);
    return state;
}

void recompute_moments(const DataMatrix& data, EngineState& state) {
    const std::size_t k = state.clusters.size();
    std::vector<std::vector<std::size_t>> rows(k);
    for (std::size_t i = 0; i < state.membership.size(); ++i) {
        if (state.membership[i] > 0) rows[static_cast<std::size_t>(state.membership[i] - 1)].push_back(i);
    }
    for (std::size_t c = 0; c < k; ++c) {
        auto& cl = state.clusters[c];
        if (rows[c].empty()) {
            cl.moments = Moments(data.cols());
            cl.alive = false;
        } else {
            cl.moments = moments_of(data, rows[c]);
        }
    }
}

namespace {

/**
 * Working copy of cluster costs used by the passes. Keeps cross-entropies and
 * energy terms in sync with the moments so a candidate move costs one
 * on-line update and one cross-entropy per target cluster.
 */
class Workspace {
public:
    Workspace(const DataMatrix& data, EngineState& state)
        : data_(data), state_(state), n_(data.rows()), scratch_remove_(data.cols()),
          scratch_add_(data.cols()), scratch_best_(data.cols()) {
        refresh();
    }

    void refresh() {
        cost_.assign(state_.clusters.size(), 0.0);
        energy_ = 0.0;
        for (std::size_t c = 0; c < state_.clusters.size(); ++c) {
            const auto& cl = state_.clusters[c];
            if (!cl.alive || cl.moments.count == 0) continue;
            cost_[c] = cluster_cost(cl.moments.count, n_, cross_entropy(cl.family, cl.moments));
            energy_ += cost_[c];
        }
    }

    double energy() const { return energy_; }

    double cost_after_add(const ClusterState& cl, std::span<const double> x, Moments& out) const {
        add_point_into(cl.moments, x, out);
        return cluster_cost(out.count, n_, cross_entropy(cl.family, out.cov));
    }

    struct Target {
        std::size_t index = npos;
        double delta = kInf;
        double cost = kInf;  // cluster term after the addition
    };

    /// Cheapest of `candidates` to receive x; the updated moments are left in scratch_best_.
    Target best_target(std::span<const double> x, std::span<const std::size_t> candidates,
                       const std::vector<ClusterState>& clusters, const std::vector<double>& costs) {
        Target best;
        for (std::size_t b : candidates) {
            const double after = cost_after_add(clusters[b], x, scratch_add_);
            const double d = cost_change(after, costs[b]);
            if (d < best.delta) {
                best = {b, d, after};
                std::swap(scratch_add_, scratch_best_);
            }
        }
        return best;
    }

    std::vector<std::size_t> alive_clusters(std::size_t except = npos) const {
        std::vector<std::size_t> out;
        for (std::size_t c = 0; c < state_.clusters.size(); ++c) {
            if (c != except && state_.clusters[c].alive) out.push_back(c);
        }
        return out;
    }

    /// Places an unassigned row into the cheapest alive cluster.
    void place(std::size_t row) {
        const auto x = data_.row(row);
        const auto candidates = alive_clusters();
        if (candidates.empty()) throw NumericalError("no clusters remain");
        std::size_t best = best_target(x, candidates, state_.clusters, cost_).index;
        if (best == npos) best = candidates.front();  // every option degenerate: keep the point somewhere
        add_point(state_.clusters[best].moments, x);
        state_.membership[row] = label_of(best);
        update_cost(best);
    }

    /// Tries to move a row out of its current cluster; returns whether it moved.
    bool try_move(std::size_t row, std::size_t card_min, Removal rule) {
        const std::size_t a = static_cast<std::size_t>(state_.membership[row] - 1);
        auto& donor = state_.clusters[a];
        const bool drops_below = donor.moments.count <= card_min;
        if (drops_below && rule == Removal::Exact) return try_dissolve(a, false);

        const auto x = data_.row(row);
        remove_point_into(donor.moments, x, scratch_remove_);
        const double donor_after =
            cluster_cost(scratch_remove_.count, n_, cross_entropy(donor.family, scratch_remove_.cov));
        // A donor left degenerate is priced as already deleted, its members deferred at no cost.
        const double removal = (drops_below && std::isinf(donor_after)) ? cost_change(0.0, cost_[a])
                                                                         : cost_change(donor_after, cost_[a]);

        std::size_t best = npos;
        double best_delta = kInf;
        for (std::size_t b = 0; b < state_.clusters.size(); ++b) {
            if (b == a || !state_.clusters[b].alive) continue;
            const double d = removal + cost_change(cost_after_add(state_.clusters[b], x, scratch_add_), cost_[b]);
            if (d < best_delta) {
                best_delta = d;
                best = b;
                std::swap(scratch_add_, scratch_best_);
            }
        }
        if (best == npos || !(best_delta < -acceptance_tolerance(energy_))) return false;

        std::swap(donor.moments, scratch_remove_);
        std::swap(state_.clusters[best].moments, scratch_best_);
        state_.membership[row] = label_of(best);
        update_cost(a);
        update_cost(best);
        ++version_;
        if (drops_below) try_dissolve(a, true);
        return true;
    }

    /**
     * Deleting cluster `a` and reassigning its rows one by one (in index
     * order, each to the cheapest remaining cluster). Unless forced, applied
     * only if the total energy drops, and a rejection is remembered until
     * anything changes.
     */
    bool try_dissolve(std::size_t a, bool force) {
        if (rejected_at_.size() != state_.clusters.size()) rejected_at_.assign(state_.clusters.size(), kNever);
        if (!force && rejected_at_[a] == version_) return false;

        const auto others = alive_clusters(a);
        if (others.empty()) {
            rejected_at_[a] = version_;
            return false;
        }
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < state_.membership.size(); ++i) {
            if (state_.membership[i] == label_of(a)) members.push_back(i);
        }

        std::vector<ClusterState> trial = state_.clusters;
        std::vector<double> trial_cost = cost_;
        double delta = cost_change(0.0, cost_[a]);
        std::vector<std::size_t> plan;
        plan.reserve(members.size());
        for (std::size_t row : members) {
            const Target t = best_target(data_.row(row), others, trial, trial_cost);
            if (t.index == npos || std::isinf(t.delta)) {
                rejected_at_[a] = version_;
                return false;
            }
            std::swap(trial[t.index].moments, scratch_best_);
            trial_cost[t.index] = t.cost;
            delta += t.delta;
            plan.push_back(t.index);
        }
        if (!force && !(delta < -acceptance_tolerance(energy_))) {
            rejected_at_[a] = version_;
            return false;
        }

        for (std::size_t j = 0; j < members.size(); ++j) state_.membership[members[j]] = label_of(plan[j]);
        for (std::size_t b : others) state_.clusters[b].moments = std::move(trial[b].moments);
        state_.clusters[a].alive = false;
        state_.clusters[a].moments = Moments(data_.cols());
        update_cost(a);
        for (std::size_t b : others) update_cost(b);
        ++version_;
        return true;
    }

private:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    static constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

    void update_cost(std::size_t c) {
        const auto& cl = state_.clusters[c];
        const double fresh = (!cl.alive || cl.moments.count == 0)
                                 ? 0.0
                                 : cluster_cost(cl.moments.count, n_, cross_entropy(cl.family, cl.moments));
        if (std::isinf(fresh) || std::isinf(cost_[c])) {
            cost_[c] = fresh;
            energy_ = 0.0;
            for (double v : cost_) energy_ += v;
        } else {
            energy_ += fresh - cost_[c];
            cost_[c] = fresh;
        }
    }

    const DataMatrix& data_;
    EngineState& state_;
    std::size_t n_;
    std::vector<double> cost_;
    double energy_ = 0.0;
    Moments scratch_remove_;
    Moments scratch_add_;
    Moments scratch_best_;
    std::uint64_t version_ = 0;
    std::vector<std::uint64_t> rejected_at_;
};

}  // namespace

void enforce_card_min(const DataMatrix& data, EngineState& state, std::size_t card_min) {
    auto& clusters = state.clusters;
    bool any_alive = false;
    for (auto& cl : clusters) {
        if (cl.moments.count == 0) cl.alive = false;
        any_alive = any_alive || cl.alive;
    }
    if (!any_alive) {
        // Nothing assigned yet: seed cluster 0 so there is somewhere to put points.
        if (clusters.empty()) throw NumericalError("no clusters remain");
        clusters.front().alive = true;
    }
    Workspace ws(data, state);
    // Smallest first, so rows of a removed fragment can still top up another small cluster.
    for (;;) {
        std::size_t alive = 0, smallest = clusters.size();
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            if (!clusters[c].alive) continue;
            ++alive;
            if (clusters[c].moments.count < card_min &&
                (smallest == clusters.size() || clusters[c].moments.count < clusters[smallest].moments.count)) {
                smallest = c;
            }
        }
        if (alive < 2 || smallest == clusters.size()) break;
        if (ws.try_dissolve(smallest, true)) continue;
        // Every receiver would become degenerate: drop the rows and place them one at a time.
        auto& cl = clusters[smallest];
        cl.alive = false;
        cl.moments = Moments(data.cols());
        for (int& label : state.membership) {
            if (label == label_of(smallest)) label = 0;
        }
        ws.refresh();
        for (std::size_t i = 0; i < state.membership.size(); ++i) {
            if (state.membership[i] == 0) ws.place(i);
        }
    }
    for (std::size_t i = 0; i < state.membership.size(); ++i) {
        if (state.membership[i] == 0) ws.place(i);
    }
}

bool hartigan_pass(const DataMatrix& data, EngineState& state, std::size_t card_min, Removal rule) {
    Workspace ws(data, state);
    bool changed = false;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        if (state.membership[i] == 0) {
            ws.place(i);
            changed = true;
            continue;
        }
        if (ws.try_move(i, card_min, rule)) changed = true;
    }
    return changed;
}

bool lloyd_pass(const DataMatrix& data, EngineState& state, std::size_t card_min) {
    const std::size_t n = data.rows();
    const std::size_t k = state.clusters.size();

    std::vector<std::optional<GaussianCost>> models(k);
    std::vector<double> log_p(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
        const auto& cl = state.clusters[c];
        if (!cl.alive || cl.moments.count == 0) continue;
        try {
            models[c].emplace(cl.moments.mean, fitted_covariance(cl.family, cl.moments));
        } catch (const NumericalError&) {
            continue;
        }
        log_p[c] = std::log(static_cast<double>(cl.moments.count) / static_cast<double>(n));
    }

    auto cheapest = [&](std::span<const double> x, const std::vector<char>& allowed) {
        std::size_t best = k;
        double best_cost = kInf;
        for (std::size_t c = 0; c < k; ++c) {
            if (!models[c] || !allowed[c]) continue;
            const double cost = -log_p[c] + models[c]->neg_log_density(x);
            if (cost < best_cost) {
                best_cost = cost;
                best = c;
            }
        }
        return best;
    };

    std::vector<char> allowed(k, 1);
    Assignment next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = cheapest(data.row(i), allowed);
        if (c == k) throw NumericalError("no clusters remain");
        next[i] = label_of(c);
    }
    bool changed = next != state.membership;
    state.membership = std::move(next);
    recompute_moments(data, state);

    std::size_t largest = k;
    for (std::size_t c = 0; c < k; ++c) {
        if (state.clusters[c].alive && (largest == k || state.clusters[c].moments.count > state.clusters[largest].moments.count)) {
            largest = c;
        }
    }
    bool removed = false;
    for (std::size_t c = 0; c < k; ++c) {
        auto& cl = state.clusters[c];
        if (!cl.alive || c == largest || cl.moments.count >= card_min) continue;
        cl.alive = false;
        allowed[c] = 0;
        removed = true;
    }
    if (removed) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(state.membership[i] - 1);
            if (allowed[c]) continue;
            std::size_t target = cheapest(data.row(i), allowed);
            if (target == k) target = largest;
            state.membership[i] = label_of(target);
        }
        recompute_moments(data, state);
        changed = true;
    }
    return changed;
}

namespace {

std::size_t count_alive(const EngineState& state) {
    return static_cast<std::size_t>(std::count_if(state.clusters.begin(), state.clusters.end(),
                                                  [](const ClusterState& c) { return c.alive; }));
}

CecResult collect(const DataMatrix& data, const EngineState& state) {
    CecResult r;
    const std::size_t n = data.rows();
    std::vector<int> relabel(state.clusters.size(), 0);
    for (std::size_t c = 0; c < state.clusters.size(); ++c) {
        const auto& cl = state.clusters[c];
        if (!cl.alive) continue;
        r.source_clusters.push_back(c);
        relabel[c] = static_cast<int>(r.source_clusters.size());
        r.probabilities.push_back(static_cast<double>(cl.moments.count) / static_cast<double>(n));
        r.means.push_back(cl.moments.mean);
        r.covariances.push_back(cl.moments.cov);
        r.model_covariances.push_back(fitted_covariance(cl.family, cl.moments));
        r.families.push_back(cl.family);
    }
    r.membership.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.membership[i] = relabel[static_cast<std::size_t>(state.membership[i] - 1)];
    return r;
}

}  // namespace

CecResult run_single(const DataMatrix& data, const CecConfig& cfg, std::uint64_t seed) {
    const auto started = std::chrono::steady_clock::now();
    const std::size_t n = data.rows();
    const std::size_t dim = data.cols();
    if (n <= dim) throw DataError("more dimensions than points");
    if (cfg.k == 0) throw ConfigError("number of centers must be at least 1");
    if (cfg.max_iterations == 0) throw ConfigError("iter.max must be at least 1");
    const auto families = cfg.expanded_families();
    for (const auto& f : families) f.check_dimension(dim);
    const std::size_t card_min = cfg.card_min.resolve(n, dim);
    if (card_min > n) {
        throw ConfigError("card.min resolves to " + std::to_string(card_min) + " points but there are only " +
                          std::to_string(n));
    }

    Rng rng(seed);
    EngineState state;
    double current = kInf;
    constexpr int kInitAttempts = 10;
    for (int attempt = 0; attempt < kInitAttempts; ++attempt) {
        const Assignment start = cfg.initial ? *cfg.initial : initial_assignment(data, cfg.k, cfg.init, rng);
        state = make_state(data, families, start);
        enforce_card_min(data, state, card_min);
        current = energy(state.clusters, n);
        if (std::isfinite(current)) break;
        if (cfg.initial) throw NumericalError("initial partition has a degenerate cluster");
    }
    if (!std::isfinite(current)) {
        throw NumericalError("degenerate initialization after " + std::to_string(kInitAttempts) + " attempts");
    }

    CecResult result;
    std::vector<double> trace{current};
    std::vector<std::size_t> counts{count_alive(state)};
    std::size_t iterations = 0;
    while (iterations < cfg.max_iterations) {
        EngineState before = state;
        bool changed = cfg.method == Method::Hartigan ? hartigan_pass(data, state, card_min, Removal::Forced)
                                                      : lloyd_pass(data, state, card_min);
        recompute_moments(data, state);
        double next = energy(state.clusters, n);
        // A forced deletion can raise the energy. Such a Hartigan pass is redone
        // with exact pricing of deletions; anything else that goes up ends the run.
        if (!(next <= current + 1e-9) && cfg.method == Method::Hartigan) {
            state = before;
            changed = hartigan_pass(data, state, card_min, Removal::Exact);
            recompute_moments(data, state);
            next = energy(state.clusters, n);
        }
        if (!(next <= current + 1e-9)) {
            state = std::move(before);
            break;
        }
        ++iterations;
        current = next;
        trace.push_back(current);
        counts.push_back(count_alive(state));
        if (!changed) break;
    }

    result = collect(data, state);
    result.energy_trace = std::move(trace);
    result.nclusters_trace = std::move(counts);
    result.iterations = iterations;
    result.final_energy = result.energy_trace.back();
    result.card_min = card_min;
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

CecResult run(const DataMatrix& data, const CecConfig& cfg) {
    if (cfg.nstart == 0) throw ConfigError("nstart must be at least 1");
    const auto started = std::chrono::steady_clock::now();

    std::vector<std::optional<CecResult>> results(cfg.nstart);
    std::vector<std::exception_ptr> errors(cfg.nstart);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t s = next++; s < cfg.nstart; s = next++) {
            try {
                results[s] = run_single(data, cfg, cfg.seed + s);
            } catch (...) {
                errors[s] = std::current_exception();
            }
        }
    };

    std::size_t threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    threads = std::min(threads, cfg.nstart);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    std::optional<std::size_t> best;
    for (std::size_t s = 0; s < cfg.nstart; ++s) {
        if (!results[s]) continue;
        if (!best || results[s]->final_energy < results[*best]->final_energy) best = s;
    }
    if (!best) std::rethrow_exception(errors.front());

    CecResult out = std::move(*results[*best]);
    out.best_start = *best;
    out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

int classify(const CecResult& result, std::span<const double> x) {
    int best = 0;
    double best_score = -kInf;
    for (std::size_t c = 0; c < result.means.size(); ++c) {
        double score = -kInf;
        try {
            const GaussianCost cost(result.means[c], result.model_covariances[c]);
            score = std::log(result.probabilities[c]) - cost.neg_log_density(x);
        } catch (const NumericalError&) {
            continue;
        }
        if (score > best_score) {
            best_score = score;
            best = static_cast<int>(c) + 1;
        }
    }
    if (best == 0) throw NumericalError("no cluster has a usable covariance");
    return best;
}

double mixture_density(const CecResult& result, std::span<const double> x) {
    double total = 0.0;
    for (std::size_t c = 0; c < result.means.size(); ++c) {
        total += result.probabilities[c] * gaussian_density(result.means[c], result.model_covariances[c], x);
    }
    return total;
}

}  // namespace cec
