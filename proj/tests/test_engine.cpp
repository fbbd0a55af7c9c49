#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cec/cli/csv.hpp"
#include "cec/cli/generators.hpp"
#include "cec/engine.hpp"
#include "cec/error.hpp"
#include "cec/oracle.hpp"
#include "support.hpp"

using namespace cec;

namespace {

// Two groups of four points in the plane, far apart.
DataMatrix two_groups() {
    return DataMatrix(8, 2, {0.0, 0.0, 1.0, 0.2, 0.3, 1.1, 1.2, 0.9, 5.0, 5.0, 6.1, 5.2, 5.3, 6.4, 6.0, 6.3});
}

DataMatrix triads() {
    return DataMatrix(6, 2, {0.0, 0.0, 1.0, 0.1, 0.2, 0.9, 20.0, 20.0, 21.1, 20.3, 20.4, 21.0});
}

DataMatrix faithful_waiting() { return cli::ingest_csv(std::string(CEC_DATA_DIR) + "/faithful-waiting.csv"); }

bool non_increasing(const std::vector<double>& trace) {
    for (std::size_t i = 1; i < trace.size(); ++i) {
        if (trace[i] > trace[i - 1] + 1e-9) return false;
    }
    return true;
}

FamilySpec family_of_kind(int which, std::size_t dim, Rng& rng) {
    switch (which) {
        case 0: return FamilySpec::all();
        case 1: return FamilySpec::spherical();
        case 2: return FamilySpec::diagonal();
        case 3: return FamilySpec::fixed_radius(0.5 + rng.uniform());
        case 4: return FamilySpec::fixed_covariance(test::random_spd(dim, rng));
        default: {
            std::vector<double> l(dim);
            for (auto& v : l) v = 0.2 + 2.0 * rng.uniform();
            return FamilySpec::fixed_eigenvalues(l);
        }
    }
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("card_min parsing and resolution") {
    CHECK(CardMin::parse("5%").resolve(3000, 2) == 150);
    CHECK(CardMin::parse("5%").resolve(272, 1) == 14);
    CHECK(CardMin::parse("5%").resolve(20, 2) == 3);  // floored at N + 1
    CHECK(CardMin::parse("2.5%").resolve(1000, 2) == 25);
    CHECK(CardMin::parse("12").resolve(1000, 2) == 12);
    CHECK(CardMin::parse("1").resolve(1000, 4) == 5);
    CHECK(CardMin::parse("5%").to_string() == "5%");
    CHECK_THROWS_AS(CardMin::parse("abc"), ConfigError);
    CHECK_THROWS_AS(CardMin::parse("-3"), ConfigError);
    CHECK_THROWS_AS(CardMin::parse("150%"), ConfigError);
    CHECK_THROWS_AS(CardMin::parse(""), ConfigError);
}

TEST_CASE("method and init names") {
    CHECK(parse_method(method_name(Method::Lloyd)) == Method::Lloyd);
    CHECK(parse_init(init_name(InitMethod::Partition)) == InitMethod::Partition);
    CHECK(parse_init("kmeans++") == InitMethod::KMeansPlusPlus);
    CHECK_THROWS_AS(parse_method("em"), ConfigError);
    CHECK_THROWS_AS(parse_init("forgy"), ConfigError);
}

TEST_CASE("energy of one cluster and of two equal clusters") {
    Rng rng(41);
    const auto d = test::random_data(40, 2, rng);
    const std::vector<FamilySpec> fam{FamilySpec::all()};
    const auto one = make_state(d, fam, Assignment(40, 1));
    CHECK(energy(one.clusters, 40) == doctest::Approx(cross_entropy(FamilySpec::all(), moments_of(d))).epsilon(1e-14));

    // Second half is the first half shifted, so both clusters have the same entropy h.
    DataMatrix twin(40, 2);
    Assignment labels(40);
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            twin(i, j) = d(i, j);
            twin(i + 20, j) = d(i, j) + 100.0;
        }
        labels[i] = 1;
        labels[i + 20] = 2;
    }
    const std::vector<FamilySpec> two{FamilySpec::spherical(), FamilySpec::spherical()};
    const auto state = make_state(twin, two, labels);
    std::vector<std::size_t> half(20);
    for (std::size_t i = 0; i < 20; ++i) half[i] = i;
    const double h = cross_entropy(FamilySpec::spherical(), moments_of(twin, half));
    CHECK(energy(state.clusters, 40) == doctest::Approx(std::numbers::ln2 + h).epsilon(1e-12));
}

TEST_CASE("energy of a fixed labelling, all six families") {
    // Reference values from an independent numpy implementation of the energy.
    const auto d = two_groups();
    const Assignment split{1, 1, 1, 1, 2, 2, 2, 2};
    const Assignment whole(8, 1);
    struct Case {
        FamilySpec family;
        double split_energy;
        double whole_energy;
    };
    const std::vector<Case> cases{
        {FamilySpec::all(), 2.148861933673114, 3.349356512505304},
        {FamilySpec::spherical(), 2.1978472182134876, 4.741173251742879},
        {FamilySpec::fixed_radius(0.5), 2.3710020664093454, 14.5606673858494},
        {FamilySpec::diagonal(), 2.173674580467938, 4.740225721280749},
        {FamilySpec::fixed_covariance(SymMatrix::from_rows(2, std::vector<double>{1.0, 0.3, 0.3, 0.8})),
         2.680069585453649, 7.468216418978211},
        {FamilySpec::fixed_eigenvalues({0.6, 0.2}), 2.2224883651498772, 12.308740467861199},
    };
    for (const auto& c : cases) {
        const std::vector<FamilySpec> fam{c.family, c.family};
        CHECK(energy(make_state(d, fam, split).clusters, 8) == doctest::Approx(c.split_energy).epsilon(1e-12));
        CHECK(energy(make_state(d, fam, whole).clusters, 8) == doctest::Approx(c.whole_energy).epsilon(1e-12));
    }
}

TEST_CASE("degenerate clusters make the energy infinite") {
    const auto d = two_groups();
    const std::vector<FamilySpec> fam{FamilySpec::all()};
    // A two-point cluster in the plane has a singular covariance.
    const auto state = make_state(d, std::vector<FamilySpec>{FamilySpec::all(), FamilySpec::all()},
                                  Assignment{1, 1, 2, 2, 2, 2, 2, 2});
    CHECK(std::isinf(energy(state.clusters, 8)));
}

TEST_CASE("old faithful waiting times") {
    const auto d = faithful_waiting();
    REQUIRE(d.rows() == 272);
    CecConfig cfg;
    cfg.k = 2;
    cfg.nstart = 10;
    cfg.seed = 1;
    const auto r = run(d, cfg);
    REQUIRE(r.probabilities.size() == 2);
    const std::size_t big = r.probabilities[0] > r.probabilities[1] ? 0 : 1;
    CHECK(r.probabilities[big] == doctest::Approx(0.6360294).epsilon(0.02));
    CHECK(r.probabilities[1 - big] == doctest::Approx(0.3639706).epsilon(0.05));
    CHECK(std::abs(r.means[big][0] - 80.20809) <= 0.5);
    CHECK(std::abs(r.means[1 - big][0] - 54.62626) <= 0.5);
    CHECK(std::abs(r.final_energy - 3.817422) <= 5e-4);
    CHECK(r.iterations <= 10);
    CHECK(non_increasing(r.energy_trace));
}

TEST_CASE("a converged state is a fixpoint") {
    Rng rng(42);
    const auto d = test::random_data(300, 2, rng);
    CecConfig cfg;
    cfg.k = 4;
    cfg.seed = 3;
    const auto r = run_single(d, cfg, cfg.seed);
    const std::vector<FamilySpec> fam(r.families.begin(), r.families.end());
    auto state = make_state(d, fam, r.membership);
    const auto before = state.membership;
    CHECK_FALSE(hartigan_pass(d, state, r.card_min, Removal::Exact));
    CHECK(state.membership == before);
    CHECK_FALSE(hartigan_pass(d, state, r.card_min, Removal::Forced));
    CHECK(state.membership == before);
}

TEST_CASE("well separated triads are split from any center seeding") {
    const auto d = triads();
    const std::vector<FamilySpec> fam{FamilySpec::all()};
    const auto best = brute_force_min(d, fam, 2, 3);
    // Not partition seeding: six random labels almost never give two clusters of card_min rows.
    for (auto init : {InitMethod::Random, InitMethod::KMeansPlusPlus}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            CecConfig cfg;
            cfg.k = 2;
            cfg.init = init;
            cfg.nstart = 5;
            cfg.seed = seed;
            const auto r = run(d, cfg);
            CHECK(r.final_energy == doctest::Approx(best.energy).epsilon(1e-9));
            CHECK(r.membership[0] == r.membership[1]);
            CHECK(r.membership[0] == r.membership[2]);
            CHECK(r.membership[3] == r.membership[5]);
            CHECK(r.membership[0] != r.membership[3]);
        }
    }
}

TEST_CASE("Lloyd reaches the same triad partition") {
    const auto d = triads();
    CecConfig cfg;
    cfg.k = 2;
    cfg.method = Method::Lloyd;
    cfg.nstart = 5;
    const auto r = run(d, cfg);
    const auto best = brute_force_min(d, std::vector<FamilySpec>{FamilySpec::all()}, 2, 3);
    CHECK(r.final_energy == doctest::Approx(best.energy).epsilon(1e-9));
}

TEST_CASE("k = 1 is a single cluster after one pass") {
    Rng rng(43);
    const auto d = test::random_data(50, 3, rng);
    CecConfig cfg;
    cfg.families = {FamilySpec::diagonal()};
    const auto r = run(d, cfg);
    CHECK(r.probabilities == std::vector<double>{1.0});
    CHECK(r.iterations == 1);
    CHECK(r.final_energy == doctest::Approx(cross_entropy(FamilySpec::diagonal(), moments_of(d))).epsilon(1e-12));
}

TEST_CASE("results are deterministic and independent of threading") {
    const auto g = cli::generate("fourgauss", 5, 600);
    CecConfig cfg;
    cfg.k = 6;
    cfg.nstart = 6;
    cfg.seed = 77;
    const auto a = run(g.data, cfg);
    const auto b = run(g.data, cfg);
    cfg.threads = 3;
    const auto c = run(g.data, cfg);
    for (const auto* other : {&b, &c}) {
        CHECK(a.membership == other->membership);
        CHECK(a.energy_trace == other->energy_trace);
        CHECK(a.probabilities == other->probabilities);
        CHECK(a.best_start == other->best_start);
    }
}

TEST_CASE("multi-start keeps the best start") {
    const auto g = cli::generate("fourgauss", 6, 800);
    CecConfig cfg;
    cfg.k = 10;
    cfg.nstart = 20;
    cfg.seed = 100;
    const auto best = run(g.data, cfg);
    for (std::size_t s = 0; s < cfg.nstart; ++s) CHECK(best.final_energy <= run_single(g.data, cfg, cfg.seed + s).final_energy);

    cfg.nstart = 1;
    const auto single = run(g.data, cfg);
    const auto direct = run_single(g.data, cfg, cfg.seed);
    CHECK(single.membership == direct.membership);
    CHECK(single.energy_trace == direct.energy_trace);
}

TEST_CASE("translation moves the means and nothing else") {
    Rng rng(44);
    auto d = test::random_data(200, 2, rng, 2.0);
    CecConfig cfg;
    cfg.k = 3;
    cfg.families = {FamilySpec::spherical()};
    cfg.seed = 8;
    const auto before = run(d, cfg);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        d(i, 0) += 0.5;
        d(i, 1) -= 0.25;
    }
    const auto after = run(d, cfg);
    CHECK(before.membership == after.membership);
    REQUIRE(before.means.size() == after.means.size());
    CHECK(after.final_energy == doctest::Approx(before.final_energy).epsilon(1e-9));
    for (std::size_t c = 0; c < before.means.size(); ++c) {
        CHECK(after.means[c][0] == doctest::Approx(before.means[c][0] + 0.5).epsilon(1e-9));
    }
}

TEST_CASE("energy traces never increase") {
    Rng rng(45);
    for (int t = 0; t < 30; ++t) {
        const std::size_t dim = 1 + rng.below(4);
        const auto d = test::random_data(60 + rng.below(300), dim, rng, 1.0 + 3.0 * rng.uniform());
        CecConfig cfg;
        cfg.k = 2 + rng.below(6);
        cfg.families = {family_of_kind(static_cast<int>(rng.below(6)), dim, rng)};
        cfg.seed = rng.next();
        cfg.method = t % 3 == 0 ? Method::Lloyd : Method::Hartigan;
        const auto r = run(d, cfg);
        CHECK(non_increasing(r.energy_trace));
        CHECK(r.nclusters_trace.size() == r.energy_trace.size());
        CHECK(r.energy_trace.size() == r.iterations + 1);
        for (double p : r.probabilities) CHECK(p * static_cast<double>(d.rows()) >= static_cast<double>(r.card_min) - 0.5);
    }
}

TEST_CASE("engine energy agrees with a from-scratch evaluation") {
    Rng rng(46);
    const auto d = test::random_data(400, 3, rng);
    CecConfig cfg;
    cfg.k = 5;
    cfg.families = {FamilySpec::all(), FamilySpec::spherical(), FamilySpec::diagonal(), FamilySpec::fixed_radius(1.0),
                    FamilySpec::fixed_eigenvalues({0.5, 1.0, 2.0})};
    const auto r = run(d, cfg);
    CHECK(energy_direct(d, r.membership, r.families) == doctest::Approx(r.final_energy).epsilon(1e-10));
}

TEST_CASE("mixed families stay bound to their clusters") {
    const auto g = cli::generate("fourgauss", 9, 800);
    CecConfig cfg;
    cfg.k = 4;
    cfg.families = {FamilySpec::all(), FamilySpec::spherical(), FamilySpec::diagonal(), FamilySpec::fixed_radius(0.01)};
    const auto r = run(g.data, cfg);
    REQUIRE(r.families.size() == r.source_clusters.size());
    for (std::size_t c = 0; c < r.families.size(); ++c) {
        CHECK(r.families[c].kind() == cfg.families[r.source_clusters[c]].kind());
    }
    cfg.families.pop_back();
    CHECK_THROWS_AS(run(g.data, cfg), ConfigError);
}

TEST_CASE("clusters are removed on a disc split in halves") {
    const auto g = cli::generate_disc(3, 5000);
    CecConfig cfg;
    cfg.k = 2;
    cfg.families = {FamilySpec::spherical()};
    Assignment halves(g.data.rows());
    for (std::size_t i = 0; i < halves.size(); ++i) halves[i] = g.data(i, 0) < 0.0 ? 1 : 2;
    cfg.initial = halves;
    const auto r = run(g.data, cfg);
    CHECK(r.probabilities.size() == 1);
    CHECK(r.nclusters_trace.front() == 2);
    CHECK(non_increasing(r.energy_trace));
}

TEST_CASE("mouse set reduces to its three discs") {
    const auto g = cli::generate("mouse", 7, 3000);
    CecConfig cfg;
    cfg.k = 10;
    cfg.families = {FamilySpec::spherical()};
    cfg.init = InitMethod::Partition;
    cfg.nstart = 10;
    cfg.seed = 7;
    const auto r = run(g.data, cfg);
    CHECK(r.probabilities.size() == 3);
    CHECK(r.nclusters_trace.front() == 10);
}

TEST_CASE("four gaussians from ten clusters") {
    const auto g = cli::generate("fourgauss", 12, 2000);
    CecConfig cfg;
    cfg.k = 10;
    cfg.init = InitMethod::Partition;
    cfg.nstart = 20;
    cfg.seed = 12;
    CHECK(run(g.data, cfg).probabilities.size() == 4);
}

TEST_CASE("input validation") {
    DataMatrix narrow(2, 2, {0.0, 1.0, 2.0, 3.0});
    CecConfig cfg;
    CHECK_THROWS_WITH_AS(run(narrow, cfg), "more dimensions than points", DataError);

    Rng rng(47);
    const auto d = test::random_data(30, 2, rng);
    cfg.card_min = CardMin::absolute(31);
    CHECK_THROWS_AS(run(d, cfg), ConfigError);
    cfg.card_min = CardMin::percent(5.0);
    cfg.k = 0;
    CHECK_THROWS_AS(run(d, cfg), ConfigError);
    cfg.k = 2;
    cfg.nstart = 0;
    CHECK_THROWS_AS(run(d, cfg), ConfigError);
    cfg.nstart = 1;
    cfg.families = {FamilySpec::fixed_eigenvalues({1.0, 2.0, 3.0})};
    CHECK_THROWS_AS(run(d, cfg), ConfigError);
}

TEST_CASE("classification and mixture density") {
    const auto g = cli::generate("fourgauss", 13, 1000);
    CecConfig cfg;
    cfg.k = 4;
    cfg.init = InitMethod::Partition;
    cfg.nstart = 10;
    const auto r = run(g.data, cfg);
    REQUIRE(r.probabilities.size() == 4);
    for (std::size_t c = 0; c < 4; ++c) CHECK(classify(r, r.means[c]) == static_cast<int>(c) + 1);

    Rng rng(48);
    for (int t = 0; t < 1000; ++t) {
        const std::vector<double> x{1.2 * rng.uniform() - 0.1, 1.2 * rng.uniform() - 0.1};
        int best = 0;
        double best_score = -1.0;
        double mix = 0.0;
        for (std::size_t c = 0; c < 4; ++c) {
            const double s = r.probabilities[c] * gaussian_density(r.means[c], r.model_covariances[c], x);
            mix += s;
            if (s > best_score) {
                best_score = s;
                best = static_cast<int>(c) + 1;
            }
        }
        if (best_score > 0.0) CHECK(classify(r, x) == best);
        CHECK(mixture_density(r, x) == doctest::Approx(mix).epsilon(1e-12));
    }
}

TEST_CASE("classification ties go to the lower label") {
    CecResult r;
    r.probabilities = {0.5, 0.5};
    r.means = {{-1.0, 0.0}, {1.0, 0.0}};
    r.model_covariances = {SymMatrix::identity(2), SymMatrix::identity(2)};
    r.covariances = r.model_covariances;
    CHECK(classify(r, std::vector<double>{0.0, 3.0}) == 1);
    CHECK(classify(r, std::vector<double>{0.5, 0.0}) == 2);

    CecResult single;
    single.probabilities = {1.0};
    single.means = {{0.0, 0.0}};
    single.model_covariances = {SymMatrix::identity(2)};
    const std::vector<double> x{0.3, -0.4};
    CHECK(mixture_density(single, x) == doctest::Approx(gaussian_density(single.means[0], single.model_covariances[0], x)));
}

}
