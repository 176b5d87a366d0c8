#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "gwleaf/exactlaw.hpp"
#include "gwleaf/sampler.hpp"
#include "gwleaf/stats.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gwleaf;

namespace {

std::vector<double> lattice_three() {
    const double b = 0.1;
    const double c = (1.0 - 4.0 * b) / 7.0;
    std::vector<double> m(8, 0.0);
    m[0] = 1.0 - b - c;
    m[4] = b;
    m[7] = c;
    return m;
}

long count_in(const PlaneTree& t, const DegreeSet& set) {
    long c = 0;
    for (int k : t.child_counts()) c += set.contains(k);
    return c;
}

// Exact conditional law of the tree, restricted to trees with at most max_size
// vertices (the caller makes sure nothing is lost).
std::map<PlaneTree, double> exact_conditional(const OffspringLaw& law, Mode mode, long n, const DegreeSet& set,
                                              long max_size) {
    std::map<PlaneTree, double> out;
    double total = 0.0;
    for (const auto& wt : list_trees(law, max_size)) {
        bool keep = false;
        switch (mode) {
            case Mode::size: keep = wt.tree.size() == n; break;
            case Mode::leaves: keep = count_in(wt.tree, DegreeSet::leaves()) == n; break;
            case Mode::set_count: keep = count_in(wt.tree, set) == n; break;
            default: break;
        }
        if (keep && wt.weight > 0.0) {
            out[wt.tree] += wt.weight;
            total += wt.weight;
        }
    }
    for (auto& [t, w] : out) w /= total;
    return out;
}

Chi2Result compare(const OffspringLaw& law, Mode mode, long n, const DegreeSet& set, long max_size, long reps,
                   std::uint64_t seed) {
    const auto exact = exact_conditional(law, mode, n, set, max_size);
    TreeSampler sampler(law, SamplerConfig{seed});
    Rng rng(seed, 0);
    std::map<PlaneTree, double> seen;
    for (long r = 0; r < reps; ++r) {
        const PlaneTree t = sampler.sample(mode, n, set, rng);
        REQUIRE(exact.count(t));
        seen[t] += 1.0;
    }
    if (exact.size() == 1) {
        CHECK(seen.size() == 1);
        return Chi2Result{0.0, 1.0, 1, 0};
    }
    std::vector<double> obs, expct;
    for (const auto& [t, p] : exact) {
        obs.push_back(seen.count(t) ? seen.at(t) : 0.0);
        expct.push_back(p * static_cast<double>(reps));
    }
    return chi2_gof(obs, expct);
}

}  // namespace

TEST_SUITE("sampler") {

TEST_CASE("rotation of a bridge word") {
    CHECK(vervaat(std::vector<long>{-1}) == std::vector<long>{-1});
    CHECK(vervaat(std::vector<long>{-1, 1, -1}) == std::vector<long>{1, -1, -1});
    CHECK(vervaat(std::vector<long>{-1, 0, 1, -1, -1, 1}) == std::vector<long>{1, -1, 0, 1, -1, -1});
    CHECK(vervaat(std::vector<long>{1, -1, -1}) == std::vector<long>{1, -1, -1});
    CHECK(error_of([] { vervaat(std::vector<long>{-1, -1}); }) == Errc::NotSummingToMinusOne);
    CHECK(error_of([] { vervaat(std::vector<long>{}); }) == Errc::NotSummingToMinusOne);
    // Every rotation of every bridge word of length <= 6 decodes to a tree.
    for (int p = 1; p <= 6; ++p) {
        std::vector<long> x(static_cast<std::size_t>(p), -1);
        while (true) {
            long s = 0;
            for (long v : x) s += v;
            if (s == -1) {
                const auto y = vervaat(x);
                CHECK_NOTHROW(decode(std::span<const long>(y)));
                CHECK(y == cyclic_shift(x, vervaat_index(x) % p));
            }
            std::size_t k = 0;
            while (k < x.size() && x[k] == 3) x[k++] = -1;
            if (k == x.size()) break;
            ++x[k];
        }
    }
}

TEST_CASE("mode names") {
    for (Mode m : {Mode::unconditioned, Mode::size, Mode::leaves, Mode::leaves_ge, Mode::set_count})
        CHECK(parse_mode(mode_name(m)) == m);
    CHECK(error_of([] { parse_mode("bogus"); }) == Errc::DomainError);
}

TEST_CASE("unconditioned trees") {
    const auto law = geometric_critical();
    TreeSampler sampler(law, SamplerConfig{7});
    Rng rng(7, 0);
    const long reps = 40000;
    long single = 0;
    long three = 0;
    for (long r = 0; r < reps; ++r) {
        const auto t = sampler.gw(rng);
        single += t.size() == 1;
        three += t.size() == 3;
    }
    const double se_single = std::sqrt(0.25 / reps);
    const double se_three = std::sqrt(1.0 / 16 * 15.0 / 16 / reps);
    CHECK(std::abs(single / double(reps) - 0.5) < 3.0 * se_single);
    CHECK(std::abs(three / double(reps) - 1.0 / 16) < 3.0 * se_three);
    CHECK(sampler.stats().accepted == reps);
}

TEST_CASE("conditioned on size matches the exact law") {
    CHECK(compare(geometric_critical(), Mode::size, 1, DegreeSet::naturals(), 1, 100, 1).statistic == 0.0);
    CHECK(compare(geometric_critical(), Mode::size, 3, DegreeSet::naturals(), 3, 20000, 2).p_value > 1e-3);
    CHECK(compare(geometric_critical(), Mode::size, 6, DegreeSet::naturals(), 6, 40000, 3).p_value > 1e-3);
    CHECK(compare(dissection_law(), Mode::size, 7, DegreeSet::naturals(), 7, 40000, 4).p_value > 1e-3);
    CHECK(compare(validate_law(lattice_three()), Mode::size, 9, DegreeSet::naturals(), 9, 20000, 5).p_value > 1e-3);
}

TEST_CASE("conditioned on leaves matches the exact law") {
    // Without one-child vertices the size is at most 2n - 1.
    CHECK(compare(dissection_law(), Mode::leaves, 3, DegreeSet::leaves(), 5, 40000, 11).p_value > 1e-3);
    CHECK(compare(dissection_law(), Mode::leaves, 5, DegreeSet::leaves(), 9, 40000, 12).p_value > 1e-3);
    CHECK(compare(validate_law(lattice_three()), Mode::leaves, 4, DegreeSet::leaves(), 7, 5000, 13).p_value > 1e-3);
    CHECK(compare(validate_law(lattice_three()), Mode::leaves, 7, DegreeSet::leaves(), 13, 20000, 14).p_value > 1e-3);
}

TEST_CASE("one leaf under the geometric law is a path of geometric length") {
    // P[zeta = k | lambda = 1] = (3/4) (1/4)^{k-1}
    TreeSampler sampler(geometric_critical(), SamplerConfig{21});
    Rng rng(21, 0);
    const long reps = 40000;
    std::vector<double> obs(6, 0.0), expct(6, 0.0);
    for (long r = 0; r < reps; ++r) {
        const auto t = sampler.conditioned_leaves(1, rng);
        for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(t.size()); ++i) CHECK(t.child_counts()[i] == 1);
        obs[static_cast<std::size_t>(std::min<long>(t.size(), 6) - 1)] += 1.0;
    }
    for (int k = 1; k <= 5; ++k) expct[static_cast<std::size_t>(k - 1)] = 0.75 * std::pow(0.25, k - 1) * reps;
    expct[5] = std::pow(0.25, 5) * reps;
    CHECK(chi2_gof(obs, expct).p_value > 1e-3);
}

TEST_CASE("conditioned on a general degree set matches the exact law") {
    // A = {0, 2}: no one-child vertices under the dissection law, so the size is bounded.
    CHECK(compare(dissection_law(), Mode::set_count, 5, DegreeSet::finite({0, 2}), 9, 30000, 31).p_value > 1e-3);
    // A = N - {1} under the geometric law: the set count is the size minus the one-child vertices.
    const auto law = geometric_critical();
    const auto set = DegreeSet::cofinite({1});
    TreeSampler sampler(law, SamplerConfig{32});
    Rng rng(32, 0);
    for (int r = 0; r < 2000; ++r) CHECK(count_in(sampler.conditioned_count_in_set(set, 3, rng), set) == 3);
}

TEST_CASE("the conditioning count is exact") {
    const auto law = zeta_stable_law(1.5);
    TreeSampler sampler(law, SamplerConfig{41});
    Rng rng(41, 0);
    for (long n : {1L, 2L, 10L, 57L}) {
        for (int r = 0; r < 50; ++r) {
            CHECK(statistics(sampler.conditioned_leaves(n, rng)).lambda == n);
            CHECK(statistics(sampler.conditioned_leaves_ge(n, rng)).lambda >= n);
            CHECK(sampler.conditioned_size(n, rng).size() == n);
            CHECK(count_in(sampler.conditioned_count_in_set(DegreeSet::finite({3}), n, rng), DegreeSet::finite({3})) == n);
        }
    }
}

TEST_CASE("degree sets reducing to the classical conditionings") {
    const auto law = geometric_critical();
    SamplerConfig config{51};
    // A = {0} is routed to the leaf sampler: identical draws.
    for (std::uint64_t s = 0; s < 20; ++s)
        CHECK(sample_conditioned_count_in_set(law, DegreeSet::leaves(), 9, config, s) ==
              sample_conditioned_leaves(law, 9, config, s));
    // A = N gives the size law.
    CHECK(compare(law, Mode::set_count, 4, DegreeSet::naturals(), 4, 20000, 52).p_value > 1e-3);
}

TEST_CASE("determinism by seed and stream") {
    const auto law = zeta_stable_law(1.3);
    SamplerConfig config{99};
    for (std::uint64_t s = 0; s < 10; ++s) {
        CHECK(sample_conditioned_leaves(law, 40, config, s) == sample_conditioned_leaves(law, 40, config, s));
        CHECK(sample_gw(law, config, s) == sample_gw(law, config, s));
    }
    CHECK(sample_conditioned_leaves(law, 40, config, 0) != sample_conditioned_leaves(law, 40, config, 1));
    SamplerConfig other{100};
    CHECK(sample_conditioned_leaves(law, 40, config, 0) != sample_conditioned_leaves(law, 40, other, 0));
}

TEST_CASE("impossible counts and budgets") {
    const auto lattice = validate_law(lattice_three());
    SamplerConfig config{5};
    CHECK(error_of([&] { sample_conditioned_leaves(lattice, 2, config); }) == Errc::ImpossibleCount);
    CHECK(error_of([&] { sample_conditioned_size(lattice, 2, config); }) == Errc::ImpossibleCount);
    CHECK(error_of([&] { sample_conditioned_size(dissection_law(), 2, config); }) == Errc::ImpossibleCount);
    CHECK(error_of([&] { sample_conditioned_leaves(geometric_critical(), 0, config); }) == Errc::InvalidCount);
    CHECK_FALSE(count_is_possible(dissection_law(), Mode::set_count, 1, DegreeSet::finite({1})));
    CHECK(count_is_possible(lattice, Mode::leaves, 4));
    CHECK(count_is_possible(lattice, Mode::leaves, 7));
    CHECK_FALSE(count_is_possible(lattice, Mode::leaves, 3));
    CHECK_FALSE(count_is_possible(lattice, Mode::set_count, 2, DegreeSet::finite({0, 4})));

    SamplerConfig one_attempt{5, 1};
    CHECK(error_of([&] {
              for (std::uint64_t s = 0; s < 100; ++s) sample_conditioned_leaves(geometric_critical(), 500, one_attempt, s);
          }) == Errc::AttemptBudgetExceeded);
    SamplerConfig short_walk{5, 1000, 50};
    CHECK(error_of([&] { sample_conditioned_leaves(geometric_critical(), 500, short_walk); }) == Errc::StepBudgetExceeded);
    CHECK(error_of([&] { sample_conditioned_size(geometric_critical(), 51, short_walk); }) == Errc::StepBudgetExceeded);
    CHECK(error_of([] { TreeSampler(geometric_critical(), SamplerConfig{1, 0}); }) == Errc::DomainError);
}

TEST_CASE("acceptance rate decays like n^{-1/2}") {
    const auto law = geometric_critical();
    std::vector<double> rates;
    for (long n : {25L, 100L, 400L}) {
        TreeSampler sampler(law, SamplerConfig{61});
        Rng rng(61, static_cast<std::uint64_t>(n));
        for (int r = 0; r < 3000; ++r) sampler.conditioned_leaves(n, rng);
        rates.push_back(double(sampler.stats().accepted) / double(sampler.stats().attempts));
    }
    const double slope = std::log(rates[2] / rates[0]) / std::log(16.0);
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("rotation index of random bridges is uniform") {
    // i.i.d. jumps conditioned to sum to -1 over p steps.
    const auto law = geometric_critical();
    const OffspringSampler children(law);
    Rng rng(71, 0);
    const int p = 5;
    std::vector<double> obs(p, 0.0);
    long accepted = 0;
    std::vector<long> x(p);
    while (accepted < 50000) {
        long s = 0;
        for (auto& v : x) {
            v = children(rng) - 1;
            s += v;
        }
        if (s != -1) continue;
        ++accepted;
        obs[static_cast<std::size_t>(vervaat_index(x) - 1)] += 1.0;
    }
    const std::vector<double> expct(p, accepted / double(p));
    CHECK(chi2_gof(obs, expct).p_value > 1e-3);
}

}  // TEST_SUITE
