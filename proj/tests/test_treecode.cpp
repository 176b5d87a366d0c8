#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gwleaf/error.hpp"
#include "gwleaf/exactlaw.hpp"
#include "gwleaf/sampler.hpp"
#include "gwleaf/treecode.hpp"
#include "oracles.hpp"

using namespace gwleaf;

namespace {

PlaneTree tree(std::vector<int> counts) { return PlaneTree::from_child_counts(std::move(counts)); }

std::vector<long> increments(const CodingTriple& c) {
    std::vector<long> inc;
    for (std::size_t i = 0; i + 1 < c.lukasiewicz.size(); ++i) inc.push_back(c.lukasiewicz[i + 1] - c.lukasiewicz[i]);
    return inc;
}

void check_coding_invariants(const PlaneTree& t) {
    const CodingTriple c = encode(t);
    const long z = t.size();
    REQUIRE(static_cast<long>(c.lukasiewicz.size()) == z + 1);
    REQUIRE(static_cast<long>(c.height.size()) == z + 1);
    REQUIRE(static_cast<long>(c.contour.size()) == 2 * z + 1);
    CHECK(c.lukasiewicz.front() == 0);
    CHECK(c.lukasiewicz.back() == -1);
    for (long i = 0; i < z; ++i) CHECK(c.lukasiewicz[static_cast<std::size_t>(i)] >= 0);
    CHECK(c.height.back() == 0);
    for (long i = 0; i + 1 < z; ++i)
        CHECK(c.height[static_cast<std::size_t>(i + 1)] <= c.height[static_cast<std::size_t>(i)] + 1);
    CHECK(c.contour.front() == 0);
    CHECK(c.contour.back() == 0);
    for (long s = 0; s < 2 * z; ++s)
        CHECK(std::abs(c.contour[static_cast<std::size_t>(s + 1)] - c.contour[static_cast<std::size_t>(s)]) <= 1);
    for (long s = 2 * (z - 1); s <= 2 * z; ++s) CHECK(c.contour[static_cast<std::size_t>(s)] == 0);
}

}  // namespace

TEST_SUITE("treecode") {

TEST_CASE("encode: worked examples") {
    const auto leaf = encode(PlaneTree{});
    CHECK(leaf.lukasiewicz == std::vector<long>{0, -1});
    CHECK(leaf.height == std::vector<long>{0, 0});
    // Contour sampled at times 0..2 zeta.
    CHECK(leaf.contour == std::vector<long>{0, 0, 0});

    const auto cherry = encode(tree({2, 0, 0}));
    CHECK(cherry.lukasiewicz == std::vector<long>{0, 1, 0, -1});
    CHECK(cherry.height == std::vector<long>{0, 1, 1, 0});
    CHECK(cherry.contour == std::vector<long>{0, 1, 0, 1, 0, 0, 0});

    const auto six = encode(tree({2, 1, 0, 2, 0, 0}));
    CHECK(six.lukasiewicz == std::vector<long>{0, 1, 1, 0, 1, 0, -1});
    CHECK(six.height == std::vector<long>{0, 1, 2, 1, 2, 2, 0});
}

TEST_CASE("decode: worked examples and errors") {
    CHECK(decode(std::vector<long>{-1}) == PlaneTree{});
    CHECK(decode(std::vector<long>{1, -1, -1}) == tree({2, 0, 0}));
    CHECK(decode(std::vector<long>{2, -1, -1, -1}) == tree({3, 0, 0, 0}));
    auto code = [](std::vector<long> inc) {
        try {
            decode(inc);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::DomainError;
    };
    CHECK(code({-1, -1}) == Errc::NotAnExcursion);
    CHECK(code({0, 0}) == Errc::NotAnExcursion);
    CHECK(code({-1, 1, -1}) == Errc::NotAnExcursion);
    CHECK(code({-2, 1}) == Errc::NotAnExcursion);
    CHECK(code({}) == Errc::NotAnExcursion);
    CHECK_THROWS_AS(PlaneTree::from_child_counts({1, 0, 0}), Error);
    CHECK_THROWS_AS(PlaneTree::from_child_counts({}), Error);
}

TEST_CASE("height from the Lukasiewicz path: worked examples") {
    CHECK(height_from_lukasiewicz(std::vector<long>{0, -1}) == std::vector<long>{0});
    CHECK(height_from_lukasiewicz(std::vector<long>{0, 1, 0, -1}) == std::vector<long>{0, 1, 1});
    CHECK(height_from_lukasiewicz(std::vector<long>{0, 1, 1, 0, 1, 0, -1}) == std::vector<long>{0, 1, 2, 1, 2, 2});
    CHECK(height_by_infimum_count(std::vector<long>{0, 1, 1, 0, 1, 0, -1}) == std::vector<long>{0, 1, 2, 1, 2, 2});
    CHECK_THROWS_AS(height_from_lukasiewicz(std::vector<long>{0, -1, 0}), Error);
}

TEST_CASE("exhaustive: codings of every tree with at most 10 vertices") {
    const auto trees = oracle::trees_by_size(10);
    long checked = 0;
    for (int n = 1; n <= 10; ++n) {
        CHECK(static_cast<long>(trees[static_cast<std::size_t>(n)].size()) == oracle::catalan(n - 1));
        for (const auto& counts : trees[static_cast<std::size_t>(n)]) {
            const PlaneTree t = tree(counts);
            const CodingTriple c = encode(t);
            const auto inc = increments(c);
            CHECK(decode(std::span<const long>(inc)) == t);
            const auto depth = oracle::depths(counts);
            CHECK(std::equal(depth.begin(), depth.end(), c.height.begin()));
            const auto h1 = height_from_lukasiewicz(c.lukasiewicz);
            const auto h2 = height_by_infimum_count(c.lukasiewicz);
            CHECK(h1 == h2);
            CHECK(std::equal(h1.begin(), h1.end(), c.height.begin()));
            const auto walk = oracle::contour_walk(counts);
            CHECK(std::equal(walk.begin(), walk.end(), c.contour.begin()));
            check_coding_invariants(t);
            // Contour local maxima are exactly the leaves (zeta >= 2).
            if (n >= 2) {
                long peaks = 0;
                for (std::size_t s = 1; s + 1 < walk.size(); ++s) peaks += walk[s] > walk[s - 1] && walk[s] > walk[s + 1];
                CHECK(peaks == statistics(t).lambda);
            }
            // Reversing the contour on [0, 2(zeta - 1)] gives the contour of the mirrored tree.
            const PlaneTree m = mirror(t);
            CHECK(m.child_counts().size() == counts.size());
            CHECK(std::vector<int>(m.child_counts().begin(), m.child_counts().end()) == oracle::mirrored(counts));
            auto reversed = walk;
            std::reverse(reversed.begin(), reversed.end());
            CHECK(reversed == oracle::contour_walk(oracle::mirrored(counts)));
            ++checked;
        }
    }
    CHECK(checked == 6918);
}

TEST_CASE("random trees round-trip") {
    const auto law = geometric_critical();
    SamplerConfig config;
    config.seed = 12;
    for (long r = 0; r < 2000; ++r) {
        const PlaneTree t = sample_conditioned_size(law, 1 + r % 300, config, static_cast<std::uint64_t>(r));
        const auto c = encode(t);
        const auto inc = increments(c);
        REQUIRE(decode(std::span<const long>(inc)) == t);
        if (r % 50 == 0) {
            const std::vector<int> counts(t.child_counts().begin(), t.child_counts().end());
            CHECK(oracle::contour_walk(counts) ==
                  std::vector<long>(c.contour.begin(), c.contour.begin() + 2 * (t.size() - 1) + 1));
            CHECK(height_by_infimum_count(c.lukasiewicz) == height_from_lukasiewicz(c.lukasiewicz));
        }
    }
}

TEST_CASE("statistics") {
    const auto cherry = statistics(tree({2, 0, 0}));
    CHECK(cherry.zeta == 3);
    CHECK(cherry.lambda == 2);
    CHECK(cherry.max_degree == 2);
    CHECK(cherry.zeta_A == 2);
    CHECK(cherry.leaf_profile == std::vector<long>{0, 1, 2, 2});
    const auto t = tree({2, 1, 0, 2, 0, 0});
    const auto s = statistics(t);
    CHECK(s.zeta == 6);
    CHECK(s.lambda == 3);
    CHECK(s.max_degree == 2);
    CHECK(statistics(t, DegreeSet::finite({1})).zeta_A == 1);
    CHECK(statistics(t, DegreeSet::finite({2})).zeta_A == 2);
    CHECK(statistics(t, DegreeSet::naturals()).zeta_A == 6);
    CHECK(s.leaf_profile.back() == s.lambda);
}

TEST_CASE("leaf and set counts from increments") {
    const auto trees = oracle::trees_by_size(8);
    for (const auto& counts : trees[8]) {
        const auto t = tree(counts);
        const auto inc = increments_of(t);
        CHECK(std::count(inc.begin(), inc.end(), -1) == statistics(t).lambda);
        const DegreeSet a = DegreeSet::finite({0, 2});
        long in_a = 0;
        for (int x : inc) in_a += a.contains(x + 1);
        CHECK(in_a == statistics(t, a).zeta_A);
    }
}

TEST_CASE("serialization") {
    const auto t = tree({2, 1, 0, 2, 0, 0});
    CHECK(to_line(t) == "2,1,0,2,0,0");
    CHECK(parse_tree_line("2,1,0,2,0,0") == t);
    CHECK(parse_tree_line(" 0 ") == PlaneTree{});
    CHECK_THROWS_AS(parse_tree_line("2,0"), Error);
    CHECK_THROWS_AS(parse_tree_line("a"), Error);
    std::ostringstream os;
    write_coding_csv(os, encode(tree({2, 0, 0})));
    CHECK(os.str() == "t,W,H,C\n0,0,0,0\n1,1,1,1\n2,0,1,0\n3,-1,0,1\n4,,,0\n5,,,0\n6,,,0\n");
}

}  // TEST_SUITE
