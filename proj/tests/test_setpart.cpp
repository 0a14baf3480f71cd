#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <unordered_set>

#include "see/setpart.hpp"

using namespace see::setpart;

namespace {

// Independent oracle: enumerate every function {1..n} -> {1..n} and count the
// distinct partitions induced by their fibers (encoded as restricted growth
// signatures).  Agrees with the Bell numbers without hard-coding them.
std::size_t bell_by_function_fibers(int n) {
    if (n == 0) return 1;  // the empty partition of the empty set
    std::unordered_set<std::uint32_t> signatures;
    std::vector<int> f(static_cast<std::size_t>(n), 0);
    while (true) {
        std::uint32_t sig = 0;
        int next_label = 0;
        int relabel[13];
        std::fill(relabel, relabel + 13, -1);
        for (int i = 0; i < n; ++i) {
            int& lab = relabel[f[static_cast<std::size_t>(i)]];
            if (lab < 0) lab = next_label++;
            sig = sig * 16u + static_cast<std::uint32_t>(lab);
        }
        signatures.insert(sig);
        int i = n - 1;
        while (i >= 0 && f[static_cast<std::size_t>(i)] == n - 1)
            f[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++f[static_cast<std::size_t>(i)];
    }
    return signatures.size();
}

std::vector<SetPartition> sorted_members(const PartitionFamily& family) {
    auto out = family.members;
    std::sort(out.begin(), out.end(),
              [](const SetPartition& a, const SetPartition& b) { return a.blocks < b.blocks; });
    return out;
}

}  // namespace

TEST_CASE("base cases") {
    CHECK(enumerate_partitions(0).size() == 0);

    const auto one = enumerate_partitions(1);
    REQUIRE(one.size() == 1);
    CHECK(one.members[0].blocks == std::vector<std::vector<int>>{{1}});

    const auto four = enumerate_partitions(4);
    CHECK(four.size() == 15);
}

TEST_CASE("counts match the function-fiber oracle up to n = 8") {
    for (int n = 0; n <= 8; ++n) {
        const std::size_t expected = n == 0 ? 0 : bell_by_function_fibers(n);
        CHECK(enumerate_partitions(n).size() == expected);
    }
}

TEST_CASE("every enumerated partition is canonical and distinct") {
    for (int n = 1; n <= 7; ++n) {
        const auto family = enumerate_partitions(n);
        for (const auto& p : family.members) {
            CHECK(p.valid());
            CHECK(p.n == n);
        }
        auto sorted = sorted_members(family);
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        // enumeration order is lexicographic on the canonical block lists
        CHECK(std::is_sorted(family.members.begin(), family.members.end(),
                             [](const SetPartition& a, const SetPartition& b) {
                                 return a.blocks < b.blocks;
                             }));
    }
}

TEST_CASE("recursive extension reproduces the next family") {
    const auto two = extend_recursive(enumerate_partitions(1));
    REQUIRE(two.size() == 2);
    CHECK(sorted_members(two) == sorted_members(enumerate_partitions(2)));

    CHECK(extend_recursive(enumerate_partitions(2)).size() == 5);

    for (int n = 1; n <= 7; ++n) {
        const auto grown = extend_recursive(enumerate_partitions(n));
        CHECK(sorted_members(grown) == sorted_members(enumerate_partitions(n + 1)));
        for (const auto& p : grown.members) CHECK(p.valid());
    }
}

TEST_CASE("the two extension branches are disjoint") {
    for (int n = 1; n <= 6; ++n) {
        const auto base = enumerate_partitions(n);
        const auto grown = extend_recursive(base);
        std::size_t singleton_branch = 0;
        for (const auto& p : grown.members) {
            bool last_is_singleton = false;
            for (const auto& block : p.blocks)
                if (block.size() == 1 && block[0] == n + 1) last_is_singleton = true;
            if (last_is_singleton) ++singleton_branch;
        }
        CHECK(singleton_branch == base.size());
        CHECK(grown.size() - singleton_branch > 0);
    }
}

TEST_CASE("extension rejects the empty base case") {
    CHECK_THROWS_AS(extend_recursive(PartitionFamily{0, {}}), std::invalid_argument);
    PartitionFamily broken{2, {SetPartition{2, {{2}, {1}}}}};
    CHECK_THROWS_AS(extend_recursive(broken), std::invalid_argument);
}

TEST_CASE("pair partitions") {
    CHECK(pair_partitions(enumerate_partitions(2)).size() == 2);
    CHECK(pair_partitions(enumerate_partitions(4)).size() == 10);
    const auto one = pair_partitions(enumerate_partitions(1));
    REQUIRE(one.size() == 1);
    CHECK(one.members[0].blocks == std::vector<std::vector<int>>{{1}});
}

TEST_CASE("singleton counts") {
    CHECK(singleton_count(SetPartition{2, {{1}, {2}}}) == 2);
    CHECK(singleton_count(SetPartition{2, {{1, 2}}}) == 0);
    CHECK(singleton_count(SetPartition{3, {{1, 2}, {3}}}) == 1);
    CHECK_THROWS_AS(singleton_count(SetPartition{3, {{1, 2, 3}}}), std::invalid_argument);

    for (int n = 1; n <= 7; ++n)
        for (const auto& p : pair_partitions(enumerate_partitions(n)).members)
            CHECK(singleton_count(p) == 2 * p.block_count() - n);
}

TEST_CASE("enumeration cap") {
    CHECK_THROWS_AS(enumerate_partitions(13), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_partitions(-1), std::invalid_argument);
}
