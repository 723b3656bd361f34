#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "jls/rng.hpp"
#include "support.hpp"

using namespace jls::rng;

TEST_SUITE_BEGIN("rng");

TEST_CASE("streams are reproducible and seed-sensitive") {
    Xoshiro256pp a(123), b(123), c(124);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next();
        all_equal &= va == b.next();
        any_diff |= va != c.next();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("mix64 separates substreams") {
    CHECK(mix64(1, 0) != mix64(1, 1));
    CHECK(mix64(1, 0) != mix64(2, 0));
    // no collisions over a small grid
    std::vector<std::uint64_t> seen;
    for (std::uint64_t m = 0; m < 64; ++m)
        for (std::uint64_t s = 0; s < 64; ++s) seen.push_back(mix64(m, s));
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("uniform01 stays in [0,1) and looks flat") {
    Xoshiro256pp gen(9);
    std::array<int, 10> bins{};
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const double u = uniform01(gen);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        ++bins[static_cast<int>(u * 10.0)];
    }
    for (int count : bins) CHECK(std::fabs(count - draws / 10.0) < 5.0 * std::sqrt(draws / 10.0));
}

TEST_CASE("normal draws have the right first two moments") {
    Xoshiro256pp gen(17);
    std::vector<double> xs(200000);
    fill_normal(xs, gen);
    CHECK(std::fabs(testsupport::mean(xs)) < 0.01);
    CHECK(testsupport::variance(xs) == doctest::Approx(1.0).epsilon(0.02));
    // KS against the normal CDF
    const double d = testsupport::ks_distance(xs, testsupport::normal_cdf);
    CHECK(d < 0.005);
}

TEST_CASE("uniform_below is unbiased over its range") {
    Xoshiro256pp gen(23);
    std::array<int, 7> bins{};
    const int draws = 70000;
    for (int i = 0; i < draws; ++i) ++bins[uniform_below(gen, 7)];
    for (int count : bins) CHECK(std::fabs(count - draws / 7.0) < 5.0 * std::sqrt(draws / 7.0));
}

TEST_CASE("shuffle preserves the multiset and covers all orders") {
    Xoshiro256pp gen(31);
    std::vector<int> v{1, 2, 3, 4, 5, 6, 7};
    auto sorted = v;
    shuffle(std::span<int>(v), gen);
    auto resorted = v;
    std::sort(resorted.begin(), resorted.end());
    CHECK(resorted == sorted);

    // All 6 orders of a 3-element shuffle appear with equal frequency.
    std::map<std::array<int, 3>, int> freq;
    const int draws = 60000;
    for (int i = 0; i < draws; ++i) {
        std::array<int, 3> a{0, 1, 2};
        shuffle(std::span<int>(a), gen);
        ++freq[a];
    }
    CHECK(freq.size() == 6);
    for (const auto& [order, count] : freq)
        CHECK(std::fabs(count - draws / 6.0) < 5.0 * std::sqrt(draws / 6.0));
}

TEST_SUITE_END();
