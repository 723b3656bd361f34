#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "jls/rng.hpp"
#include "jls/transform.hpp"
#include "jls/types.hpp"
#include "support.hpp"

using namespace jls;

TEST_SUITE_BEGIN("transform");

TEST_CASE("worked example with Blom offsets") {
    const std::vector<double> in{5, 1, 9};
    const auto out = inverse_normal_transform(in);
    REQUIRE(out.size() == 3);
    CHECK(out[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(-0.8694237732888861).epsilon(1e-10));
    CHECK(out[2] == doctest::Approx(+0.8694237732888861).epsilon(1e-10));
}

TEST_CASE("rank invariance under strictly monotone pre-transforms") {
    rng::Xoshiro256pp gen(5);
    std::vector<double> base(101);
    rng::fill_normal(base, gen);
    const auto ref = inverse_normal_transform(base);

    std::vector<double> cubed(base);
    for (auto& v : cubed) v = v * v * v;
    std::vector<double> exped(base);
    for (auto& v : exped) v = std::exp(v);

    CHECK(inverse_normal_transform(cubed) == ref);
    CHECK(inverse_normal_transform(exped) == ref);
}

TEST_CASE("ties share the average rank") {
    const std::vector<double> in{1, 2, 2, 3};
    const auto out = inverse_normal_transform(in);
    CHECK(out[1] == out[2]);
    CHECK(out[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));  // mean rank 2.5 of 4
    CHECK(out[0] == doctest::Approx(-out[3]).epsilon(1e-12));
}

TEST_CASE("missing values are preserved in place") {
    const std::vector<double> in{2.0, nan_value(), 1.0, 3.0};
    const auto out = inverse_normal_transform(in);
    CHECK(std::isnan(out[1]));
    CHECK(out[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(out[2] < 0.0);
    CHECK(out[3] > 0.0);
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(inverse_normal_transform(std::vector<double>{3.0, 3.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(inverse_normal_transform(std::vector<double>{1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        inverse_normal_transform(std::vector<double>{nan_value(), nan_value()}),
        std::invalid_argument);
}

TEST_CASE("output is near zero-mean and rank-preserving") {
    rng::Xoshiro256pp gen(11);
    std::vector<double> in(500);
    for (auto& v : in) v = std::exp(2.0 * rng::normal(gen));
    const auto out = inverse_normal_transform(in);

    double mean = 0.0;
    for (double v : out) mean += v;
    CHECK(std::fabs(mean) < 1e-9 * static_cast<double>(out.size()));

    for (std::size_t i = 0; i < in.size(); ++i)
        for (std::size_t j = i + 1; j < std::min(in.size(), i + 20); ++j)
            if (in[i] < in[j]) CHECK(out[i] < out[j]);
}

TEST_CASE("offset 0.5 uses (r - 1/2) / m positions") {
    const std::vector<double> in{5, 1, 9};
    const auto out = inverse_normal_transform(in, IntOptions{0.5});
    // positions 1/6, 3/6, 5/6
    CHECK(out[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(-out[2]).epsilon(1e-12));
    CHECK(out[1] < -0.8694237732888861);  // more extreme than the Blom value
}

TEST_SUITE_END();
