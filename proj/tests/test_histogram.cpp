#include <doctest.h>

#include "histofeat/errors.hpp"
#include "histofeat/histogram.hpp"
#include "histofeat/rng.hpp"

#include "oracles.hpp"

#include <cmath>
#include <vector>

using namespace histofeat;

static std::vector<double> random_signal(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.next_gaussian() * 2.0 + rng.next_double();
    return xs;
}

TEST_CASE("sample_std matches the hand value for 1..5") {
    std::vector<double> xs{1, 2, 3, 4, 5};
    CHECK(sample_std(xs) == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));
}

TEST_CASE("sample_std rejects fewer than two samples") {
    std::vector<double> one{3.0};
    CHECK_THROWS_AS((void)sample_std(one), DataError);
    std::vector<double> none;
    CHECK_THROWS_AS((void)sample_std(none), DataError);
}

TEST_CASE("sample_std agrees with direct long double summation") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto xs = random_signal(seed, 500);
        double ref = static_cast<double>(oracle::naive_sample_std(xs));
        CHECK(sample_std(xs) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("sample_std is shift invariant to machine precision") {
    auto xs = random_signal(77, 1000);
    double base = sample_std(xs);
    for (double c : {1e3, -4.5e4, 123456.0}) {
        auto shifted = xs;
        for (auto& x : shifted) x += c;
        CHECK(sample_std(shifted) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("bin width rule gives 0.349 for unit sigma and n = 1000") {
    CHECK(scott_bin_width(1.0, 1000) == doctest::Approx(0.349).epsilon(1e-14));
}

TEST_CASE("bin width for 1..5 matches the hand computation") {
    std::vector<double> xs{1, 2, 3, 4, 5};
    double expect = 3.49 * std::sqrt(2.5) / std::cbrt(5.0);
    CHECK(scott_bin_width(xs) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(scott_bin_width(xs) == doctest::Approx(3.2270).epsilon(1e-4));
}

TEST_CASE("bin width is scale equivariant and shift invariant") {
    auto xs = random_signal(5, 2000);
    double base = scott_bin_width(xs);
    for (double a : {0.001, 3.0, 1e4}) {
        auto scaled = xs;
        for (auto& x : scaled) x *= a;
        CHECK(scott_bin_width(scaled) == doctest::Approx(a * base).epsilon(1e-12));
    }
    auto shifted = xs;
    for (auto& x : shifted) x += 9876.5;
    CHECK(scott_bin_width(shifted) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("constant signals have no usable bin width") {
    std::vector<double> flat(100, 4.2);
    CHECK_THROWS_AS((void)scott_bin_width(flat), DataError);
    CHECK_THROWS_AS((void)make_bin_spec(flat), DataError);
}

TEST_CASE("make_bin_spec worked example: 1..5 gives two bins") {
    std::vector<double> xs{1, 2, 3, 4, 5};
    BinSpec spec = make_bin_spec(xs);
    CHECK(spec.origin == 1.0);
    CHECK(spec.max_amplitude == 5.0);
    CHECK(spec.width == doctest::Approx(3.2270).epsilon(1e-4));
    CHECK(spec.count == 2);
}

TEST_CASE("range equal to one width yields a single bin") {
    std::vector<double> xs{0.0, 1.0};
    BinSpec spec = make_bin_spec_with_width(xs, 1.0);
    CHECK(spec.count == 1);
    CHECK(spec.origin == 0.0);
    CHECK(spec.max_amplitude == 1.0);
}

TEST_CASE("bin count is capped") {
    std::vector<double> xs{0.0, 1e6};
    CHECK_THROWS_AS((void)make_bin_spec_with_width(xs, 1e-3), DataError);
    CHECK_THROWS_WITH_AS((void)make_bin_spec_with_width(xs, 1e-3),
                         doctest::Contains("bin count"), DataError);
}

TEST_CASE("bin count survives scaling when samples avoid the edges") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        auto xs = random_signal(seed, 800);
        if (!oracle::edges_are_safe(xs)) continue;
        BinSpec base = make_bin_spec(xs);
        for (double a : {2.0, 0.25, 1e3}) {
            auto scaled = xs;
            for (auto& x : scaled) x *= a;
            if (!oracle::edges_are_safe(scaled)) continue;
            CHECK(make_bin_spec(scaled).count == base.count);
        }
    }
}

TEST_CASE("assign_bin covers the closed range and rejects outside points") {
    std::vector<double> xs{1, 2, 3, 4, 5};
    BinSpec spec = make_bin_spec(xs);

    auto at_origin = assign_bin(spec.origin, spec);
    REQUIRE(at_origin.has_value());
    CHECK(*at_origin == 0);

    auto at_max = assign_bin(spec.max_amplitude, spec);
    REQUIRE(at_max.has_value());
    CHECK(*at_max == spec.count - 1);

    CHECK_FALSE(assign_bin(spec.origin - 0.1, spec).has_value());
    CHECK_FALSE(assign_bin(spec.max_amplitude + 0.1, spec).has_value());
    CHECK_FALSE(assign_bin(std::nan(""), spec).has_value());
}

TEST_CASE("assign_bin is total on the range with in-bound indices") {
    auto xs = random_signal(9, 3000);
    BinSpec spec = make_bin_spec(xs);
    Rng rng(10);
    for (int i = 0; i < 5000; ++i) {
        double x = spec.origin + rng.next_double() * (spec.max_amplitude - spec.origin);
        auto k = assign_bin(x, spec);
        REQUIRE(k.has_value());
        CHECK(*k < spec.count);
        CHECK(x >= spec.edge(*k));
        if (*k + 1 < spec.count) CHECK(x < spec.edge(*k + 1));
    }
}

TEST_CASE("histogram counts for the worked example are (4,1)") {
    std::vector<double> xs{1, 2, 3, 4, 5};
    BinSpec spec = make_bin_spec(xs);
    auto counts = histogram_counts(xs, spec);
    REQUIRE(counts.size() == 2);
    CHECK(counts[0] == 4);
    CHECK(counts[1] == 1);
}

TEST_CASE("two-point signal with one bin counts both points") {
    std::vector<double> xs{0.0, 1.0};
    BinSpec spec = make_bin_spec_with_width(xs, 1.0);
    auto counts = histogram_counts(xs, spec);
    REQUIRE(counts.size() == 1);
    CHECK(counts[0] == 2);
}

TEST_CASE("histogram counts always sum to the sample count") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto xs = random_signal(seed, 200 + 13 * static_cast<std::size_t>(seed));
        BinSpec spec = make_bin_spec(xs);
        auto counts = histogram_counts(xs, spec);
        std::size_t total = 0;
        for (auto c : counts) total += c;
        CHECK(total == xs.size());
    }
}

TEST_CASE("histogram_counts rejects values outside the spec") {
    std::vector<double> xs{1, 2, 3, 4, 5};
    BinSpec spec = make_bin_spec(xs);
    std::vector<double> bad{1, 2, 99.0};
    CHECK_THROWS_WITH_AS((void)histogram_counts(bad, spec), doctest::Contains("outside"),
                         DataError);
}
