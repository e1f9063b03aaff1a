#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "aoicast/order_stats.hpp"
#include "oracles.hpp"

using aoicast::ServiceDistribution;
using doctest::Approx;

TEST_CASE("harmonic numbers") {
    CHECK(aoicast::harmonic(0) == 0.0);
    CHECK(aoicast::harmonic(2) == 1.5);
    // 7381/2520 by direct summation
    CHECK(aoicast::harmonic(10) == Approx(2.9289682540).epsilon(1e-10));
    CHECK(aoicast::harmonic(10) == Approx(oracle::direct_harmonic(10)).epsilon(1e-14));

    CHECK(aoicast::harmonic2(0) == 0.0);
    CHECK(aoicast::harmonic2(1) == 1.0);
    CHECK(aoicast::harmonic2(2) == 1.25);
    // 5269/3600
    CHECK(aoicast::harmonic2(5) == Approx(1.4636111111).epsilon(1e-10));
    CHECK(aoicast::harmonic2(5) == Approx(oracle::direct_harmonic(5, 2)).epsilon(1e-14));
}

TEST_CASE("harmonic cache range and increments") {
    const aoicast::HarmonicCache cache(64);
    CHECK(cache.capacity() == 64);
    CHECK_NOTHROW(cache.harmonic(64));
    CHECK_THROWS_AS(cache.harmonic(65), std::out_of_range);
    CHECK_THROWS_AS(cache.harmonic2(65), std::out_of_range);
    CHECK_THROWS_AS(aoicast::harmonic(aoicast::kDefaultHarmonicCapacity + 1), std::out_of_range);

    for (std::size_t n = 1; n <= 64; ++n) {
        CHECK(cache.harmonic(n) - cache.harmonic(n - 1) == Approx(1.0 / n).epsilon(1e-12));
    }

    const double limit = std::numbers::pi * std::numbers::pi / 6.0;
    for (std::size_t n : {1u, 10u, 1000u, 100000u}) {
        CHECK(aoicast::harmonic2(n) < limit);
        CHECK(limit - aoicast::harmonic2(n) < 1.0 / n);
    }
}

TEST_CASE("distribution construction") {
    CHECK_THROWS_AS(ServiceDistribution::exponential(0.0), std::domain_error);
    CHECK_THROWS_AS(ServiceDistribution::exponential(-1.0), std::domain_error);
    CHECK_THROWS_AS(ServiceDistribution::shifted_exponential(1.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(ServiceDistribution::shifted_exponential(std::nan(""), 0.0), std::domain_error);

    const auto e = ServiceDistribution::exponential(2.0);
    CHECK(e.kind() == aoicast::DistributionKind::Exponential);
    CHECK(e.shift() == 0.0);
    CHECK(e.mean() == 0.5);

    const auto s = ServiceDistribution::shifted_exponential(2.0, 1.0);
    CHECK(s.mean() == 1.5);
    CHECK(s.cdf(0.99) == 0.0);
    CHECK(s.cdf(1.0) == 0.0);
    CHECK(s.cdf(1.5) == Approx(1.0 - std::exp(-1.0)));
}

TEST_CASE("order statistic moments") {
    const auto unit = ServiceDistribution::exponential(1.0);
    const auto shifted = ServiceDistribution::shifted_exponential(1.0, 1.0);
    const auto fast = ServiceDistribution::exponential(2.0);

    CHECK(aoicast::order_stat_mean(unit, 1, 1) == 1.0);
    CHECK(aoicast::order_stat_mean(shifted, 2, 2) == 2.5);
    CHECK(aoicast::order_stat_mean(fast, 1, 2) == 0.25);

    CHECK(aoicast::order_stat_var(unit, 1, 1) == 1.0);
    CHECK(aoicast::order_stat_var(shifted, 2, 2) == 1.25);
    CHECK(aoicast::order_stat_var(fast, 2, 2) == 0.3125);

    const auto m = shifted.order_stat_moments(3, 7);
    CHECK(m.k == 3);
    CHECK(m.n == 7);
    CHECK(m.mean == aoicast::order_stat_mean(shifted, 3, 7));
    CHECK(m.variance == aoicast::order_stat_var(unit, 3, 7));

    CHECK_THROWS_AS(aoicast::order_stat_mean(unit, 0, 3), std::domain_error);
    CHECK_THROWS_AS(aoicast::order_stat_mean(unit, 4, 3), std::domain_error);
    CHECK_THROWS_AS(aoicast::order_stat_var(unit, 4, 3), std::domain_error);
}

TEST_CASE("order statistics: spec examples against a sorted-sample oracle") {
    struct Case {
        double rate, shift;
        std::size_t k, n;
    };
    for (const auto& c : {Case{1.0, 1.0, 2, 2}, Case{2.0, 0.0, 1, 2}, Case{2.0, 0.0, 2, 2}}) {
        CAPTURE(c.rate);
        CAPTURE(c.k);
        const auto d = ServiceDistribution::shifted_exponential(c.rate, c.shift);
        const auto mc = oracle::order_statistic(c.rate, c.shift, c.k, c.n, 1000000, 17);
        CHECK(std::abs(mc.mean - d.order_stat_mean(c.k, c.n)) < 4.0 * mc.mean_se);
        CHECK(std::abs(mc.variance - d.order_stat_var(c.k, c.n)) < 4.0 * mc.variance_se);
    }
}

TEST_CASE("order statistics: monotone in k and telescoping") {
    for (double rate : {0.5, 1.0, 3.0}) {
        for (double shift : {0.0, 1.5}) {
            const auto d = ServiceDistribution::shifted_exponential(rate, shift);
            for (std::size_t n = 1; n <= 200; ++n) {
                for (std::size_t k = 2; k <= n; ++k) {
                    REQUIRE(d.order_stat_mean(k, n) > d.order_stat_mean(k - 1, n));
                    REQUIRE(d.order_stat_var(k, n) >= d.order_stat_var(k - 1, n));
                }
                if (n >= 2) {
                    REQUIRE(std::abs(d.order_stat_mean(n, n) - d.order_stat_mean(n - 1, n) - 1.0 / rate) <
                            1e-12);
                }
            }
        }
    }
}

TEST_CASE("sampling") {
    const auto unit = ServiceDistribution::exponential(1.0);
    CHECK(unit.quantile_upper(1.0) == 0.0);
    const auto shifted = ServiceDistribution::shifted_exponential(1.0, 2.0);
    CHECK(shifted.quantile_upper(std::exp(-1.0)) == Approx(3.0).epsilon(1e-15));

    SUBCASE("uniform stays in (0, 1]") {
        struct Extreme {
            using result_type = std::uint64_t;
            std::uint64_t value;
            std::uint64_t operator()() const { return value; }
        };
        Extreme zero{0};
        Extreme ones{~std::uint64_t{0}};
        CHECK(ServiceDistribution::open_closed_uniform(zero) == 1.0);
        CHECK(ServiceDistribution::open_closed_uniform(ones) == 0x1.0p-53);
    }

    SUBCASE("law of large numbers") {
        const auto d = ServiceDistribution::shifted_exponential(2.0, 1.0);
        std::mt19937_64 rng(99);
        double sum = 0.0, min = INFINITY;
        const int n = 1000000;
        for (int i = 0; i < n; ++i) {
            const double x = aoicast::sample(d, rng);
            sum += x;
            min = std::min(min, x);
        }
        CHECK(min >= 1.0);
        // sigma = 1/rate
        CHECK(std::abs(sum / n - 1.5) < 3.0 * 0.5 / 1000.0);
    }

    SUBCASE("seeded streams reproduce") {
        std::mt19937_64 a(5), b(5);
        for (int i = 0; i < 100; ++i) REQUIRE(unit.sample(a) == unit.sample(b));
    }
}

TEST_CASE("order statistics: 20 random configurations") {
    std::mt19937_64 pick(2024);
    std::uniform_int_distribution<std::size_t> pick_n(1, 15);
    std::uniform_real_distribution<double> pick_rate(0.3, 4.0);
    std::uniform_real_distribution<double> pick_shift(0.0, 3.0);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = pick_n(pick);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n)(pick);
        const double rate = pick_rate(pick);
        const double shift = pick_shift(pick);
        CAPTURE(n);
        CAPTURE(k);
        const auto d = ServiceDistribution::shifted_exponential(rate, shift);
        const auto mc = oracle::order_statistic(rate, shift, k, n, 200000, 1000 + t);
        CHECK(std::abs(mc.mean - d.order_stat_mean(k, n)) < 4.0 * mc.mean_se);
        CHECK(std::abs(mc.variance - d.order_stat_var(k, n)) < 4.0 * mc.variance_se);
    }
}
