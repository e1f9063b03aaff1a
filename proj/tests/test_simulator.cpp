#include <cmath>
#include <cstring>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "aoicast/analysis.hpp"
#include "aoicast/simulator.hpp"

using aoicast::IntervalRecord;
using aoicast::ServiceDistribution;
using aoicast::SimConfig;
using doctest::Approx;

namespace {

std::vector<IntervalRecord> constant_intervals(std::size_t count, double x, double x_other) {
    std::vector<double> draws{x, x_other};
    return std::vector<IntervalRecord>(count, aoicast::evaluate_interval(draws));
}

bool same_estimate(const aoicast::Estimate& a, const aoicast::Estimate& b) {
    return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

TEST_CASE("config validation") {
    SimConfig c;
    CHECK_NOTHROW(aoicast::validate(c));
    c.k = 0;
    CHECK_THROWS_AS(aoicast::validate(c), std::invalid_argument);
    c.k = 1;
    c.num_intervals = 1;
    CHECK_THROWS_AS(aoicast::validate(c), std::invalid_argument);
    c.num_intervals = 2;
    c.replications = 0;
    CHECK_THROWS_AS(aoicast::run_simulation(c), std::invalid_argument);
}

TEST_CASE("replication seeds") {
    CHECK(aoicast::replication_seed(1, 0) == aoicast::replication_seed(1, 0));
    CHECK(aoicast::replication_seed(1, 0) != aoicast::replication_seed(1, 1));
    CHECK(aoicast::replication_seed(1, 0) != aoicast::replication_seed(2, 0));
}

TEST_CASE("single interval") {
    const std::vector<double> one{2.0, 1.0};
    const auto a = aoicast::evaluate_interval(one);
    CHECK(a.y == 2.0);
    CHECK(a.x_priority == 2.0);
    CHECK(a.delivered);

    const std::vector<double> two{1.0, 3.0, 5.0};
    const auto b = aoicast::evaluate_interval(two);
    CHECK(b.y == 3.0);
    CHECK(b.x_priority == 1.0);
    CHECK(b.x_nonpriority == 5.0);
    CHECK_FALSE(b.delivered);

    CHECK_THROWS_AS(aoicast::evaluate_interval(std::vector<double>{1.0}), std::invalid_argument);

    SUBCASE("run_interval consumes draws in evaluate_interval order") {
        const auto d = ServiceDistribution::shifted_exponential(1.5, 0.2);
        aoicast::Engine a_rng(11), b_rng(11);
        for (int t = 0; t < 1000; ++t) {
            const auto rec = aoicast::run_interval(d, 4, a_rng);
            std::vector<double> draws(5);
            for (auto& x : draws) x = d.sample(b_rng);
            const auto ref = aoicast::evaluate_interval(draws);
            REQUIRE(rec.y == ref.y);
            REQUIRE(rec.x_priority == ref.x_priority);
            REQUIRE(rec.x_nonpriority == ref.x_nonpriority);
            REQUIRE(rec.delivered == ref.delivered);
        }
    }

    SUBCASE("delivery probability k/(k+1)") {
        const auto d = ServiceDistribution::exponential(1.0);
        aoicast::Engine rng(4);
        int delivered = 0;
        for (int t = 0; t < 1000000; ++t) delivered += aoicast::run_interval(d, 4, rng).delivered;
        CHECK(std::abs(delivered / 1e6 - 0.8) < 0.002);
    }
}

TEST_CASE("priority estimator") {
    aoicast::PriorityAccumulator acc;
    CHECK_THROWS_AS(acc.estimate(), aoicast::InsufficientDataError);
    acc.push(constant_intervals(1, 1.0, 2.0).front());
    CHECK_THROWS_AS(acc.estimate(), aoicast::InsufficientDataError);

    const auto ledger = aoicast::ledger_from_intervals(constant_intervals(50, 1.0, 2.0));
    CHECK(aoicast::accumulate_priority(ledger) == 1.5);

    const auto d = ServiceDistribution::exponential(1.0);
    aoicast::Engine rng(1);
    CHECK(std::abs(aoicast::accumulate_priority(aoicast::record_ledger(d, 1, 1000000, rng)) - 2.0) < 0.01);

    const auto s = ServiceDistribution::shifted_exponential(1.0, 1.0);
    const auto big = aoicast::record_ledger(s, 5, 1000000, rng);
    CHECK(aoicast::accumulate_priority(big) == Approx(aoicast::age_priority(s, 5)).epsilon(0.01));
}

TEST_CASE("non-priority estimator") {
    SUBCASE("constant toy: every interval delivers") {
        const auto ledger = aoicast::ledger_from_intervals(constant_intervals(50, 1.0, 0.5));
        CHECK(ledger.cycles.size() == 49);
        for (const auto& c : ledger.cycles) {
            REQUIRE(c.m == 1);
            REQUIRE(c.w == 1.0);
            REQUIRE(c.xtilde == 0.5);
        }
        CHECK(aoicast::accumulate_nonpriority(ledger) == 1.0);
    }

    SUBCASE("hand-built ledger") {
        std::vector<IntervalRecord> xs{
            {2.0, 2.0, 3.0, false}, {1.0, 1.0, 0.5, true}, {3.0, 3.0, 4.0, false},
            {2.0, 2.0, 2.5, false}, {1.5, 1.5, 0.2, true}, {1.0, 1.0, 1.5, false},
        };
        const auto ledger = aoicast::ledger_from_intervals(xs);
        CHECK(ledger.first_delivery == 1);
        REQUIRE(ledger.cycles.size() == 1);
        CHECK(ledger.cycles[0].m == 3);
        CHECK(ledger.cycles[0].w == 6.0);
        CHECK(ledger.cycles[0].xtilde == 0.2);
        CHECK(ledger.cycles[0].y_opening == 1.0);
        CHECK(ledger.trailing_m == 2);
        // (6^2/2 + 0.2 * 6) / 6
        CHECK(aoicast::accumulate_nonpriority(ledger) == Approx(3.2));
    }

    SUBCASE("too few deliveries") {
        std::vector<IntervalRecord> xs{{2.0, 2.0, 3.0, false}, {1.0, 1.0, 0.5, true}, {3.0, 3.0, 4.0, false}};
        CHECK_THROWS_AS(aoicast::accumulate_nonpriority(aoicast::ledger_from_intervals(xs)),
                        aoicast::InsufficientDataError);
        CHECK_THROWS_AS(aoicast::accumulate_nonpriority(aoicast::ledger_from_intervals({})),
                        aoicast::InsufficientDataError);
    }

    SUBCASE("simulated") {
        aoicast::Engine rng(8);
        const auto e = aoicast::record_ledger(ServiceDistribution::exponential(1.0), 1, 1000000, rng);
        CHECK(std::abs(aoicast::accumulate_nonpriority(e) - 2.0) < 0.01);
        const auto s =
            aoicast::record_ledger(ServiceDistribution::shifted_exponential(1.0, 1.0), 1, 1000000, rng);
        CHECK(std::abs(aoicast::accumulate_nonpriority(s) - 4.25) < 0.04);
    }
}

TEST_CASE("cycle bookkeeping") {
    aoicast::Engine rng(77);
    for (std::size_t k : {1u, 3u}) {
        const auto ledger =
            aoicast::record_ledger(ServiceDistribution::shifted_exponential(1.0, 0.5), k, 20000, rng);
        std::size_t m_total = 0;
        double w_total = 0.0;
        for (const auto& c : ledger.cycles) {
            REQUIRE(c.m >= 1);
            m_total += c.m;
            w_total += c.w;
        }
        CHECK(m_total + ledger.trailing_m == ledger.intervals.size() - ledger.first_delivery);

        double total_time = 0.0;
        for (const auto& r : ledger.intervals) total_time += r.y;
        CHECK(w_total <= total_time);

        // Each W_l is the sum of the M_l interval lengths starting at its opening delivery.
        std::size_t j = ledger.first_delivery;
        for (const auto& c : ledger.cycles) {
            REQUIRE(ledger.intervals[j].delivered);
            REQUIRE(ledger.intervals[j].y == c.y_opening);
            double w = 0.0;
            for (std::size_t i = 0; i < c.m; ++i) w += ledger.intervals[j + i].y;
            REQUIRE(w == Approx(c.w).epsilon(1e-12));
            j += c.m;
            REQUIRE(ledger.intervals[j].delivered);
            REQUIRE(ledger.intervals[j].x_nonpriority == c.xtilde);
        }
    }
}

TEST_CASE("interval ledger CSV") {
    std::vector<IntervalRecord> xs{{2.0, 2.0, 3.0, false}, {1.0, 0.25, 0.5, true}};
    std::ostringstream out;
    aoicast::write_interval_ledger(out, aoicast::ledger_from_intervals(xs));
    CHECK(out.str() == "j,Y_j,X_1j,X_nonp_j,delivered\n1,2,2,3,0\n2,1,0.25,0.5,1\n");
}

TEST_CASE("run_simulation") {
    SimConfig c{ServiceDistribution::exponential(1.0), 2, 500000, 42, 2};

    SUBCASE("moments of the cycle") {
        const auto r = aoicast::run_simulation(c);
        CHECK(r.replications == 2);
        CHECK(r.intervals_used == 2 * (c.num_intervals - 1));
        CHECK(std::abs(r.m_mean_hat.value - 1.5) < 0.005);
        CHECK(std::abs(r.w_mean_hat.value - 2.25) < 0.01);
        CHECK(r.q_hat.value >= 0.0);
        CHECK(r.q_hat.value <= 1.0);
        CHECK(r.age_priority_hat.value > 0.0);
        CHECK(r.age_nonpriority_hat.value > 0.0);
        CHECK(r.w_mean_hat.value == Approx(r.m_mean_hat.value * r.y_mean_hat.value).epsilon(0.01));
    }

    SUBCASE("identical seeds give bit-identical results") {
        c.num_intervals = 20000;
        c.replications = 4;
        const auto a = aoicast::run_simulation(c);
        const auto b = aoicast::run_simulation(c);
        for (auto member : {&aoicast::SimResult::age_priority_hat, &aoicast::SimResult::age_nonpriority_hat,
                            &aoicast::SimResult::w2_mean_hat, &aoicast::SimResult::q_hat,
                            &aoicast::SimResult::m_y_correlation}) {
            REQUIRE(same_estimate(a.*member, b.*member));
        }
        CHECK(a.cycles_used == b.cycles_used);

        c.seed = 43;
        CHECK(aoicast::run_simulation(c).age_priority_hat.value != a.age_priority_hat.value);
    }

    SUBCASE("single replication has no standard error") {
        c.num_intervals = 1000;
        c.replications = 1;
        CHECK(std::isnan(aoicast::run_simulation(c).age_priority_hat.std_error));
    }
}

TEST_CASE("sawtooth integration") {
    SUBCASE("constant toy") {
        aoicast::SawtoothAges path;
        CHECK(std::isnan(path.priority_age()));
        const std::vector<double> draws{1.0, 0.5};
        const int n = 1000000;
        for (int j = 0; j < n; ++j) path.push(draws);
        CHECK(path.elapsed() == n);
        // First interval carries area 0.5 instead of 1.5.
        CHECK(path.priority_age() == Approx(1.5 - 1.0 / n).epsilon(1e-12));
        CHECK(path.nonpriority_age() == Approx(1.0).epsilon(1e-5));
    }

    SUBCASE("agrees with the polygon estimators") {
        struct Case {
            double shift;
            std::size_t k;
            std::uint64_t seed;
        };
        for (const auto& t : {Case{0.0, 1, 5}, Case{1.0, 3, 6}}) {
            const SimConfig c{ServiceDistribution::shifted_exponential(1.0, t.shift), t.k, 100000, t.seed, 4};
            const auto poly = aoicast::run_simulation(c);
            const auto saw = aoicast::sample_path_cross_check(c);
            CHECK(std::abs(poly.age_priority_hat.value - saw.age_priority.value) <=
                  aoicast::cross_check_tolerance(poly.age_priority_hat, saw.age_priority, c));
            CHECK(std::abs(poly.age_nonpriority_hat.value - saw.age_nonpriority.value) <=
                  aoicast::cross_check_tolerance(poly.age_nonpriority_hat, saw.age_nonpriority, c));
            if (t.k == 1 && t.shift == 0.0) {
                CHECK(std::abs(poly.age_priority_hat.value - saw.age_priority.value) < 0.05);
            }
        }
    }
}
