#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "aoicast/order_stats.hpp"

namespace aoicast {

using Engine = std::mt19937_64;

/// Raised when a ledger is too short for an estimator.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimConfig {
    ServiceDistribution dist = ServiceDistribution::exponential(1.0);
    std::size_t k = 1;
    std::size_t num_intervals = 100000;
    std::uint64_t seed = 1;
    std::size_t replications = 8;
};

/// Throws std::invalid_argument for k < 1, num_intervals < 2 or
/// replications < 1.
void validate(const SimConfig& config);

/// Seed of replication r: a SplitMix64 hash of (master, r).
std::uint64_t replication_seed(std::uint64_t master, std::size_t replication);

/// One service interval seen by priority node 1 and the non-priority node.
struct IntervalRecord {
    double y = 0.0;              // max of the k priority service times
    double x_priority = 0.0;     // node 1's service time
    double x_nonpriority = 0.0;  // representative non-priority node
    bool delivered = false;      // x_nonpriority < y
};

/// Draws are the k priority service times followed by the non-priority one.
IntervalRecord evaluate_interval(std::span<const double> draws);

/// Draws k+1 i.i.d. service times in the order expected by
/// evaluate_interval() without materialising them.
template <class Rng>
IntervalRecord run_interval(const ServiceDistribution& dist, std::size_t k, Rng& rng) {
    IntervalRecord rec;
    for (std::size_t i = 0; i < k; ++i) {
        const double x = dist.sample(rng);
        if (i == 0) rec.x_priority = x;
        if (x > rec.y) rec.y = x;
    }
    rec.x_nonpriority = dist.sample(rng);
    rec.delivered = rec.x_nonpriority < rec.y;
    return rec;
}

/// Inter-delivery cycle of the non-priority node. A cycle opens with an
/// interval that delivered, runs through the following misses, and is closed
/// by the next delivery; `w` spans the generation times of the two delivered
/// updates and `xtilde` is the closing update's service time.
struct CycleRecord {
    std::size_t m = 0;
    double w = 0.0;
    double xtilde = 0.0;
    double y_opening = 0.0;  // length of the delivered interval opening the cycle
};

struct CycleLedger {
    std::vector<IntervalRecord> intervals;
    std::vector<CycleRecord> cycles;
    std::size_t first_delivery = 0;  // index of the first delivered interval
    std::size_t trailing_m = 0;      // intervals in the unfinished last cycle
};

/// Renewal-reward estimator for priority node 1. Interval j contributes area
/// Y_{j-1} X_{1j} + Y_j^2/2 over time Y_j; the first interval is skipped.
class PriorityAccumulator {
public:
    void push(const IntervalRecord& rec);
    /// Throws InsufficientDataError before two intervals have been pushed.
    double estimate() const;
    std::size_t intervals_used() const noexcept { return used_; }

private:
    bool has_previous_ = false;
    double previous_y_ = 0.0;
    double area_ = 0.0;
    double time_ = 0.0;
    std::size_t used_ = 0;
};

/// Renewal-reward estimator for the non-priority node. Cycle l contributes
/// area W_l^2/2 + X~_l W_l over time W_l; intervals before the first delivery
/// and the unfinished trailing cycle are excluded.
class NonPriorityAccumulator {
public:
    /// Returns the cycle closed by this interval, if any.
    const CycleRecord* push(const IntervalRecord& rec);
    /// Throws InsufficientDataError before two deliveries have been seen.
    double estimate() const;

    std::size_t cycles() const noexcept { return cycles_; }
    std::size_t trailing_m() const noexcept { return started_ ? open_.m : 0; }
    bool started() const noexcept { return started_; }

private:
    bool started_ = false;
    CycleRecord open_;
    CycleRecord closed_;
    double area_ = 0.0;
    double time_ = 0.0;
    std::size_t cycles_ = 0;
};

/// Simulates `num_intervals` intervals, keeping every interval and cycle.
CycleLedger record_ledger(const ServiceDistribution& dist, std::size_t k,
                          std::size_t num_intervals, Engine& rng);

/// Rebuilds cycles (and first_delivery / trailing_m) from ledger.intervals.
CycleLedger ledger_from_intervals(std::vector<IntervalRecord> intervals);

double accumulate_priority(const CycleLedger& ledger);
double accumulate_nonpriority(const CycleLedger& ledger);

/// CSV with header `j,Y_j,X_1j,X_nonp_j,delivered`; j starts at 1 and
/// delivered is 0 or 1.
void write_interval_ledger(std::ostream& out, const CycleLedger& ledger);

/// Across-replication mean and its standard error (NaN when R = 1).
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct SimResult {
    Estimate age_priority_hat;
    Estimate age_nonpriority_hat;
    Estimate y_mean_hat;
    Estimate y_failure_mean_hat;
    Estimate y_success_mean_hat;
    Estimate w_mean_hat;
    Estimate w2_mean_hat;
    Estimate xtilde_mean_hat;
    Estimate m_mean_hat;
    Estimate q_hat;
    /// Pooled correlation of M_l with the opening interval length; the
    /// std_error slot holds 1/sqrt(#cycles).
    Estimate m_y_correlation;
    std::size_t intervals_used = 0;
    std::size_t cycles_used = 0;
    std::size_t replications = 0;
};

/// Raw sums from one replication; merged in replication order.
struct ReplicationStats {
    double age_priority = 0.0;
    double age_nonpriority = 0.0;
    std::size_t intervals = 0;
    std::size_t priority_intervals = 0;
    std::size_t failures = 0;
    double y_sum = 0.0;
    double y_failure_sum = 0.0;
    double y_success_sum = 0.0;
    std::size_t cycles = 0;
    double m_sum = 0.0;
    double m2_sum = 0.0;
    double w_sum = 0.0;
    double w2_sum = 0.0;
    double xtilde_sum = 0.0;
    double y_open_sum = 0.0;
    double y_open2_sum = 0.0;
    double m_y_open_sum = 0.0;
};

ReplicationStats run_replication(const SimConfig& config, std::size_t replication);

/// Runs config.replications independent replications (concurrently when
/// hardware allows) and reduces them in index order, so the result depends
/// only on the config.
SimResult run_simulation(const SimConfig& config);

/// Direct integral of the age process t - u(t) for node 1 and the
/// non-priority node, starting at t = 0 with age 0. Fed with the raw draws of
/// each interval (k priority service times, then the non-priority one).
class SawtoothAges {
public:
    void push(std::span<const double> draws);

    double elapsed() const noexcept { return now_; }
    /// Time averages over [0, elapsed()]; NaN before the first interval.
    double priority_age() const;
    double nonpriority_age() const;

private:
    struct Node {
        double stamp = 0.0;  // generation time of the freshest update held
        double last = 0.0;   // integrated up to here
        double area = 0.0;
        void deliver(double at, double generated);
        double average(double horizon) const;
    };

    Node priority_;
    Node other_;
    double now_ = 0.0;
};

struct CrossCheckResult {
    Estimate age_priority;
    Estimate age_nonpriority;
};

/// Integrates t - u(t) event by event over [0, T_J] for node 1 and the
/// non-priority node, starting from age 0, using the same per-replication
/// streams as run_simulation().
CrossCheckResult sample_path_cross_check(const SimConfig& config);

/// Allowed gap between a polygon estimate and its sawtooth counterpart:
/// 2 * combined standard error plus a transient allowance of order 1/J.
double cross_check_tolerance(const Estimate& polygon, const Estimate& sawtooth,
                             const SimConfig& config);

}  // namespace aoicast
