#include "aoicast/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include <fmt/format.h>

namespace aoicast {

void validate(const SimConfig& config) {
    if (config.k < 1) throw std::invalid_argument("k must be >= 1");
    if (config.num_intervals < 2) throw std::invalid_argument("num_intervals must be >= 2");
    if (config.replications < 1) throw std::invalid_argument("replications must be >= 1");
}

std::uint64_t replication_seed(std::uint64_t master, std::size_t replication) {
    // SplitMix64 finaliser applied to master + golden * (r + 1).
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(replication) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

IntervalRecord evaluate_interval(std::span<const double> draws) {
    if (draws.size() < 2) {
        throw std::invalid_argument("an interval needs k >= 1 priority draws plus one non-priority draw");
    }
    const auto priority = draws.first(draws.size() - 1);
    IntervalRecord rec;
    rec.x_priority = priority.front();
    rec.y = *std::max_element(priority.begin(), priority.end());
    rec.x_nonpriority = draws.back();
    rec.delivered = rec.x_nonpriority < rec.y;
    return rec;
}

void PriorityAccumulator::push(const IntervalRecord& rec) {
    if (has_previous_) {
        area_ += previous_y_ * rec.x_priority + 0.5 * rec.y * rec.y;
        time_ += rec.y;
        ++used_;
    }
    has_previous_ = true;
    previous_y_ = rec.y;
}

double PriorityAccumulator::estimate() const {
    if (used_ == 0) throw InsufficientDataError("priority estimator needs at least 2 intervals");
    return area_ / time_;
}

const CycleRecord* NonPriorityAccumulator::push(const IntervalRecord& rec) {
    const CycleRecord* closed = nullptr;
    if (started_) {
        if (!rec.delivered) {
            ++open_.m;
            open_.w += rec.y;
            return nullptr;
        }
        closed_ = open_;
        closed_.xtilde = rec.x_nonpriority;
        area_ += 0.5 * closed_.w * closed_.w + closed_.xtilde * closed_.w;
        time_ += closed_.w;
        ++cycles_;
        closed = &closed_;
    } else if (!rec.delivered) {
        return nullptr;
    }
    started_ = true;
    open_ = CycleRecord{1, rec.y, 0.0, rec.y};
    return closed;
}

double NonPriorityAccumulator::estimate() const {
    if (cycles_ == 0) {
        throw InsufficientDataError("non-priority estimator needs at least 2 successful deliveries");
    }
    return area_ / time_;
}

CycleLedger ledger_from_intervals(std::vector<IntervalRecord> intervals) {
    CycleLedger ledger;
    ledger.intervals = std::move(intervals);
    NonPriorityAccumulator acc;
    for (std::size_t j = 0; j < ledger.intervals.size(); ++j) {
        const bool was_started = acc.started();
        if (const auto* cycle = acc.push(ledger.intervals[j])) ledger.cycles.push_back(*cycle);
        if (!was_started && acc.started()) ledger.first_delivery = j;
    }
    if (!acc.started()) ledger.first_delivery = ledger.intervals.size();
    ledger.trailing_m = acc.trailing_m();
    return ledger;
}

CycleLedger record_ledger(const ServiceDistribution& dist, std::size_t k,
                          std::size_t num_intervals, Engine& rng) {
    std::vector<IntervalRecord> intervals;
    intervals.reserve(num_intervals);
    for (std::size_t j = 0; j < num_intervals; ++j) intervals.push_back(run_interval(dist, k, rng));
    return ledger_from_intervals(std::move(intervals));
}

double accumulate_priority(const CycleLedger& ledger) {
    PriorityAccumulator acc;
    for (const auto& rec : ledger.intervals) acc.push(rec);
    return acc.estimate();
}

double accumulate_nonpriority(const CycleLedger& ledger) {
    NonPriorityAccumulator acc;
    for (const auto& rec : ledger.intervals) acc.push(rec);
    return acc.estimate();
}

void write_interval_ledger(std::ostream& out, const CycleLedger& ledger) {
    out << "j,Y_j,X_1j,X_nonp_j,delivered\n";
    std::size_t j = 1;
    for (const auto& rec : ledger.intervals) {
        out << fmt::format("{},{:.17g},{:.17g},{:.17g},{}\n", j++, rec.y, rec.x_priority,
                           rec.x_nonpriority, rec.delivered ? 1 : 0);
    }
}

ReplicationStats run_replication(const SimConfig& config, std::size_t replication) {
    validate(config);
    Engine rng(replication_seed(config.seed, replication));
    PriorityAccumulator priority;
    NonPriorityAccumulator nonpriority;
    ReplicationStats s;
    for (std::size_t j = 0; j < config.num_intervals; ++j) {
        const auto rec = run_interval(config.dist, config.k, rng);
        priority.push(rec);
        s.y_sum += rec.y;
        if (rec.delivered) {
            s.y_success_sum += rec.y;
        } else {
            ++s.failures;
            s.y_failure_sum += rec.y;
        }
        if (const auto* c = nonpriority.push(rec)) {
            const double m = static_cast<double>(c->m);
            s.m_sum += m;
            s.m2_sum += m * m;
            s.w_sum += c->w;
            s.w2_sum += c->w * c->w;
            s.xtilde_sum += c->xtilde;
            s.y_open_sum += c->y_opening;
            s.y_open2_sum += c->y_opening * c->y_opening;
            s.m_y_open_sum += m * c->y_opening;
        }
    }
    s.intervals = config.num_intervals;
    s.priority_intervals = priority.intervals_used();
    s.cycles = nonpriority.cycles();
    s.age_priority = priority.estimate();
    s.age_nonpriority = nonpriority.estimate();
    return s;
}

namespace {

class MeanAndError {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }

    Estimate estimate() const {
        if (n_ < 2) return {mean_, std::numeric_limits<double>::quiet_NaN()};
        const double n = static_cast<double>(n_);
        return {mean_, std::sqrt(m2_ / (n - 1.0) / n)};
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

template <class Fn>
std::vector<ReplicationStats> run_all(const SimConfig& config, Fn&& fn) {
    validate(config);
    const std::size_t r = config.replications;
    std::vector<ReplicationStats> out(r);
    const std::size_t workers =
        std::min<std::size_t>(r, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < r; ++i) out[i] = fn(config, i);
        return out;
    }
    std::vector<std::exception_ptr> errors(r);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < r; i += workers) {
                    try {
                        out[i] = fn(config, i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace

SimResult run_simulation(const SimConfig& config) {
    const auto reps = run_all(config, run_replication);

    MeanAndError age_p, age_e, y, yf, ys, w, w2, xt, m, q;
    double n = 0.0, sm = 0.0, sy = 0.0, smm = 0.0, syy = 0.0, smy = 0.0;
    SimResult result;
    for (const auto& s : reps) {
        const double cycles = static_cast<double>(s.cycles);
        const double intervals = static_cast<double>(s.intervals);
        const double failures = static_cast<double>(s.failures);
        age_p.add(s.age_priority);
        age_e.add(s.age_nonpriority);
        y.add(s.y_sum / intervals);
        yf.add(s.failures > 0 ? s.y_failure_sum / failures : 0.0);
        ys.add(s.failures < s.intervals ? s.y_success_sum / (intervals - failures) : 0.0);
        q.add(failures / intervals);
        w.add(s.w_sum / cycles);
        w2.add(s.w2_sum / cycles);
        xt.add(s.xtilde_sum / cycles);
        m.add(s.m_sum / cycles);

        n += cycles;
        sm += s.m_sum;
        sy += s.y_open_sum;
        smm += s.m2_sum;
        syy += s.y_open2_sum;
        smy += s.m_y_open_sum;
        result.intervals_used += s.priority_intervals;
        result.cycles_used += s.cycles;
    }
    result.age_priority_hat = age_p.estimate();
    result.age_nonpriority_hat = age_e.estimate();
    result.y_mean_hat = y.estimate();
    result.y_failure_mean_hat = yf.estimate();
    result.y_success_mean_hat = ys.estimate();
    result.w_mean_hat = w.estimate();
    result.w2_mean_hat = w2.estimate();
    result.xtilde_mean_hat = xt.estimate();
    result.m_mean_hat = m.estimate();
    result.q_hat = q.estimate();

    const double cov = smy / n - (sm / n) * (sy / n);
    const double var_m = smm / n - (sm / n) * (sm / n);
    const double var_y = syy / n - (sy / n) * (sy / n);
    const double denom = std::sqrt(var_m * var_y);
    result.m_y_correlation = {denom > 0.0 ? cov / denom : 0.0, 1.0 / std::sqrt(n)};
    result.replications = reps.size();
    return result;
}

namespace {

// Area under t - u between times `from` and `to` while the freshest update
// carries timestamp u.
double sawtooth_area(double from, double to, double u) {
    const double a = from - u;
    const double b = to - u;
    return 0.5 * (b * b - a * a);
}

}  // namespace

void SawtoothAges::Node::deliver(double at, double generated) {
    area += sawtooth_area(last, at, stamp);
    last = at;
    stamp = generated;
}

double SawtoothAges::Node::average(double horizon) const {
    return (area + sawtooth_area(last, horizon, stamp)) / horizon;
}

void SawtoothAges::push(std::span<const double> draws) {
    if (draws.size() < 2) {
        throw std::invalid_argument("an interval needs k >= 1 priority draws plus one non-priority draw");
    }
    const double start = now_;
    const double longest = *std::max_element(draws.begin(), draws.end() - 1);
    const double other = draws.back();
    // Each node receives at most one update per interval.
    priority_.deliver(start + draws.front(), start);
    if (other < longest) other_.deliver(start + other, start);
    now_ = start + longest;
}

double SawtoothAges::priority_age() const {
    return now_ > 0.0 ? priority_.average(now_) : std::numeric_limits<double>::quiet_NaN();
}

double SawtoothAges::nonpriority_age() const {
    return now_ > 0.0 ? other_.average(now_) : std::numeric_limits<double>::quiet_NaN();
}

CrossCheckResult sample_path_cross_check(const SimConfig& config) {
    validate(config);
    MeanAndError priority_est, nonpriority_est;
    std::vector<double> draws(config.k + 1);
    for (std::size_t r = 0; r < config.replications; ++r) {
        Engine rng(replication_seed(config.seed, r));
        SawtoothAges path;
        for (std::size_t j = 0; j < config.num_intervals; ++j) {
            for (auto& x : draws) x = config.dist.sample(rng);
            path.push(draws);
        }
        priority_est.add(path.priority_age());
        nonpriority_est.add(path.nonpriority_age());
    }
    return {priority_est.estimate(), nonpriority_est.estimate()};
}

double cross_check_tolerance(const Estimate& polygon, const Estimate& sawtooth,
                             const SimConfig& config) {
    const double combined = std::hypot(polygon.std_error, sawtooth.std_error);
    const double scale = config.dist.order_stat_mean(config.k + 1, config.k + 1) + config.dist.mean();
    const double transient = 10.0 * scale / static_cast<double>(config.num_intervals);
    return 2.0 * (std::isfinite(combined) ? combined : 0.0) + transient;
}

}  // namespace aoicast
