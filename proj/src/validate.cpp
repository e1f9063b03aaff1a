#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "aoicast/analysis.hpp"
#include "aoicast/experiments.hpp"

namespace aoicast {

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

void print_validation(std::ostream& out, const ValidationReport& report) {
    std::size_t width = 0;
    for (const auto& c : report.checks) width = std::max(width, c.name.size());
    for (const auto& c : report.checks) {
        out << fmt::format("{:<6} {:<{}}  {}\n", c.passed ? "PASS" : "FAIL", c.name, width, c.detail);
    }
    const auto failed = std::count_if(report.checks.begin(), report.checks.end(),
                                      [](const auto& c) { return !c.passed; });
    out << fmt::format("{} checks, {} failed\n", report.checks.size(), failed);
}

namespace {

class Suite {
public:
    void add(std::string name, bool passed, std::string detail) {
        report_.checks.push_back({std::move(name), passed, std::move(detail)});
    }

    ValidationReport take() { return std::move(report_); }

private:
    ValidationReport report_;
};

// Largest |observed - expected| / std_error over a set of comparisons.
class SigmaTracker {
public:
    void compare(double observed, double expected, double std_error) {
        const double z = std::abs(observed - expected) / std_error;
        worst_ = std::isfinite(z) ? std::max(worst_, z) : INFINITY;
    }
    double worst() const { return worst_; }

private:
    double worst_ = 0.0;
};

void order_stat_checks(Suite& suite, const ValidationOptions& opt) {
    {
        double worst = 0.0;
        for (std::size_t n = 1; n <= 10000; ++n) {
            worst = std::max(worst, std::abs((harmonic(n) - harmonic(n - 1)) * static_cast<double>(n) - 1.0));
        }
        suite.add("harmonic increments", worst < 1e-9,
                  fmt::format("max |n (H_n - H_(n-1)) - 1| = {:.3g} over n <= 1e4", worst));
    }
    {
        bool ok = true;
        const double limit = std::numbers::pi * std::numbers::pi / 6.0;
        for (std::size_t n = 1; n <= 10000; ++n) {
            const double h2 = harmonic2(n);
            ok = ok && h2 < limit && limit - h2 < 1.0 / static_cast<double>(n);
        }
        suite.add("harmonic2 bounded by pi^2/6", ok, "0 < pi^2/6 - H_(n^2) < 1/n for n <= 1e4");
    }
    {
        bool ok = true;
        double telescoping = 0.0;
        for (double rate : {0.5, 1.0, 2.0}) {
            for (double shift : {0.0, 1.0, 2.0}) {
                const auto d = ServiceDistribution::shifted_exponential(rate, shift);
                for (std::size_t n = 1; n <= 200; ++n) {
                    for (std::size_t k = 2; k <= n; ++k) {
                        ok = ok && d.order_stat_mean(k, n) > d.order_stat_mean(k - 1, n) &&
                             d.order_stat_var(k, n) >= d.order_stat_var(k - 1, n);
                    }
                    if (n >= 2) {
                        telescoping = std::max(
                            telescoping,
                            std::abs(d.order_stat_mean(n, n) - d.order_stat_mean(n - 1, n) - 1.0 / rate));
                    }
                }
            }
        }
        suite.add("order-stat monotonicity", ok, "mean strictly increasing, variance non-decreasing in k");
        suite.add("order-stat telescoping", telescoping < 1e-12,
                  fmt::format("max |eps_(n:n) - eps_(n-1:n) - 1/lambda| = {:.3g}", telescoping));
    }
    {
        Engine rng(opt.seed);
        std::uniform_int_distribution<std::size_t> pick_n(1, 12);
        std::uniform_real_distribution<double> pick_rate(0.5, 3.0);
        std::uniform_real_distribution<double> pick_shift(0.0, 2.0);
        SigmaTracker sigma;
        const std::size_t draws = std::max<std::size_t>(opt.intervals, 1000);
        std::vector<double> buf;
        for (int t = 0; t < 5; ++t) {
            const std::size_t n = pick_n(rng);
            const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n)(rng);
            const auto d = ServiceDistribution::shifted_exponential(pick_rate(rng), pick_shift(rng));
            double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
            buf.resize(n);
            for (std::size_t i = 0; i < draws; ++i) {
                for (auto& x : buf) x = d.sample(rng);
                std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k - 1), buf.end());
                const double x = buf[k - 1] - d.order_stat_mean(k, n);
                s1 += x;
                s2 += x * x;
                s3 += x * x * x;
                s4 += x * x * x * x;
            }
            const double m = static_cast<double>(draws);
            const double mean = s1 / m;
            const double var = s2 / m - mean * mean;
            const double m4 = s4 / m - 4 * mean * s3 / m + 6 * mean * mean * s2 / m - 3 * std::pow(mean, 4);
            sigma.compare(mean, 0.0, std::sqrt(var / m));
            sigma.compare(var, d.order_stat_var(k, n), std::sqrt(std::max(m4 - var * var, 0.0) / m));
        }
        suite.add("order-stat Monte-Carlo", sigma.worst() < opt.sigmas,
                  fmt::format("worst deviation {:.2f} SE (limit {})", sigma.worst(), opt.sigmas));
    }
}

void analysis_checks(Suite& suite, const ValidationOptions& opt) {
    {
        double worst = 0.0;
        for (double rate : {0.5, 1.0, 2.0, 5.0}) {
            const auto d = ServiceDistribution::exponential(rate);
            for (std::size_t k = 1; k <= 200; ++k) {
                const double p = age_priority(d, k);
                const double e = age_nonpriority(d, k).value;
                const double closed = age_exponential(rate, k);
                worst = std::max({worst, std::abs(p - e), std::abs(p - closed), std::abs(e - closed)});
            }
        }
        suite.add("exponential ages coincide", worst < 1e-10,
                  fmt::format("max |Delta_P - Delta_E| = {:.3g} (k <= 200)", worst));
    }
    {
        bool dominated = true;
        bool tighter = true;
        double form_gap = 0.0;
        for (double rate : {0.5, 1.0, 2.0}) {
            for (double shift : {0.0, 1.0, 2.0}) {
                const auto d = ServiceDistribution::shifted_exponential(rate, shift);
                for (std::size_t k = 1; k <= 1000; ++k) {
                    const double closed = age_priority_shifted_exp(rate, shift, k);
                    dominated = dominated && closed >= age_priority_lower_bound(rate, shift, k);
                    form_gap = std::max(form_gap, std::abs(closed - age_priority(d, k)) / closed);
                }
                const auto gap = [&](std::size_t k) {
                    return age_priority_shifted_exp(rate, shift, k) - age_priority_lower_bound(rate, shift, k);
                };
                tighter = tighter && gap(1000) < gap(10);
            }
        }
        suite.add("priority lower bound holds", dominated, "k in [1, 1000], lambda x c grid");
        suite.add("priority lower bound tightens", tighter, "gap(k=1000) < gap(k=10)");
        suite.add("priority closed forms agree", form_gap < 1e-12,
                  fmt::format("max relative difference {:.3g}", form_gap));
    }
    {
        Engine rng(opt.seed + 1);
        std::uniform_real_distribution<double> pick_rate(0.2, 5.0);
        std::uniform_real_distribution<double> pick_shift(0.0, 3.0);
        std::uniform_int_distribution<std::size_t> pick_k(1, 100);
        double worst_path = 0.0, worst_split = 0.0;
        for (int t = 0; t < 50; ++t) {
            const auto d = ServiceDistribution::shifted_exponential(pick_rate(rng), pick_shift(rng));
            const std::size_t k = pick_k(rng);
            const auto split = age_nonpriority(d, k);
            worst_path = std::max(worst_path, std::abs(split.value - age_nonpriority_renewal(d, k)));
            const auto cycle = interval_moments(d, k);
            worst_split = std::max(worst_split, std::abs(cycle.y_mean - d.order_stat_mean(k, k)));
        }
        suite.add("non-priority formula paths agree", worst_path < 1e-10,
                  fmt::format("max |delta sum - renewal form| = {:.3g}", worst_path));
        suite.add("conditional interval split", worst_split < 1e-10,
                  fmt::format("max |q E[Y_F] + (1-q) E[Y_S] - eps_(k:k)| = {:.3g}", worst_split));
    }
    {
        double worst = 0.0;
        double sum = 0.0;
        for (std::size_t k = 1; k <= 10000; ++k) {
            sum += harmonic(k);
            const double rhs = (static_cast<double>(k) + 1.0) * (harmonic(k + 1) - 1.0);
            worst = std::max(worst, std::abs(sum - rhs) / rhs);
        }
        suite.add("harmonic series identity", worst < 1e-11,
                  fmt::format("max relative error {:.3g} (k <= 1e4)", worst));
    }
}

void simulation_checks(Suite& suite, const ValidationOptions& opt) {
    const SimConfig base{ServiceDistribution::exponential(1.0), 1, opt.intervals, opt.seed, opt.replications};

    {
        SigmaTracker sigma;
        for (std::size_t k : {1, 2, 5, 10}) {
            SimConfig c = base;
            c.k = k;
            const auto r = run_simulation(c);
            sigma.compare(r.q_hat.value, failure_prob(k), r.q_hat.std_error);
        }
        suite.add("failure probability 1/(k+1)", sigma.worst() < opt.sigmas,
                  fmt::format("worst deviation {:.2f} SE", sigma.worst()));
    }

    SigmaTracker conditional, w_check, geometric, xtilde;
    double worst_corr = 0.0;
    double worst_rel = 0.0;
    double worst_cross = 0.0;
    bool deterministic = true;
    for (const auto& dist : {ServiceDistribution::exponential(1.0),
                             ServiceDistribution::shifted_exponential(1.0, 1.0)}) {
        for (std::size_t k : {1, 2, 5}) {
            SimConfig c = base;
            c.dist = dist;
            c.k = k;
            const auto r = run_simulation(c);
            const auto th = interval_moments(dist, k);
            conditional.compare(r.y_failure_mean_hat.value, th.y_failure_mean, r.y_failure_mean_hat.std_error);
            conditional.compare(r.y_success_mean_hat.value, th.y_success_mean, r.y_success_mean_hat.std_error);
            w_check.compare(r.w_mean_hat.value, th.w_mean, r.w_mean_hat.std_error);
            w_check.compare(r.w2_mean_hat.value, th.w_second_moment, r.w2_mean_hat.std_error);
            geometric.compare(r.m_mean_hat.value, th.m_mean, r.m_mean_hat.std_error);
            xtilde.compare(r.xtilde_mean_hat.value, th.xtilde_mean, r.xtilde_mean_hat.std_error);
            worst_corr = std::max(worst_corr, std::abs(r.m_y_correlation.value) / r.m_y_correlation.std_error);
            worst_rel = std::max(
                {worst_rel,
                 std::abs(r.age_priority_hat.value - age_priority(dist, k)) / age_priority(dist, k),
                 std::abs(r.age_nonpriority_hat.value - age_nonpriority(dist, k).value) /
                     age_nonpriority(dist, k).value});

            SimConfig small = c;
            small.num_intervals = std::min<std::size_t>(c.num_intervals, 100000);
            const auto polygon = small.num_intervals == c.num_intervals ? r : run_simulation(small);
            const auto saw = sample_path_cross_check(small);
            worst_cross = std::max(
                {worst_cross,
                 std::abs(polygon.age_priority_hat.value - saw.age_priority.value) /
                     cross_check_tolerance(polygon.age_priority_hat, saw.age_priority, small),
                 std::abs(polygon.age_nonpriority_hat.value - saw.age_nonpriority.value) /
                     cross_check_tolerance(polygon.age_nonpriority_hat, saw.age_nonpriority, small)});

            if (k == 2) {
                SimConfig tiny = c;
                tiny.num_intervals = 2000;
                const auto a = run_simulation(tiny);
                const auto b = run_simulation(tiny);
                deterministic = deterministic && a.age_priority_hat.value == b.age_priority_hat.value &&
                                a.age_nonpriority_hat.value == b.age_nonpriority_hat.value &&
                                a.w2_mean_hat.value == b.w2_mean_hat.value;
            }
        }
    }
    suite.add("conditional interval law", conditional.worst() < opt.sigmas,
              fmt::format("worst deviation {:.2f} SE", conditional.worst()));
    suite.add("inter-delivery moments E[W], E[W^2]", w_check.worst() < opt.sigmas,
              fmt::format("worst deviation {:.2f} SE", w_check.worst()));
    suite.add("geometric inter-delivery count", geometric.worst() < opt.sigmas,
              fmt::format("worst deviation {:.2f} SE", geometric.worst()));
    suite.add("delivered service time mean", xtilde.worst() < opt.sigmas,
              fmt::format("worst deviation {:.2f} SE", xtilde.worst()));
    suite.add("M independent of interval length", worst_corr < opt.sigmas,
              fmt::format("worst |corr| {:.2f} / sqrt(cycles)", worst_corr));
    suite.add("simulated ages match theory", worst_rel <= opt.tolerance,
              fmt::format("worst relative error {:.4f} (tolerance {})", worst_rel, opt.tolerance));
    suite.add("sawtooth integration cross-check", worst_cross <= 1.0,
              fmt::format("worst gap {:.3f} of allowed", worst_cross));
    suite.add("seeded runs reproducible", deterministic, "identical results for identical configs");
}

}  // namespace

ValidationReport validate(const ValidationOptions& options) {
    Suite suite;
    order_stat_checks(suite, options);
    analysis_checks(suite, options);
    simulation_checks(suite, options);
    return suite.take();
}

}  // namespace aoicast
