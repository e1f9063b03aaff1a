// aoicast: closed-form and simulated age of information for prioritized
// multicast status updates.
//
//   aoicast sweep-k     [sweep flags]   age versus priority group size
//   aoicast sweep-shift [sweep flags]   age versus exponential shift c
//   aoicast validate    [options]       property suite over every module
//   aoicast theory      [options]       closed-form values for one point
//   aoicast ledger      [options]       per-interval CSV of one replication
//
// Exit status: 0 ok, 1 validation failure, 2 usage error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "aoicast/analysis.hpp"
#include "aoicast/experiments.hpp"
#include "aoicast/simulator.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

void print_summary(std::ostream& out, const aoicast::AgeReport& report, const char* variable) {
    out << fmt::format("{:>8} {:>10} {:>10} {:>8} {:>10} {:>10} {:>8}\n", variable, "P theory", "P sim",
                       "P err", "E theory", "E sim", "E err");
    for (const auto& r : report.rows) {
        out << fmt::format("{:>8.4g} {:>10.5f} {:>10.5f} {:>8.4f} {:>10.5f} {:>10.5f} {:>8.4f}\n",
                           r.sweep_value, r.delta_p_theory, r.delta_p_sim, r.relerr_p, r.delta_e_theory,
                           r.delta_e_sim, r.relerr_e);
    }
}

int run_sweep(const std::vector<std::string>& args, aoicast::SweepVariable variable) {
    const auto spec = aoicast::parse_config(args, variable);
    const auto report = variable == aoicast::SweepVariable::K ? aoicast::sweep_k(spec)
                                                              : aoicast::sweep_shift(spec);
    if (spec.output_path.empty()) {
        aoicast::write_csv(std::cout, report);
    } else {
        aoicast::write_csv_file(spec.output_path, report);
    }
    print_summary(std::cerr, report, variable == aoicast::SweepVariable::K ? "k" : "c");
    if (!report.within(spec.tolerance)) {
        std::cerr << fmt::format("relative error above tolerance {}\n", spec.tolerance);
        return kFailed;
    }
    return kOk;
}

aoicast::ServiceDistribution make_dist(const std::string& kind, double rate, double shift) {
    if (kind == "exp") {
        if (shift != 0.0) throw aoicast::UsageError("shift must be 0 for --dist exp");
        return aoicast::ServiceDistribution::exponential(rate);
    }
    return aoicast::ServiceDistribution::shifted_exponential(rate, shift);
}

void print_theory(const aoicast::ServiceDistribution& d, std::size_t k) {
    const auto p = aoicast::priority_age(d, k);
    const auto e = aoicast::age_nonpriority(d, k);
    const auto c = aoicast::interval_moments(d, k);
    std::cout << fmt::format("delta_p            {:.12g}\n", p.value)
              << fmt::format("delta_p_lower      {:.12g}\n", p.lower_bound)
              << fmt::format("delta_e            {:.12g}\n", e.value)
              << fmt::format("  delta0           {:.12g}\n", e.delta0)
              << fmt::format("  delta1           {:.12g}\n", e.delta1)
              << fmt::format("  delta2           {:.12g}\n", e.delta2)
              << fmt::format("q                  {:.12g}\n", c.q)
              << fmt::format("E[M], E[M^2]       {:.12g}, {:.12g}\n", c.m_mean, c.m_second_moment)
              << fmt::format("E[Y], E[Y_F], E[Y_S] {:.12g}, {:.12g}, {:.12g}\n", c.y_mean,
                             c.y_failure_mean, c.y_success_mean)
              << fmt::format("E[W], E[W^2]       {:.12g}, {:.12g}\n", c.w_mean, c.w_second_moment)
              << fmt::format("E[X~]              {:.12g}\n", c.xtilde_mean);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Age of information for multicast with a prioritized receiver group"};
    app.require_subcommand(1);

    auto* sweep_k = app.add_subcommand("sweep-k", "Sweep the priority group size k");
    auto* sweep_c = app.add_subcommand("sweep-shift", "Sweep the service-time shift c");
    for (auto* sub : {sweep_k, sweep_c}) {
        sub->prefix_command();
        sub->footer(
            "Flags: --dist {exp|sexp} --lambda R --shift C --k N|A..B --c-values LIST --intervals J\n"
            "       --replications R --seed S --out PATH --tolerance T --config FILE");
    }

    aoicast::ValidationOptions vopt;
    auto* validate = app.add_subcommand("validate", "Run the property suite with fixed seeds");
    validate->add_option("--seed", vopt.seed);
    validate->add_option("--intervals", vopt.intervals)->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
    validate->add_option("--replications", vopt.replications)->check(CLI::PositiveNumber);
    validate->add_option("--tolerance", vopt.tolerance, "Relative error allowed for simulated ages");
    validate->add_option("--sigmas", vopt.sigmas, "Standard errors allowed for Monte-Carlo checks");

    std::string dist_kind = "exp";
    double rate = 1.0;
    double shift = 0.0;
    std::size_t k = 1;
    std::size_t intervals = 1000;
    std::uint64_t seed = 1;
    std::string out_path;
    auto* theory = app.add_subcommand("theory", "Print closed-form ages and cycle moments");
    auto* ledger = app.add_subcommand("ledger", "Dump one replication as per-interval CSV");
    for (auto* sub : {theory, ledger}) {
        sub->add_option("--dist", dist_kind)->check(CLI::IsMember({"exp", "sexp"}));
        sub->add_option("--lambda", rate)->check(CLI::PositiveNumber);
        sub->add_option("--shift", shift)->check(CLI::NonNegativeNumber);
        sub->add_option("--k", k)->check(CLI::PositiveNumber);
    }
    ledger->add_option("--intervals", intervals)->check(CLI::PositiveNumber);
    ledger->add_option("--seed", seed);
    ledger->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*sweep_k) return run_sweep(sweep_k->remaining(), aoicast::SweepVariable::K);
        if (*sweep_c) return run_sweep(sweep_c->remaining(), aoicast::SweepVariable::Shift);
        if (*validate) {
            const auto report = aoicast::validate(vopt);
            aoicast::print_validation(std::cout, report);
            return report.passed() ? kOk : kFailed;
        }
        if (*theory) {
            print_theory(make_dist(dist_kind, rate, shift), k);
            return kOk;
        }
        if (*ledger) {
            aoicast::Engine rng(aoicast::replication_seed(seed, 0));
            const auto data = aoicast::record_ledger(make_dist(dist_kind, rate, shift), k, intervals, rng);
            if (out_path.empty()) {
                aoicast::write_interval_ledger(std::cout, data);
            } else {
                std::ofstream out(out_path);
                if (!out) throw aoicast::UsageError("out: cannot open '" + out_path + "' for writing");
                aoicast::write_interval_ledger(out, data);
            }
            return kOk;
        }
    } catch (const aoicast::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailed;
    }
    return kUsage;
}
