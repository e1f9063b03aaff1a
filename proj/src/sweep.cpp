#include <cmath>

#include "aoicast/analysis.hpp"
#include "aoicast/experiments.hpp"

namespace aoicast {

namespace {

ServiceDistribution make_distribution(DistributionKind kind, double rate, double shift) {
    return kind == DistributionKind::Exponential ? ServiceDistribution::exponential(rate)
                                                 : ServiceDistribution::shifted_exponential(rate, shift);
}

}  // namespace

AgeRow evaluate_point(const ServiceDistribution& dist, std::size_t k, const SimConfig& run_size,
                      double sweep_value) {
    SimConfig config = run_size;
    config.dist = dist;
    config.k = k;
    const auto sim = run_simulation(config);

    AgeRow row;
    row.sweep_value = sweep_value;
    row.delta_p_theory = age_priority(dist, k);
    row.delta_p_sim = sim.age_priority_hat.value;
    row.delta_p_stderr = sim.age_priority_hat.std_error;
    row.delta_e_theory = age_nonpriority(dist, k).value;
    row.delta_e_sim = sim.age_nonpriority_hat.value;
    row.delta_e_stderr = sim.age_nonpriority_hat.std_error;
    if (dist.kind() == DistributionKind::ShiftedExponential) {
        row.lower_bound = age_priority_lower_bound(dist.rate(), dist.shift(), k);
    }
    row.relerr_p = std::abs(row.delta_p_sim - row.delta_p_theory) / row.delta_p_theory;
    row.relerr_e = std::abs(row.delta_e_sim - row.delta_e_theory) / row.delta_e_theory;
    return row;
}

AgeReport sweep_k(const SweepSpec& spec) {
    if (spec.variable != SweepVariable::K) throw UsageError("sweep_k needs a k sweep spec");
    validate(spec);
    const auto dist = make_distribution(spec.dist, spec.rate, spec.shift);
    AgeReport report;
    for (std::size_t k : spec.k_values) {
        report.rows.push_back(evaluate_point(dist, k, spec.sim, static_cast<double>(k)));
    }
    return report;
}

AgeReport sweep_shift(const SweepSpec& spec) {
    if (spec.variable != SweepVariable::Shift) throw UsageError("sweep_shift needs a shift sweep spec");
    validate(spec);
    AgeReport report;
    for (double c : spec.c_values) {
        const auto dist = ServiceDistribution::shifted_exponential(spec.rate, c);
        report.rows.push_back(evaluate_point(dist, spec.k, spec.sim, c));
    }
    return report;
}

}  // namespace aoicast
