#include "aoicast/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace aoicast {

namespace {

void require_group_size(std::size_t k) {
    if (k < 1) throw std::domain_error("priority group size k must be >= 1");
}

double as_real(std::size_t k) { return static_cast<double>(k); }

}  // namespace

double age_priority(const ServiceDistribution& dist, std::size_t k) {
    require_group_size(k);
    const auto y = dist.order_stat_moments(k, k);
    return dist.mean() + y.mean / 2.0 + y.variance / (2.0 * y.mean);
}

PriorityAge priority_age(const ServiceDistribution& dist, std::size_t k) {
    return {age_priority(dist, k), age_priority_lower_bound(dist.rate(), dist.shift(), k)};
}

double age_priority_shifted_exp(double rate, double shift, std::size_t k) {
    require_group_size(k);
    // Validates rate and shift.
    (void)ServiceDistribution::shifted_exponential(rate, shift);
    const double hk = harmonic(k);
    const double hk2 = harmonic2(k);
    return 1.5 * shift + 1.0 / rate + hk / (2.0 * rate) +
           hk2 / (2.0 * rate * rate * shift + 2.0 * rate * hk);
}

double age_priority_lower_bound(double rate, double shift, std::size_t k) {
    require_group_size(k);
    (void)ServiceDistribution::shifted_exponential(rate, shift);
    return 1.5 * shift + 1.0 / rate + (std::log(as_real(k)) + kEulerGamma) / (2.0 * rate);
}

double failure_prob(std::size_t k) {
    require_group_size(k);
    return 1.0 / (as_real(k) + 1.0);
}

GeometricMoments geometric_moments(std::size_t k) {
    require_group_size(k);
    const double q = failure_prob(k);
    return {1.0 / (1.0 - q), (1.0 + q) / ((1.0 - q) * (1.0 - q))};
}

RenewalCycleMoments interval_moments(const ServiceDistribution& dist, std::size_t k) {
    require_group_size(k);
    RenewalCycleMoments out;
    out.q = failure_prob(k);
    const auto m = geometric_moments(k);
    out.m_mean = m.mean;
    out.m_second_moment = m.second_moment;

    const auto failed = dist.order_stat_moments(k, k + 1);
    const auto served = dist.order_stat_moments(k + 1, k + 1);
    out.y_failure_mean = failed.mean;
    out.y_failure_var = failed.variance;
    out.y_success_mean = served.mean;
    out.y_success_var = served.variance;
    out.y_mean = out.q * out.y_failure_mean + (1.0 - out.q) * out.y_success_mean;

    const double extra = out.m_mean - 1.0;
    out.w_mean = out.m_mean * out.y_mean;
    out.w_second_moment =
        extra * out.y_failure_var + out.y_success_var +
        (out.m_second_moment - 2.0 * out.m_mean + 1.0) * out.y_failure_mean * out.y_failure_mean +
        out.y_success_mean * out.y_success_mean +
        2.0 * extra * out.y_failure_mean * out.y_success_mean;
    out.xtilde_mean = xtilde_mean(dist, k);
    return out;
}

WMoments w_moments(const ServiceDistribution& dist, std::size_t k) {
    const auto cycle = interval_moments(dist, k);
    return {cycle.w_mean, cycle.w_second_moment};
}

double xtilde_mean(const ServiceDistribution& dist, std::size_t k) {
    require_group_size(k);
    double sum = 0.0;
    for (std::size_t i = 1; i <= k; ++i) sum += dist.order_stat_mean(i, k + 1);
    return sum / as_real(k);
}

NonPriorityAge age_nonpriority(const ServiceDistribution& dist, std::size_t k) {
    require_group_size(k);
    const double kr = as_real(k);
    const double e_kk = dist.order_stat_mean(k, k);
    const auto second = dist.order_stat_moments(k, k + 1);
    const auto top = dist.order_stat_moments(k + 1, k + 1);
    const double denom = 2.0 * (kr + 1.0) * e_kk;

    NonPriorityAge out;
    out.delta0 = xtilde_mean(dist, k);
    out.delta1 = (second.variance + kr * top.variance) / denom;
    out.delta2 = ((kr + 2.0) / kr * second.mean * second.mean + kr * top.mean * top.mean +
                  2.0 * top.mean * second.mean) /
                 denom;
    out.value = out.delta0 + out.delta1 + out.delta2;
    return out;
}

double age_nonpriority_renewal(const ServiceDistribution& dist, std::size_t k) {
    const auto cycle = interval_moments(dist, k);
    return cycle.w_second_moment / (2.0 * cycle.w_mean) + cycle.xtilde_mean;
}

double age_exponential(double rate, std::size_t k) {
    require_group_size(k);
    (void)ServiceDistribution::exponential(rate);
    const double hk = harmonic(k);
    return 1.0 / rate + hk / (2.0 * rate) + harmonic2(k) / (2.0 * rate * hk);
}

}  // namespace aoicast
