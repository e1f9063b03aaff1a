#include "aoicast/order_stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aoicast {

HarmonicCache::HarmonicCache(std::size_t capacity)
    : first_(capacity + 1, 0.0), second_(capacity + 1, 0.0) {
    long double h1 = 0.0L;
    long double h2 = 0.0L;
    for (std::size_t j = 1; j <= capacity; ++j) {
        const long double inv = 1.0L / static_cast<long double>(j);
        h1 += inv;
        h2 += inv * inv;
        first_[j] = static_cast<double>(h1);
        second_[j] = static_cast<double>(h2);
    }
}

namespace {

[[noreturn]] void throw_capacity(std::size_t n, std::size_t capacity) {
    throw std::out_of_range("harmonic index " + std::to_string(n) +
                            " exceeds cache capacity " + std::to_string(capacity));
}

void check_order_indices(std::size_t k, std::size_t n) {
    if (k < 1 || k > n) {
        throw std::domain_error("order statistic requires 1 <= k <= n (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
    }
}

}  // namespace

double HarmonicCache::harmonic(std::size_t n) const {
    if (n > capacity()) throw_capacity(n, capacity());
    return first_[n];
}

double HarmonicCache::harmonic2(std::size_t n) const {
    if (n > capacity()) throw_capacity(n, capacity());
    return second_[n];
}

const HarmonicCache& default_harmonic_cache() {
    static const HarmonicCache cache(kDefaultHarmonicCapacity);
    return cache;
}

double harmonic(std::size_t n) { return default_harmonic_cache().harmonic(n); }

double harmonic2(std::size_t n) { return default_harmonic_cache().harmonic2(n); }

ServiceDistribution ServiceDistribution::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::domain_error("rate must be positive and finite");
    }
    return {DistributionKind::Exponential, rate, 0.0};
}

ServiceDistribution ServiceDistribution::shifted_exponential(double rate, double shift) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::domain_error("rate must be positive and finite");
    }
    if (!(shift >= 0.0) || !std::isfinite(shift)) {
        throw std::domain_error("shift must be non-negative and finite");
    }
    return {DistributionKind::ShiftedExponential, rate, shift};
}

double ServiceDistribution::cdf(double x) const noexcept {
    if (x < shift_) return 0.0;
    return -std::expm1(-rate_ * (x - shift_));
}

double ServiceDistribution::quantile_upper(double u) const noexcept {
    return shift_ - std::log(u) / rate_;
}

double ServiceDistribution::order_stat_mean(std::size_t k, std::size_t n) const {
    check_order_indices(k, n);
    const auto& h = default_harmonic_cache();
    return shift_ + (h.harmonic(n) - h.harmonic(n - k)) / rate_;
}

double ServiceDistribution::order_stat_var(std::size_t k, std::size_t n) const {
    check_order_indices(k, n);
    const auto& h = default_harmonic_cache();
    return (h.harmonic2(n) - h.harmonic2(n - k)) / (rate_ * rate_);
}

OrderStatMoments ServiceDistribution::order_stat_moments(std::size_t k, std::size_t n) const {
    return {order_stat_mean(k, n), order_stat_var(k, n), k, n};
}

double order_stat_mean(const ServiceDistribution& dist, std::size_t k, std::size_t n) {
    return dist.order_stat_mean(k, n);
}

double order_stat_var(const ServiceDistribution& dist, std::size_t k, std::size_t n) {
    return dist.order_stat_var(k, n);
}

}  // namespace aoicast
