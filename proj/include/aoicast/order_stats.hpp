#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace aoicast {

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.577215664901532860606512;

/// Prefix sums of 1/j and 1/j^2 for j = 1..capacity.
///
/// Accumulated in long double and rounded once per entry, so H(n) - H(n-1)
/// reproduces 1/n to within a few ulps for every cached index.
class HarmonicCache {
public:
    explicit HarmonicCache(std::size_t capacity);

    std::size_t capacity() const noexcept { return first_.size() - 1; }

    /// H_n = sum_{j=1..n} 1/j. Throws std::out_of_range past capacity().
    double harmonic(std::size_t n) const;

    /// H_{n^2} = sum_{j=1..n} 1/j^2. Throws std::out_of_range past capacity().
    double harmonic2(std::size_t n) const;

private:
    std::vector<double> first_;
    std::vector<double> second_;
};

/// Capacity of the process-wide cache behind harmonic() / harmonic2().
inline constexpr std::size_t kDefaultHarmonicCapacity = std::size_t{1} << 20;

/// Process-wide cache, built on first use.
const HarmonicCache& default_harmonic_cache();

double harmonic(std::size_t n);
double harmonic2(std::size_t n);

enum class DistributionKind { Exponential, ShiftedExponential };

/// Mean and variance of the k-th smallest of n i.i.d. samples.
struct OrderStatMoments {
    double mean = 0.0;
    double variance = 0.0;
    std::size_t k = 0;
    std::size_t n = 0;
};

/// Service-time law X = c + Exp(rate).
///
/// Exponential is the c = 0 member of the family; the kind is kept so that
/// reports can tell the two apart. Anything used by the age formulas
/// (sampling, mean, order-statistic moments) is available here, so a new law
/// has to supply all three.
class ServiceDistribution {
public:
    static ServiceDistribution exponential(double rate);
    static ServiceDistribution shifted_exponential(double rate, double shift);

    DistributionKind kind() const noexcept { return kind_; }
    double rate() const noexcept { return rate_; }
    double shift() const noexcept { return shift_; }

    double mean() const noexcept { return shift_ + 1.0 / rate_; }
    double variance() const noexcept { return 1.0 / (rate_ * rate_); }
    double cdf(double x) const noexcept;

    /// Inverse CDF at u in (0, 1]: c - ln(u)/rate. u = 1 maps to c.
    double quantile_upper(double u) const noexcept;

    template <class Rng>
    double sample(Rng& rng) const {
        return quantile_upper(open_closed_uniform(rng));
    }

    double order_stat_mean(std::size_t k, std::size_t n) const;
    double order_stat_var(std::size_t k, std::size_t n) const;
    OrderStatMoments order_stat_moments(std::size_t k, std::size_t n) const;

    /// Uniform on (0, 1] with 53 random bits; identical across platforms
    /// for a given 64-bit engine state.
    template <class Rng>
    static double open_closed_uniform(Rng& rng) {
        const std::uint64_t bits = static_cast<std::uint64_t>(rng()) >> 11;
        return 1.0 - static_cast<double>(bits) * 0x1.0p-53;
    }

    friend bool operator==(const ServiceDistribution&, const ServiceDistribution&) = default;

private:
    ServiceDistribution(DistributionKind kind, double rate, double shift)
        : kind_(kind), rate_(rate), shift_(shift) {}

    DistributionKind kind_;
    double rate_;
    double shift_;
};

/// epsilon_{k:n} = c + (H_n - H_{n-k}) / rate. Throws std::domain_error
/// unless 1 <= k <= n.
double order_stat_mean(const ServiceDistribution& dist, std::size_t k, std::size_t n);

/// v_{k:n} = (H_{n^2} - H_{(n-k)^2}) / rate^2; does not depend on the shift.
double order_stat_var(const ServiceDistribution& dist, std::size_t k, std::size_t n);

template <class Rng>
double sample(const ServiceDistribution& dist, Rng& rng) {
    return dist.sample(rng);
}

}  // namespace aoicast
