#pragma once

#include <cstddef>

#include "aoicast/order_stats.hpp"

namespace aoicast {

// Closed-form average age for a source that multicasts to k priority nodes
// and preempts every other receiver once all k have the update. Every
// function throws std::domain_error for k < 1.

/// Average age at a priority node together with its shifted-exponential
/// lower bound.
struct PriorityAge {
    double value = 0.0;
    double lower_bound = 0.0;
};

/// Average age at a non-priority node, split into the leading term delta0
/// (mean service time of a delivered update) and the two correction terms.
struct NonPriorityAge {
    double value = 0.0;
    double delta0 = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
};

struct GeometricMoments {
    double mean = 0.0;           // E[M]
    double second_moment = 0.0;  // E[M^2]
};

struct WMoments {
    double mean = 0.0;           // E[W]
    double second_moment = 0.0;  // E[W^2]
};

/// Everything describing one inter-delivery cycle of a non-priority node.
///
/// Y_F is the service interval of an update the node missed (its own draw was
/// the largest of k+1, so the interval is the second largest); Y_S is an
/// interval in which the node was served (the interval is the largest of k+1).
struct RenewalCycleMoments {
    double q = 0.0;
    double m_mean = 0.0;
    double m_second_moment = 0.0;
    double y_mean = 0.0;
    double y_success_mean = 0.0;
    double y_failure_mean = 0.0;
    double y_success_var = 0.0;
    double y_failure_var = 0.0;
    double w_mean = 0.0;
    double w_second_moment = 0.0;
    double xtilde_mean = 0.0;
};

/// mu + eps_{k:k}/2 + v_{k:k} / (2 eps_{k:k}). Holds for any service law.
double age_priority(const ServiceDistribution& dist, std::size_t k);

/// age_priority plus the bound from age_priority_lower_bound.
PriorityAge priority_age(const ServiceDistribution& dist, std::size_t k);

/// Harmonic-number form of age_priority for X = c + Exp(rate):
/// 3c/2 + 1/rate + H_k/(2 rate) + H_{k^2} / (2 rate^2 c + 2 rate H_k).
double age_priority_shifted_exp(double rate, double shift, std::size_t k);

/// 3c/2 + 1/rate + (ln k + gamma) / (2 rate), using H_k >= ln k + gamma.
double age_priority_lower_bound(double rate, double shift, std::size_t k);

/// Probability 1/(k+1) that a non-priority node misses an update.
double failure_prob(std::size_t k);

/// Moments of the geometric number of intervals between deliveries.
GeometricMoments geometric_moments(std::size_t k);

/// q, M, Y, Y_S, Y_F, W and X~ moments for one non-priority node.
RenewalCycleMoments interval_moments(const ServiceDistribution& dist, std::size_t k);

WMoments w_moments(const ServiceDistribution& dist, std::size_t k);

/// E[X~] = (1/k) sum_{i=1..k} eps_{i:k+1}: service time of a delivered update.
double xtilde_mean(const ServiceDistribution& dist, std::size_t k);

/// Non-priority age as delta0 + delta1 + delta2.
NonPriorityAge age_nonpriority(const ServiceDistribution& dist, std::size_t k);

/// Non-priority age evaluated as E[W^2] / (2 E[W]) + E[X~]; an independent
/// algebraic route to age_nonpriority().value.
double age_nonpriority_renewal(const ServiceDistribution& dist, std::size_t k);

/// Common age of both groups under exponential service:
/// 1/rate + H_k/(2 rate) + H_{k^2} / (2 rate H_k).
double age_exponential(double rate, std::size_t k);

}  // namespace aoicast
