#pragma once

#include <cstdint>
#include <vector>

#include "privbr/rng.hpp"

namespace privbr {

/// One draw from Laplace(scale) via inverse CDF on a uniform in (0,1).
double laplace_from_uniform(double uniform, double scale);
double laplace_sample(double scale, Rng& rng);

/// Binary-mechanism error bound: with probability at least 1 - beta_prime,
/// max_t |y_hat^t - y^t| <= sqrt(8 ln T) * ln(2/beta_prime) / eps_prime.
/// Natural logarithms throughout (applied consistently across the library).
double counter_error_bound(std::int64_t stream_len, double beta_prime,
                           double eps_prime);

/// Differentially private counter for a {-1,0,+1} stream under continual
/// observation (the binary mechanism), kept incrementally: the dyadic tree
/// node created at each step draws its Laplace noise exactly once and keeps
/// it while active, so the full output sequence matches a replay of the
/// whole prefix with the same per-node draws.
///
/// eps_prime = +infinity is the zero-noise sentinel: outputs are exact
/// prefix sums and the generator is never consumed.
class PrivateCounter {
public:
    PrivateCounter(std::int64_t stream_len_budget, double eps_prime, std::uint64_t seed);

    /// Consumes one stream symbol and returns the current noisy count:
    /// the sum of the active noisy tree nodes (one per set bit of t).
    /// Throws `stream-exhausted` past the budget.
    double feed(int omega);

    /// Exact prefix sum (test and bookkeeping accessor).
    std::int64_t exact_count() const { return exact_sum_; }

    /// Last value returned by feed() (0 before the first feed).
    double last_output() const { return last_output_; }

    std::int64_t position() const { return t_; }
    std::int64_t budget() const { return budget_; }
    bool noiseless() const { return noise_scale_ == 0.0; }

private:
    std::int64_t budget_;
    double noise_scale_; // 1/eps_prime; 0 means noiseless
    std::int64_t t_ = 0;
    std::int64_t exact_sum_ = 0;
    double last_output_ = 0.0;
    std::vector<double> level_exact_; // q^j
    std::vector<double> level_noisy_; // q_hat^j
    Rng rng_;
};

} // namespace privbr
