#include "privbr/counter.hpp"

#include <cmath>
#include <limits>

#include "privbr/errors.hpp"

namespace privbr {

double laplace_from_uniform(double uniform, double scale) {
    if (!(scale > 0.0)) fail("bad-noise-scale", "Laplace scale must be positive");
    if (uniform < 0.5) return scale * std::log(2.0 * uniform);
    return -scale * std::log(2.0 * (1.0 - uniform));
}

double laplace_sample(double scale, Rng& rng) {
    return laplace_from_uniform(rng.uniform_open(), scale);
}

double counter_error_bound(std::int64_t stream_len, double beta_prime,
                           double eps_prime) {
    if (stream_len < 2) fail("bad-argument", "error bound needs stream length >= 2");
    if (!(beta_prime > 0.0 && beta_prime < 1.0))
        fail("bad-argument", "beta' must lie in (0,1)");
    if (!(eps_prime > 0.0)) fail("bad-noise-scale", "eps' must be positive");
    const double t = static_cast<double>(stream_len);
    return std::sqrt(8.0 * std::log(t)) * std::log(2.0 / beta_prime) / eps_prime;
}

PrivateCounter::PrivateCounter(std::int64_t stream_len_budget, double eps_prime,
                               std::uint64_t seed)
    : budget_(stream_len_budget), rng_(seed) {
    if (budget_ < 1) fail("bad-argument", "counter budget must be >= 1");
    if (std::isinf(eps_prime) && eps_prime > 0.0) {
        noise_scale_ = 0.0; // zero-noise sentinel
    } else if (eps_prime > 0.0 && std::isfinite(eps_prime)) {
        noise_scale_ = 1.0 / eps_prime;
    } else {
        fail("bad-noise-scale", "eps' must be positive (or infinite for no noise)");
    }
    std::size_t levels = 1;
    while ((std::int64_t{1} << levels) <= budget_) ++levels;
    level_exact_.assign(levels + 1, 0.0);
    level_noisy_.assign(levels + 1, 0.0);
}

double PrivateCounter::feed(int omega) {
    if (t_ >= budget_) fail("stream-exhausted", "counter budget exhausted");
    ++t_;
    exact_sum_ += omega;

    // Merge levels below the lowest set bit of t into one new node.
    const auto ut = static_cast<std::uint64_t>(t_);
    std::size_t merge_level = 0;
    while (((ut >> merge_level) & 1ULL) == 0ULL) ++merge_level;

    double merged = static_cast<double>(omega);
    for (std::size_t j = 0; j < merge_level; ++j) {
        merged += level_exact_[j];
        level_exact_[j] = 0.0;
        level_noisy_[j] = 0.0;
    }
    level_exact_[merge_level] = merged;
    level_noisy_[merge_level] =
        noiseless() ? merged : merged + laplace_sample(noise_scale_, rng_);

    double output = 0.0;
    for (std::size_t j = 0; j < level_noisy_.size(); ++j)
        if ((ut >> j) & 1ULL) output += level_noisy_[j];
    last_output_ = output;
    return output;
}

} // namespace privbr
