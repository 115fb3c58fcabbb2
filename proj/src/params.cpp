#include "privbr/params.hpp"

#include <cmath>

#include "privbr/counter.hpp"
#include "privbr/errors.hpp"

namespace privbr {

std::int64_t loop_bound(double value, std::int64_t minimum) {
    const double ceiled = std::ceil(value - 1e-9);
    std::int64_t bound = ceiled < 1.0 ? 1 : static_cast<std::int64_t>(ceiled);
    return bound < minimum ? minimum : bound;
}

bool alpha_feasible(double alpha, double cost_error) {
    return alpha > 4.0 * cost_error;
}

namespace {

void check_positive_inputs(int n, int m, int longest_path, double delta_ell,
                           double alpha) {
    if (n < 1) fail("bad-argument", "n must be >= 1");
    if (m < 1) fail("bad-argument", "m must be >= 1");
    if (longest_path < 1) fail("bad-argument", "L must be >= 1");
    if (!(delta_ell >= 0.0 && delta_ell <= 1.0))
        fail("bad-argument", "sensitivity must lie in [0,1]");
    if (!(alpha > 0.0)) fail("bad-argument", "alpha must be positive");
}

} // namespace

Params derive_private_params(int n, int m, int longest_path, double delta_ell,
                             double alpha, double epsilon, double beta) {
    check_positive_inputs(n, m, longest_path, delta_ell, alpha);
    if (!(epsilon > 0.0 && epsilon < 1.0)) fail("bad-argument", "epsilon must lie in (0,1)");
    if (!(beta > 0.0 && beta < 1.0)) fail("bad-argument", "beta must lie in (0,1)");

    Params p;
    p.n = n;
    p.m = m;
    p.longest_path = longest_path;
    p.delta_ell = delta_ell;
    p.alpha = alpha;
    p.epsilon = epsilon;
    p.beta = beta;

    const double nd = n, md = m, ld = longest_path;
    p.total_moves = loop_bound(2.0 * md * nd / alpha, 2);
    p.per_player_moves =
        loop_bound(8.0 * ld * md * nd * delta_ell / (alpha * alpha), 2);

    const double log_total = std::log(static_cast<double>(p.total_moves));
    p.eps_prime =
        epsilon / (4.0 * static_cast<double>(p.per_player_moves) * ld * log_total);
    p.count_error = counter_error_bound(p.total_moves, beta / md, p.eps_prime);
    p.cost_error = ld * delta_ell * p.count_error;
    p.feasible = alpha_feasible(alpha, p.cost_error);
    p.eta = alpha + 2.0 * p.cost_error;
    p.eta_prime = eta_prime_bound(p.eta, longest_path, epsilon, beta);

    const double log_n = std::log(std::max(2.0, nd));
    const double ln32 = std::pow(log_n, 1.5);
    p.eta_order = ld * std::cbrt(md * nd * ln32 * delta_ell * delta_ell *
                                 std::log(1.0 / beta) / epsilon);
    p.epsilon_order = std::pow(
        md * nd * ln32 * delta_ell * delta_ell * std::log(1.0 / beta), 0.25);
    p.beta_order = nd * ln32 * delta_ell * delta_ell;
    return p;
}

ExactParams exact_params(int n, int m, int longest_path, double delta_ell,
                         double alpha) {
    check_positive_inputs(n, m, longest_path, delta_ell, alpha);
    ExactParams p;
    const double nd = n, md = m, ld = longest_path;
    p.total_moves = loop_bound(md * nd / alpha, 1);
    p.per_player_lemma =
        loop_bound(2.0 * ld * md * nd * delta_ell / (alpha * alpha), 2);
    p.per_player_alg =
        loop_bound(4.0 * ld * md * nd * delta_ell / (alpha * alpha), 2);
    return p;
}

double eta_bound(const Params& params) {
    if (!params.feasible)
        fail("infeasible-alpha", "alpha must exceed 4 * Delta_T(beta)");
    return params.eta;
}

double eta_prime_bound(double eta, int longest_path, double epsilon, double beta) {
    const double ld = longest_path;
    return eta + 2.0 * ld * epsilon + ld * beta + beta;
}

} // namespace privbr
