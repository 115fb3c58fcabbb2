#pragma once

#include <cstdint>

namespace privbr {

/// Derived schedule and bounds for a private run. Every field is
/// recomputable from the stored inputs; see derive_private_params.
struct Params {
    // game quantities
    int n = 0;
    int m = 0;
    int longest_path = 0; // L
    double delta_ell = 0.0;
    // user inputs
    double alpha = 0.0;
    double epsilon = 0.0;
    double beta = 0.0;
    // derived schedule
    std::int64_t total_moves = 0;      // T = ceil(2mn/alpha)
    std::int64_t per_player_moves = 0; // k = max(2, ceil(8Lmn*dl/alpha^2))
    double eps_prime = 0.0;            // eps / (4 k L ln T)
    // derived bounds
    double count_error = 0.0;     // E_T(beta), with beta' = beta/m
    double cost_error = 0.0;      // Delta_T(beta) = L * dl * E_T(beta)
    bool feasible = false;        // alpha > 4 * Delta_T(beta)
    double eta = 0.0;             // alpha + 2 Delta_T(beta)
    double eta_prime = 0.0;       // eta + 2L*eps + L*beta + beta
    // asymptotic reference scalings (order expressions with constant 1)
    double eta_order = 0.0;         // L*(mn ln^{3/2}(n) dl^2 ln(1/beta)/eps)^{1/3}
    double epsilon_order = 0.0;     // (mn ln^{3/2}(n) dl^2 ln(1/beta))^{1/4}
    double beta_order = 0.0;        // n ln^{3/2}(n) dl^2
};

/// Integer loop bound for a real-valued formula value: ceiling with a small
/// absolute nudge (1e-9) so decimal inputs that are exact in real arithmetic
/// do not round up an extra step, floored at `minimum`.
std::int64_t loop_bound(double value, std::int64_t minimum);

/// T, k, eps', E_T(beta), Delta_T(beta), the feasibility gate and the eta /
/// eta' bounds. Errors on nonpositive n, m, L, alpha or epsilon/beta outside
/// (0,1). delta_ell may be zero (k then bottoms out at its floor of 2, the
/// smallest budget under which a run that never moves can complete).
Params derive_private_params(int n, int m, int longest_path, double delta_ell,
                             double alpha, double epsilon, double beta);

/// Exact-engine budgets: T = ceil(mn/alpha) plus both k variants, the
/// analysis value 2Lmn*dl/alpha^2 and the algorithm-header value
/// 4Lmn*dl/alpha^2 (engines default to the header value).
struct ExactParams {
    std::int64_t total_moves = 0;       // T
    std::int64_t per_player_lemma = 0;  // 2Lmn*dl/alpha^2, floored at 2
    std::int64_t per_player_alg = 0;    // 4Lmn*dl/alpha^2, floored at 2
};
ExactParams exact_params(int n, int m, int longest_path, double delta_ell, double alpha);

/// Concrete accuracy bound eta = alpha + 2 Delta_T(beta) of a feasible
/// parameter set. Errors with `infeasible-alpha` otherwise.
double eta_bound(const Params& params);

/// Truthfulness bound eta' = eta + 2L*eps + L*beta + beta (the failure
/// probability enters once as the JDP delta and once through the L-charged
/// failure event).
double eta_prime_bound(double eta, int longest_path, double epsilon, double beta);

/// Shared feasibility predicate: alpha > 4 * Delta_T(beta).
bool alpha_feasible(double alpha, double cost_error);

} // namespace privbr
