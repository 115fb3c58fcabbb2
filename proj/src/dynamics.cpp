#include "privbr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "privbr/best_response.hpp"
#include "privbr/counter.hpp"
#include "privbr/errors.hpp"
#include "privbr/rng.hpp"

namespace privbr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<int> hops_to_destination(const Game& game, int destination) {
    std::vector<int> hops(game.vertices.size(), -1);
    std::deque<int> queue{destination};
    hops[static_cast<std::size_t>(destination)] = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int ei : game.in_edges[static_cast<std::size_t>(v)]) {
            int t = game.edges[static_cast<std::size_t>(ei)].tail;
            if (hops[static_cast<std::size_t>(t)] < 0) {
                hops[static_cast<std::size_t>(t)] = hops[static_cast<std::size_t>(v)] + 1;
                queue.push_back(t);
            }
        }
    }
    return hops;
}

// State shared by both engines: profile, exact loads, move bookkeeping.
struct EngineState {
    const Game& game;
    const std::vector<PlayerType>& types;
    RouteProfile profile;
    std::vector<int> loads;
    std::vector<std::int64_t> counts;
    std::vector<MoveEvent> moves;

    EngineState(const Game& g, const std::vector<PlayerType>& t)
        : game(g),
          types(t),
          profile(initial_profile(g, t)),
          loads(edge_loads(g, profile)),
          counts(t.size(), 1) {}

    std::vector<int> commit_move(std::int64_t turn, std::size_t mover,
                                 const Route& new_route) {
        MoveEvent ev;
        ev.turn = turn;
        ev.player = static_cast<int>(mover);
        ev.from = profile.routes[mover];
        ev.to = new_route;
        std::vector<int> symbols = apply_move(game, profile, mover, new_route);
        for (int ei = 0; ei < game.m(); ++ei)
            loads[static_cast<std::size_t>(ei)] += symbols[static_cast<std::size_t>(ei)];
        counts[mover]++;
        moves.push_back(std::move(ev));
        return symbols;
    }

    void record(RunOutcome& out, const TraceOptions& trace, std::int64_t turn,
                std::size_t mover, bool moved, double counter_error,
                const std::vector<std::int64_t>* counter_exact) {
        if (!trace.per_turn) return;
        TraceRecord rec;
        rec.turn = turn;
        rec.mover = static_cast<int>(mover);
        rec.moved = moved;
        rec.potential =
            trace.record_potential ? potential_at_loads(game, loads) : kNaN;
        rec.mover_regret =
            trace.record_mover_regret ? regret(game, mover, profile, types) : kNaN;
        rec.max_counter_error = trace.record_counter_error ? counter_error : kNaN;
        if (trace.record_loads) {
            rec.loads = loads;
            if (counter_exact) rec.counter_exact = *counter_exact;
        }
        out.trace.push_back(std::move(rec));
    }
};

void validate_common(const Game& game, const std::vector<PlayerType>& types,
                     double alpha) {
    if (types.empty()) fail("bad-argument", "no players");
    if (static_cast<int>(types.size()) > game.n)
        fail("bad-argument", "more participants than the game's declared n");
    if (!(alpha > 0.0)) fail("bad-argument", "alpha must be positive");
}

} // namespace

RouteProfile initial_profile(const Game& game, const std::vector<PlayerType>& types) {
    RouteProfile profile;
    profile.routes.reserve(types.size());
    for (const PlayerType& type : types) {
        const std::vector<int> hops = hops_to_destination(game, type.destination);
        if (hops[static_cast<std::size_t>(type.source)] < 0)
            fail("no-feasible-path", "player has no route");
        Route route;
        int at = type.source;
        while (at != type.destination) {
            for (int ei : game.out_edges[static_cast<std::size_t>(at)]) {
                const Edge& e = game.edges[static_cast<std::size_t>(ei)];
                if (hops[static_cast<std::size_t>(e.head)] ==
                    hops[static_cast<std::size_t>(at)] - 1) {
                    route.push_back(ei);
                    at = e.head;
                    break;
                }
            }
        }
        if (static_cast<int>(route.size()) > game.longest_path)
            fail("l-bound-violated", "initial route longer than declared L");
        profile.routes.push_back(std::move(route));
    }
    return profile;
}

std::vector<int> apply_move(const Game& game, RouteProfile& profile, std::size_t player,
                            const Route& new_route) {
    std::vector<int> symbols(static_cast<std::size_t>(game.m()), 0);
    for (int ei : profile.routes[player]) symbols[static_cast<std::size_t>(ei)] -= 1;
    for (int ei : new_route) symbols[static_cast<std::size_t>(ei)] += 1;
    profile.routes[player] = new_route;
    return symbols;
}

RunOutcome run_br_exact(const Game& game, const std::vector<PlayerType>& types,
                        const ExactEngineConfig& config) {
    validate_common(game, types, config.alpha);
    const int participants = static_cast<int>(types.size());
    const ExactParams defaults = exact_params(participants, game.m(), game.longest_path,
                                              game.delta_ell, config.alpha);
    const std::int64_t total = config.total_moves.value_or(defaults.total_moves);
    const std::int64_t budget = config.per_player_moves.value_or(defaults.per_player_alg);
    if (total < 1 || budget < 1) fail("bad-argument", "T and k must be >= 1");

    RunOutcome out;
    out.config = {config.alpha, total, budget, kInf, 0};

    EngineState state(game, types);
    const std::int64_t turns = static_cast<std::int64_t>(participants) * total;
    std::int64_t quiet_turns = 0; // consecutive turns without a move

    for (std::int64_t turn = 1; turn <= turns; ++turn) {
        const auto mover = static_cast<std::size_t>((turn - 1) % participants);
        const BestResponseResult response =
            alpha_best_response(game, mover, state.profile, types, config.alpha);
        if (response.moved()) {
            state.commit_move(turn, mover, *response.route);
            quiet_turns = 0;
        } else {
            ++quiet_turns;
        }
        const bool breached = state.counts[mover] >= budget;
        state.record(out, config.trace, turn, mover, response.moved(), kNaN, nullptr);
        if (breached) {
            out.status = RunOutcome::Status::Fail;
            out.fail = FailInfo{static_cast<int>(mover), turn};
            break;
        }
        // Once a full round-robin pass makes no move, loads are static and
        // every remaining turn provably repeats the same NA decision.
        if (quiet_turns >= participants && !config.trace.per_turn) break;
    }

    out.final_profile = std::move(state.profile);
    out.move_counts = std::move(state.counts);
    out.moves = std::move(state.moves);
    return out;
}

Params effective_private_params(const Game& game, int participants,
                                const PrivateEngineConfig& config) {
    Params params = derive_private_params(participants, game.m(), game.longest_path,
                                          game.delta_ell, config.alpha, config.epsilon,
                                          config.beta);
    if (config.total_moves) {
        if (*config.total_moves < 2) fail("bad-argument", "T override must be >= 2");
        params.total_moves = *config.total_moves;
    }
    if (config.per_player_moves) {
        if (*config.per_player_moves < 1) fail("bad-argument", "k override must be >= 1");
        params.per_player_moves = *config.per_player_moves;
    }
    // Recalibrate eps' against the effective budgets, then apply any direct
    // override (the +inf sentinel selects the zero-noise mode).
    params.eps_prime = config.eps_prime.value_or(
        config.epsilon / (4.0 * static_cast<double>(params.per_player_moves) *
                          static_cast<double>(params.longest_path) *
                          std::log(static_cast<double>(params.total_moves))));
    if (!(params.eps_prime > 0.0))
        fail("bad-noise-scale", "eps' must be positive (or +inf for no noise)");
    params.count_error =
        std::isinf(params.eps_prime)
            ? 0.0
            : counter_error_bound(params.total_moves, params.beta / params.m,
                                  params.eps_prime);
    params.cost_error = params.longest_path * params.delta_ell * params.count_error;
    params.feasible = alpha_feasible(params.alpha, params.cost_error);
    params.eta = params.alpha + 2.0 * params.cost_error;
    params.eta_prime =
        eta_prime_bound(params.eta, params.longest_path, params.epsilon, params.beta);
    return params;
}

RunOutcome run_br_private(const Game& game, const std::vector<PlayerType>& types,
                          const PrivateEngineConfig& config) {
    validate_common(game, types, config.alpha);
    const int participants = static_cast<int>(types.size());

    Params params = effective_private_params(game, participants, config);
    if (!params.feasible)
        fail("infeasible-alpha",
             "alpha = " + std::to_string(params.alpha) + " must exceed 4*Delta_T(beta) = " +
                 std::to_string(4.0 * params.cost_error));

    RunOutcome out;
    out.config = {config.alpha, params.total_moves, params.per_player_moves,
                  params.eps_prime, config.seed};
    out.params = params;

    EngineState state(game, types);
    const bool noiseless = std::isinf(params.eps_prime);

    // One counter per edge, budgeted for the n initial symbols plus one
    // symbol per turn: n*(T+1) entries.
    const std::int64_t stream_budget =
        static_cast<std::int64_t>(participants) * (params.total_moves + 1);
    std::vector<PrivateCounter> counters;
    counters.reserve(static_cast<std::size_t>(game.m()));
    for (int ei = 0; ei < game.m(); ++ei)
        counters.emplace_back(stream_budget, params.eps_prime,
                              derive_seed(config.seed, static_cast<std::uint64_t>(ei)));

    NoisyLoads noisy(static_cast<std::size_t>(game.m()), 0.0);
    for (int i = 0; i < participants; ++i) {
        std::vector<char> on_route(static_cast<std::size_t>(game.m()), 0);
        for (int ei : state.profile.routes[static_cast<std::size_t>(i)])
            on_route[static_cast<std::size_t>(ei)] = 1;
        for (int ei = 0; ei < game.m(); ++ei)
            noisy[static_cast<std::size_t>(ei)] =
                counters[static_cast<std::size_t>(ei)].feed(
                    on_route[static_cast<std::size_t>(ei)] ? 1 : 0);
    }

    auto observe_error = [&]() {
        double worst = 0.0;
        for (int ei = 0; ei < game.m(); ++ei)
            worst = std::max(worst,
                             std::fabs(noisy[static_cast<std::size_t>(ei)] -
                                       state.loads[static_cast<std::size_t>(ei)]));
        out.max_counter_error_seen = std::max(out.max_counter_error_seen, worst);
        return worst;
    };
    observe_error();

    const std::int64_t turns =
        static_cast<std::int64_t>(participants) * params.total_moves;
    std::vector<int> zero_symbols(static_cast<std::size_t>(game.m()), 0);
    std::vector<std::int64_t> counter_exact;
    std::int64_t quiet_turns = 0;

    for (std::int64_t turn = 1; turn <= turns; ++turn) {
        const auto mover = static_cast<std::size_t>((turn - 1) % participants);
        const BestResponseResult response = noisy_alpha_best_response(
            game, mover, state.profile.routes[mover], types[mover], noisy, config.alpha);
        std::vector<int>* symbols = &zero_symbols;
        std::vector<int> move_symbols;
        if (response.moved()) {
            move_symbols = state.commit_move(turn, mover, *response.route);
            symbols = &move_symbols;
            quiet_turns = 0;
        } else {
            ++quiet_turns;
        }
        const bool breached = state.counts[mover] >= params.per_player_moves;
        double turn_error = out.max_counter_error_seen;
        if (!breached) {
            for (int ei = 0; ei < game.m(); ++ei)
                noisy[static_cast<std::size_t>(ei)] =
                    counters[static_cast<std::size_t>(ei)].feed(
                        (*symbols)[static_cast<std::size_t>(ei)]);
            turn_error = observe_error();
        }
        if (config.trace.per_turn && config.trace.record_loads) {
            counter_exact.clear();
            for (const PrivateCounter& c : counters) counter_exact.push_back(c.exact_count());
        }
        state.record(out, config.trace, turn, mover, response.moved(), turn_error,
                     &counter_exact);
        if (breached) {
            out.status = RunOutcome::Status::Fail;
            out.fail = FailInfo{static_cast<int>(mover), turn};
            break;
        }
        // Zero-noise counters replay the same static counts after a quiet
        // full pass, so the remaining turns are provably all-NA.
        if (noiseless && quiet_turns >= participants && !config.trace.per_turn) break;
    }

    out.final_profile = std::move(state.profile);
    out.move_counts = std::move(state.counts);
    out.moves = std::move(state.moves);
    return out;
}

} // namespace privbr
