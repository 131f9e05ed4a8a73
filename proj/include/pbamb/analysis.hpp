#pragma once

// Ground-truth semantics on ultimately periodic words: exact acceptance
// probabilities via the lasso-shaped Markov chain, lasso membership for
// classical automata, run counting, emptiness and non-universality witnesses,
// support enumeration and a seeded Monte-Carlo sampler.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "pbamb/automaton.hpp"
#include "pbamb/core.hpp"
#include "pbamb/patterns.hpp"

namespace pbamb {

// ---------------------------------------------------------------------------
// Exact linear algebra
// ---------------------------------------------------------------------------

/// Solves A x = b exactly. A must be nonsingular. Pivots are chosen among the
/// nonzero candidates by smallest bit size to limit coefficient growth.
inline std::vector<Rational> solve_linear_system(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t m = b.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = m;
        for (std::size_t r = col; r < m; ++r)
            if (!a[r][col].is_zero() && (pivot == m || a[r][col].bit_size() < a[pivot][col].bit_size()))
                pivot = r;
        if (pivot == m)
            throw std::logic_error("singular linear system");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        const Rational inv = Rational(1) / a[col][col];
        for (std::size_t c = col; c < m; ++c)
            a[col][c] *= inv;
        b[col] *= inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || a[r][col].is_zero())
                continue;
            const Rational f = a[r][col];
            for (std::size_t c = col; c < m; ++c)
                if (!a[col][c].is_zero())
                    a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    return b;
}

// ---------------------------------------------------------------------------
// Lasso chain
// ---------------------------------------------------------------------------

/// Finite Markov chain obtained by running a probabilistic automaton on uv^ω.
/// Nodes are the reachable (state, position) pairs.
struct LassoChain {
    struct Node {
        StateId state;
        std::uint32_t pos;
    };
    std::vector<Node> nodes;
    std::vector<std::vector<std::pair<NodeId, Rational>>> out;
    std::vector<std::pair<NodeId, Rational>> initial;
    std::vector<char> bottom;       // node lies in a bottom SCC
    std::vector<char> good_bottom;  // ... whose runs accept
    std::vector<char> fork;         // node's row has at least two successors

    Digraph graph() const {
        Digraph g(nodes.size());
        for (NodeId v = 0; v < nodes.size(); ++v)
            for (const auto& [w, p] : out[v])
                g.add_edge(v, w, 0);
        return g;
    }
};

inline LassoChain build_lasso_chain(const ProbAutomaton& a, const UpWord& w) {
    if (a.kind() == ProbKind::finite_word)
        throw PreconditionError(Precondition::wrong_kind, "finite-word automaton on an infinite word");
    if (w.period.empty())
        throw ValidationError("empty period");
    for (std::size_t i = 0; i < w.length(); ++i)
        if (w.at(i) >= a.alphabet().size())
            throw ValidationError("word symbol outside the alphabet");
    const std::size_t len = w.length();
    LassoChain c;
    std::vector<NodeId> index(a.num_states() * len, static_cast<NodeId>(-1));
    auto node = [&](StateId q, std::size_t pos) {
        NodeId& slot = index[q * len + pos];
        if (slot == static_cast<NodeId>(-1)) {
            slot = static_cast<NodeId>(c.nodes.size());
            c.nodes.push_back({q, static_cast<std::uint32_t>(pos)});
            c.out.emplace_back();
        }
        return slot;
    };
    for (const Branch& b : a.initial())
        c.initial.emplace_back(node(b.to, 0), b.prob);
    for (NodeId v = 0; v < c.nodes.size(); ++v) {
        const auto [q, pos] = c.nodes[v];
        const std::size_t next = w.next(pos);
        for (const Branch& b : a.row(q, w.at(pos))) {
            NodeId t = node(b.to, next);
            c.out[v].emplace_back(t, b.prob);
        }
        if (c.out[v].empty())
            throw ValidationError("automaton has an empty row");  // rows always sum to 1
    }
    const std::size_t m = c.nodes.size();
    c.fork.assign(m, 0);
    for (NodeId v = 0; v < m; ++v)
        c.fork[v] = static_cast<char>(c.out[v].size() > 1);

    Digraph g = c.graph();
    SccResult scc = tarjan_scc(g);
    c.bottom.assign(m, 0);
    c.good_bottom.assign(m, 0);
    const bool co = a.kind() == ProbKind::co_buchi;
    for (const auto& comp : scc.components) {
        bool closed = true, hits_f = false;
        for (NodeId v : comp) {
            hits_f = hits_f || a.is_accepting(c.nodes[v].state);
            for (const Edge& e : g.out(v))
                closed = closed && scc.component_of[e.to] == scc.component_of[v];
        }
        if (!closed)
            continue;
        for (NodeId v : comp) {
            c.bottom[v] = 1;
            c.good_bottom[v] = static_cast<char>(co ? !hits_f : hits_f);
        }
    }
    return c;
}

/// Exact probability that a run of `a` on uv^ω is accepting.
inline Rational acceptance_probability(const ProbAutomaton& a, const UpWord& w) {
    LassoChain c = build_lasso_chain(a, w);
    const std::size_t m = c.nodes.size();
    Digraph g = c.graph();
    NodeMask good(m, 0);
    for (NodeId v = 0; v < m; ++v)
        good[v] = c.good_bottom[v];
    NodeMask reach_good = can_reach(g, good);

    // Unknowns: transient nodes that can still reach a good bottom SCC.
    std::vector<std::int64_t> var(m, -1);
    std::vector<NodeId> vars;
    for (NodeId v = 0; v < m; ++v)
        if (reach_good[v] && !c.bottom[v]) {
            var[v] = static_cast<std::int64_t>(vars.size());
            vars.push_back(v);
        }
    auto value_of = [&](const std::vector<Rational>& x, NodeId v) -> Rational {
        if (c.good_bottom[v])
            return Rational(1);
        if (var[v] < 0)
            return Rational(0);
        return x[var[v]];
    };
    std::vector<Rational> x;
    if (!vars.empty()) {
        const std::size_t k = vars.size();
        std::vector<std::vector<Rational>> mat(k, std::vector<Rational>(k));
        std::vector<Rational> rhs(k);
        for (std::size_t i = 0; i < k; ++i) {
            mat[i][i] += Rational(1);
            for (const auto& [w2, p] : c.out[vars[i]]) {
                if (c.good_bottom[w2])
                    rhs[i] += p;
                else if (var[w2] >= 0)
                    mat[i][var[w2]] -= p;
            }
        }
        x = solve_linear_system(std::move(mat), std::move(rhs));
    }
    Rational total;
    for (const auto& [v, p] : c.initial)
        total += p * value_of(x, v);
    return total;
}

/// Probability that a finite-word automaton ends in F after reading `u`.
inline Rational pfa_acceptance(const ProbAutomaton& a, const std::vector<SymbolId>& u) {
    if (a.kind() != ProbKind::finite_word)
        throw PreconditionError(Precondition::wrong_kind, "pfa_acceptance needs a finite-word automaton");
    std::vector<Rational> dist(a.num_states());
    for (const Branch& b : a.initial())
        dist[b.to] = b.prob;
    for (SymbolId s : u) {
        if (s >= a.alphabet().size())
            throw ValidationError("word symbol outside the alphabet");
        std::vector<Rational> next(a.num_states());
        for (StateId q = 0; q < a.num_states(); ++q)
            if (!dist[q].is_zero())
                for (const Branch& b : a.row(q, s))
                    next[b.to] += dist[q] * b.prob;
        dist = std::move(next);
    }
    Rational total;
    for (StateId q : a.accepting())
        total += dist[q];
    return total;
}

// ---------------------------------------------------------------------------
// Classical automata on lasso words
// ---------------------------------------------------------------------------

namespace detail {
/// Product of an automaton with the position graph of uv^ω; node q*len+pos.
inline Digraph position_product(const NondetAutomaton& a, const UpWord& w) {
    const std::size_t len = w.length();
    Digraph g(a.num_states() * len);
    for (StateId q = 0; q < a.num_states(); ++q)
        for (std::size_t pos = 0; pos < len; ++pos)
            for (StateId r : a.successors(q, w.at(pos)))
                g.add_edge(static_cast<NodeId>(q * len + pos), static_cast<NodeId>(r * len + w.next(pos)), 0);
    return g;
}

inline void check_word(const Alphabet& sigma, const UpWord& w) {
    if (w.period.empty())
        throw ValidationError("empty period");
    for (std::size_t i = 0; i < w.length(); ++i)
        if (w.at(i) >= sigma.size())
            throw ValidationError("word symbol outside the alphabet");
}
}  // namespace detail

/// Some run of `a` on uv^ω satisfies its acceptance condition.
inline bool member_nondet(const NondetAutomaton& a, const UpWord& w) {
    detail::check_word(a.alphabet(), w);
    const std::size_t len = w.length();
    Digraph g = detail::position_product(a, w);
    std::vector<NodeId> init;
    for (StateId q : a.initials())
        init.push_back(static_cast<NodeId>(q * len));
    NodeMask reach = reachable_from(g, init);
    auto conds = good_cycle_conditions(a.acceptance(), g.size(), [&](NodeId v) { return static_cast<StateId>(v / len); });
    NodeMask good = good_nodes(g, reach, conds);
    for (NodeId v = 0; v < g.size(); ++v)
        if (good[v])
            return true;
    return false;
}

/// Two distinct accepting runs on uv^ω exist.
inline bool count_two_accepting_runs(const NondetAutomaton& a, const UpWord& w) {
    detail::check_word(a.alphabet(), w);
    const std::size_t n = a.num_states(), len = w.length();
    auto encode = [&](StateId x, StateId y, int b, std::size_t pos) {
        return static_cast<NodeId>(((x * n + y) * 2 + b) * len + pos);
    };
    Digraph g(n * n * 2 * len);
    for (StateId x = 0; x < n; ++x)
        for (StateId y = 0; y < n; ++y)
            for (int b = 0; b < 2; ++b)
                for (std::size_t pos = 0; pos < len; ++pos)
                    for (StateId x2 : a.successors(x, w.at(pos)))
                        for (StateId y2 : a.successors(y, w.at(pos)))
                            g.add_edge(encode(x, y, b, pos), encode(x2, y2, b || x2 != y2, w.next(pos)), 0);
    std::vector<NodeId> init;
    for (StateId i : a.initials())
        for (StateId j : a.initials())
            init.push_back(encode(i, j, i != j, 0));
    NodeMask scope = reachable_from(g, init);
    for (NodeId v = 0; v < g.size(); ++v)
        scope[v] = static_cast<char>(scope[v] && (v / len) % 2 == 1);
    auto conds = both_tracks_accept(
        a.acceptance(), g.size(), [&](NodeId v) { return static_cast<StateId>(v / len / 2 / n); },
        [&](NodeId v) { return static_cast<StateId>(v / len / 2 % n); }, scope);
    NodeMask good = good_nodes(g, scope, conds);
    for (NodeId v = 0; v < g.size(); ++v)
        if (good[v])
            return true;
    return false;
}

/// Accepted lasso word, or nothing when the language is empty. The witness is
/// re-checked with member_nondet.
inline std::optional<UpWord> is_empty_nba(const NondetAutomaton& a) {
    Digraph g = a.graph();
    auto lasso = find_lasso(g, a.initials(), good_cycle_conditions(a.acceptance(), g.size(), identity_state));
    if (!lasso)
        return std::nullopt;
    UpWord w{lasso->stem.labels, lasso->cycle.labels};
    if (!member_nondet(a, w))
        throw std::logic_error("emptiness witness failed membership replay");
    return w;
}

enum class NonUniversalMode { exp_ambiguous, flat };

/// Word accepted with probability < 1, found by guessing a rejecting run:
/// any rejecting cycle when there is no IDA_F pattern, a rejecting cycle of
/// probability-1 edges for flat automata. The witness is replayed through the
/// exact oracle.
inline std::optional<UpWord> non_universal_witness_almost_sure(const ProbAutomaton& pba, NonUniversalMode mode) {
    ProbAutomaton a = trim(pba);
    NondetAutomaton nba = underlying_nba(a);
    if (mode == NonUniversalMode::exp_ambiguous) {
        if (auto w = find_ida(nba, true))
            throw PreconditionError(Precondition::not_exponentially_ambiguous, format_witness(nba, *w));
    } else if (auto w = find_eda(nba, false)) {
        throw PreconditionError(Precondition::not_flat, format_witness(nba, *w));
    }
    Digraph full = a.graph();
    Digraph cycle_graph = full;
    if (mode == NonUniversalMode::flat) {
        cycle_graph = Digraph(a.num_states());
        for (const ProbTransition& t : a.transitions())
            if (t.prob.is_one())
                cycle_graph.add_edge(t.from, t.to, t.symbol);
    }
    auto bad = bad_cycle_conditions(classical_acceptance(a), a.num_states(), identity_state);
    auto lasso = find_lasso(full, cycle_graph, a.initial_support(), bad);
    if (!lasso)
        return std::nullopt;
    UpWord w{lasso->stem.labels, lasso->cycle.labels};
    if (!(acceptance_probability(a, w) < Rational(1)))
        throw std::logic_error("non-universality witness failed oracle replay");
    return w;
}

// ---------------------------------------------------------------------------
// Supports
// ---------------------------------------------------------------------------

struct SupportClassSet {
    std::vector<StateSet> supports;                      // discovery order
    std::vector<std::vector<SymbolId>> representatives;  // shortest word reaching each support
};

/// Closure of supp(μ0) under one-symbol successor supports.
inline SupportClassSet myhill_nerode_supports(const ProbAutomaton& a) {
    SupportClassSet res;
    std::map<StateSet, std::size_t> seen;
    res.supports.push_back(a.initial_support());
    res.representatives.emplace_back();
    seen.emplace(res.supports[0], 0);
    for (std::size_t i = 0; i < res.supports.size(); ++i)
        for (SymbolId x = 0; x < a.alphabet().size(); ++x) {
            StateSet t = support_successor(a, res.supports[i], x);
            if (seen.emplace(t, res.supports.size()).second) {
                auto word = res.representatives[i];
                word.push_back(x);
                res.supports.push_back(std::move(t));
                res.representatives.push_back(std::move(word));
            }
        }
    return res;
}

// ---------------------------------------------------------------------------
// Monte-Carlo sampling
// ---------------------------------------------------------------------------

struct MonteCarloResult {
    double estimate;
    double stderr_;
    double fork_tail;  // fraction of trajectories taking a fork in the tail window
};

/// Samples `runs` trajectories of `horizon` steps. A trajectory counts as
/// accepting when it ends inside an accepting bottom SCC of the lasso chain.
/// Stream i uses seed + i; results are summed in stream order.
inline MonteCarloResult monte_carlo(const ProbAutomaton& a, const UpWord& w, std::uint64_t runs,
                                    std::uint64_t horizon, std::uint64_t seed) {
    if (runs < 1)
        throw std::invalid_argument("runs must be at least 1");
    if (horizon < w.length())
        throw std::invalid_argument("horizon must be at least |u|+|v|");
    LassoChain c = build_lasso_chain(a, w);
    const std::size_t m = c.nodes.size();
    // Cumulative double tables for sampling.
    std::vector<std::vector<std::pair<double, NodeId>>> table(m);
    for (NodeId v = 0; v < m; ++v) {
        double acc = 0;
        for (const auto& [t, p] : c.out[v]) {
            acc += p.to_double();
            table[v].emplace_back(acc, t);
        }
    }
    std::vector<std::pair<double, NodeId>> init_table;
    {
        double acc = 0;
        for (const auto& [t, p] : c.initial) {
            acc += p.to_double();
            init_table.emplace_back(acc, t);
        }
    }
    auto pick = [](const std::vector<std::pair<double, NodeId>>& tab, double u) {
        for (const auto& [cum, t] : tab)
            if (u < cum)
                return t;
        return tab.back().second;  // rounding slack
    };
    const std::uint64_t tail = std::min<std::uint64_t>(horizon, w.period.size() * 10);
    constexpr std::uint64_t stream_size = 10000;
    std::uint64_t accepted = 0, forked = 0;
    for (std::uint64_t stream = 0, done = 0; done < runs; ++stream) {
        std::mt19937_64 rng(seed + stream);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const std::uint64_t batch = std::min(stream_size, runs - done);
        for (std::uint64_t r = 0; r < batch; ++r) {
            NodeId v = pick(init_table, unif(rng));
            bool tail_fork = false;
            for (std::uint64_t t = 0; t < horizon; ++t) {
                if (t >= horizon - tail && c.fork[v])
                    tail_fork = true;
                v = pick(table[v], unif(rng));
            }
            accepted += c.good_bottom[v];
            forked += tail_fork;
        }
        done += batch;
    }
    const double p = static_cast<double>(accepted) / static_cast<double>(runs);
    return {p, std::sqrt(p * (1 - p) / static_cast<double>(runs)), static_cast<double>(forked) / static_cast<double>(runs)};
}

}  // namespace pbamb
