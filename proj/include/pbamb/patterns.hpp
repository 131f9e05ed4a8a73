#pragma once

// Ambiguity patterns (IDA, IDA_F, EDA, EDA_F) detected with synchronized
// product constructions, the resulting ambiguity classification, and the
// hierarchical/simple PBA checks.

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "pbamb/automaton.hpp"
#include "pbamb/core.hpp"

namespace pbamb {

enum class Pattern { ida, ida_f, eda, eda_f };

inline const char* to_string(Pattern p) {
    switch (p) {
    case Pattern::ida: return "IDA";
    case Pattern::ida_f: return "IDA_F";
    case Pattern::eda: return "EDA";
    case Pattern::eda_f: return "EDA_F";
    }
    return "?";
}

/// IDA-style: p ->v p, p ->v q, q ->v q with p != q.
/// EDA-style: two different paths p ->v p (q == p).
struct PatternWitness {
    Pattern pattern;
    StateId p;
    StateId q;
    std::vector<SymbolId> word;
};

inline std::string format_witness(const NondetAutomaton& a, const PatternWitness& w) {
    std::string s = std::string(to_string(w.pattern)) + " p=" + a.state_name(w.p);
    if (w.pattern == Pattern::ida || w.pattern == Pattern::ida_f)
        s += " q=" + a.state_name(w.q);
    return s + " v=" + format_symbols(a.alphabet(), w.word);
}

/// States that count as "accepting" for the F-variants of the patterns:
/// F for Büchi, Q \ F for co-Büchi (runs accept by staying there), and the
/// states on accepting cycles for generalized Büchi and parity conditions.
inline NodeMask pattern_final_states(const NondetAutomaton& a) {
    const Acceptance& acc = a.acceptance();
    NodeMask m(a.num_states(), 0);
    switch (acc.kind) {
    case AcceptanceKind::buchi:
        for (StateId q : acc.sets[0])
            m[q] = 1;
        break;
    case AcceptanceKind::co_buchi:
        for (StateId q = 0; q < a.num_states(); ++q)
            m[q] = static_cast<char>(!contains(acc.sets[0], q));
        break;
    case AcceptanceKind::generalized_buchi:
    case AcceptanceKind::parity: {
        Digraph g = a.graph();
        m = good_nodes(g, {}, good_cycle_conditions(acc, g.size(), identity_state));
        break;
    }
    }
    return m;
}

/// Reachable states from which an accepting run can continue.
inline NodeMask live_states(const NondetAutomaton& a) {
    NodeMask reach = reachable_from(a.graph(), a.initials());
    NodeMask useful = useful_states(a);
    for (StateId q = 0; q < a.num_states(); ++q)
        reach[q] = static_cast<char>(reach[q] && useful[q]);
    return reach;
}

namespace detail {

/// BFS over an implicit product whose nodes are encoded as integers. Returns
/// the label sequence of the first path reaching `target` from `source`
/// (at least one step), exploring successors in the order produced by `expand`.
template <class Expand>
std::optional<std::vector<SymbolId>> implicit_bfs(std::uint64_t source, std::uint64_t target,
                                                  std::vector<std::uint32_t>& stamp, std::uint32_t gen,
                                                  std::vector<std::uint64_t>& parent,
                                                  std::vector<SymbolId>& via, Expand expand) {
    std::deque<std::uint64_t> queue{source};
    stamp[source] = gen;
    bool found = false;
    std::uint64_t hit_parent = 0;
    SymbolId hit_symbol = 0;
    while (!queue.empty() && !found) {
        std::uint64_t v = queue.front();
        queue.pop_front();
        expand(v, [&](SymbolId s, std::uint64_t w) {
            if (found)
                return;
            if (w == target) {
                found = true;
                hit_parent = v;
                hit_symbol = s;
                return;
            }
            if (stamp[w] != gen) {
                stamp[w] = gen;
                parent[w] = v;
                via[w] = s;
                queue.push_back(w);
            }
        });
    }
    if (!found)
        return std::nullopt;
    std::vector<SymbolId> word{hit_symbol};
    for (std::uint64_t v = hit_parent; v != source; v = parent[v])
        word.push_back(via[v]);
    std::reverse(word.begin(), word.end());
    return word;
}

}  // namespace detail

/// IDA search via the synchronized triple product: a witness exists iff
/// (p,p,q) ->* (p,q,q) for live p != q (q accepting if required).
inline std::optional<PatternWitness> find_ida(const NondetAutomaton& a, bool require_accepting_q) {
    const std::size_t n = a.num_states();
    const std::size_t k = a.alphabet().size();
    NodeMask live = live_states(a);
    NodeMask fin = pattern_final_states(a);
    const std::uint64_t n2 = n * n, n3 = n2 * n;
    std::vector<std::uint32_t> stamp(n3, 0);
    std::vector<std::uint64_t> parent(n3, 0);
    std::vector<SymbolId> via(n3, 0);
    std::uint32_t gen = 0;
    auto expand = [&](std::uint64_t v, auto&& emit) {
        const StateId x = static_cast<StateId>(v / n2), y = static_cast<StateId>(v / n % n),
                      z = static_cast<StateId>(v % n);
        for (SymbolId s = 0; s < k; ++s)
            for (StateId x2 : a.successors(x, s))
                if (live[x2])
                    for (StateId y2 : a.successors(y, s))
                        if (live[y2])
                            for (StateId z2 : a.successors(z, s))
                                if (live[z2])
                                    emit(s, x2 * n2 + y2 * n + z2);
    };
    for (StateId p = 0; p < n; ++p) {
        if (!live[p])
            continue;
        for (StateId q = 0; q < n; ++q) {
            if (q == p || !live[q] || (require_accepting_q && !fin[q]))
                continue;
            auto word = detail::implicit_bfs(p * n2 + p * n + q, p * n2 + q * n + q, stamp, ++gen, parent, via,
                                             expand);
            if (word)
                return PatternWitness{require_accepting_q ? Pattern::ida_f : Pattern::ida, p, q, std::move(*word)};
        }
    }
    return std::nullopt;
}

/// EDA search via the pair product with a divergence bit: a witness exists
/// iff (p,p,0) ->+ (p,p,1) for some live p (accepting if required).
inline std::optional<PatternWitness> find_eda(const NondetAutomaton& a, bool require_accepting_p) {
    const std::size_t n = a.num_states();
    const std::size_t k = a.alphabet().size();
    NodeMask live = live_states(a);
    NodeMask fin = pattern_final_states(a);
    const std::uint64_t space = n * n * 2;
    std::vector<std::uint32_t> stamp(space, 0);
    std::vector<std::uint64_t> parent(space, 0);
    std::vector<SymbolId> via(space, 0);
    std::uint32_t gen = 0;
    auto encode = [&](StateId x, StateId y, int b) { return (static_cast<std::uint64_t>(x) * n + y) * 2 + b; };
    auto expand = [&](std::uint64_t v, auto&& emit) {
        const int b = static_cast<int>(v % 2);
        const StateId x = static_cast<StateId>(v / 2 / n), y = static_cast<StateId>(v / 2 % n);
        for (SymbolId s = 0; s < k; ++s)
            for (StateId x2 : a.successors(x, s))
                if (live[x2])
                    for (StateId y2 : a.successors(y, s))
                        if (live[y2])
                            emit(s, encode(x2, y2, b || x2 != y2));
    };
    for (StateId p = 0; p < n; ++p) {
        if (!live[p] || (require_accepting_p && !fin[p]))
            continue;
        auto word = detail::implicit_bfs(encode(p, p, 0), encode(p, p, 1), stamp, ++gen, parent, via, expand);
        if (word)
            return PatternWitness{require_accepting_p ? Pattern::eda_f : Pattern::eda, p, p, std::move(*word)};
    }
    return std::nullopt;
}

/// Number of distinct paths from `from` to `to` reading `word`, saturated at 2.
inline int count_paths(const NondetAutomaton& a, StateId from, StateId to, const std::vector<SymbolId>& word) {
    std::vector<int> cnt(a.num_states(), 0);
    cnt[from] = 1;
    for (SymbolId s : word) {
        std::vector<int> next(a.num_states(), 0);
        for (StateId x = 0; x < a.num_states(); ++x)
            if (cnt[x])
                for (StateId y : a.successors(x, s))
                    next[y] = std::min(2, next[y] + cnt[x]);
        cnt = std::move(next);
    }
    return cnt[to];
}

/// Replays a witness word and checks the claimed loops/paths.
inline bool witness_holds(const NondetAutomaton& a, const PatternWitness& w) {
    if (w.word.empty())
        return false;
    NodeMask fin = pattern_final_states(a);
    switch (w.pattern) {
    case Pattern::ida_f:
        if (!fin[w.q])
            return false;
        [[fallthrough]];
    case Pattern::ida:
        return w.p != w.q && count_paths(a, w.p, w.p, w.word) > 0 && count_paths(a, w.p, w.q, w.word) > 0 &&
               count_paths(a, w.q, w.q, w.word) > 0;
    case Pattern::eda_f:
        if (!fin[w.p])
            return false;
        [[fallthrough]];
    case Pattern::eda:
        return count_paths(a, w.p, w.p, w.word) >= 2;
    }
    return false;
}

/// Pair product used for unambiguity checks. Node (x, y, b): tracks in x and
/// y, b = 1 once the tracks have diverged.
struct PairProduct {
    Digraph graph;
    std::size_t n;
    std::vector<NodeId> initial;
    NodeId encode(StateId x, StateId y, int b) const { return static_cast<NodeId>((x * n + y) * 2 + b); }
    StateId first(NodeId v) const { return static_cast<StateId>(v / 2 / n); }
    StateId second(NodeId v) const { return static_cast<StateId>(v / 2 % n); }
    int bit(NodeId v) const { return static_cast<int>(v % 2); }
};

inline PairProduct pair_product(const NondetAutomaton& a) {
    PairProduct pp{Digraph(a.num_states() * a.num_states() * 2), a.num_states(), {}};
    for (StateId x = 0; x < pp.n; ++x)
        for (StateId y = 0; y < pp.n; ++y)
            for (int b = 0; b < 2; ++b)
                for (SymbolId s = 0; s < a.alphabet().size(); ++s)
                    for (StateId x2 : a.successors(x, s))
                        for (StateId y2 : a.successors(y, s))
                            pp.graph.add_edge(pp.encode(x, y, b), pp.encode(x2, y2, b || x2 != y2), s);
    for (StateId i : a.initials())
        for (StateId j : a.initials())
            pp.initial.push_back(pp.encode(i, j, i != j));
    return pp;
}

/// Acceptance of both tracks of a pair-like product, restricted to `scope`.
/// Each combination of an alternative for the first and for the second track
/// yields one cycle condition.
template <class First, class Second>
std::vector<CycleCondition> both_tracks_accept(const Acceptance& acc, std::size_t size, First first, Second second,
                                               const NodeMask& scope) {
    auto c1 = good_cycle_conditions(acc, size, first);
    auto c2 = good_cycle_conditions(acc, size, second);
    std::vector<CycleCondition> out;
    for (const auto& x : c1)
        for (const auto& y : c2) {
            CycleCondition c;
            c.allowed = intersect(intersect(x.allowed, y.allowed, size), scope, size);
            c.must_visit = x.must_visit;
            c.must_visit.insert(c.must_visit.end(), y.must_visit.begin(), y.must_visit.end());
            out.push_back(std::move(c));
        }
    return out;
}

struct UnambiguityResult {
    bool unambiguous;
    std::optional<UpWord> witness;  // word with two accepting runs
};

/// Two distinct accepting runs on some uv^ω exist iff the pair product has a
/// reachable lasso in the diverged half where both tracks accept.
inline UnambiguityResult is_unambiguous(const NondetAutomaton& a) {
    PairProduct pp = pair_product(a);
    const std::size_t size = pp.graph.size();
    NodeMask diverged(size, 0);
    for (NodeId v = 0; v < size; ++v)
        diverged[v] = static_cast<char>(pp.bit(v));
    auto conds = both_tracks_accept(
        a.acceptance(), size, [&](NodeId v) { return pp.first(v); }, [&](NodeId v) { return pp.second(v); },
        diverged);
    auto lasso = find_lasso(pp.graph, pp.initial, conds);
    if (!lasso)
        return {true, std::nullopt};
    return {false, UpWord{lasso->stem.labels, lasso->cycle.labels}};
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class AmbiguityClass { finite, polynomial, exponential, countable, uncountable };

inline const char* to_string(AmbiguityClass c) {
    switch (c) {
    case AmbiguityClass::finite: return "finite";
    case AmbiguityClass::polynomial: return "polynomial";
    case AmbiguityClass::exponential: return "exponential";
    case AmbiguityClass::countable: return "countable";
    case AmbiguityClass::uncountable: return "uncountable";
    }
    return "?";
}

struct Classification {
    explicit Classification(NondetAutomaton a) : analysed(std::move(a)) {}

    NondetAutomaton analysed;  // trimmed (underlying) NBA the witnesses refer to
    std::optional<PatternWitness> ida, ida_f, eda, eda_f;
    AmbiguityClass ambiguity = AmbiguityClass::finite;
    bool flat = true;
    bool weak = false;
    bool unambiguous = true;
    std::optional<UpWord> ambiguity_witness;
    std::optional<bool> hpba;  // probabilistic inputs only
    std::optional<bool> spba;
};

inline AmbiguityClass ambiguity_class(bool ida, bool ida_f, bool eda, bool eda_f) {
    if (eda_f)
        return AmbiguityClass::uncountable;
    if (ida_f)
        return AmbiguityClass::countable;
    if (eda)
        return AmbiguityClass::exponential;
    if (ida)
        return AmbiguityClass::polynomial;
    return AmbiguityClass::finite;
}

namespace detail {
inline NondetAutomaton trim_or_keep(const NondetAutomaton& a) {
    try {
        return trim(a);
    } catch (const PreconditionError&) {
        return a;  // empty language: every pattern search comes back empty
    }
}

inline Classification classify_trimmed(NondetAutomaton nba, bool weak) {
    Classification c(std::move(nba));
    c.ida = find_ida(c.analysed, false);
    c.ida_f = c.ida ? find_ida(c.analysed, true) : std::nullopt;
    c.eda = find_eda(c.analysed, false);
    c.eda_f = c.eda ? find_eda(c.analysed, true) : std::nullopt;
    c.ambiguity = ambiguity_class(c.ida.has_value(), c.ida_f.has_value(), c.eda.has_value(), c.eda_f.has_value());
    c.flat = !c.eda;
    c.weak = weak;
    auto u = is_unambiguous(c.analysed);
    c.unambiguous = u.unambiguous;
    c.ambiguity_witness = u.witness;
    return c;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Hierarchical and simple PBA
// ---------------------------------------------------------------------------

struct HpbaResult {
    bool hpba;
    std::optional<Fork> violation;  // intra-SCC pair of successors
};

/// Unique initial state, and no (p, a) with two successors in p's SCC.
/// Successors in other SCCs can always be ranked strictly higher via a
/// topological numbering of the condensation.
inline HpbaResult is_hpba(const ProbAutomaton& a) {
    SccDecomposition scc = scc_decomposition(a);
    for (StateId p = 0; p < a.num_states(); ++p)
        for (SymbolId s = 0; s < a.alphabet().size(); ++s) {
            std::optional<StateId> first;
            for (const Branch& b : a.row(p, s)) {
                if (!scc.same(p, b.to))
                    continue;
                if (first)
                    return {false, Fork{p, s, *first, b.to, true}};
                first = b.to;
            }
        }
    return {a.initial().size() == 1, std::nullopt};
}

/// Two-level HPBA with every accepting state on level 0. Level 1 is taken as
/// the largest successor-closed set of deterministic non-accepting states;
/// enlarging level 1 only weakens the level-0 condition.
inline bool is_spba(const ProbAutomaton& a) {
    if (!is_hpba(a).hpba)
        return false;
    const std::size_t n = a.num_states(), k = a.alphabet().size();
    std::vector<char> upper(n, 1);
    for (StateId q : a.accepting())
        upper[q] = 0;
    if (a.kind() == ProbKind::co_buchi) {
        // Accepting states of a co-Büchi automaton are the non-F states.
        for (StateId q = 0; q < n; ++q)
            upper[q] = static_cast<char>(a.is_accepting(q));
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (StateId q = 0; q < n; ++q) {
            if (!upper[q])
                continue;
            bool ok = true;
            for (SymbolId s = 0; s < k && ok; ++s) {
                auto r = a.row(q, s);
                ok = r.size() <= 1;
                for (const Branch& b : r)
                    ok = ok && upper[b.to];
            }
            if (!ok) {
                upper[q] = 0;
                changed = true;
            }
        }
    }
    for (StateId p = 0; p < n; ++p) {
        if (upper[p])
            continue;
        for (SymbolId s = 0; s < k; ++s) {
            int same = 0;
            for (const Branch& b : a.row(p, s))
                same += !upper[b.to];
            if (same > 1)
                return false;
        }
    }
    return true;
}

inline Classification classify(const NondetAutomaton& a) {
    return detail::classify_trimmed(detail::trim_or_keep(a), is_weak(a));
}

/// Probabilistic inputs are trimmed and analysed through their underlying NBA.
inline Classification classify(const ProbAutomaton& a) {
    ProbAutomaton t = trim(a);
    Classification c = detail::classify_trimmed(underlying_nba(t), is_weak(t));
    c.hpba = is_hpba(t).hpba;
    c.spba = is_spba(t);
    return c;
}

inline bool is_flat(const ProbAutomaton& a) { return !find_eda(underlying_nba(trim(a)), false); }

}  // namespace pbamb
