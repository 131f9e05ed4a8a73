#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pbamb/automaton.hpp"
#include "pbamb/graph.hpp"

namespace pbamb {

// ---------------------------------------------------------------------------
// Acceptance conditions as cycle requirements on arbitrary node sets
// ---------------------------------------------------------------------------

/// Translates an acceptance condition into alternative cycle requirements on a
/// graph whose nodes project to automaton states via `state_of`. A run is
/// accepting iff the set of nodes it visits infinitely often satisfies one of
/// the alternatives.
template <class StateOf>
std::vector<CycleCondition> good_cycle_conditions(const Acceptance& acc, std::size_t n, StateOf state_of) {
    std::vector<CycleCondition> out;
    auto mask_of = [&](auto pred) {
        NodeMask m(n, 0);
        for (NodeId v = 0; v < n; ++v)
            m[v] = static_cast<char>(pred(state_of(v)));
        return m;
    };
    switch (acc.kind) {
    case AcceptanceKind::buchi: {
        const StateSet& f = acc.sets[0];
        out.push_back({{}, {mask_of([&](StateId q) { return contains(f, q); })}});
        break;
    }
    case AcceptanceKind::co_buchi: {
        const StateSet& f = acc.sets[0];
        out.push_back({mask_of([&](StateId q) { return !contains(f, q); }), {}});
        break;
    }
    case AcceptanceKind::generalized_buchi: {
        CycleCondition c;
        for (const StateSet& f : acc.sets)
            c.must_visit.push_back(mask_of([&](StateId q) { return contains(f, q); }));
        out.push_back(std::move(c));
        break;
    }
    case AcceptanceKind::parity: {
        std::set<int> seen(acc.priorities.begin(), acc.priorities.end());
        for (int i : seen)
            if (i % 2 == 0)
                out.push_back({mask_of([&](StateId q) { return acc.priorities[q] >= i; }),
                               {mask_of([&](StateId q) { return acc.priorities[q] == i; })}});
        break;
    }
    }
    return out;
}

/// Cycle requirements whose satisfaction makes a run rejecting.
template <class StateOf>
std::vector<CycleCondition> bad_cycle_conditions(const Acceptance& acc, std::size_t n, StateOf state_of) {
    switch (acc.kind) {
    case AcceptanceKind::buchi:
        return good_cycle_conditions(Acceptance::co_buchi(acc.sets[0]), n, state_of);
    case AcceptanceKind::co_buchi:
        return good_cycle_conditions(Acceptance::buchi(acc.sets[0]), n, state_of);
    case AcceptanceKind::generalized_buchi: {
        std::vector<CycleCondition> out;
        for (const StateSet& f : acc.sets) {
            auto c = good_cycle_conditions(Acceptance::co_buchi(f), n, state_of);
            out.insert(out.end(), c.begin(), c.end());
        }
        return out;
    }
    case AcceptanceKind::parity: {
        std::vector<int> shifted(acc.priorities);
        for (int& c : shifted)
            ++c;  // odd <-> even, order preserved
        return good_cycle_conditions(Acceptance::parity(std::move(shifted)), n, state_of);
    }
    }
    return {};
}

/// Acceptance of a probabilistic automaton viewed as a classical condition.
/// Weak automata are treated as Büchi automata.
inline Acceptance classical_acceptance(const ProbAutomaton& a) {
    if (a.kind() == ProbKind::co_buchi)
        return Acceptance::co_buchi(a.accepting());
    return Acceptance::buchi(a.accepting());
}

inline auto identity_state = [](NodeId v) { return static_cast<StateId>(v); };

/// States from which an accepting run can continue. For finite-word automata
/// this is "can reach a final state".
inline NodeMask useful_states(const NondetAutomaton& a) {
    Digraph g = a.graph();
    return can_reach(g, good_nodes(g, {}, good_cycle_conditions(a.acceptance(), g.size(), identity_state)));
}

inline NodeMask useful_states(const ProbAutomaton& a) {
    Digraph g = a.graph();
    NodeMask good(g.size(), 0);
    if (a.kind() == ProbKind::finite_word) {
        for (StateId q : a.accepting())
            good[q] = 1;
    } else {
        good = good_nodes(g, {}, good_cycle_conditions(classical_acceptance(a), g.size(), identity_state));
    }
    return can_reach(g, good);
}

// ---------------------------------------------------------------------------
// SCC decomposition
// ---------------------------------------------------------------------------

struct SccDecomposition {
    std::vector<std::uint32_t> component_of;
    std::vector<StateSet> components;  // topological order: sources first
    std::vector<std::pair<std::uint32_t, std::uint32_t>> dag_edges;
    std::vector<char> trivial;    // no cycle inside
    std::vector<char> accepting;  // nontrivial, and every run staying inside accepts
    std::vector<char> rejecting;  // no run staying inside accepts
    std::vector<char> useless;    // no accepting run can continue from here

    std::size_t size() const { return components.size(); }
    bool same(StateId p, StateId q) const { return component_of[p] == component_of[q]; }
};

namespace detail {
inline SccDecomposition decompose(const Digraph& g, const std::vector<CycleCondition>& good,
                                  const std::vector<CycleCondition>& bad, const NodeMask& useful,
                                  bool cycle_semantics) {
    SccResult raw = tarjan_scc(g);
    const std::size_t m = raw.components.size();
    SccDecomposition d;
    d.component_of.assign(g.size(), 0);
    for (std::size_t i = 0; i < m; ++i)
        d.components.push_back(raw.components[m - 1 - i]);  // Tarjan emits sinks first
    for (std::uint32_t c = 0; c < m; ++c)
        for (StateId q : d.components[c])
            d.component_of[q] = c;
    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (NodeId v = 0; v < g.size(); ++v)
        for (const Edge& e : g.out(v))
            if (d.component_of[v] != d.component_of[e.to])
                edges.emplace(d.component_of[v], d.component_of[e.to]);
    d.dag_edges.assign(edges.begin(), edges.end());

    NodeMask good_mask = good_nodes(g, {}, good);
    NodeMask bad_mask = good_nodes(g, {}, bad);
    d.trivial.assign(m, 0);
    d.accepting.assign(m, 0);
    d.rejecting.assign(m, 0);
    d.useless.assign(m, 0);
    for (std::uint32_t c = 0; c < m; ++c) {
        const auto& comp = d.components[c];
        d.trivial[c] = static_cast<char>(!is_nontrivial(g, comp));
        bool any_good = false, any_bad = false;
        for (StateId q : comp) {
            any_good = any_good || good_mask[q];
            any_bad = any_bad || bad_mask[q];
        }
        if (cycle_semantics) {
            d.accepting[c] = static_cast<char>(!d.trivial[c] && !any_bad);
            d.rejecting[c] = static_cast<char>(!any_good);
        } else {
            d.accepting[c] = static_cast<char>(any_good);
            d.rejecting[c] = static_cast<char>(!any_good);
        }
        d.useless[c] = static_cast<char>(!useful[comp.front()]);
    }
    return d;
}
}  // namespace detail

inline SccDecomposition scc_decomposition(const NondetAutomaton& a) {
    Digraph g = a.graph();
    return detail::decompose(g, good_cycle_conditions(a.acceptance(), g.size(), identity_state),
                             bad_cycle_conditions(a.acceptance(), g.size(), identity_state), useful_states(a), true);
}

/// Decomposition of the positive-probability graph (sink included).
inline SccDecomposition scc_decomposition(const ProbAutomaton& a) {
    Digraph g = a.graph();
    if (a.kind() == ProbKind::finite_word) {
        // Finite-word "accepting" components: those containing a final state.
        NodeMask f(g.size(), 0);
        for (StateId q : a.accepting())
            f[q] = 1;
        std::vector<CycleCondition> none;
        auto d = detail::decompose(g, none, none, useful_states(a), false);
        for (std::uint32_t c = 0; c < d.size(); ++c) {
            bool hit = std::any_of(d.components[c].begin(), d.components[c].end(), [&](StateId q) { return f[q]; });
            d.accepting[c] = static_cast<char>(hit);
            d.rejecting[c] = static_cast<char>(!hit);
        }
        return d;
    }
    Acceptance acc = classical_acceptance(a);
    return detail::decompose(g, good_cycle_conditions(acc, g.size(), identity_state),
                             bad_cycle_conditions(acc, g.size(), identity_state), useful_states(a), true);
}

// ---------------------------------------------------------------------------
// Structural predicates
// ---------------------------------------------------------------------------

inline bool is_deterministic(const NondetAutomaton& a) {
    if (a.initials().size() != 1)
        return false;
    for (StateId p = 0; p < a.num_states(); ++p)
        for (SymbolId s = 0; s < a.alphabet().size(); ++s)
            if (a.successors(p, s).size() > 1)
                return false;
    return true;
}

inline bool is_deterministic(const ProbAutomaton& a) {
    if (a.initial().size() != 1)
        return false;
    for (StateId p = 0; p < a.num_states(); ++p)
        for (SymbolId s = 0; s < a.alphabet().size(); ++s)
            if (a.row(p, s).size() > 1)
                return false;
    return true;
}

inline bool is_complete(const NondetAutomaton& a) {
    for (StateId p = 0; p < a.num_states(); ++p)
        for (SymbolId s = 0; s < a.alphabet().size(); ++s)
            if (a.successors(p, s).empty())
                return false;
    return !a.initials().empty();
}

namespace detail {
inline bool constant_on_sccs(const Digraph& g, const std::vector<int>& label) {
    SccResult scc = tarjan_scc(g);
    for (const auto& comp : scc.components)
        for (NodeId v : comp)
            if (label[v] != label[comp.front()])
                return false;
    return true;
}
}  // namespace detail

/// Every acceptance set (or priority class) is a union of SCCs.
inline bool is_weak(const NondetAutomaton& a) {
    Digraph g = a.graph();
    const Acceptance& acc = a.acceptance();
    if (acc.kind == AcceptanceKind::parity)
        return detail::constant_on_sccs(g, acc.priorities);
    for (const StateSet& f : acc.sets) {
        std::vector<int> label(a.num_states(), 0);
        for (StateId q : f)
            label[q] = 1;
        if (!detail::constant_on_sccs(g, label))
            return false;
    }
    return true;
}

inline bool is_weak(const ProbAutomaton& a) {
    std::vector<int> label(a.num_states(), 0);
    for (StateId q : a.accepting())
        label[q] = 1;
    return detail::constant_on_sccs(a.graph(), label);
}

/// A pair of distinct successors of `state` on `symbol`.
struct Fork {
    StateId state;
    SymbolId symbol;
    StateId first;
    StateId second;
    bool intra_scc;  // state, first and second share an SCC
    friend bool operator==(const Fork&, const Fork&) = default;
};

namespace detail {
template <class Succ>
std::vector<Fork> forks_of(std::size_t n, std::size_t k, const SccDecomposition& scc, Succ succ) {
    std::vector<Fork> out;
    for (StateId p = 0; p < n; ++p)
        for (SymbolId s = 0; s < k; ++s) {
            StateSet qs = succ(p, s);
            for (std::size_t i = 0; i < qs.size(); ++i)
                for (std::size_t j = i + 1; j < qs.size(); ++j)
                    out.push_back({p, s, qs[i], qs[j], scc.same(p, qs[i]) && scc.same(p, qs[j])});
        }
    return out;
}
}  // namespace detail

inline std::vector<Fork> forks(const NondetAutomaton& a) {
    return detail::forks_of(a.num_states(), a.alphabet().size(), scc_decomposition(a), [&](StateId p, SymbolId s) {
        auto r = a.successors(p, s);
        return StateSet(r.begin(), r.end());
    });
}

inline std::vector<Fork> forks(const ProbAutomaton& a) {
    return detail::forks_of(a.num_states(), a.alphabet().size(), scc_decomposition(a), [&](StateId p, SymbolId s) {
        StateSet out;
        for (const Branch& b : a.row(p, s))
            out.push_back(b.to);
        return out;
    });
}

/// Positive-probability successors of a state set on one symbol.
inline StateSet support_successor(const ProbAutomaton& a, const StateSet& s, SymbolId x) {
    StateSet out;
    for (StateId q : s)
        for (const Branch& b : a.row(q, x))
            out.push_back(b.to);
    normalize(out);
    return out;
}

// ---------------------------------------------------------------------------
// Trimming and the underlying automaton
// ---------------------------------------------------------------------------

/// Sub-automaton on the states in `keep` (original order preserved).
inline NondetAutomaton restrict_states(const NondetAutomaton& a, const NodeMask& keep, const std::string& name) {
    std::vector<StateId> remap(a.num_states(), static_cast<StateId>(-1));
    std::vector<std::string> names;
    for (StateId q = 0; q < a.num_states(); ++q)
        if (keep[q]) {
            remap[q] = static_cast<StateId>(names.size());
            names.push_back(a.state_name(q));
        }
    std::vector<Transition> ts;
    for (const Transition& t : a.transitions())
        if (keep[t.from] && keep[t.to])
            ts.push_back({remap[t.from], t.symbol, remap[t.to]});
    StateSet init;
    for (StateId q : a.initials())
        if (keep[q])
            init.push_back(remap[q]);
    Acceptance acc = a.acceptance();
    for (auto& f : acc.sets) {
        StateSet g;
        for (StateId q : f)
            if (keep[q])
                g.push_back(remap[q]);
        f = std::move(g);
    }
    if (acc.kind == AcceptanceKind::parity) {
        std::vector<int> c;
        for (StateId q = 0; q < a.num_states(); ++q)
            if (keep[q])
                c.push_back(acc.priorities[q]);
        acc.priorities = std::move(c);
    }
    return NondetAutomaton(name, std::move(names), a.alphabet(), std::move(ts), std::move(init), std::move(acc));
}

/// Removes unreachable states and useless SCCs.
/// Throws PreconditionError(empty_automaton) if nothing useful remains.
inline NondetAutomaton trim(const NondetAutomaton& a) {
    Digraph g = a.graph();
    NodeMask reach = reachable_from(g, a.initials());
    NodeMask useful = useful_states(a);
    NodeMask keep(a.num_states(), 0);
    bool any = false;
    for (StateId q = 0; q < a.num_states(); ++q) {
        keep[q] = static_cast<char>(reach[q] && useful[q]);
        any = any || keep[q];
    }
    if (!any)
        throw PreconditionError(Precondition::empty_automaton, "automaton " + a.name() + " has no useful state");
    return restrict_states(a, keep, a.name());
}

inline bool is_self_loop_sink(const ProbAutomaton& a, StateId s) {
    for (SymbolId x = 0; x < a.alphabet().size(); ++x) {
        auto r = a.row(s, x);
        if (r.size() != 1 || r[0].to != s)
            return false;
    }
    return true;
}

/// Removes unreachable states and collapses all useless SCCs into one
/// rejecting sink that absorbs their incoming probability mass.
inline ProbAutomaton trim(const ProbAutomaton& a) {
    const std::size_t n = a.num_states();
    const std::size_t k = a.alphabet().size();
    Digraph g = a.graph();
    NodeMask reach = reachable_from(g, a.initial_support());
    NodeMask useful = useful_states(a);
    std::vector<StateId> useless_reached;
    for (StateId q = 0; q < n; ++q)
        if (reach[q] && !useful[q])
            useless_reached.push_back(q);

    const bool reuse = useless_reached.size() == 1 && is_self_loop_sink(a, useless_reached[0]);
    const bool need_sink = !useless_reached.empty();

    constexpr StateId dropped = static_cast<StateId>(-1);
    std::vector<StateId> remap(n, dropped);
    std::vector<std::string> names;
    std::optional<StateId> sink;
    for (StateId q = 0; q < n; ++q) {
        if (reach[q] && useful[q]) {
            remap[q] = static_cast<StateId>(names.size());
            names.push_back(a.state_name(q));
        } else if (reuse && q == useless_reached[0]) {
            sink = static_cast<StateId>(names.size());
            remap[q] = *sink;
            names.push_back(a.state_name(q));
        }
    }
    if (need_sink && !reuse) {
        sink = static_cast<StateId>(names.size());
        names.push_back(fresh_name("q_rej", a.states().all()));
    }
    auto target = [&](StateId q) { return (reach[q] && useful[q]) ? remap[q] : *sink; };

    std::vector<ProbTransition> ts;
    for (StateId p = 0; p < n; ++p) {
        if (!(reach[p] && useful[p]))
            continue;
        for (SymbolId x = 0; x < k; ++x) {
            std::map<StateId, Rational> row;
            for (const Branch& b : a.row(p, x))
                row[target(b.to)] += b.prob;
            for (auto& [q, pr] : row)
                ts.push_back({remap[p], x, q, pr});
        }
    }
    if (sink)
        for (SymbolId x = 0; x < k; ++x)
            ts.push_back({*sink, x, *sink, Rational(1)});
    std::map<StateId, Rational> init;
    for (const Branch& b : a.initial())
        init[target(b.to)] += b.prob;
    std::vector<Branch> mu;
    for (auto& [q, pr] : init)
        mu.push_back({q, pr});
    StateSet acc;
    for (StateId q : a.accepting())
        if (remap[q] != dropped && (!sink || remap[q] != *sink))
            acc.push_back(remap[q]);
    if (sink && a.kind() == ProbKind::co_buchi)
        acc.push_back(*sink);  // bad state for co-Büchi
    return ProbAutomaton(a.name(), std::move(names), a.alphabet(), ts, mu, std::move(acc), a.kind(), sink);
}

/// Positive-probability edges, support of μ0, rejecting sink removed.
inline NondetAutomaton underlying_nba(const ProbAutomaton& a) {
    if (a.kind() == ProbKind::finite_word)
        throw PreconditionError(Precondition::wrong_kind, "underlying ω-automaton of a finite-word automaton");
    NodeMask keep(a.num_states(), 1);
    if (a.rej_sink())
        keep[*a.rej_sink()] = 0;
    std::vector<StateId> remap(a.num_states(), 0);
    std::vector<std::string> names;
    for (StateId q = 0; q < a.num_states(); ++q)
        if (keep[q]) {
            remap[q] = static_cast<StateId>(names.size());
            names.push_back(a.state_name(q));
        }
    std::vector<Transition> ts;
    for (const ProbTransition& t : a.transitions())
        if (keep[t.from] && keep[t.to])
            ts.push_back({remap[t.from], t.symbol, remap[t.to]});
    StateSet init;
    for (const Branch& b : a.initial())
        if (keep[b.to])
            init.push_back(remap[b.to]);
    StateSet f;
    for (StateId q : a.accepting())
        if (keep[q])
            f.push_back(remap[q]);
    Acceptance acc = a.kind() == ProbKind::co_buchi ? Acceptance::co_buchi(std::move(f)) : Acceptance::buchi(std::move(f));
    return NondetAutomaton(a.name(), std::move(names), a.alphabet(), std::move(ts), std::move(init), std::move(acc));
}

}  // namespace pbamb
