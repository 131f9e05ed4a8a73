#pragma once

// Translations between classical and probabilistic ω-automata.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "pbamb/automaton.hpp"
#include "pbamb/core.hpp"
#include "pbamb/error.hpp"
#include "pbamb/patterns.hpp"

namespace pbamb {

namespace detail {

/// Incrementally numbered state names.
class StateTable {
public:
    StateId add(const std::string& name) {
        auto [it, fresh] = index_.emplace(name, static_cast<StateId>(names_.size()));
        if (fresh)
            names_.push_back(name);
        return it->second;
    }
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, StateId> index_;
};

inline void require_buchi_like(const ProbAutomaton& a, const char* what) {
    if (a.kind() != ProbKind::buchi && a.kind() != ProbKind::weak)
        throw PreconditionError(Precondition::wrong_kind,
                                std::string(what) + " needs a Büchi or weak automaton, got " + to_string(a.kind()));
}

inline std::string set_name(const ProbAutomaton& a, const StateSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i)
            out += ',';
        out += a.state_name(s[i]);
    }
    return out + "}";
}

}  // namespace detail

/// Embeds a deterministic Büchi automaton as a 0/1 PBA; missing transitions
/// lead to a fresh rejecting sink.
inline ProbAutomaton dba_to_pba(const NondetAutomaton& dba) {
    if (dba.acceptance().kind != AcceptanceKind::buchi)
        throw PreconditionError(Precondition::wrong_kind, "dba_to_pba needs Büchi acceptance");
    if (!is_deterministic(dba))
        throw PreconditionError(Precondition::not_deterministic, "automaton " + dba.name() + " is not deterministic");
    std::vector<std::string> names = dba.states().all();
    std::optional<StateId> sink;
    std::vector<ProbTransition> ts;
    for (StateId p = 0; p < dba.num_states(); ++p)
        for (SymbolId a = 0; a < dba.alphabet().size(); ++a) {
            auto succ = dba.successors(p, a);
            if (!succ.empty()) {
                ts.push_back({p, a, succ[0], Rational(1)});
                continue;
            }
            if (!sink) {
                sink = static_cast<StateId>(names.size());
                names.push_back(fresh_name("q_rej", dba.states().all()));
            }
            ts.push_back({p, a, *sink, Rational(1)});
        }
    if (sink)
        for (SymbolId a = 0; a < dba.alphabet().size(); ++a)
            ts.push_back({*sink, a, *sink, Rational(1)});
    return ProbAutomaton("dba2pba(" + dba.name() + ")", std::move(names), dba.alphabet(), ts,
                         {{dba.initials()[0], Rational(1)}}, dba.acceptance().sets[0], ProbKind::buchi, sink);
}

/// Unambiguous limit-deterministic Büchi automaton for a deterministic parity
/// automaton: a tilde copy guesses the least priority i seen infinitely often
/// and the moment to enter copy i, which keeps only states of priority >= i.
inline NondetAutomaton parity_to_unambiguous_ldba(const NondetAutomaton& dpa) {
    const Acceptance& acc = dpa.acceptance();
    if (acc.kind != AcceptanceKind::parity)
        throw PreconditionError(Precondition::wrong_kind, "parity_to_unambiguous_ldba needs parity acceptance");
    if (!is_deterministic(dpa))
        throw PreconditionError(Precondition::not_deterministic, "automaton " + dpa.name() + " is not deterministic");
    const std::size_t n = dpa.num_states();
    const int m = acc.max_priority();
    const auto& c = acc.priorities;
    // copy 0 is the tilde copy, copies 1..m the restricted ones
    auto id = [&](StateId q, int copy) { return static_cast<StateId>(copy * n + q); };
    std::vector<std::string> names;
    for (int copy = 0; copy <= m; ++copy)
        for (StateId q = 0; q < n; ++q)
            names.push_back(copy == 0 ? "~" + dpa.state_name(q) : dpa.state_name(q) + "^" + std::to_string(copy));
    std::vector<Transition> ts;
    for (const Transition& t : dpa.transitions()) {
        const StateId p = t.from, q = t.to;
        ts.push_back({id(p, 0), t.symbol, id(q, 0)});
        for (int j = c[p] + 1; j <= c[q]; ++j)
            ts.push_back({id(p, 0), t.symbol, id(q, j)});
        for (int i = 1; i <= m; ++i)
            if (c[p] >= i && c[q] >= i)
                ts.push_back({id(p, i), t.symbol, id(q, i)});
    }
    const StateId q0 = dpa.initials()[0];
    StateSet init{id(q0, 0)};
    for (int i = 1; i <= m; ++i)
        init.push_back(id(q0, i));
    StateSet f;
    for (StateId q = 0; q < n; ++q)
        if (c[q] % 2 == 0)
            f.push_back(id(q, c[q]));
    return NondetAutomaton("parity2ldba(" + dpa.name() + ")", std::move(names), dpa.alphabet(), std::move(ts),
                           std::move(init), Acceptance::buchi(std::move(f)));
}

/// Fork reachable from an accepting state, if any (limit-determinism check).
inline std::optional<Fork> fork_after_accepting(const NondetAutomaton& a) {
    if (a.acceptance().kind != AcceptanceKind::buchi)
        throw PreconditionError(Precondition::wrong_kind, "limit-determinism check needs Büchi acceptance");
    NodeMask after = reachable_from(a.graph(), a.acceptance().sets[0]);
    SccDecomposition scc = scc_decomposition(a);
    for (StateId p = 0; p < a.num_states(); ++p) {
        if (!after[p])
            continue;
        for (SymbolId s = 0; s < a.alphabet().size(); ++s) {
            auto succ = a.successors(p, s);
            if (succ.size() > 1)
                return Fork{p, s, succ[0], succ[1], scc.same(p, succ[0]) && scc.same(p, succ[1])};
        }
    }
    return std::nullopt;
}

/// Uniform probabilities on a limit-deterministic Büchi automaton. Empty rows
/// are routed to a fresh rejecting sink.
inline ProbAutomaton ldba_to_pba(const NondetAutomaton& ldba) {
    if (auto f = fork_after_accepting(ldba))
        throw PreconditionError(Precondition::not_limit_deterministic,
                                "fork at " + ldba.state_name(f->state) + " on " + ldba.alphabet().name(f->symbol) +
                                    " is reachable from an accepting state");
    if (ldba.initials().empty())
        throw PreconditionError(Precondition::empty_automaton, "no initial state");
    std::vector<std::string> names = ldba.states().all();
    std::optional<StateId> sink;
    std::vector<ProbTransition> ts;
    for (StateId p = 0; p < ldba.num_states(); ++p)
        for (SymbolId a = 0; a < ldba.alphabet().size(); ++a) {
            auto succ = ldba.successors(p, a);
            if (succ.empty()) {
                if (!sink) {
                    sink = static_cast<StateId>(names.size());
                    names.push_back(fresh_name("q_rej", ldba.states().all()));
                }
                ts.push_back({p, a, *sink, Rational(1)});
                continue;
            }
            const Rational share(1, static_cast<long>(succ.size()));
            for (StateId q : succ)
                ts.push_back({p, a, q, share});
        }
    if (sink)
        for (SymbolId a = 0; a < ldba.alphabet().size(); ++a)
            ts.push_back({*sink, a, *sink, Rational(1)});
    std::vector<Branch> mu;
    const Rational share(1, static_cast<long>(ldba.initials().size()));
    for (StateId q : ldba.initials())
        mu.push_back({q, share});
    return ProbAutomaton("ldba2pba(" + ldba.name() + ")", std::move(names), ldba.alphabet(), ts, mu,
                         ldba.acceptance().sets[0], ProbKind::buchi, sink);
}

/// NBA for the positive-semantics language of an at most countably ambiguous
/// PBA: copy n follows all positive edges and never accepts, copy d follows
/// only probability-1 edges and carries the accepting states.
inline NondetAutomaton positive_to_nba(const ProbAutomaton& pba) {
    detail::require_buchi_like(pba, "positive_to_nba");
    ProbAutomaton a = trim(pba);
    NondetAutomaton under = underlying_nba(a);
    if (auto w = find_eda(under, true))
        throw PreconditionError(Precondition::not_countably_ambiguous, format_witness(under, *w));
    const std::size_t n = under.num_states();
    std::vector<StateId> to_under(a.num_states(), static_cast<StateId>(-1));
    for (StateId q = 0; q < a.num_states(); ++q)
        if (auto u = under.states().find(a.state_name(q)))
            to_under[q] = *u;
    auto nid = [](StateId q) { return static_cast<StateId>(2 * q); };
    auto did = [](StateId q) { return static_cast<StateId>(2 * q + 1); };
    std::vector<std::string> names;
    for (StateId q = 0; q < n; ++q) {
        names.push_back("(" + under.state_name(q) + ",n)");
        names.push_back("(" + under.state_name(q) + ",d)");
    }
    std::vector<Transition> ts;
    for (const ProbTransition& t : a.transitions()) {
        const StateId p = to_under[t.from], q = to_under[t.to];
        if (p == static_cast<StateId>(-1) || q == static_cast<StateId>(-1))
            continue;
        ts.push_back({nid(p), t.symbol, nid(q)});
        ts.push_back({nid(p), t.symbol, did(q)});
        if (t.prob.is_one())
            ts.push_back({did(p), t.symbol, did(q)});
    }
    StateSet init;
    for (StateId q : under.initials())
        init.push_back(nid(q));
    StateSet f;
    for (StateId q : under.acceptance().sets[0])
        f.push_back(did(q));
    return NondetAutomaton("pos2nba(" + pba.name() + ")", std::move(names), pba.alphabet(), std::move(ts),
                           std::move(init), Acceptance::buchi(std::move(f)));
}

enum class AlmostSureMode { all_runs, flat };

/// Breakpoint DBA for the almost-sure language. Macrostate (S, T): T holds the
/// runs still owing a visit to F (all_runs) or the runs that could still be a
/// limit-deterministic rejecting run (flat); S holds the rest. Accepting iff
/// T is empty.
inline NondetAutomaton almost_sure_to_dba(const ProbAutomaton& pba, AlmostSureMode mode) {
    detail::require_buchi_like(pba, "almost_sure_to_dba");
    ProbAutomaton a = trim(pba);
    NondetAutomaton under = underlying_nba(a);
    if (mode == AlmostSureMode::all_runs) {
        if (auto w = find_ida(under, true))
            throw PreconditionError(Precondition::not_exponentially_ambiguous, format_witness(under, *w));
    } else if (auto w = find_eda(under, false)) {
        throw PreconditionError(Precondition::not_flat, format_witness(under, *w));
    }
    using Macro = std::pair<StateSet, StateSet>;
    std::map<Macro, StateId> index;
    std::vector<Macro> macros;
    std::vector<Transition> ts;
    auto intern = [&](Macro m) {
        auto [it, fresh] = index.emplace(m, static_cast<StateId>(macros.size()));
        if (fresh)
            macros.push_back(std::move(m));
        return it->second;
    };
    auto post = [&](const StateSet& s, SymbolId x) { return support_successor(a, s, x); };
    intern({{}, a.initial_support()});
    for (StateId id = 0; id < macros.size(); ++id) {
        for (SymbolId x = 0; x < a.alphabet().size(); ++x) {
            const auto [s, t] = macros[id];
            Macro next;
            if (t.empty()) {
                next = {{}, post(s, x)};
            } else {
                StateSet t2;
                if (mode == AlmostSureMode::all_runs) {
                    for (StateId q : post(t, x))
                        if (!a.is_accepting(q))
                            t2.push_back(q);
                } else {
                    for (StateId p : t)
                        for (const Branch& b : a.row(p, x))
                            if (b.prob.is_one() && !a.is_accepting(b.to))
                                t2.push_back(b.to);
                    normalize(t2);
                }
                StateSet both = s;
                both.insert(both.end(), t.begin(), t.end());
                normalize(both);
                StateSet s2;
                for (StateId q : post(both, x))
                    if (!contains(t2, q))
                        s2.push_back(q);
                next = {std::move(s2), std::move(t2)};
            }
            ts.push_back({id, x, intern(std::move(next))});
        }
    }
    std::vector<std::string> names;
    StateSet f;
    for (StateId id = 0; id < macros.size(); ++id) {
        names.push_back("<" + detail::set_name(a, macros[id].first) + "|" + detail::set_name(a, macros[id].second) +
                        ">");
        if (macros[id].second.empty())
            f.push_back(id);
    }
    const char* tag = mode == AlmostSureMode::all_runs ? "as2dba-all(" : "as2dba-flat(";
    return NondetAutomaton(tag + pba.name() + ")", std::move(names), a.alphabet(), std::move(ts), {0},
                           Acceptance::buchi(std::move(f)));
}

/// Adds an accepting sink entered initially with probability λ, so that the
/// value becomes λ + (1-λ)·value and ">λ" coincides with ">0".
inline ProbAutomaton positive_to_threshold(const ProbAutomaton& a, const Rational& lambda) {
    if (lambda.sign() <= 0 || lambda >= Rational(1))
        throw PreconditionError(Precondition::invalid_threshold, "lambda = " + lambda.str() + " not in (0,1)");
    std::vector<std::string> names = a.states().all();
    const StateId acc = static_cast<StateId>(names.size());
    names.push_back(fresh_name("q_acc", a.states().all()));
    std::vector<ProbTransition> ts = a.transitions();
    for (SymbolId x = 0; x < a.alphabet().size(); ++x)
        ts.push_back({acc, x, acc, Rational(1)});
    std::vector<Branch> mu{{acc, lambda}};
    for (const Branch& b : a.initial())
        mu.push_back({b.to, (Rational(1) - lambda) * b.prob});
    StateSet f = a.accepting();
    if (a.kind() != ProbKind::co_buchi)
        f.push_back(acc);
    return ProbAutomaton("pos2th(" + a.name() + ")", std::move(names), a.alphabet(), ts, mu, std::move(f), a.kind(),
                         a.rej_sink());
}

/// PWA with the same positive-semantics language as a PCA: a guess copy moves
/// to a verify copy with probability 1/2 per step; the verify copy forbids
/// the bad states (F) by routing them to a rejecting sink.
inline ProbAutomaton pca_to_pwa(const ProbAutomaton& pca) {
    if (pca.kind() != ProbKind::co_buchi)
        throw PreconditionError(Precondition::wrong_kind, "pca_to_pwa needs a co-Büchi automaton");
    ProbAutomaton a = trim(pca);
    const std::size_t n = a.num_states();
    detail::StateTable st;
    std::vector<StateId> g(n), v(n);
    for (StateId q = 0; q < n; ++q) {
        if (a.is_rej_sink(q))
            continue;
        g[q] = st.add("(" + a.state_name(q) + ",g)");
        v[q] = st.add("(" + a.state_name(q) + ",v)");
    }
    std::vector<std::string> taken;
    for (StateId q = 0; q < n; ++q)
        taken.push_back(a.state_name(q));
    taken.insert(taken.end(), st.names().begin(), st.names().end());
    const StateId rej = st.add(fresh_name("q_rej", taken));
    for (StateId q = 0; q < n; ++q)
        if (a.is_rej_sink(q))
            g[q] = v[q] = rej;

    std::map<std::tuple<StateId, SymbolId, StateId>, Rational> mass;
    const Rational half(1, 2);
    for (StateId p = 0; p < n; ++p) {
        if (a.is_rej_sink(p))
            continue;
        for (SymbolId x = 0; x < a.alphabet().size(); ++x)
            for (const Branch& b : a.row(p, x)) {
                mass[{g[p], x, g[b.to]}] += half * b.prob;
                mass[{g[p], x, v[b.to]}] += half * b.prob;
                const bool bad = a.is_accepting(b.to);  // F holds the bad states
                mass[{v[p], x, bad ? rej : v[b.to]}] += b.prob;
            }
    }
    std::vector<ProbTransition> ts;
    for (const auto& [key, p] : mass)
        ts.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), p});
    for (SymbolId x = 0; x < a.alphabet().size(); ++x)
        ts.push_back({rej, x, rej, Rational(1)});
    std::map<StateId, Rational> init;
    for (const Branch& b : a.initial())
        init[g[b.to]] += b.prob;
    std::vector<Branch> mu;
    for (const auto& [q, p] : init)
        mu.push_back({q, p});
    StateSet f;
    for (StateId q = 0; q < n; ++q)
        if (!a.is_rej_sink(q))
            f.push_back(v[q]);
    return ProbAutomaton("pca2pwa(" + pca.name() + ")", st.names(), a.alphabet(), ts, mu, std::move(f),
                         ProbKind::weak, rej);
}

enum class Semantics { positive, almost_sure, threshold };

inline const char* to_string(Semantics s) {
    switch (s) {
    case Semantics::positive: return "positive";
    case Semantics::almost_sure: return "almost-sure";
    case Semantics::threshold: return "threshold";
    }
    return "?";
}

/// Positive and almost-sure semantics are swapped by complementation; a
/// threshold λ becomes the complement-side threshold 1-λ (non-strict).
inline Semantics dual(Semantics s) {
    switch (s) {
    case Semantics::positive: return Semantics::almost_sure;
    case Semantics::almost_sure: return Semantics::positive;
    case Semantics::threshold: return Semantics::threshold;
    }
    return s;
}

/// Swaps accepting and rejecting states of a weak automaton; every run's
/// verdict flips, so the value on each word becomes 1 - value. Büchi-kind
/// input is accepted when its accepting set is a union of SCCs.
inline ProbAutomaton complement_pwa(const ProbAutomaton& pwa) {
    if (pwa.kind() != ProbKind::weak && !(pwa.kind() == ProbKind::buchi && is_weak(pwa)))
        throw PreconditionError(Precondition::not_weak, "complement_pwa needs a weak automaton");
    StateSet f;
    for (StateId q = 0; q < pwa.num_states(); ++q)
        if (!pwa.is_accepting(q))
            f.push_back(q);
    return ProbAutomaton("complement(" + pwa.name() + ")", pwa.states().all(), pwa.alphabet(), pwa.transitions(),
                         std::vector<Branch>(pwa.initial().begin(), pwa.initial().end()), std::move(f),
                         ProbKind::weak);
}

/// PWA over Σ ∪ {#} built from a PFA: from accepting PFA states '#' restarts
/// the PFA, from the others it enters q_#, which reaches the only accepting
/// state q_a with probability 1/2 on each further '#'. The separator symbol
/// is named "hash" ('#' starts a comment in the file format).
inline ProbAutomaton pfa_to_pwa_value1(const ProbAutomaton& pfa) {
    if (pfa.kind() != ProbKind::finite_word)
        throw PreconditionError(Precondition::wrong_kind, "pfa_to_pwa_value1 needs a finite-word automaton");
    std::vector<std::string> symbols = pfa.alphabet().symbols();
    const SymbolId hash = static_cast<SymbolId>(symbols.size());
    symbols.push_back(fresh_name("hash", pfa.alphabet().symbols()));
    std::vector<std::string> names = pfa.states().all();
    const StateId qh = static_cast<StateId>(names.size());
    names.push_back(fresh_name("q_hash", pfa.states().all()));
    const StateId qa = static_cast<StateId>(names.size());
    names.push_back(fresh_name("q_a", names));
    std::vector<ProbTransition> ts = pfa.transitions();
    for (StateId p = 0; p < pfa.num_states(); ++p) {
        if (pfa.is_accepting(p)) {
            for (const Branch& b : pfa.initial())
                ts.push_back({p, hash, b.to, b.prob});
        } else {
            ts.push_back({p, hash, qh, Rational(1)});
        }
    }
    for (SymbolId x = 0; x < hash; ++x) {
        ts.push_back({qh, x, qh, Rational(1)});
        ts.push_back({qa, x, qa, Rational(1)});
    }
    ts.push_back({qa, hash, qa, Rational(1)});
    ts.push_back({qh, hash, qh, Rational(1, 2)});
    ts.push_back({qh, hash, qa, Rational(1, 2)});
    return ProbAutomaton("pfa2pwa(" + pfa.name() + ")", std::move(names), Alphabet(std::move(symbols)), ts,
                         std::vector<Branch>(pfa.initial().begin(), pfa.initial().end()), {qa}, ProbKind::weak);
}

}  // namespace pbamb
