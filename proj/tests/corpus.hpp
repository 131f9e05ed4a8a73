#pragma once

// Shared test corpus: the example gadgets, embeddings of deterministic
// automata, parity-derived PBA and small hand-built PBA. `k` is an upper bound
// on the number of accepting runs per word, or 0 when the automaton is not
// finitely ambiguous.

#include <random>
#include <string>
#include <vector>

#include "pbamb/pbamb.hpp"

namespace corpus {

using namespace pbamb;

inline ProbAutomaton prob(const char* text) { return std::get<ProbAutomaton>(parse_automaton(text)); }
inline NondetAutomaton nondet(const char* text) { return std::get<NondetAutomaton>(parse_automaton(text)); }

struct Entry {
    ProbAutomaton automaton;
    int k;
};

/// Deterministic Büchi automaton for "infinitely many a".
inline NondetAutomaton dba_inf_a() {
    return nondet(R"(automaton inf_a
type: dba
alphabet: a b
states: s t
init: s
accepting: t
trans: s a t
trans: s b s
trans: t a t
trans: t b s
)");
}

/// Partial DBA: no factor bb, infinitely many b.
inline NondetAutomaton dba_no_bb() {
    return nondet(R"(automaton no_bb
type: dba
alphabet: a b
states: x y
init: x
accepting: y
trans: x a x
trans: x b y
trans: y a x
)");
}

/// Parity automata (min-even) over {a,b}.
inline std::vector<NondetAutomaton> parity_examples() {
    return {
        nondet(R"(automaton fin_b
type: dpa
alphabet: a b
states: p0 p1
init: p0
priorities: p0=2 p1=1
trans: p0 a p0
trans: p0 b p1
trans: p1 a p0
trans: p1 b p1
)"),
        nondet(R"(automaton inf_a_fin_bb
type: dpa
alphabet: a b
states: r0 r1 r2
init: r0
priorities: r0=1 r1=2 r2=1
trans: r0 a r1
trans: r0 b r0
trans: r1 a r1
trans: r1 b r2
trans: r2 a r1
trans: r2 b r0
)"),
        nondet(R"(automaton three_prio
type: dpa
alphabet: a b
states: u0 u1 u2
init: u0
priorities: u0=1 u1=2 u2=3
trans: u0 a u1
trans: u0 b u2
trans: u1 a u1
trans: u1 b u0
trans: u2 a u0
trans: u2 b u2
)"),
        nondet(R"(automaton four_prio
type: dpa
alphabet: a b
states: w1 w2 w3 w4
init: w1
priorities: w1=1 w2=2 w3=3 w4=4
trans: w1 a w2
trans: w1 b w3
trans: w2 a w4
trans: w2 b w1
trans: w3 a w3
trans: w3 b w4
trans: w4 a w4
trans: w4 b w2
)"),
        nondet(R"(automaton mixed_prio
type: dpa
alphabet: a b
states: z0 z1 z2
init: z0
priorities: z0=4 z1=1 z2=2
trans: z0 a z1
trans: z0 b z0
trans: z1 a z2
trans: z1 b z0
trans: z2 a z2
trans: z2 b z1
)"),
    };
}

inline std::vector<Entry> pbas() {
    std::vector<Entry> out;
    out.push_back({gadget_fig_a(), 0});
    out.push_back({gadget_p_lambda(Rational(1, 2)), 0});
    out.push_back({gadget_p_tilde_lambda(Rational(1, 2)), 0});
    out.push_back({dba_to_pba(dba_inf_a()), 1});
    out.push_back({dba_to_pba(dba_no_bb()), 1});
    auto parity = parity_examples();
    out.push_back({ldba_to_pba(parity_to_unambiguous_ldba(parity[0])), 0});
    out.push_back({ldba_to_pba(parity_to_unambiguous_ldba(parity[1])), 0});
    // Two deterministic branches, only the first can accept.
    out.push_back({prob(R"(automaton branches
type: pba
alphabet: a b
states: x y z q_rej
init: x=1/2 z=1/2
accepting: x
rejsink: q_rej
trans: x a x 1
trans: x b y 1
trans: y a x 1
trans: y b y 1
trans: z a z 1
trans: z b q_rej 1
trans: q_rej a q_rej 1
trans: q_rej b q_rej 1
)"),
                   1});
    // One split on the first a; at most two accepting runs.
    out.push_back({prob(R"(automaton split2
type: pba
alphabet: a b
states: q0 q1 q2 q3
init: q0=1
accepting: q1 q3
trans: q0 a q1 1/2
trans: q0 a q2 1/2
trans: q0 b q0 1
trans: q1 a q1 1
trans: q1 b q2 1
trans: q2 a q2 1
trans: q2 b q3 1
trans: q3 a q2 1
trans: q3 b q3 1
)"),
                   2});
    // Three-way split; at most three accepting runs.
    out.push_back({prob(R"(automaton split3
type: pba
alphabet: a b
states: q0 q1 q2 q3 q_rej
init: q0=1
accepting: q1 q2
rejsink: q_rej
trans: q0 a q1 1/3
trans: q0 a q2 1/3
trans: q0 a q3 1/3
trans: q0 b q0 1
trans: q1 a q1 1
trans: q1 b q1 1
trans: q2 a q2 1
trans: q2 b q_rej 1
trans: q3 a q3 1
trans: q3 b q1 1
trans: q_rej a q_rej 1
trans: q_rej b q_rej 1
)"),
                   3});
    // Flat and countably ambiguous: every a leaves with probability 1/2.
    out.push_back({prob(R"(automaton leak
type: pwa
alphabet: a b
states: q0 q1
init: q0=1
accepting: q1
trans: q0 a q0 1/2
trans: q0 a q1 1/2
trans: q0 b q0 1
trans: q1 a q1 1
trans: q1 b q1 1
)"),
                   0});
    // Exponentially ambiguous, no accepting EDA.
    out.push_back({prob(R"(automaton twin
type: pba
alphabet: a b
states: q0 q1 q2
init: q0=1
accepting: q2
trans: q0 a q0 1/2
trans: q0 a q1 1/2
trans: q0 b q2 1
trans: q1 a q0 1
trans: q1 b q2 1
trans: q2 a q2 1
trans: q2 b q2 1
)"),
                   0});
    // Weak automaton with uneven weights and a second initial state.
    out.push_back({prob(R"(automaton uneven
type: pwa
alphabet: a b
states: s0 s1 s2 q_rej
init: s0=2/3 s1=1/3
accepting: s2
rejsink: q_rej
trans: s0 a s2 1/4
trans: s0 a s0 3/4
trans: s0 b s1 1
trans: s1 a s1 1
trans: s1 b s2 2/3
trans: s1 b q_rej 1/3
trans: s2 a s2 1
trans: s2 b s2 1
trans: q_rej a q_rej 1
trans: q_rej b q_rej 1
)"),
                   0});
    return out;
}

/// Co-Büchi automata for the PCA to PWA translation.
inline std::vector<ProbAutomaton> pcas() {
    return {
        prob(R"(automaton pca_fin_visit
type: pca
alphabet: a b
states: q0 q1
init: q0=1
accepting: q1
trans: q0 a q0 1/2
trans: q0 a q1 1/2
trans: q0 b q0 1
trans: q1 a q1 1
trans: q1 b q0 1
)"),
        prob(R"(automaton pca_eventually_a
type: pca
alphabet: a b
states: c0 c1 c2
init: c0=1/2 c1=1/2
accepting: c1
trans: c0 a c0 1
trans: c0 b c1 1/3
trans: c0 b c2 2/3
trans: c1 a c0 1
trans: c1 b c1 1
trans: c2 a c2 1
trans: c2 b c1 1
)"),
    };
}

/// Finite-word automata for the value-1 translation.
inline std::vector<ProbAutomaton> pfas() {
    return {
        prob(R"(automaton pfa_half
type: pfa
alphabet: a b
states: f0 f1 f2
init: f0=1
accepting: f1
trans: f0 a f1 1/2
trans: f0 a f0 1/2
trans: f0 b f2 1
trans: f1 a f1 1
trans: f1 b f1 1
trans: f2 a f2 1
trans: f2 b f2 1
)"),
    };
}

/// Random Büchi automaton with `n` states over {a, b}; each possible edge is
/// present with probability `density`.
inline NondetAutomaton random_nba(std::mt19937_64& rng, std::size_t n, double density) {
    std::bernoulli_distribution edge(density), final(0.4);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back("r" + std::to_string(i));
    std::vector<Transition> ts;
    for (StateId p = 0; p < n; ++p)
        for (SymbolId x = 0; x < 2; ++x)
            for (StateId q = 0; q < n; ++q)
                if (edge(rng))
                    ts.push_back({p, x, q});
    StateSet f;
    for (StateId q = 0; q < n; ++q)
        if (final(rng))
            f.push_back(q);
    return NondetAutomaton("random", names, Alphabet({"a", "b"}), ts, {0}, Acceptance::buchi(f));
}

/// All words over the alphabet with length in [lo, hi].
inline std::vector<std::vector<SymbolId>> words(std::size_t sigma, std::size_t lo, std::size_t hi) {
    std::vector<std::vector<SymbolId>> out;
    std::vector<std::vector<SymbolId>> layer{{}};
    for (std::size_t len = 0; len <= hi; ++len) {
        if (len >= lo)
            out.insert(out.end(), layer.begin(), layer.end());
        std::vector<std::vector<SymbolId>> next;
        for (const auto& w : layer)
            for (SymbolId s = 0; s < sigma; ++s) {
                next.push_back(w);
                next.back().push_back(s);
            }
        layer = std::move(next);
    }
    return out;
}

/// All lasso words uv^ω with |u| <= max_u and 1 <= |v| <= max_v.
inline std::vector<UpWord> lassos(std::size_t sigma, std::size_t max_u, std::size_t max_v) {
    std::vector<UpWord> out;
    for (const auto& u : words(sigma, 0, max_u))
        for (const auto& v : words(sigma, 1, max_v))
            out.push_back({u, v});
    return out;
}

}  // namespace corpus
