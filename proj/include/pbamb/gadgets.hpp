#pragma once

// Example automata: a weak PBA with a non-regular threshold language, an
// uncountably ambiguous PBA family and a countably ambiguous, non-flat PWA
// family. Missing probability mass goes to the rejecting sink q_rej.

#include <algorithm>
#include <string>
#include <vector>

#include "pbamb/automaton.hpp"
#include "pbamb/error.hpp"

namespace pbamb {

namespace detail {
inline void check_open_unit(const Rational& lambda) {
    if (lambda.sign() <= 0 || lambda >= Rational(1))
        throw PreconditionError(Precondition::invalid_threshold, "lambda = " + lambda.str() + " not in (0,1)");
}

/// Small helper for hand-written probabilistic automata.
struct ProbSpec {
    std::vector<std::string> states;
    std::vector<std::string> symbols;
    std::vector<ProbTransition> trans;

    StateId q(const std::string& name) const {
        return static_cast<StateId>(std::find(states.begin(), states.end(), name) - states.begin());
    }
    SymbolId a(const std::string& name) const {
        return static_cast<SymbolId>(std::find(symbols.begin(), symbols.end(), name) - symbols.begin());
    }
    void add(const std::string& p, const std::string& x, const std::string& r, Rational prob) {
        trans.push_back({q(p), a(x), q(r), std::move(prob)});
    }
    void sink_loops(const std::string& s) {
        for (const auto& x : symbols)
            add(s, x, s, Rational(1));
    }
};
}  // namespace detail

/// Weak PBA accepting u$^ω with probability (1 - 2^-#a(u) + 2^-#b(u)) / 2.
inline ProbAutomaton gadget_fig_a() {
    detail::ProbSpec s{{"q_a", "q_b", "q_+", "q_$", "q_rej"}, {"a", "b", "$"}, {}};
    const Rational half(1, 2);
    s.add("q_a", "a", "q_a", half);
    s.add("q_a", "a", "q_+", half);
    s.add("q_a", "b", "q_a", 1);
    s.add("q_a", "$", "q_rej", 1);
    s.add("q_b", "a", "q_b", 1);
    s.add("q_b", "b", "q_b", half);
    s.add("q_b", "b", "q_rej", half);
    s.add("q_b", "$", "q_$", 1);
    s.add("q_+", "a", "q_+", 1);
    s.add("q_+", "b", "q_+", 1);
    s.add("q_+", "$", "q_$", 1);
    s.add("q_$", "$", "q_$", 1);
    s.add("q_$", "a", "q_rej", 1);
    s.add("q_$", "b", "q_rej", 1);
    s.sink_loops("q_rej");
    return ProbAutomaton("fig_a", s.states, Alphabet(s.symbols), s.trans, {{s.q("q_a"), half}, {s.q("q_b"), half}},
                         {s.q("q_$")}, ProbKind::weak, s.q("q_rej"));
}

/// PBA family with an EDA_F pattern at q_0 (uncountably ambiguous).
inline ProbAutomaton gadget_p_lambda(const Rational& lambda) {
    detail::check_open_unit(lambda);
    detail::ProbSpec s{{"q_0", "q_1", "q_rej"}, {"a", "b"}, {}};
    s.add("q_0", "a", "q_0", Rational(1) - lambda);
    s.add("q_0", "a", "q_1", lambda);
    s.add("q_0", "b", "q_rej", 1);
    s.add("q_1", "a", "q_1", 1);
    s.add("q_1", "b", "q_0", 1);
    s.sink_loops("q_rej");
    return ProbAutomaton("p_lambda", s.states, Alphabet(s.symbols), s.trans, {{s.q("q_0"), Rational(1)}},
                         {s.q("q_0")}, ProbKind::buchi, s.q("q_rej"));
}

/// PWA family with an accepting sink q_f: countably ambiguous and not flat.
inline ProbAutomaton gadget_p_tilde_lambda(const Rational& lambda) {
    detail::check_open_unit(lambda);
    detail::ProbSpec s{{"q_0", "q_1", "q_2", "q_f", "q_rej"}, {"a", "b"}, {}};
    const Rational rest = Rational(1) - lambda;
    s.add("q_0", "a", "q_1", lambda);
    s.add("q_0", "a", "q_2", rest);
    s.add("q_0", "b", "q_rej", 1);
    s.add("q_1", "a", "q_1", 1);
    s.add("q_1", "b", "q_0", 1);
    s.add("q_2", "a", "q_2", rest);
    s.add("q_2", "a", "q_1", lambda);
    s.add("q_2", "b", "q_f", 1);
    s.sink_loops("q_f");
    s.sink_loops("q_rej");
    return ProbAutomaton("p_tilde_lambda", s.states, Alphabet(s.symbols), s.trans, {{s.q("q_0"), Rational(1)}},
                         {s.q("q_f")}, ProbKind::weak, s.q("q_rej"));
}

}  // namespace pbamb
