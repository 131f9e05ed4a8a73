#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "corpus.hpp"
#include "oracles.hpp"

using namespace pbamb;

namespace {

UpWord word(const Alphabet& sigma, std::string_view u, std::string_view v) { return make_word(sigma, u, v); }

/// 1/2 * (1 - 2^-#a + 2^-#b).
Rational fig_a_formula(const std::vector<SymbolId>& u) {
    long na = 0, nb = 0;
    for (SymbolId s : u)
        (s == 0 ? na : nb) += 1;
    return Rational(1, 2) * (Rational(1) - Rational(1, 1L << na) + Rational(1, 1L << nb));
}

/// Support of the exact distribution after reading `u`, by matrix propagation.
StateSet support_after(const ProbAutomaton& a, const std::vector<SymbolId>& u) {
    std::vector<Rational> dist(a.num_states());
    for (const Branch& b : a.initial())
        dist[b.to] += b.prob;
    for (SymbolId s : u) {
        std::vector<Rational> next(a.num_states());
        for (StateId q = 0; q < a.num_states(); ++q)
            for (const Branch& b : a.row(q, s))
                next[b.to] += dist[q] * b.prob;
        dist = std::move(next);
    }
    StateSet out;
    for (StateId q = 0; q < a.num_states(); ++q)
        if (dist[q].sign() > 0)
            out.push_back(q);
    return out;
}

bool deterministic_buchi_accepts(const NondetAutomaton& dba, const UpWord& w) {
    for (StateId q : oracle::deterministic_inf_set(dba, w))
        if (contains(dba.acceptance().sets[0], q))
            return true;
    return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact oracle
// ---------------------------------------------------------------------------

TEST_CASE("acceptance_probability examples") {
    ProbAutomaton fa = gadget_fig_a();
    CHECK(acceptance_probability(fa, word(fa.alphabet(), "a,a,b", "$")) == Rational(5, 8));
    ProbAutomaton pl = gadget_p_lambda(Rational(1, 2));
    CHECK(acceptance_probability(pl, word(pl.alphabet(), "", "a")).is_zero());
    ProbAutomaton pt = gadget_p_tilde_lambda(Rational(1, 2));
    CHECK(acceptance_probability(pt, word(pt.alphabet(), "", "a,b")).is_one());
}

TEST_CASE("fig_a values follow the closed formula") {
    ProbAutomaton fa = gadget_fig_a();
    const SymbolId dollar = *fa.alphabet().find("$");
    for (const auto& u : corpus::words(2, 0, 6))
        CHECK(acceptance_probability(fa, UpWord{u, {dollar}}) == fig_a_formula(u));
}

TEST_CASE("acceptance_probability of deterministic embeddings is 0 or 1") {
    NondetAutomaton d = corpus::dba_inf_a();
    ProbAutomaton p = dba_to_pba(d);
    for (const UpWord& w : corpus::lassos(2, 3, 3)) {
        Rational v = acceptance_probability(p, w);
        CHECK((v.is_zero() || v.is_one()));
        CHECK(v.is_one() == deterministic_buchi_accepts(d, w));
    }
}

TEST_CASE("acceptance_probability lies in [0, 1] and rejects bad words") {
    for (const auto& e : corpus::pbas())
        for (const UpWord& w : corpus::lassos(e.automaton.alphabet().size(), 2, 2)) {
            Rational v = acceptance_probability(e.automaton, w);
            CHECK(v.sign() >= 0);
            CHECK(v <= Rational(1));
        }
    ProbAutomaton fa = gadget_fig_a();
    CHECK_THROWS_AS(acceptance_probability(fa, UpWord{{}, {7}}), ValidationError);
}

TEST_CASE("co-Büchi oracle counts runs avoiding F eventually") {
    ProbAutomaton c = corpus::pcas()[0];
    // q1 is entered on a and left on b; a^ω eventually stays in q1 forever.
    CHECK(acceptance_probability(c, word(c.alphabet(), "", "a")).is_zero());
    CHECK(acceptance_probability(c, word(c.alphabet(), "", "b")).is_one());
    CHECK(acceptance_probability(c, word(c.alphabet(), "", "a,b")).is_zero());
}

TEST_CASE("pfa_acceptance examples") {
    auto always = corpus::prob(R"(automaton always
type: pfa
alphabet: a b
states: q
init: q=1
accepting: q
trans: q a q 1
trans: q b q 1
)");
    auto never = corpus::prob(R"(automaton never
type: pfa
alphabet: a b
states: q
init: q=1
accepting:
trans: q a q 1
trans: q b q 1
)");
    auto coin = corpus::prob(R"(automaton coin
type: pfa
alphabet: a
states: h t
init: h=1
accepting: h
trans: h a h 1/2
trans: h a t 1/2
trans: t a h 1/2
trans: t a t 1/2
)");
    for (const auto& u : corpus::words(2, 0, 4)) {
        CHECK(pfa_acceptance(always, u).is_one());
        CHECK(pfa_acceptance(never, u).is_zero());
    }
    CHECK(pfa_acceptance(coin, {0, 0}) == Rational(1, 2));
    CHECK(pfa_acceptance(coin, {}) == Rational(1));
    CHECK_THROWS_AS(pfa_acceptance(gadget_fig_a(), {0}), PreconditionError);
}

// ---------------------------------------------------------------------------
// Classical automata on lassos
// ---------------------------------------------------------------------------

TEST_CASE("member_nondet examples") {
    NondetAutomaton d = corpus::dba_inf_a();
    CHECK(member_nondet(d, word(d.alphabet(), "", "a,b")));
    CHECK_FALSE(member_nondet(d, word(d.alphabet(), "a", "b")));

    NondetAutomaton n = positive_to_nba(gadget_fig_a());
    CHECK(member_nondet(n, word(n.alphabet(), "b", "$")));
    CHECK_FALSE(member_nondet(n, word(n.alphabet(), "", "a")));
    CHECK_THROWS_AS(member_nondet(d, UpWord{{}, {}}), ValidationError);
}

TEST_CASE("member_nondet agrees with direct simulation on deterministic automata") {
    NondetAutomaton d = corpus::dba_inf_a();
    for (const UpWord& w : corpus::lassos(2, 3, 3))
        CHECK(member_nondet(d, w) == deterministic_buchi_accepts(d, w));
    for (const NondetAutomaton& p : corpus::parity_examples())
        for (const UpWord& w : corpus::lassos(2, 3, 3))
            CHECK(member_nondet(p, w) == oracle::parity_run_accepts(p, w));
}

TEST_CASE("member_nondet agrees with the closure oracle") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 60; ++i) {
        NondetAutomaton a = corpus::random_nba(rng, 1 + i % 4, 0.4);
        for (const UpWord& w : corpus::lassos(2, 2, 2))
            CHECK(member_nondet(a, w) == oracle::member(a, w));
    }
    for (const NondetAutomaton& p : corpus::parity_examples())
        for (const UpWord& w : corpus::lassos(2, 2, 2))
            CHECK(member_nondet(p, w) == oracle::member(p, w));
}

TEST_CASE("count_two_accepting_runs examples") {
    NondetAutomaton d = corpus::dba_inf_a();
    for (const UpWord& w : corpus::lassos(2, 2, 2))
        CHECK_FALSE(count_two_accepting_runs(d, w));
    NondetAutomaton twice("twice", {"a0", "a1", "b0", "b1"}, Alphabet({"x"}),
                          {{0, 0, 1}, {1, 0, 0}, {2, 0, 3}, {3, 0, 2}}, {0, 2}, Acceptance::buchi({1, 3}));
    CHECK(count_two_accepting_runs(twice, UpWord{{}, {0}}));
    // Two runs that differ, but only one of them accepts.
    NondetAutomaton one("one", {"s", "good", "bad"}, Alphabet({"x"}), {{0, 0, 1}, {0, 0, 2}, {1, 0, 1}, {2, 0, 2}},
                        {0}, Acceptance::buchi({1}));
    CHECK_FALSE(count_two_accepting_runs(one, UpWord{{}, {0}}));
}

TEST_CASE("is_empty_nba witnesses and emptiness") {
    NondetAutomaton unreachable("unreachable", {"s", "f"}, Alphabet({"a"}), {{0, 0, 0}, {1, 0, 1}}, {0},
                                Acceptance::buchi({1}));
    CHECK_FALSE(is_empty_nba(unreachable));

    NondetAutomaton n = positive_to_nba(gadget_fig_a());
    auto w = is_empty_nba(n);
    REQUIRE(w);
    CHECK(acceptance_probability(gadget_fig_a(), *w).sign() > 0);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 80; ++i) {
        const std::size_t size = 1 + i % 4;
        NondetAutomaton a = corpus::random_nba(rng, size, 0.3);
        if (auto x = is_empty_nba(a)) {
            CHECK(oracle::member(a, *x));
        } else {
            for (const UpWord& y : corpus::lassos(2, size, size))
                CHECK_FALSE(oracle::member(a, y));
        }
    }
}

TEST_CASE("non_universal_witness_almost_sure") {
    NondetAutomaton universal("universal", {"s"}, Alphabet({"a", "b"}), {{0, 0, 0}, {0, 1, 0}}, {0},
                              Acceptance::buchi({0}));
    for (NonUniversalMode mode : {NonUniversalMode::exp_ambiguous, NonUniversalMode::flat})
        CHECK_FALSE(non_universal_witness_almost_sure(dba_to_pba(universal), mode));

    ProbAutomaton fa = gadget_fig_a();
    auto w = non_universal_witness_almost_sure(fa, NonUniversalMode::flat);
    REQUIRE(w);
    CHECK(acceptance_probability(fa, *w) < Rational(1));

    NondetAutomaton empty("empty", {"s", "f"}, Alphabet({"a"}), {{0, 0, 0}, {1, 0, 1}}, {0}, Acceptance::buchi({1}));
    auto e = non_universal_witness_almost_sure(dba_to_pba(empty), NonUniversalMode::exp_ambiguous);
    REQUIRE(e);
    CHECK(acceptance_probability(dba_to_pba(empty), *e).is_zero());

    CHECK_THROWS_AS(non_universal_witness_almost_sure(gadget_p_lambda(Rational(1, 2)), NonUniversalMode::flat),
                    PreconditionError);
    CHECK_THROWS_AS(
        non_universal_witness_almost_sure(gadget_p_tilde_lambda(Rational(1, 2)), NonUniversalMode::exp_ambiguous),
        PreconditionError);
}

TEST_CASE("non-universality witness matches the breakpoint automaton") {
    for (const auto& e : corpus::pbas()) {
        const ProbAutomaton& a = e.automaton;
        Classification c = classify(a);
        if (c.ida_f)
            continue;
        auto w = non_universal_witness_almost_sure(a, NonUniversalMode::exp_ambiguous);
        NondetAutomaton dba = almost_sure_to_dba(a, AlmostSureMode::all_runs);
        bool some_rejected = false;
        for (const UpWord& x : corpus::lassos(a.alphabet().size(), 3, 3))
            some_rejected = some_rejected || !member_nondet(dba, x);
        INFO(a.name());
        CHECK(w.has_value() == some_rejected);
        if (w)
            CHECK(acceptance_probability(a, *w) < Rational(1));
    }
}

// ---------------------------------------------------------------------------
// Supports
// ---------------------------------------------------------------------------

TEST_CASE("support family is bounded and closed") {
    for (const auto& e : corpus::pbas()) {
        ProbAutomaton a = trim(e.automaton);
        SupportClassSet s = myhill_nerode_supports(a);
        CHECK(s.supports.size() <= (std::size_t{1} << a.num_states()));
        CHECK(s.supports[0] == a.initial_support());
        std::set<StateSet> all(s.supports.begin(), s.supports.end());
        CHECK(all.size() == s.supports.size());
        for (std::size_t i = 0; i < s.supports.size(); ++i) {
            CHECK(support_after(a, s.representatives[i]) == s.supports[i]);
            for (SymbolId x = 0; x < a.alphabet().size(); ++x)
                CHECK(all.count(support_successor(a, s.supports[i], x)) == 1);
        }
    }
}

TEST_CASE("p_lambda supports match exhaustive propagation") {
    ProbAutomaton a = trim(gadget_p_lambda(Rational(1, 2)));
    SupportClassSet s = myhill_nerode_supports(a);
    std::set<StateSet> brute;
    for (const auto& u : corpus::words(2, 0, std::size_t{1} << a.num_states()))
        brute.insert(support_after(a, u));
    CHECK(std::set<StateSet>(s.supports.begin(), s.supports.end()) == brute);
}

TEST_CASE("supports of a deterministic embedding are singletons") {
    ProbAutomaton a = trim(dba_to_pba(corpus::dba_inf_a()));
    for (const StateSet& s : myhill_nerode_supports(a).supports)
        CHECK(s.size() == 1);
}

// ---------------------------------------------------------------------------
// Monte-Carlo
// ---------------------------------------------------------------------------

TEST_CASE("Monte-Carlo estimate agrees with the oracle on fig_a") {
    ProbAutomaton fa = gadget_fig_a();
    UpWord w = word(fa.alphabet(), "a,a,b", "$");
    MonteCarloResult r = monte_carlo(fa, w, 100000, 200, 1);
    CHECK(std::abs(r.estimate - 0.625) <= 4 * r.stderr_);
    CHECK(r.fork_tail < 0.05);
}

TEST_CASE("Monte-Carlo on 0/1 automata and determinism") {
    ProbAutomaton p = dba_to_pba(corpus::dba_inf_a());
    CHECK(monte_carlo(p, word(p.alphabet(), "", "a,b"), 1000, 50, 3).estimate == 1.0);
    CHECK(monte_carlo(p, word(p.alphabet(), "a", "b"), 1000, 50, 3).estimate == 0.0);

    ProbAutomaton fa = gadget_fig_a();
    UpWord w = word(fa.alphabet(), "a,b", "$");
    MonteCarloResult x = monte_carlo(fa, w, 25000, 60, 9), y = monte_carlo(fa, w, 25000, 60, 9);
    CHECK(x.estimate == y.estimate);
    CHECK(x.fork_tail == y.fork_tail);
    CHECK_THROWS_AS(monte_carlo(fa, w, 0, 60, 9), std::invalid_argument);
    CHECK_THROWS_AS(monte_carlo(fa, w, 10, 2, 9), std::invalid_argument);
}
