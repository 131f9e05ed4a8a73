#pragma once

// Threshold semantics for finitely ambiguous PBA: the finite value sets of
// run-prefix probabilities, the ε-cutoff ladder and the tuple construction of
// a generalized Büchi automaton for L^{>λ}.

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "pbamb/automaton.hpp"
#include "pbamb/core.hpp"
#include "pbamb/error.hpp"
#include "pbamb/patterns.hpp"
#include "pbamb/translations.hpp"

namespace pbamb {

/// All finite products of `base` (with repetition, including 1) that are >= x.
struct ValueSet {
    Rational threshold;
    std::vector<Rational> values;  // ascending

    bool contains(const Rational& v) const { return std::binary_search(values.begin(), values.end(), v); }
};

inline ValueSet compute_value_set(const std::vector<Rational>& base, const Rational& x) {
    if (x.sign() <= 0)
        throw std::invalid_argument("value set threshold must be positive");
    for (const Rational& b : base)
        if (b.sign() <= 0 || b > Rational(1))
            throw std::invalid_argument("base probability " + b.str() + " not in (0,1]");
    std::set<Rational> seen;
    std::deque<Rational> queue;
    if (Rational(1) >= x) {
        seen.insert(Rational(1));
        queue.push_back(Rational(1));
    }
    while (!queue.empty()) {
        Rational v = queue.front();
        queue.pop_front();
        for (const Rational& b : base) {
            Rational p = v * b;
            if (p >= x && seen.insert(p).second)
                queue.push_back(p);
        }
    }
    return {x, std::vector<Rational>(seen.begin(), seen.end())};
}

/// Distinct transition and initial probabilities of `a`, ascending.
inline std::vector<Rational> base_probabilities(const ProbAutomaton& a) {
    std::set<Rational> s;
    for (const ProbTransition& t : a.transitions())
        s.insert(t.prob);
    for (const Branch& b : a.initial())
        s.insert(b.prob);
    return {s.begin(), s.end()};
}

struct EpsilonLadder {
    Rational lambda;
    int k = 1;
    std::vector<Rational> eps;  // eps[j-1] = ε_j
    std::vector<Rational> base;
    ValueSet above_lambda;            // V_{>=λ}
    std::vector<ValueSet> above_eps;  // above_eps[j-1] = V_{>=ε_j}
};

namespace detail {

/// Largest a·b < bound with a ∈ values and b ∈ base.
inline std::optional<Rational> max_product_below(const std::vector<Rational>& values,
                                                 const std::vector<Rational>& base, const Rational& bound) {
    std::optional<Rational> best;
    for (const Rational& a : values)
        for (const Rational& b : base) {
            Rational p = a * b;
            if (p < bound && (!best || p > *best))
                best = p;
        }
    return best;
}

/// Largest sum of at most `count` values (with repetition) that is < bound.
inline std::optional<Rational> max_sum_below(const std::vector<Rational>& values, int count, const Rational& bound) {
    std::optional<Rational> best;
    std::function<void(std::size_t, int, const Rational&)> go = [&](std::size_t from, int left, const Rational& sum) {
        if (left == 0)
            return;
        for (std::size_t i = from; i < values.size(); ++i) {
            Rational s = sum + values[i];
            if (s >= bound)
                break;  // values are ascending
            if (!best || s > *best)
                best = s;
            go(i, left - 1, s);
        }
    };
    go(0, count, Rational(0));
    return best;
}

}  // namespace detail

inline EpsilonLadder compute_epsilon(const ProbAutomaton& a, const Rational& lambda, int k) {
    if (lambda.sign() <= 0 || lambda > Rational(1))
        throw PreconditionError(Precondition::invalid_threshold, "lambda = " + lambda.str() + " not in (0,1]");
    if (k < 1)
        throw ValidationError("k must be positive");
    EpsilonLadder l;
    l.lambda = lambda;
    l.k = k;
    l.base = base_probabilities(a);
    l.above_lambda = compute_value_set(l.base, lambda);

    auto vmax = detail::max_product_below(l.above_lambda.values, l.base, lambda);
    l.eps.push_back(vmax ? (lambda - *vmax) / Rational(2) : lambda);
    l.above_eps.push_back(compute_value_set(l.base, l.eps.back()));
    for (int j = 1; j < k; ++j) {
        const Rational e = l.eps.back();
        const ValueSet& v = l.above_eps.back();
        std::optional<Rational> gap;
        if (auto below = detail::max_product_below(v.values, l.base, e))
            gap = e - *below;
        if (auto s = detail::max_sum_below(v.values, j + 1, lambda))
            gap = gap ? std::min(*gap, lambda - *s) : lambda - *s;
        Rational next = gap ? *gap / Rational(2) : e;
        l.eps.push_back(std::min(next, e));
        l.above_eps.push_back(compute_value_set(l.base, l.eps.back()));
    }
    return l;
}

struct ThresholdOptions {
    bool require_finite_ambiguity = true;
};

namespace detail {

struct TupleEntry {
    enum Tag { exact, star_n, star_d };
    StateId state;
    Tag tag;
    Rational value;  // meaningful for exact entries only
};

using Tuple = std::vector<TupleEntry>;

inline std::string tuple_name(const ProbAutomaton& a, const Tuple& t) {
    std::string out = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i)
            out += ',';
        out += '(' + a.state_name(t[i].state) + ',';
        switch (t[i].tag) {
        case TupleEntry::exact:
            out += t[i].value.str();
            break;
        case TupleEntry::star_n:
            out += "*n";
            break;
        case TupleEntry::star_d:
            out += "*d";
            break;
        }
        out += ')';
    }
    return out + "]";
}

/// Sum > λ with stars read as arbitrarily small positive values, at most one
/// star, and no entry in the rejecting sink.
inline bool admissible(const ProbAutomaton& a, const Tuple& t, const Rational& lambda) {
    Rational sum;
    int stars = 0;
    for (const TupleEntry& e : t) {
        if (a.is_rej_sink(e.state))
            return false;
        if (e.tag == TupleEntry::exact)
            sum += e.value;
        else
            ++stars;
    }
    if (stars > 1)
        return false;
    return stars ? sum >= lambda : sum > lambda;
}

}  // namespace detail

/// Generalized Büchi automaton with k acceptance sets accepting L^{>λ}(a) for
/// a k-ambiguous Büchi or weak PBA. States are tuples of at most k tracked
/// runs with their prefix probabilities; only reachable tuples are built.
inline NondetAutomaton threshold_to_gnba(const ProbAutomaton& a, const Rational& lambda, int k,
                                         const ThresholdOptions& opt = {}) {
    using detail::Tuple;
    using detail::TupleEntry;
    if (lambda.sign() <= 0 || lambda >= Rational(1))
        throw PreconditionError(Precondition::invalid_threshold, "lambda = " + lambda.str() + " not in (0,1)");
    if (k < 1)
        throw ValidationError("k must be positive");
    detail::require_buchi_like(a, "threshold_to_gnba");
    if (opt.require_finite_ambiguity) {
        Classification c = classify(a);
        if (c.ida)
            throw PreconditionError(Precondition::not_finitely_ambiguous,
                                    "IDA pattern: " + format_witness(c.analysed, *c.ida));
    }
    const EpsilonLadder ladder = compute_epsilon(a, lambda, k);
    const Rational eps = ladder.eps.back();

    auto classify_value = [&](const Rational& v) {
        return v >= eps ? TupleEntry{0, TupleEntry::exact, v} : TupleEntry{0, TupleEntry::star_n, Rational(0)};
    };

    detail::StateTable table;
    std::vector<Tuple> tuples;
    std::deque<StateId> work;
    auto intern = [&](const Tuple& t) {
        const std::size_t before = table.size();
        StateId id = table.add(detail::tuple_name(a, t));
        if (table.size() > before) {
            tuples.push_back(t);
            work.push_back(id);
        }
        return id;
    };

    // Initial tuples: every ordering of distinct initial states, at most k.
    StateSet init;
    {
        auto mu = a.initial();
        Tuple cur;
        std::vector<char> used(mu.size(), 0);
        std::function<void()> go = [&]() {
            if (!cur.empty() && detail::admissible(a, cur, lambda))
                init.push_back(intern(cur));
            if (static_cast<int>(cur.size()) == k)
                return;
            for (std::size_t i = 0; i < mu.size(); ++i) {
                if (used[i])
                    continue;
                TupleEntry e = classify_value(mu[i].prob);
                e.state = mu[i].to;
                used[i] = 1;
                cur.push_back(e);
                go();
                cur.pop_back();
                used[i] = 0;
            }
        };
        go();
    }

    // Possible children of one tuple entry on one symbol.
    auto children = [&](const TupleEntry& parent, SymbolId x) {
        std::vector<TupleEntry> out;
        for (const Branch& b : a.row(parent.state, x)) {
            switch (parent.tag) {
            case TupleEntry::exact: {
                TupleEntry e = classify_value(parent.value * b.prob);
                e.state = b.to;
                out.push_back(e);
                break;
            }
            case TupleEntry::star_n:
                out.push_back({b.to, TupleEntry::star_n, Rational(0)});
                out.push_back({b.to, TupleEntry::star_d, Rational(0)});
                break;
            case TupleEntry::star_d:
                if (b.prob.is_one())
                    out.push_back({b.to, TupleEntry::star_d, Rational(0)});
                break;
            }
        }
        return out;
    };

    std::vector<Transition> ts;
    while (!work.empty()) {
        const StateId from = work.front();
        work.pop_front();
        const Tuple src = tuples[from];
        for (SymbolId x = 0; x < a.alphabet().size(); ++x) {
            std::vector<std::vector<TupleEntry>> options;
            for (const TupleEntry& e : src)
                options.push_back(children(e, x));
            Tuple cur;
            std::set<StateId> group_states;
            // Parent i chooses a nonempty ordered list of children with
            // pairwise different states; the tuple length stays <= k.
            std::function<void(std::size_t, bool)> go = [&](std::size_t i, bool group_nonempty) {
                if (i == src.size())
                    return;
                const std::size_t reserve = src.size() - i - 1;  // one slot per later parent
                if (group_nonempty) {
                    std::set<StateId> saved;
                    saved.swap(group_states);
                    if (i + 1 == src.size()) {
                        if (detail::admissible(a, cur, lambda))
                            ts.push_back({from, x, intern(cur)});
                    } else {
                        go(i + 1, false);
                    }
                    group_states.swap(saved);
                }
                if (cur.size() + 1 + reserve > static_cast<std::size_t>(k))
                    return;
                for (const TupleEntry& c : options[i]) {
                    if (group_states.count(c.state))
                        continue;
                    group_states.insert(c.state);
                    cur.push_back(c);
                    go(i, true);
                    cur.pop_back();
                    group_states.erase(c.state);
                }
            };
            go(0, false);
        }
    }

    std::vector<StateSet> sets(k);
    for (StateId s = 0; s < tuples.size(); ++s)
        for (int i = 1; i <= k; ++i) {
            const Tuple& t = tuples[s];
            if (static_cast<int>(t.size()) < i ||
                (a.is_accepting(t[i - 1].state) && t[i - 1].tag != TupleEntry::star_n))
                sets[i - 1].push_back(s);
        }
    return NondetAutomaton("th2gnba(" + a.name() + ")", table.names(), a.alphabet(), std::move(ts),
                           std::move(init), Acceptance::generalized(std::move(sets)));
}

}  // namespace pbamb
