#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pbamb/error.hpp"
#include "pbamb/graph.hpp"
#include "pbamb/rational.hpp"

namespace pbamb {

using StateId = std::uint32_t;
using SymbolId = std::uint32_t;
/// Sorted, duplicate-free list of states.
using StateSet = std::vector<StateId>;

inline void normalize(StateSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline bool contains(const StateSet& s, StateId q) { return std::binary_search(s.begin(), s.end(), q); }

inline bool valid_symbol_token(std::string_view s) {
    if (s.empty())
        return false;
    for (char c : s)
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#' || c == ':' || c == ',')
            return false;
    return true;
}

inline bool valid_state_token(std::string_view s) {
    if (s.empty())
        return false;
    for (char c : s)
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#' || c == '=' || c == ';')
            return false;
    return true;
}

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
        for (SymbolId i = 0; i < symbols_.size(); ++i) {
            if (!valid_symbol_token(symbols_[i]))
                throw ValidationError("invalid symbol token '" + symbols_[i] + "'");
            if (!index_.emplace(symbols_[i], i).second)
                throw ValidationError("duplicate symbol '" + symbols_[i] + "'");
        }
    }

    std::size_t size() const { return symbols_.size(); }
    const std::string& name(SymbolId a) const { return symbols_[a]; }
    const std::vector<std::string>& symbols() const { return symbols_; }
    std::optional<SymbolId> find(std::string_view s) const {
        auto it = index_.find(std::string(s));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }
    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, SymbolId> index_;
};

/// Named state list with name lookup, shared by both automaton flavours.
class StateNames {
public:
    StateNames() = default;
    explicit StateNames(std::vector<std::string> names) : names_(std::move(names)) {
        for (StateId i = 0; i < names_.size(); ++i) {
            if (!valid_state_token(names_[i]))
                throw ValidationError("invalid state name '" + names_[i] + "'");
            if (!index_.emplace(names_[i], i).second)
                throw ValidationError("duplicate state '" + names_[i] + "'");
        }
    }
    std::size_t size() const { return names_.size(); }
    const std::string& operator[](StateId q) const { return names_[q]; }
    const std::vector<std::string>& all() const { return names_; }
    std::optional<StateId> find(std::string_view s) const {
        auto it = index_.find(std::string(s));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, StateId> index_;
};

/// Returns `base`, or `base` with primes appended, so that it is not in `taken`.
inline std::string fresh_name(std::string base, const std::vector<std::string>& taken) {
    while (std::find(taken.begin(), taken.end(), base) != taken.end())
        base += "'";
    return base;
}

enum class AcceptanceKind { buchi, co_buchi, generalized_buchi, parity };

struct Acceptance {
    AcceptanceKind kind = AcceptanceKind::buchi;
    std::vector<StateSet> sets;   // one set for (co-)Büchi, k sets for generalized Büchi
    std::vector<int> priorities;  // parity only, one per state

    static Acceptance buchi(StateSet f) { return {AcceptanceKind::buchi, {std::move(f)}, {}}; }
    static Acceptance co_buchi(StateSet f) { return {AcceptanceKind::co_buchi, {std::move(f)}, {}}; }
    static Acceptance generalized(std::vector<StateSet> fs) { return {AcceptanceKind::generalized_buchi, std::move(fs), {}}; }
    static Acceptance parity(std::vector<int> c) { return {AcceptanceKind::parity, {}, std::move(c)}; }

    int max_priority() const {
        return priorities.empty() ? 0 : *std::max_element(priorities.begin(), priorities.end());
    }
};

struct Transition {
    StateId from;
    SymbolId symbol;
    StateId to;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Classical nondeterministic ω-automaton (Q, Σ, Δ, Q0, acc). Immutable.
class NondetAutomaton {
public:
    NondetAutomaton(std::string name, std::vector<std::string> states, Alphabet alphabet,
                    std::vector<Transition> transitions, StateSet initials, Acceptance acceptance)
        : name_(std::move(name)), states_(std::move(states)), alphabet_(std::move(alphabet)),
          initials_(std::move(initials)), acceptance_(std::move(acceptance)) {
        const std::size_t n = states_.size();
        const std::size_t k = alphabet_.size();
        succ_.assign(n * k, {});
        for (const Transition& t : transitions) {
            if (t.from >= n || t.to >= n || t.symbol >= k)
                throw ValidationError("transition references an undeclared state or symbol");
            succ_[t.from * k + t.symbol].push_back(t.to);
        }
        for (auto& s : succ_)
            normalize(s);
        normalize(initials_);
        for (StateId q : initials_)
            if (q >= n)
                throw ValidationError("undeclared initial state");
        switch (acceptance_.kind) {
        case AcceptanceKind::buchi:
        case AcceptanceKind::co_buchi:
            if (acceptance_.sets.size() != 1)
                throw ValidationError("(co-)Büchi acceptance needs exactly one set");
            break;
        case AcceptanceKind::generalized_buchi:
            if (acceptance_.sets.empty())
                throw ValidationError("generalized Büchi acceptance needs at least one set");
            break;
        case AcceptanceKind::parity:
            if (acceptance_.priorities.size() != n)
                throw ValidationError("parity acceptance needs exactly one priority per state");
            for (int c : acceptance_.priorities)
                if (c < 1)
                    throw ValidationError("priorities must be positive");
            break;
        }
        for (auto& f : acceptance_.sets) {
            normalize(f);
            for (StateId q : f)
                if (q >= n)
                    throw ValidationError("undeclared accepting state");
        }
        final_.assign(n, 0);
        if (acceptance_.kind == AcceptanceKind::buchi || acceptance_.kind == AcceptanceKind::co_buchi)
            for (StateId q : acceptance_.sets[0])
                final_[q] = 1;
    }

    const std::string& name() const { return name_; }
    std::size_t num_states() const { return states_.size(); }
    const StateNames& states() const { return states_; }
    const std::string& state_name(StateId q) const { return states_[q]; }
    const Alphabet& alphabet() const { return alphabet_; }
    const StateSet& initials() const { return initials_; }
    const Acceptance& acceptance() const { return acceptance_; }
    std::span<const StateId> successors(StateId q, SymbolId a) const { return succ_[q * alphabet_.size() + a]; }
    /// Membership in the single (co-)Büchi set; false for other conditions.
    bool is_final(StateId q) const { return final_[q] != 0; }

    std::vector<Transition> transitions() const {
        std::vector<Transition> out;
        for (StateId p = 0; p < num_states(); ++p)
            for (SymbolId a = 0; a < alphabet_.size(); ++a)
                for (StateId q : successors(p, a))
                    out.push_back({p, a, q});
        return out;
    }

    /// Transition graph, edges labelled by symbol.
    Digraph graph() const {
        Digraph g(num_states());
        for (StateId p = 0; p < num_states(); ++p)
            for (SymbolId a = 0; a < alphabet_.size(); ++a)
                for (StateId q : successors(p, a))
                    g.add_edge(p, q, a);
        return g;
    }

private:
    std::string name_;
    StateNames states_;
    Alphabet alphabet_;
    std::vector<StateSet> succ_;
    StateSet initials_;
    Acceptance acceptance_;
    std::vector<char> final_;
};

enum class ProbKind { buchi, co_buchi, weak, finite_word };

inline const char* to_string(ProbKind k) {
    switch (k) {
    case ProbKind::buchi: return "buchi";
    case ProbKind::co_buchi: return "co-buchi";
    case ProbKind::weak: return "weak";
    case ProbKind::finite_word: return "finite-word";
    }
    return "?";
}

struct ProbTransition {
    StateId from;
    SymbolId symbol;
    StateId to;
    Rational prob;
};

struct Branch {
    StateId to;
    Rational prob;
};

namespace detail {
inline bool is_union_of_sccs(const Digraph& g, const std::vector<char>& member) {
    SccResult scc = tarjan_scc(g);
    for (const auto& comp : scc.components)
        for (NodeId v : comp)
            if (member[v] != member[comp.front()])
                return false;
    return true;
}
}  // namespace detail

/// Probabilistic ω-automaton (Q, Σ, δ, μ0, F) with exact rational
/// distributions. Every (state, symbol) row and μ0 sum to exactly 1.
/// Immutable once constructed.
class ProbAutomaton {
public:
    ProbAutomaton(std::string name, std::vector<std::string> states, Alphabet alphabet,
                  const std::vector<ProbTransition>& transitions, const std::vector<Branch>& initial,
                  StateSet accepting, ProbKind kind, std::optional<StateId> rej_sink = std::nullopt)
        : name_(std::move(name)), states_(std::move(states)), alphabet_(std::move(alphabet)),
          accepting_(std::move(accepting)), kind_(kind), rej_sink_(rej_sink) {
        const std::size_t n = states_.size();
        const std::size_t k = alphabet_.size();
        rows_.assign(n * k, {});
        auto check_prob = [](const Rational& p) {
            if (p.sign() < 0 || p > Rational(1))
                throw ValidationError("probability " + p.str() + " outside [0,1]");
        };
        for (const ProbTransition& t : transitions) {
            if (t.from >= n || t.to >= n || t.symbol >= k)
                throw ValidationError("transition references an undeclared state or symbol");
            check_prob(t.prob);
            if (t.prob.is_zero())
                continue;
            auto& row = rows_[t.from * k + t.symbol];
            for (const Branch& b : row)
                if (b.to == t.to)
                    throw ValidationError("duplicate transition " + states_[t.from] + " " + alphabet_.name(t.symbol) + " " + states_[t.to]);
            row.push_back({t.to, t.prob});
        }
        for (StateId p = 0; p < n; ++p)
            for (SymbolId a = 0; a < k; ++a) {
                auto& row = rows_[p * k + a];
                std::sort(row.begin(), row.end(), [](const Branch& x, const Branch& y) { return x.to < y.to; });
                Rational sum;
                for (const Branch& b : row)
                    sum += b.prob;
                if (!sum.is_one())
                    throw ValidationError("distribution of (" + states_[p] + ", " + alphabet_.name(a) + ") sums to " + sum.str() + ", not 1");
            }
        Rational total;
        for (const Branch& b : initial) {
            if (b.to >= n)
                throw ValidationError("undeclared initial state");
            check_prob(b.prob);
            if (b.prob.is_zero())
                continue;
            for (const Branch& x : initial_)
                if (x.to == b.to)
                    throw ValidationError("duplicate initial state " + states_[b.to]);
            initial_.push_back(b);
            total += b.prob;
        }
        std::sort(initial_.begin(), initial_.end(), [](const Branch& x, const Branch& y) { return x.to < y.to; });
        if (!total.is_one())
            throw ValidationError("initial distribution sums to " + total.str() + ", not 1");
        normalize(accepting_);
        accepting_mask_.assign(n, 0);
        for (StateId q : accepting_) {
            if (q >= n)
                throw ValidationError("undeclared accepting state");
            accepting_mask_[q] = 1;
        }
        if (rej_sink_) {
            StateId s = *rej_sink_;
            if (s >= n)
                throw ValidationError("undeclared rejecting sink");
            for (SymbolId a = 0; a < k; ++a) {
                auto r = row(s, a);
                if (r.size() != 1 || r[0].to != s)
                    throw ValidationError("rejecting sink " + states_[s] + " must loop with probability 1 on every symbol");
            }
            // A rejecting sink is bad for the kind's acceptance condition.
            bool in_f = accepting_mask_[s] != 0;
            if (kind_ == ProbKind::co_buchi ? !in_f : in_f)
                throw ValidationError("rejecting sink " + states_[s] + " has the wrong acceptance status");
        }
        if (kind_ == ProbKind::weak && !detail::is_union_of_sccs(graph(), accepting_mask_))
            throw ValidationError("weak automaton: accepting set is not a union of SCCs");
    }

    const std::string& name() const { return name_; }
    std::size_t num_states() const { return states_.size(); }
    const StateNames& states() const { return states_; }
    const std::string& state_name(StateId q) const { return states_[q]; }
    const Alphabet& alphabet() const { return alphabet_; }
    std::span<const Branch> row(StateId q, SymbolId a) const { return rows_[q * alphabet_.size() + a]; }
    std::span<const Branch> initial() const { return initial_; }
    const StateSet& accepting() const { return accepting_; }
    bool is_accepting(StateId q) const { return accepting_mask_[q] != 0; }
    ProbKind kind() const { return kind_; }
    std::optional<StateId> rej_sink() const { return rej_sink_; }
    bool is_rej_sink(StateId q) const { return rej_sink_ && *rej_sink_ == q; }

    /// δ(p, a, q); zero when absent.
    Rational prob(StateId p, SymbolId a, StateId q) const {
        for (const Branch& b : row(p, a))
            if (b.to == q)
                return b.prob;
        return {};
    }

    StateSet initial_support() const {
        StateSet s;
        for (const Branch& b : initial_)
            s.push_back(b.to);
        return s;
    }

    std::vector<ProbTransition> transitions() const {
        std::vector<ProbTransition> out;
        for (StateId p = 0; p < num_states(); ++p)
            for (SymbolId a = 0; a < alphabet_.size(); ++a)
                for (const Branch& b : row(p, a))
                    out.push_back({p, a, b.to, b.prob});
        return out;
    }

    /// Graph of positive-probability edges, labelled by symbol.
    Digraph graph() const {
        Digraph g(num_states());
        for (StateId p = 0; p < num_states(); ++p)
            for (SymbolId a = 0; a < alphabet_.size(); ++a)
                for (const Branch& b : row(p, a))
                    g.add_edge(p, b.to, a);
        return g;
    }

private:
    std::string name_;
    StateNames states_;
    Alphabet alphabet_;
    std::vector<std::vector<Branch>> rows_;
    std::vector<Branch> initial_;
    StateSet accepting_;
    std::vector<char> accepting_mask_;
    ProbKind kind_;
    std::optional<StateId> rej_sink_;
};

/// uv^ω over symbol ids of some alphabet.
struct UpWord {
    std::vector<SymbolId> prefix;
    std::vector<SymbolId> period;  // nonempty

    std::size_t length() const { return prefix.size() + period.size(); }
    SymbolId at(std::size_t pos) const { return pos < prefix.size() ? prefix[pos] : period[pos - prefix.size()]; }
    /// Successor position in the lasso-shaped position graph.
    std::size_t next(std::size_t pos) const { return pos + 1 < length() ? pos + 1 : prefix.size(); }
    /// i-th letter of the infinite word.
    SymbolId letter(std::size_t i) const {
        return i < prefix.size() ? prefix[i] : period[(i - prefix.size()) % period.size()];
    }
    friend bool operator==(const UpWord&, const UpWord&) = default;
};

inline std::string format_symbols(const Alphabet& sigma, const std::vector<SymbolId>& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            s += ',';
        s += sigma.name(w[i]);
    }
    return s;
}

inline std::string format_word(const Alphabet& sigma, const UpWord& w) {
    return "prefix=[" + format_symbols(sigma, w.prefix) + "] period=[" + format_symbols(sigma, w.period) + "]";
}

/// Parses a comma-separated symbol list ("a,a,b"); empty text is the empty list.
inline std::vector<SymbolId> parse_symbols(const Alphabet& sigma, std::string_view text) {
    std::vector<SymbolId> out;
    if (text.empty())
        return out;
    std::size_t start = 0;
    while (true) {
        auto comma = text.find(',', start);
        auto tok = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        auto id = sigma.find(tok);
        if (!id)
            throw ValidationError("unknown symbol '" + std::string(tok) + "'");
        out.push_back(*id);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

inline UpWord make_word(const Alphabet& sigma, std::string_view prefix, std::string_view period) {
    UpWord w{parse_symbols(sigma, prefix), parse_symbols(sigma, period)};
    if (w.period.empty())
        throw ValidationError("period of an ultimately periodic word must be nonempty");
    return w;
}

}  // namespace pbamb
