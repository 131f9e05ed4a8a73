#pragma once

// Line-based text format for both automaton flavours.
//
//   automaton <name>
//   type: nba|dba|nca|dpa|gnba|pba|pwa|pca|pfa
//   alphabet: a b
//   states: q0 q1
//   init: q0            | init: q0=1/2 q1=1/2
//   accepting: q1       | priorities: q0=2 q1=1 | accsets: q0 ; q1
//   rejsink: q1         (optional, probabilistic only)
//   trans: q0 a q1      | trans: q0 a q1 1/2
//
// '#' starts a comment. Header lines may come in any order but each at most
// once; transitions may be interleaved freely.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pbamb/automaton.hpp"
#include "pbamb/core.hpp"

namespace pbamb {

using AnyAutomaton = std::variant<NondetAutomaton, ProbAutomaton>;

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r')
            ++j;
        if (j > i)
            out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

struct RawLine {
    std::size_t number;
    std::string body;
};

}  // namespace detail

inline AnyAutomaton parse_automaton(std::string_view text) {
    using detail::RawLine;
    std::vector<RawLine> lines;
    {
        std::size_t number = 0, pos = 0;
        while (pos <= text.size()) {
            std::size_t nl = text.find('\n', pos);
            std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            ++number;
            if (auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = detail::strip(line);
            if (!line.empty())
                lines.push_back({number, std::string(line)});
            if (nl == std::string_view::npos)
                break;
            pos = nl + 1;
        }
    }
    if (lines.empty())
        throw ParseError(1, "empty input");

    const RawLine& head = lines.front();
    if (head.body.rfind("automaton", 0) != 0 || (head.body.size() > 9 && head.body[9] != ' ' && head.body[9] != '\t'))
        throw ParseError(head.number, "expected 'automaton <name>'");
    std::string name(detail::strip(std::string_view(head.body).substr(9)));
    if (name.empty())
        throw ParseError(head.number, "missing automaton name");

    std::map<std::string, RawLine> header;
    std::vector<RawLine> trans;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const RawLine& l = lines[i];
        auto colon = l.body.find(':');
        if (colon == std::string::npos)
            throw ParseError(l.number, "expected '<key>: ...'");
        std::string key(detail::strip(std::string_view(l.body).substr(0, colon)));
        RawLine rest{l.number, std::string(detail::strip(std::string_view(l.body).substr(colon + 1)))};
        if (key == "trans") {
            trans.push_back(std::move(rest));
        } else if (key == "type" || key == "alphabet" || key == "states" || key == "init" || key == "accepting" ||
                   key == "priorities" || key == "accsets" || key == "rejsink") {
            if (!header.emplace(key, rest).second)
                throw ParseError(l.number, "duplicate '" + key + "' line");
        } else {
            throw ParseError(l.number, "unknown key '" + key + "'");
        }
    }
    auto need = [&](const std::string& key) -> const RawLine& {
        auto it = header.find(key);
        if (it == header.end())
            throw ParseError(head.number, "missing '" + key + ":' line");
        return it->second;
    };
    auto forbid = [&](const std::string& key, const std::string& type) {
        if (auto it = header.find(key); it != header.end())
            throw ParseError(it->second.number, "'" + key + ":' not allowed for type " + type);
    };

    const RawLine& type_line = need("type");
    const std::string type = type_line.body;
    const bool prob = type == "pba" || type == "pwa" || type == "pca" || type == "pfa";
    const bool nondet = type == "nba" || type == "dba" || type == "nca" || type == "dpa" || type == "gnba";
    if (!prob && !nondet)
        throw ParseError(type_line.number, "unknown automaton type '" + type + "'");

    const RawLine& alpha_line = need("alphabet");
    Alphabet sigma = [&] {
        try {
            return Alphabet(detail::split_ws(alpha_line.body));
        } catch (const ValidationError& e) {
            throw ParseError(alpha_line.number, e.what());
        }
    }();
    const RawLine& states_line = need("states");
    std::vector<std::string> state_list = detail::split_ws(states_line.body);
    if (state_list.empty())
        throw ParseError(states_line.number, "no states declared");
    StateNames names = [&] {
        try {
            return StateNames(state_list);
        } catch (const ValidationError& e) {
            throw ParseError(states_line.number, e.what());
        }
    }();
    auto state = [&](const std::string& s, std::size_t line) {
        auto q = names.find(s);
        if (!q)
            throw ParseError(line, "undeclared state '" + s + "'");
        return *q;
    };
    auto symbol = [&](const std::string& s, std::size_t line) {
        auto a = sigma.find(s);
        if (!a)
            throw ParseError(line, "undeclared symbol '" + s + "'");
        return *a;
    };
    auto rational = [&](std::string_view s, std::size_t line) {
        auto r = Rational::parse(s);
        if (!r)
            throw ParseError(line, "malformed rational '" + std::string(s) + "' (expected n or n/d)");
        return *r;
    };
    auto state_list_of = [&](const RawLine& l) {
        StateSet out;
        for (const auto& tok : detail::split_ws(l.body))
            out.push_back(state(tok, l.number));
        return out;
    };
    auto key_value = [&](const std::string& tok, std::size_t line) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw ParseError(line, "expected '<state>=<value>', got '" + tok + "'");
        return std::pair{state(tok.substr(0, eq), line), std::string_view(tok).substr(eq + 1)};
    };

    const RawLine& init_line = need("init");
    if (prob) {
        forbid("priorities", type);
        forbid("accsets", type);
        std::vector<Branch> mu;
        for (const auto& tok : detail::split_ws(init_line.body)) {
            auto [q, v] = key_value(tok, init_line.number);
            mu.push_back({q, rational(v, init_line.number)});
        }
        if (mu.empty())
            throw ParseError(init_line.number, "empty initial distribution");
        StateSet acc = state_list_of(need("accepting"));
        std::optional<StateId> sink;
        if (auto it = header.find("rejsink"); it != header.end()) {
            auto toks = detail::split_ws(it->second.body);
            if (toks.size() != 1)
                throw ParseError(it->second.number, "expected exactly one rejecting sink");
            sink = state(toks[0], it->second.number);
        }
        std::vector<ProbTransition> ts;
        for (const RawLine& l : trans) {
            auto toks = detail::split_ws(l.body);
            if (toks.size() != 4)
                throw ParseError(l.number, "expected 'trans: <from> <symbol> <to> <probability>'");
            ts.push_back({state(toks[0], l.number), symbol(toks[1], l.number), state(toks[2], l.number),
                          rational(toks[3], l.number)});
        }
        ProbKind kind = type == "pba" ? ProbKind::buchi
                      : type == "pwa" ? ProbKind::weak
                      : type == "pca" ? ProbKind::co_buchi
                                      : ProbKind::finite_word;
        return ProbAutomaton(name, state_list, sigma, ts, mu, std::move(acc), kind, sink);
    }

    forbid("rejsink", type);
    StateSet init = state_list_of(init_line);
    if (init.empty())
        throw ParseError(init_line.number, "no initial state");
    Acceptance acc;
    if (type == "dpa") {
        forbid("accepting", type);
        forbid("accsets", type);
        const RawLine& l = need("priorities");
        std::vector<int> c(names.size(), 0);
        for (const auto& tok : detail::split_ws(l.body)) {
            auto [q, v] = key_value(tok, l.number);
            if (c[q] != 0)
                throw ParseError(l.number, "duplicate priority for " + names[q]);
            auto r = Rational::parse(v);
            if (!r || r->raw().get_den() != 1 || *r < Rational(1) || *r > Rational(1 << 20))
                throw ParseError(l.number, "priority must be a positive integer");
            c[q] = static_cast<int>(r->raw().get_num().get_si());
        }
        for (StateId q = 0; q < names.size(); ++q)
            if (c[q] == 0)
                throw ParseError(l.number, "missing priority for " + names[q]);
        acc = Acceptance::parity(std::move(c));
    } else if (type == "gnba") {
        forbid("accepting", type);
        forbid("priorities", type);
        const RawLine& l = need("accsets");
        std::vector<StateSet> sets;
        std::string_view rest = l.body;
        while (true) {
            auto semi = rest.find(';');
            StateSet f;
            for (const auto& tok : detail::split_ws(rest.substr(0, semi)))
                f.push_back(state(tok, l.number));
            sets.push_back(std::move(f));
            if (semi == std::string_view::npos)
                break;
            rest.remove_prefix(semi + 1);
        }
        acc = Acceptance::generalized(std::move(sets));
    } else {
        forbid("priorities", type);
        forbid("accsets", type);
        StateSet f = state_list_of(need("accepting"));
        acc = type == "nca" ? Acceptance::co_buchi(std::move(f)) : Acceptance::buchi(std::move(f));
    }
    std::vector<Transition> ts;
    for (const RawLine& l : trans) {
        auto toks = detail::split_ws(l.body);
        if (toks.size() != 3)
            throw ParseError(l.number, "expected 'trans: <from> <symbol> <to>'");
        ts.push_back({state(toks[0], l.number), symbol(toks[1], l.number), state(toks[2], l.number)});
    }
    return NondetAutomaton(name, state_list, sigma, std::move(ts), std::move(init), std::move(acc));
}

inline AnyAutomaton parse_automaton_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_automaton(buf.str());
}

namespace detail {
inline std::string join_states(const StateNames& names, const StateSet& s) {
    std::string out;
    for (StateId q : s) {
        out += ' ';
        out += names[q];
    }
    return out;
}

inline void write_common(std::ostream& os, const std::string& name, const char* type, const Alphabet& sigma,
                         const StateNames& names) {
    os << "automaton " << name << "\ntype: " << type << "\nalphabet:";
    for (const auto& s : sigma.symbols())
        os << ' ' << s;
    os << "\nstates:";
    for (const auto& q : names.all())
        os << ' ' << q;
    os << '\n';
}
}  // namespace detail

inline std::string serialize_automaton(const NondetAutomaton& a) {
    std::ostringstream os;
    const Acceptance& acc = a.acceptance();
    const char* type = "nba";
    switch (acc.kind) {
    case AcceptanceKind::buchi: type = is_deterministic(a) ? "dba" : "nba"; break;
    case AcceptanceKind::co_buchi: type = "nca"; break;
    case AcceptanceKind::generalized_buchi: type = "gnba"; break;
    case AcceptanceKind::parity: type = "dpa"; break;
    }
    detail::write_common(os, a.name(), type, a.alphabet(), a.states());
    os << "init:" << detail::join_states(a.states(), a.initials()) << '\n';
    switch (acc.kind) {
    case AcceptanceKind::buchi:
    case AcceptanceKind::co_buchi:
        os << "accepting:" << detail::join_states(a.states(), acc.sets[0]) << '\n';
        break;
    case AcceptanceKind::generalized_buchi:
        os << "accsets:";
        for (std::size_t i = 0; i < acc.sets.size(); ++i)
            os << (i ? " ;" : "") << detail::join_states(a.states(), acc.sets[i]);
        os << '\n';
        break;
    case AcceptanceKind::parity:
        os << "priorities:";
        for (StateId q = 0; q < a.num_states(); ++q)
            os << ' ' << a.state_name(q) << '=' << acc.priorities[q];
        os << '\n';
        break;
    }
    for (const Transition& t : a.transitions())
        os << "trans: " << a.state_name(t.from) << ' ' << a.alphabet().name(t.symbol) << ' ' << a.state_name(t.to)
           << '\n';
    return os.str();
}

inline std::string serialize_automaton(const ProbAutomaton& a) {
    std::ostringstream os;
    const char* type = a.kind() == ProbKind::buchi ? "pba"
                     : a.kind() == ProbKind::weak  ? "pwa"
                     : a.kind() == ProbKind::co_buchi ? "pca"
                                                      : "pfa";
    detail::write_common(os, a.name(), type, a.alphabet(), a.states());
    os << "init:";
    for (const Branch& b : a.initial())
        os << ' ' << a.state_name(b.to) << '=' << b.prob;
    os << "\naccepting:" << detail::join_states(a.states(), a.accepting()) << '\n';
    if (a.rej_sink())
        os << "rejsink: " << a.state_name(*a.rej_sink()) << '\n';
    for (const ProbTransition& t : a.transitions())
        os << "trans: " << a.state_name(t.from) << ' ' << a.alphabet().name(t.symbol) << ' ' << a.state_name(t.to)
           << ' ' << t.prob << '\n';
    return os.str();
}

inline std::string serialize_automaton(const AnyAutomaton& a) {
    return std::visit([](const auto& x) { return serialize_automaton(x); }, a);
}

}  // namespace pbamb
