#pragma once

#include <string>
#include <vector>

#include "pbamb/automaton.hpp"
#include "pbamb/error.hpp"

namespace pbamb {

/// Counter construction GNBA -> NBA over Q x {1..k}. The counter advances from
/// i to i%k+1 when leaving a state of F_i; (q, k) is accepting for q in F_k.
inline NondetAutomaton degeneralize(const NondetAutomaton& g) {
    const Acceptance& acc = g.acceptance();
    if (acc.kind == AcceptanceKind::buchi)
        return degeneralize(NondetAutomaton(g.name(), g.states().all(), g.alphabet(), g.transitions(), g.initials(),
                                            Acceptance::generalized({acc.sets[0]})));
    if (acc.kind != AcceptanceKind::generalized_buchi)
        throw PreconditionError(Precondition::wrong_kind, "degeneralize needs generalized Büchi acceptance");
    const std::size_t n = g.num_states(), k = acc.sets.size();
    auto id = [&](StateId q, std::size_t i) { return static_cast<StateId>(q * k + (i - 1)); };
    std::vector<std::string> names;
    for (StateId q = 0; q < n; ++q)
        for (std::size_t i = 1; i <= k; ++i)
            names.push_back("(" + g.state_name(q) + "," + std::to_string(i) + ")");
    std::vector<Transition> ts;
    for (const Transition& t : g.transitions())
        for (std::size_t i = 1; i <= k; ++i) {
            std::size_t j = contains(acc.sets[i - 1], t.from) ? i % k + 1 : i;
            ts.push_back({id(t.from, i), t.symbol, id(t.to, j)});
        }
    StateSet init;
    for (StateId q : g.initials())
        init.push_back(id(q, 1));
    StateSet f;
    for (StateId q : acc.sets[k - 1])
        f.push_back(id(q, k));
    return NondetAutomaton("degen(" + g.name() + ")", std::move(names), g.alphabet(), std::move(ts), std::move(init),
                           Acceptance::buchi(std::move(f)));
}

}  // namespace pbamb
