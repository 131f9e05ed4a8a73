#pragma once

// Explicit labelled digraphs, iterative Tarjan SCCs and accepting-cycle
// search. Every product construction in the library is materialised as a
// Digraph and analysed with these routines.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

namespace pbamb {

using NodeId = std::uint32_t;
using Label = std::uint32_t;

struct Edge {
    NodeId to;
    Label label;
};

class Digraph {
public:
    Digraph() = default;
    explicit Digraph(std::size_t n) : adj_(n) {}

    std::size_t size() const { return adj_.size(); }
    NodeId add_node() {
        adj_.emplace_back();
        return static_cast<NodeId>(adj_.size() - 1);
    }
    void add_edge(NodeId from, NodeId to, Label label) { adj_[from].push_back({to, label}); }
    const std::vector<Edge>& out(NodeId v) const { return adj_[v]; }

    Digraph reversed() const {
        Digraph r(size());
        for (NodeId v = 0; v < size(); ++v)
            for (const Edge& e : adj_[v])
                r.add_edge(e.to, v, e.label);
        return r;
    }

private:
    std::vector<std::vector<Edge>> adj_;
};

/// Node subset as a characteristic vector. An empty mask means "all nodes".
using NodeMask = std::vector<char>;

inline bool in_mask(const NodeMask& m, NodeId v) { return m.empty() || m[v]; }

struct SccResult {
    static constexpr NodeId none = static_cast<NodeId>(-1);
    std::vector<NodeId> component_of;             // none for nodes outside the mask
    std::vector<std::vector<NodeId>> components;  // reverse topological order
};

/// Iterative Tarjan restricted to the nodes in `mask`.
inline SccResult tarjan_scc(const Digraph& g, const NodeMask& mask = {}) {
    const std::size_t n = g.size();
    constexpr NodeId unvisited = SccResult::none;
    SccResult res;
    res.component_of.assign(n, SccResult::none);
    std::vector<NodeId> index(n, unvisited), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<NodeId> stack;
    std::vector<std::pair<NodeId, std::size_t>> call;  // node, next edge
    NodeId counter = 0;

    for (NodeId root = 0; root < n; ++root) {
        if (!in_mask(mask, root) || index[root] != unvisited)
            continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, i] = call.back();
            const auto& edges = g.out(v);
            if (i < edges.size()) {
                NodeId w = edges[i++].to;
                if (!in_mask(mask, w))
                    continue;
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            NodeId done = v;
            call.pop_back();
            if (!call.empty()) {
                NodeId parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
            if (low[done] == index[done]) {
                std::vector<NodeId> comp;
                NodeId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    res.component_of[w] = static_cast<NodeId>(res.components.size());
                    comp.push_back(w);
                } while (w != done);
                std::sort(comp.begin(), comp.end());
                res.components.push_back(std::move(comp));
            }
        }
    }
    return res;
}

/// A component is nontrivial if it contains a cycle (size > 1 or self-loop).
inline bool is_nontrivial(const Digraph& g, const std::vector<NodeId>& comp) {
    if (comp.size() > 1)
        return true;
    for (const Edge& e : g.out(comp.front()))
        if (e.to == comp.front())
            return true;
    return false;
}

/// Forward reachability from `sources`, staying inside `mask`.
inline NodeMask reachable_from(const Digraph& g, const std::vector<NodeId>& sources, const NodeMask& mask = {}) {
    NodeMask seen(g.size(), 0);
    std::deque<NodeId> queue;
    for (NodeId s : sources)
        if (in_mask(mask, s) && !seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        for (const Edge& e : g.out(v))
            if (in_mask(mask, e.to) && !seen[e.to]) {
                seen[e.to] = 1;
                queue.push_back(e.to);
            }
    }
    return seen;
}

/// Nodes that can reach some node of `targets` (targets included).
inline NodeMask can_reach(const Digraph& g, const NodeMask& targets) {
    std::vector<NodeId> src;
    for (NodeId v = 0; v < g.size(); ++v)
        if (targets[v])
            src.push_back(v);
    return reachable_from(g.reversed(), src);
}

/// Büchi-style cycle requirement: a nontrivial strongly connected set inside
/// `allowed` that intersects every set in `must_visit`. Co-Büchi, generalized
/// Büchi and parity conditions are all expressed as disjunctions of these.
struct CycleCondition {
    NodeMask allowed;                 // empty = every node
    std::vector<NodeMask> must_visit;
};

inline NodeMask intersect(const NodeMask& a, const NodeMask& b, std::size_t n) {
    NodeMask r(n, 1);
    for (std::size_t i = 0; i < n; ++i)
        r[i] = static_cast<char>(in_mask(a, static_cast<NodeId>(i)) && in_mask(b, static_cast<NodeId>(i)));
    return r;
}

/// All components of g restricted to (scope ∩ cond.allowed) that satisfy the
/// condition, in Tarjan order.
inline std::vector<std::vector<NodeId>> good_components(const Digraph& g, const NodeMask& scope,
                                                        const CycleCondition& cond) {
    NodeMask mask = intersect(scope, cond.allowed, g.size());
    SccResult scc = tarjan_scc(g, mask);
    std::vector<std::vector<NodeId>> out;
    for (const auto& comp : scc.components) {
        // nontriviality must be judged inside the mask
        bool nontrivial = comp.size() > 1;
        if (!nontrivial)
            for (const Edge& e : g.out(comp.front()))
                if (e.to == comp.front())
                    nontrivial = true;
        if (!nontrivial)
            continue;
        bool ok = true;
        for (const NodeMask& m : cond.must_visit) {
            bool hit = false;
            for (NodeId v : comp)
                if (m[v]) {
                    hit = true;
                    break;
                }
            if (!hit) {
                ok = false;
                break;
            }
        }
        if (ok)
            out.push_back(comp);
    }
    return out;
}

/// Nodes lying in some good component for any of the alternatives.
inline NodeMask good_nodes(const Digraph& g, const NodeMask& scope, const std::vector<CycleCondition>& alts) {
    NodeMask r(g.size(), 0);
    for (const auto& c : alts)
        for (const auto& comp : good_components(g, scope, c))
            for (NodeId v : comp)
                r[v] = 1;
    return r;
}

/// Path through the graph as node sequence plus edge labels.
struct Path {
    std::vector<NodeId> nodes;  // nodes.size() == labels.size() + 1
    std::vector<Label> labels;
};

/// BFS shortest path from any source to any target, staying inside `mask`.
/// When `nonempty` is set, a source that is itself a target only counts if it
/// is re-entered through at least one edge.
inline std::optional<Path> shortest_path(const Digraph& g, const std::vector<NodeId>& sources,
                                         const NodeMask& targets, const NodeMask& mask = {},
                                         bool nonempty = false) {
    const std::size_t n = g.size();
    constexpr NodeId unset = static_cast<NodeId>(-1);
    std::vector<NodeId> parent(n, unset);
    std::vector<Label> via(n, 0);
    std::vector<char> seen(n, 0);
    std::deque<NodeId> queue;
    for (NodeId s : sources) {
        if (!in_mask(mask, s))
            continue;
        if (!nonempty && targets[s])
            return Path{{s}, {}};
        if (!seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    }
    // With `nonempty`, sources stay re-discoverable as targets.
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        for (const Edge& e : g.out(v)) {
            if (!in_mask(mask, e.to))
                continue;
            if (targets[e.to]) {
                Path p;
                p.nodes.push_back(e.to);
                p.labels.push_back(e.label);
                for (NodeId w = v;; w = parent[w]) {
                    p.nodes.push_back(w);
                    if (parent[w] == unset)
                        break;
                    p.labels.push_back(via[w]);
                }
                std::reverse(p.nodes.begin(), p.nodes.end());
                std::reverse(p.labels.begin(), p.labels.end());
                return p;
            }
            if (!seen[e.to]) {
                seen[e.to] = 1;
                parent[e.to] = v;
                via[e.to] = e.label;
                queue.push_back(e.to);
            }
        }
    }
    return std::nullopt;
}

/// Prefix path into a good component and a cycle through it visiting every
/// must-visit set.
struct LassoPath {
    Path stem;   // ends at cycle.nodes.front()
    Path cycle;  // starts and ends at the same node, at least one edge
};

/// Variant where the stem runs in `stem_graph` and the cycle must use edges of
/// `cycle_graph` (both over the same node set).
inline std::optional<LassoPath> find_lasso(const Digraph& stem_graph, const Digraph& g,
                                           const std::vector<NodeId>& sources,
                                           const std::vector<CycleCondition>& alts) {
    NodeMask reach = reachable_from(stem_graph, sources);
    for (const auto& cond : alts) {
        auto comps = good_components(g, reach, cond);
        if (comps.empty())
            continue;
        // Choose the component closest to the sources.
        NodeMask in_any(g.size(), 0);
        std::vector<NodeId> owner(g.size(), 0);
        for (NodeId c = 0; c < comps.size(); ++c)
            for (NodeId v : comps[c]) {
                in_any[v] = 1;
                owner[v] = c;
            }
        auto stem = shortest_path(stem_graph, sources, in_any);
        if (!stem)
            continue;
        NodeId start = stem->nodes.back();
        const auto& comp = comps[owner[start]];
        NodeMask comp_mask(g.size(), 0);
        for (NodeId v : comp)
            comp_mask[v] = 1;

        Path cycle{{start}, {}};
        NodeId cur = start;
        for (const NodeMask& must : cond.must_visit) {
            NodeMask target(g.size(), 0);
            for (NodeId v : comp)
                if (must[v])
                    target[v] = 1;
            if (target[cur])
                continue;
            auto leg = shortest_path(g, {cur}, target, comp_mask);
            if (!leg)
                return std::nullopt;  // unreachable inside an SCC: cannot happen
            cycle.nodes.insert(cycle.nodes.end(), leg->nodes.begin() + 1, leg->nodes.end());
            cycle.labels.insert(cycle.labels.end(), leg->labels.begin(), leg->labels.end());
            cur = leg->nodes.back();
        }
        NodeMask back(g.size(), 0);
        back[start] = 1;
        auto leg = shortest_path(g, {cur}, back, comp_mask, true);
        if (!leg)
            return std::nullopt;
        cycle.nodes.insert(cycle.nodes.end(), leg->nodes.begin() + 1, leg->nodes.end());
        cycle.labels.insert(cycle.labels.end(), leg->labels.begin(), leg->labels.end());
        return LassoPath{std::move(*stem), std::move(cycle)};
    }
    return std::nullopt;
}

inline std::optional<LassoPath> find_lasso(const Digraph& g, const std::vector<NodeId>& sources,
                                           const std::vector<CycleCondition>& alts) {
    return find_lasso(g, g, sources, alts);
}

}  // namespace pbamb
