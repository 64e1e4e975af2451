/*
Copyright 2026 The mincluster Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "mincluster/error.hpp"

namespace mincluster {

/// User-facing vertex label as it appears in graph files.
using VertexId = std::uint32_t;

/// Dense vertex index inside an StDag. Indices follow a topological order,
/// so index 0 is the source and index n-1 the target.
using Vertex = std::uint32_t;

/// Vertex subsets are bitsets indexed by topological position.
using VertexSet = boost::dynamic_bitset<std::uint64_t>;

struct Edge {
    VertexId from = 0;
    VertexId to = 0;

    friend auto operator<=>(const Edge &, const Edge &) = default;
};

template <typename F>
void for_each_member(const VertexSet &set, F &&f) {
    for (auto i = set.find_first(); i != VertexSet::npos; i = set.find_next(i)) {
        f(static_cast<Vertex>(i));
    }
}

inline std::vector<Vertex> members_of(const VertexSet &set) {
    std::vector<Vertex> out;
    out.reserve(set.count());
    for_each_member(set, [&](Vertex v) { out.push_back(v); });
    return out;
}

struct VectorHash {
    std::size_t operator()(const std::vector<Vertex> &key) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL ^ key.size();
        for (Vertex v : key) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

/// A validated single-source/single-target DAG.
///
/// Vertices are stored in a deterministic topological order (Kahn's
/// algorithm, smallest label first). Adjacency lists are sorted by index.
/// Instances are immutable after construction.
class StDag {
  public:
    std::size_t vertex_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    Vertex source() const noexcept { return 0; }
    Vertex target() const noexcept { return static_cast<Vertex>(labels_.size() - 1); }

    VertexId label(Vertex v) const { return labels_[v]; }

    /// Labels in topological order.
    const std::vector<VertexId> &labels() const noexcept { return labels_; }

    std::optional<Vertex> find(VertexId id) const {
        auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(id, Vertex{0}));
        if (it == lookup_.end() || it->first != id) return std::nullopt;
        return it->second;
    }

    Vertex at(VertexId id) const {
        if (auto v = find(id)) return *v;
        throw Error(ErrorCode::dangling_edge_endpoint, "vertex " + std::to_string(id) + " is not in the graph");
    }

    std::span<const Vertex> successors(Vertex v) const { return succ_[v]; }
    std::span<const Vertex> predecessors(Vertex v) const { return pred_[v]; }
    std::size_t out_degree(Vertex v) const { return succ_[v].size(); }
    std::size_t in_degree(Vertex v) const { return pred_[v].size(); }

    bool has_edge(Vertex u, Vertex v) const {
        return std::binary_search(succ_[u].begin(), succ_[u].end(), v);
    }

    /// All edges as label pairs, sorted.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edge_count_);
        for (Vertex u = 0; u < vertex_count(); ++u) {
            for (Vertex v : succ_[u]) out.push_back({labels_[u], labels_[v]});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    VertexSet empty_set() const { return VertexSet(vertex_count()); }

    VertexSet make_set(std::span<const VertexId> ids) const {
        VertexSet s = empty_set();
        for (VertexId id : ids) s.set(at(id));
        return s;
    }

    /// Sorted labels of the members of `set`.
    std::vector<VertexId> to_labels(const VertexSet &set) const {
        std::vector<VertexId> out;
        for_each_member(set, [&](Vertex v) { out.push_back(labels_[v]); });
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<VertexId> to_labels(std::span<const Vertex> vs) const {
        std::vector<VertexId> out;
        out.reserve(vs.size());
        for (Vertex v : vs) out.push_back(labels_[v]);
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    friend StDag validate_st_dag(std::vector<VertexId> vertices, std::vector<Edge> edges);

    StDag() = default;

    std::vector<VertexId> labels_;
    std::vector<std::pair<VertexId, Vertex>> lookup_;
    std::vector<std::vector<Vertex>> succ_;
    std::vector<std::vector<Vertex>> pred_;
    std::size_t edge_count_ = 0;
};

/// Builds an StDag from a vertex list and an edge list.
///
/// Duplicate edges collapse. Redundant edges are kept; see
/// transitive_reduction() and normalize().
inline StDag validate_st_dag(std::vector<VertexId> vertices, std::vector<Edge> edges) {
    if (vertices.empty()) throw Error(ErrorCode::empty_vertex_set, "graph has no vertices");

    std::sort(vertices.begin(), vertices.end());
    if (auto dup = std::adjacent_find(vertices.begin(), vertices.end()); dup != vertices.end()) {
        throw Error(ErrorCode::duplicate_vertex, "vertex " + std::to_string(*dup) + " is declared twice");
    }
    const std::size_t n = vertices.size();
    auto rank_of = [&](VertexId id) -> std::size_t {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), id);
        if (it == vertices.end() || *it != id) {
            throw Error(ErrorCode::dangling_edge_endpoint, "edge endpoint " + std::to_string(id) + " is not a declared vertex");
        }
        return static_cast<std::size_t>(it - vertices.begin());
    };

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // adjacency over label rank
    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<std::size_t> indeg(n, 0);
    for (const Edge &e : edges) {
        std::size_t u = rank_of(e.from);
        std::size_t v = rank_of(e.to);
        if (u == v) throw Error(ErrorCode::cycle_detected, "self-loop at vertex " + std::to_string(e.from));
        succ[u].push_back(v);
        ++indeg[v];
    }

    // Kahn, smallest label first
    std::vector<std::size_t> remaining = indeg;
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t v = 0; v < n; ++v) {
        if (remaining[v] == 0) ready.push(v);
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        std::size_t u = ready.top();
        ready.pop();
        order.push_back(u);
        for (std::size_t v : succ[u]) {
            if (--remaining[v] == 0) ready.push(v);
        }
    }
    if (order.size() != n) throw Error(ErrorCode::cycle_detected, "graph contains a directed cycle");

    std::size_t sources = 0;
    std::size_t targets = 0;
    for (std::size_t v = 0; v < n; ++v) {
        sources += indeg[v] == 0;
        targets += succ[v].empty();
    }
    if (sources > 1) throw Error(ErrorCode::multiple_sources, std::to_string(sources) + " vertices without incoming edges");
    if (targets > 1) throw Error(ErrorCode::multiple_targets, std::to_string(targets) + " vertices without outgoing edges");

    std::vector<Vertex> position(n);
    for (std::size_t i = 0; i < n; ++i) position[order[i]] = static_cast<Vertex>(i);

    StDag g;
    g.labels_.resize(n);
    g.succ_.assign(n, {});
    g.pred_.assign(n, {});
    g.lookup_.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        Vertex v = position[r];
        g.labels_[v] = vertices[r];
        g.lookup_.emplace_back(vertices[r], v);
        for (std::size_t w : succ[r]) {
            g.succ_[v].push_back(position[w]);
            g.pred_[position[w]].push_back(v);
        }
    }
    for (auto &list : g.succ_) std::sort(list.begin(), list.end());
    for (auto &list : g.pred_) std::sort(list.begin(), list.end());
    g.edge_count_ = edges.size();
    return g;
}

/// Vertex labels in the graph's topological order.
inline std::vector<VertexId> topological_order(const StDag &g) { return g.labels(); }

/// Reflexive forward/backward reachability plus immediate neighbour sets.
struct ReachabilityIndex {
    std::vector<VertexSet> fw_reach;
    std::vector<VertexSet> bw_reach;
    std::vector<VertexSet> pred;
    std::vector<VertexSet> succ;

    VertexSet forward(const VertexSet &from) const {
        VertexSet out(from.size());
        for_each_member(from, [&](Vertex v) { out |= fw_reach[v]; });
        return out;
    }

    VertexSet backward(const VertexSet &from) const {
        VertexSet out(from.size());
        for_each_member(from, [&](Vertex v) { out |= bw_reach[v]; });
        return out;
    }
};

inline ReachabilityIndex build_reachability_index(const StDag &g) {
    const std::size_t n = g.vertex_count();
    ReachabilityIndex idx;
    idx.fw_reach.assign(n, VertexSet(n));
    idx.bw_reach.assign(n, VertexSet(n));
    idx.pred.assign(n, VertexSet(n));
    idx.succ.assign(n, VertexSet(n));
    for (std::size_t i = n; i-- > 0;) {
        const Vertex v = static_cast<Vertex>(i);
        idx.fw_reach[v].set(v);
        for (Vertex w : g.successors(v)) {
            idx.succ[v].set(w);
            idx.fw_reach[v] |= idx.fw_reach[w];
        }
    }
    for (Vertex v = 0; v < n; ++v) {
        idx.bw_reach[v].set(v);
        for (Vertex u : g.predecessors(v)) {
            idx.pred[v].set(u);
            idx.bw_reach[v] |= idx.bw_reach[u];
        }
    }
    return idx;
}

/// Edges (u,v) for which another u-v path exists.
inline std::vector<Edge> redundant_edges(const StDag &g) {
    const std::size_t n = g.vertex_count();
    std::vector<VertexSet> fw(n, VertexSet(n));
    for (std::size_t i = n; i-- > 0;) {
        const Vertex v = static_cast<Vertex>(i);
        fw[v].set(v);
        for (Vertex w : g.successors(v)) fw[v] |= fw[w];
    }
    std::vector<Edge> out;
    VertexSet covered(n);
    for (Vertex u = 0; u < n; ++u) {
        covered.reset();
        // successors are sorted topologically: any w reaching v precedes v
        for (Vertex v : g.successors(u)) {
            if (covered.test(v)) out.push_back({g.label(u), g.label(v)});
            covered |= fw[v];
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// The unique transitive reduction of `g`.
inline StDag transitive_reduction(const StDag &g) {
    auto redundant = redundant_edges(g);
    if (redundant.empty()) return g;
    std::vector<Edge> kept;
    for (const Edge &e : g.edges()) {
        if (!std::binary_search(redundant.begin(), redundant.end(), e)) kept.push_back(e);
    }
    return validate_st_dag(g.labels(), std::move(kept));
}

enum class RedundancyPolicy {
    normalize, ///< drop redundant edges and report them
    reject,    ///< throw RedundantEdge
};

struct Normalized {
    StDag graph;
    std::vector<Edge> removed;
};

inline Normalized normalize(const StDag &g, RedundancyPolicy policy = RedundancyPolicy::normalize) {
    auto redundant = redundant_edges(g);
    if (redundant.empty()) return {g, {}};
    if (policy == RedundancyPolicy::reject) {
        const Edge &e = redundant.front();
        throw Error(ErrorCode::redundant_edge, "edge (" + std::to_string(e.from) + "," + std::to_string(e.to) +
                                                   ") is redundant; " + std::to_string(redundant.size()) +
                                                   " redundant edge(s) in total");
    }
    return {transitive_reduction(g), std::move(redundant)};
}

/// Maximal groups (size >= 2) of vertices sharing predecessor or successor sets.
struct TwinPartition {
    std::vector<std::vector<Vertex>> in_twin_classes;
    std::vector<std::vector<Vertex>> out_twin_classes;
    /// Class index per vertex, -1 when the vertex has no twin.
    std::vector<std::int32_t> in_class_of;
    std::vector<std::int32_t> out_class_of;
};

namespace detail {

inline void group_twins(const StDag &g, bool by_predecessors, std::vector<std::vector<Vertex>> &classes,
                        std::vector<std::int32_t> &class_of) {
    const std::size_t n = g.vertex_count();
    std::unordered_map<std::vector<Vertex>, std::size_t, VectorHash> groups;
    std::vector<std::vector<Vertex>> buckets;
    for (Vertex v = 0; v < n; ++v) {
        auto nb = by_predecessors ? g.predecessors(v) : g.successors(v);
        if (nb.empty()) continue;
        std::vector<Vertex> key(nb.begin(), nb.end());
        auto [it, inserted] = groups.try_emplace(std::move(key), buckets.size());
        if (inserted) buckets.emplace_back();
        buckets[it->second].push_back(v);
    }
    class_of.assign(n, -1);
    for (auto &bucket : buckets) {
        if (bucket.size() < 2) continue;
        for (Vertex v : bucket) class_of[v] = static_cast<std::int32_t>(classes.size());
        classes.push_back(std::move(bucket));
    }
}

} // namespace detail

inline TwinPartition twin_classes(const StDag &g) {
    TwinPartition tp;
    detail::group_twins(g, true, tp.in_twin_classes, tp.in_class_of);
    detail::group_twins(g, false, tp.out_twin_classes, tp.out_class_of);
    return tp;
}

struct InducedSubgraph {
    VertexSet members;
    std::vector<std::pair<Vertex, Vertex>> edges;
    VertexSet entries;
    VertexSet exits;
};

/// Maximal subgraph on `members` together with its entry and exit vertices.
inline InducedSubgraph induced_subgraph_with_borders(const StDag &g, const VertexSet &members) {
    if (members.none()) throw Error(ErrorCode::empty_vertex_set, "induced subgraph of an empty vertex set");
    InducedSubgraph sub{members, {}, g.empty_set(), g.empty_set()};
    for_each_member(members, [&](Vertex v) {
        bool entry = v == g.source();
        for (Vertex u : g.predecessors(v)) {
            if (!members.test(u)) entry = true;
        }
        bool exit = v == g.target();
        for (Vertex w : g.successors(v)) {
            if (members.test(w)) {
                sub.edges.emplace_back(v, w);
            } else {
                exit = true;
            }
        }
        if (entry) sub.entries.set(v);
        if (exit) sub.exits.set(v);
    });
    return sub;
}

inline InducedSubgraph induced_subgraph_with_borders(const StDag &g, std::span<const VertexId> ids) {
    return induced_subgraph_with_borders(g, g.make_set(ids));
}

} // namespace mincluster
