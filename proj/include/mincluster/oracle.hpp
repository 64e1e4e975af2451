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

// Brute-force reference implementations for tests. Everything here is
// exponential and deliberately naive; it shares no code with the pipeline
// beyond the graph container.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "mincluster/digraph.hpp"
#include "mincluster/graph.hpp"

namespace mincluster {

inline constexpr std::size_t oracle_vertex_cap = 20;

enum class ClusterNotion {
    literal,   ///< any vertex set meeting the entry/exit conditions
    connected, ///< additionally, the induced subgraph is weakly connected
};

struct OracleCluster {
    std::vector<VertexId> vertices;
    std::vector<VertexId> entries;
    std::vector<VertexId> exits;
};

struct OracleReport {
    std::vector<OracleCluster> all_clusters;
    std::vector<OracleCluster> minimal_clusters;
};

namespace detail {

struct MaskGraph {
    std::vector<VertexId> ids; // sorted labels, bit i <-> ids[i]
    std::vector<std::uint32_t> pred;
    std::vector<std::uint32_t> succ;
    std::uint32_t source = 0;
    std::uint32_t target = 0;

    explicit MaskGraph(const StDag &g) {
        ids = g.labels();
        std::sort(ids.begin(), ids.end());
        pred.assign(ids.size(), 0);
        succ.assign(ids.size(), 0);
        auto bit = [&](VertexId id) {
            return static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
        };
        for (const Edge &e : g.edges()) {
            succ[bit(e.from)] |= 1u << bit(e.to);
            pred[bit(e.to)] |= 1u << bit(e.from);
        }
        for (std::uint32_t i = 0; i < ids.size(); ++i) {
            if (pred[i] == 0) source = i;
            if (succ[i] == 0) target = i;
        }
    }

    std::vector<VertexId> labels(std::uint32_t mask) const {
        std::vector<VertexId> out;
        for (std::uint32_t i = 0; i < ids.size(); ++i) {
            if (mask >> i & 1u) out.push_back(ids[i]);
        }
        return out;
    }

    bool weakly_connected(std::uint32_t set) const {
        std::uint32_t seen = set & (~set + 1);
        std::uint32_t frontier = seen;
        while (frontier) {
            std::uint32_t next = 0;
            for (std::uint32_t f = frontier; f; f &= f - 1) {
                const int i = std::countr_zero(f);
                next |= (pred[i] | succ[i]) & set;
            }
            frontier = next & ~seen;
            seen |= next;
        }
        return seen == set;
    }

    /// Entry and exit masks if `set` is a cluster, else false.
    bool cluster(std::uint32_t set, ClusterNotion notion, std::uint32_t &entries, std::uint32_t &exits) const {
        entries = 0;
        exits = 0;
        for (std::uint32_t f = set; f; f &= f - 1) {
            const int i = std::countr_zero(f);
            if (static_cast<std::uint32_t>(i) == source || (pred[i] & ~set)) entries |= 1u << i;
            if (static_cast<std::uint32_t>(i) == target || (succ[i] & ~set)) exits |= 1u << i;
        }
        if (std::popcount(entries) < 2 || std::popcount(exits) < 2 || (entries & exits)) return false;
        const std::uint32_t p0 = pred[std::countr_zero(entries)];
        for (std::uint32_t f = entries; f; f &= f - 1) {
            if (pred[std::countr_zero(f)] != p0) return false;
        }
        const std::uint32_t s0 = succ[std::countr_zero(exits)];
        for (std::uint32_t f = exits; f; f &= f - 1) {
            if (succ[std::countr_zero(f)] != s0) return false;
        }
        return notion == ClusterNotion::literal || weakly_connected(set);
    }
};

inline std::vector<OracleCluster> minimal_only(const std::vector<std::pair<std::uint32_t, OracleCluster>> &all) {
    std::vector<OracleCluster> out;
    for (const auto &[m, c] : all) {
        bool minimal = true;
        for (const auto &[m2, c2] : all) {
            if (m2 != m && (m2 & m) == m2) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.push_back(c);
    }
    return out;
}

inline OracleReport enumerate(const StDag &g, std::uint32_t universe, ClusterNotion notion) {
    MaskGraph mg(g);
    std::vector<std::pair<std::uint32_t, OracleCluster>> found;
    // all non-empty subsets of `universe`
    for (std::uint32_t s = universe; s; s = (s - 1) & universe) {
        std::uint32_t a = 0;
        std::uint32_t b = 0;
        if (mg.cluster(s, notion, a, b)) found.push_back({s, {mg.labels(s), mg.labels(a), mg.labels(b)}});
    }
    std::sort(found.begin(), found.end(),
              [](const auto &x, const auto &y) { return x.second.vertices < y.second.vertices; });
    OracleReport r;
    r.minimal_clusters = minimal_only(found);
    for (auto &f : found) r.all_clusters.push_back(std::move(f.second));
    return r;
}

inline void check_size(std::size_t n, const char *what) {
    if (n > oracle_vertex_cap) {
        throw Error(ErrorCode::too_large, std::string(what) + " has " + std::to_string(n) + " vertices; the oracle cap is " +
                                              std::to_string(oracle_vertex_cap));
    }
}

} // namespace detail

/// Every vertex subset checked against the cluster definition.
inline OracleReport oracle_report(const StDag &g, ClusterNotion notion = ClusterNotion::literal) {
    detail::check_size(g.vertex_count(), "graph");
    const std::uint32_t universe =
        g.vertex_count() == 32 ? UINT32_MAX : (std::uint32_t{1} << g.vertex_count()) - 1;
    return detail::enumerate(g, universe, notion);
}

inline std::vector<std::vector<VertexId>> oracle_all_clusters(const StDag &g,
                                                              ClusterNotion notion = ClusterNotion::literal) {
    std::vector<std::vector<VertexId>> out;
    for (auto &c : oracle_report(g, notion).all_clusters) out.push_back(std::move(c.vertices));
    return out;
}

inline std::vector<std::vector<VertexId>> oracle_minimal_clusters(const StDag &g,
                                                                  ClusterNotion notion = ClusterNotion::literal) {
    std::vector<std::vector<VertexId>> out;
    for (auto &c : oracle_report(g, notion).minimal_clusters) out.push_back(std::move(c.vertices));
    return out;
}

/// Clusters whose vertices all lie in `candidate` (at most 20 vertices),
/// for graphs too large for a full scan.
inline OracleReport oracle_clusters_within(const StDag &g, std::span<const VertexId> candidate,
                                           ClusterNotion notion = ClusterNotion::literal) {
    detail::check_size(candidate.size(), "candidate set");
    // restrict enumeration to the candidate bits of a graph-sized mask
    std::vector<VertexId> ids = g.labels();
    std::sort(ids.begin(), ids.end());
    if (ids.size() <= 32) {
        std::uint32_t universe = 0;
        for (VertexId v : candidate) {
            universe |= 1u << (std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
        }
        return detail::enumerate(g, universe, notion);
    }
    throw Error(ErrorCode::too_large, "graph has more than 32 vertices");
}

/// Number of paths with at least one edge, by exhaustive DFS.
inline std::uint64_t oracle_count_paths(const Digraph &d) {
    detail::check_size(d.node_count(), "digraph");
    std::uint64_t count = 0;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < d.node_count(); ++s) {
        stack.assign(1, s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : d.successors(u)) {
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count;
}

/// Every path with at least one edge, by exhaustive DFS, sorted.
inline std::vector<std::vector<NodeId>> oracle_all_paths(const Digraph &d) {
    detail::check_size(d.node_count(), "digraph");
    std::vector<std::vector<NodeId>> out;
    std::vector<std::vector<NodeId>> stack;
    for (NodeId s = 0; s < d.node_count(); ++s) {
        stack.push_back({s});
        while (!stack.empty()) {
            auto p = std::move(stack.back());
            stack.pop_back();
            for (NodeId v : d.successors(p.back())) {
                auto q = p;
                q.push_back(v);
                out.push_back(q);
                stack.push_back(std::move(q));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Members of `paths` that extend `p` at the front and/or the tail.
inline std::vector<std::vector<NodeId>> oracle_superpaths(const std::vector<std::vector<NodeId>> &paths,
                                                          std::span<const NodeId> p) {
    std::vector<std::vector<NodeId>> out;
    for (const auto &q : paths) {
        if (q.size() <= p.size()) continue;
        for (std::size_t i = 0; i + p.size() <= q.size(); ++i) {
            if (std::equal(p.begin(), p.end(), q.begin() + static_cast<std::ptrdiff_t>(i))) {
                out.push_back(q);
                break;
            }
        }
    }
    return out;
}

} // namespace mincluster
