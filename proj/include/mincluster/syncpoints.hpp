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
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mincluster/digraph.hpp"
#include "mincluster/graph.hpp"

namespace mincluster {

enum class SyncpointKind { fsp, fhsp, bhsp, sp11 };

constexpr std::string_view to_string(SyncpointKind k) {
    switch (k) {
    case SyncpointKind::fsp: return "FSP";
    case SyncpointKind::fhsp: return "FHSP";
    case SyncpointKind::bhsp: return "BHSP";
    case SyncpointKind::sp11: return "11SP";
    }
    return "?";
}

/// True for kinds that may open a cluster (condition a holds).
constexpr bool can_open(SyncpointKind k) { return k != SyncpointKind::bhsp; }
/// True for kinds that may close a cluster (condition b holds).
constexpr bool can_close(SyncpointKind k) { return k != SyncpointKind::fhsp; }

struct Syncpoint {
    std::uint32_t id = 0;
    SyncpointKind kind = SyncpointKind::fsp;
    std::vector<Vertex> starts; // P, sorted by index
    std::vector<Vertex> ends;   // S, sorted by index
    std::vector<std::pair<Vertex, Vertex>> edges;
    VertexSet start_set;
    VertexSet end_set;
};

namespace detail {

inline Syncpoint make_syncpoint(const StDag &g, SyncpointKind kind, std::vector<Vertex> starts,
                                std::vector<Vertex> ends) {
    Syncpoint sp;
    sp.kind = kind;
    sp.start_set = g.empty_set();
    sp.end_set = g.empty_set();
    for (Vertex v : starts) sp.start_set.set(v);
    for (Vertex v : ends) sp.end_set.set(v);
    for (Vertex u : starts) {
        for (Vertex v : g.successors(u)) {
            if (sp.end_set.test(v)) sp.edges.emplace_back(u, v);
        }
    }
    sp.starts = std::move(starts);
    sp.ends = std::move(ends);
    return sp;
}

inline bool same_span(std::span<const Vertex> a, std::span<const Vertex> b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace detail

/// Classifies an edge set by evaluating the syncpoint conditions literally.
/// Returns nullopt when the set is not a syncpoint.
inline std::optional<SyncpointKind> is_syncpoint(const StDag &g, std::span<const Edge> edge_set) {
    if (edge_set.empty()) return std::nullopt;
    std::vector<Vertex> P;
    std::vector<Vertex> S;
    std::vector<std::pair<Vertex, Vertex>> es;
    for (const Edge &e : edge_set) {
        auto u = g.find(e.from);
        auto v = g.find(e.to);
        if (!u || !v || !g.has_edge(*u, *v)) {
            throw Error(ErrorCode::edge_not_in_graph,
                        "edge (" + std::to_string(e.from) + "," + std::to_string(e.to) + ") is not in the graph");
        }
        P.push_back(*u);
        S.push_back(*v);
        es.emplace_back(*u, *v);
    }
    for (auto *l : {&P, &S}) {
        std::sort(l->begin(), l->end());
        l->erase(std::unique(l->begin(), l->end()), l->end());
    }
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());

    // must contain every edge from P to S
    std::size_t between = 0;
    for (Vertex u : P) {
        for (Vertex v : g.successors(u)) between += std::binary_search(S.begin(), S.end(), v);
    }
    if (between != es.size()) return std::nullopt;

    // a) members of S share the predecessor set P; b) dually
    bool a = true;
    for (Vertex v : S) a = a && detail::same_span(g.predecessors(v), P);
    bool b = true;
    for (Vertex u : P) b = b && detail::same_span(g.successors(u), S);

    if (a && b) return (P.size() == 1 && S.size() == 1) ? SyncpointKind::sp11 : SyncpointKind::fsp;
    if (a && S.size() >= 2) return SyncpointKind::fhsp;
    if (b && P.size() >= 2) return SyncpointKind::bhsp;
    return std::nullopt;
}

/// Edge sets as label pairs, convenient for is_syncpoint.
inline std::vector<Edge> edge_labels(const StDag &g, const Syncpoint &sp) {
    std::vector<Edge> out;
    out.reserve(sp.edges.size());
    for (auto [u, v] : sp.edges) out.push_back({g.label(u), g.label(v)});
    std::sort(out.begin(), out.end());
    return out;
}

/// All maximum syncpoints, in the order the twin-class scan emits them.
///
/// Out-twin classes yield FSPs or BHSPs, in-twin classes yield FHSPs or
/// the FSPs not seen yet, and single edges joining an out-degree-one vertex
/// to an in-degree-one vertex yield 11SPs. The graph must be free of
/// redundant edges.
inline std::vector<Syncpoint> find_all_msps(const StDag &g) {
    const TwinPartition tp = twin_classes(g);
    std::vector<Syncpoint> out;

    auto is_in_class = [&](std::span<const Vertex> set) {
        auto c = tp.in_class_of[set.front()];
        return c >= 0 && detail::same_span(tp.in_twin_classes[c], set);
    };
    auto is_out_class = [&](std::span<const Vertex> set) {
        auto c = tp.out_class_of[set.front()];
        return c >= 0 && detail::same_span(tp.out_twin_classes[c], set);
    };

    for (const auto &P : tp.out_twin_classes) {
        auto S = g.successors(P.front());
        bool full = (S.size() == 1 || is_in_class(S)) && g.in_degree(S.front()) == P.size();
        out.push_back(detail::make_syncpoint(g, full ? SyncpointKind::fsp : SyncpointKind::bhsp, P,
                                             std::vector<Vertex>(S.begin(), S.end())));
    }
    for (const auto &S : tp.in_twin_classes) {
        auto P = g.predecessors(S.front());
        const bool outdeg_matches = g.out_degree(P.front()) == S.size();
        if (is_out_class(P) && outdeg_matches) continue;
        auto kind = (P.size() == 1 && outdeg_matches) ? SyncpointKind::fsp : SyncpointKind::fhsp;
        out.push_back(detail::make_syncpoint(g, kind, std::vector<Vertex>(P.begin(), P.end()), S));
    }
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
        if (g.out_degree(u) != 1) continue;
        Vertex v = g.successors(u).front();
        if (g.in_degree(v) == 1) out.push_back(detail::make_syncpoint(g, SyncpointKind::sp11, {u}, {v}));
    }
    for (std::uint32_t i = 0; i < out.size(); ++i) out[i].id = i;
    return out;
}

/// Immediate-precedence DAG over the maximum syncpoints.
struct MspDag {
    std::vector<Syncpoint> msps;
    Digraph dag;
    std::optional<NodeId> source; // MSP holding the edges leaving the graph source
    std::optional<NodeId> target; // MSP holding the edges entering the graph target

    std::size_t size() const noexcept { return msps.size(); }
};

/// Ids of the MSPs each edge belongs to, in CSR layout over g's successor lists.
struct EdgeMembership {
    std::vector<std::size_t> offset; // first edge slot of each vertex
    std::vector<std::vector<NodeId>> msps;

    std::span<const NodeId> of(const StDag &g, Vertex u, Vertex v) const {
        auto s = g.successors(u);
        auto pos = static_cast<std::size_t>(std::lower_bound(s.begin(), s.end(), v) - s.begin());
        return msps[offset[u] + pos];
    }
};

inline EdgeMembership edge_membership(const StDag &g, const std::vector<Syncpoint> &msps) {
    EdgeMembership m;
    m.offset.resize(g.vertex_count() + 1, 0);
    for (Vertex u = 0; u < g.vertex_count(); ++u) m.offset[u + 1] = m.offset[u] + g.out_degree(u);
    m.msps.assign(m.offset.back(), {});
    for (const auto &sp : msps) {
        for (auto [u, v] : sp.edges) {
            auto s = g.successors(u);
            auto pos = static_cast<std::size_t>(std::lower_bound(s.begin(), s.end(), v) - s.begin());
            m.msps[m.offset[u] + pos].push_back(sp.id);
        }
    }
    return m;
}

/// Builds the MSP-DAG. Redundant edges are kept.
///
/// From every vertex the set of MSPs first met along edges that belong to
/// no MSP is memoized in reverse topological order, so each edge is
/// inspected once overall.
inline MspDag build_msp_dag(const StDag &g, std::vector<Syncpoint> msps) {
    const std::size_t N = msps.size();
    MspDag out;
    out.dag = Digraph(N);
    const EdgeMembership member = edge_membership(g, msps);

    std::vector<boost::dynamic_bitset<std::uint64_t>> first_hit(g.vertex_count(),
                                                                 boost::dynamic_bitset<std::uint64_t>(N));
    for (std::size_t i = g.vertex_count(); i-- > 0;) {
        const Vertex u = static_cast<Vertex>(i);
        auto succ = g.successors(u);
        for (std::size_t k = 0; k < succ.size(); ++k) {
            const auto &ids = member.msps[member.offset[u] + k];
            if (ids.empty()) {
                first_hit[u] |= first_hit[succ[k]];
            } else {
                for (NodeId id : ids) first_hit[u].set(id);
            }
        }
    }
    for (const auto &x : msps) {
        boost::dynamic_bitset<std::uint64_t> hits(N);
        for (Vertex v : x.ends) hits |= first_hit[v];
        hits.reset(x.id);
        for (auto z = hits.find_first(); z != hits.npos; z = hits.find_next(z)) {
            out.dag.add_edge(x.id, static_cast<NodeId>(z));
        }
    }
    // a BHSP sharing an edge with an FHSP precedes it
    for (const auto &ids : member.msps) {
        for (NodeId a : ids) {
            for (NodeId b : ids) {
                if (msps[a].kind == SyncpointKind::bhsp && msps[b].kind == SyncpointKind::fhsp) out.dag.add_edge(a, b);
            }
        }
    }
    if (g.vertex_count() > 1) {
        const Vertex s = g.source();
        const Vertex t = g.target();
        auto from_s = member.of(g, s, g.successors(s).front());
        auto into_t = member.of(g, g.predecessors(t).front(), t);
        if (!from_s.empty()) out.source = from_s.front();
        if (!into_t.empty()) out.target = into_t.front();
    }
    out.msps = std::move(msps);
    return out;
}

inline MspDag build_msp_dag(const StDag &g) { return build_msp_dag(g, find_all_msps(g)); }

inline nlohmann::json msp_to_json(const StDag &g, const Syncpoint &sp) {
    nlohmann::json j;
    j["id"] = sp.id;
    j["kind"] = std::string(to_string(sp.kind));
    auto edges = nlohmann::json::array();
    for (const Edge &e : edge_labels(g, sp)) edges.push_back({e.from, e.to});
    j["edges"] = std::move(edges);
    j["P"] = g.to_labels(sp.starts);
    j["S"] = g.to_labels(sp.ends);
    return j;
}

inline nlohmann::json to_json(const StDag &g, const MspDag &d) {
    nlohmann::json j;
    j["msps"] = nlohmann::json::array();
    for (const auto &sp : d.msps) j["msps"].push_back(msp_to_json(g, sp));
    auto edges = nlohmann::json::array();
    for (auto [u, v] : d.dag.edges()) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    j["source"] = d.source ? nlohmann::json(*d.source) : nlohmann::json();
    j["target"] = d.target ? nlohmann::json(*d.target) : nlohmann::json();
    return j;
}

inline std::string to_dot(const StDag &g, const MspDag &d) {
    auto join = [](const std::vector<VertexId> &ids) {
        std::string s;
        for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i]);
        return s;
    };
    std::ostringstream os;
    os << "digraph msp_dag {\n  node [shape=box];\n";
    for (const auto &sp : d.msps) {
        os << "  " << sp.id << " [label=\"" << sp.id << " " << to_string(sp.kind) << "\\n{" << join(g.to_labels(sp.starts))
           << "} -> {" << join(g.to_labels(sp.ends)) << "}\"];\n";
    }
    for (auto [u, v] : d.dag.edges()) os << "  " << u << " -> " << v << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace mincluster
