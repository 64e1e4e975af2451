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
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mincluster/graph.hpp"
#include "mincluster/graph_io.hpp"
#include "mincluster/msp_paths.hpp"
#include "mincluster/sp_reduce.hpp"
#include "mincluster/syncpoints.hpp"

namespace mincluster {

struct Cluster {
    VertexSet vertices;
    VertexSet entries;
    VertexSet exits;
    bool is_complex = false;
    std::optional<NodeId> opening_msp;
    std::optional<NodeId> closing_msp;
};

/// Per-seed record of the forward/backward fixpoint in cluster_check.
struct FixpointTrace {
    Vertex seed = 0;
    /// (|Xset|, |Yset|) after each iteration of the inner loop.
    std::vector<std::pair<std::size_t, std::size_t>> sizes;
};

struct ClusterCheckResult {
    bool found = false;
    std::vector<Cluster> clusters;
    std::vector<FixpointTrace> trace;
};

/// True when the subgraph between `xset` and `yset` can be entered only
/// through `xset` and left only through `yset`.
inline bool closed_check(const ReachabilityIndex &idx, const VertexSet &xset, const VertexSet &yset) {
    const VertexSet region = idx.forward(xset) & idx.backward(yset);
    if (region.none()) return false;
    bool closed = true;
    for_each_member(region, [&](Vertex v) {
        if (!closed) return;
        if (!xset.test(v) && !idx.pred[v].is_subset_of(region)) closed = false;
        if (!yset.test(v) && !idx.succ[v].is_subset_of(region)) closed = false;
    });
    return closed;
}

inline bool closed_check(const StDag &g, const ReachabilityIndex &idx, std::span<const VertexId> xset,
                         std::span<const VertexId> yset) {
    return closed_check(idx, g.make_set(xset), g.make_set(yset));
}

/// Searches the region between opening MSP `x` and closing MSP `y` for
/// clusters. Vertices of S_x are taken as seeds in index order; each seed is
/// grown by alternating forward and backward reachability restricted to
/// P_y and S_x until nothing changes.
inline ClusterCheckResult cluster_check(const StDag &g, const ReachabilityIndex &idx, const Syncpoint &x,
                                        const Syncpoint &y, bool keep_trace = false) {
    ClusterCheckResult out;
    VertexSet covered = g.empty_set();
    for (auto seed = x.end_set.find_first(); seed != VertexSet::npos; seed = x.end_set.find_next(seed)) {
        if (covered.test(seed)) continue;
        VertexSet xset = g.empty_set();
        xset.set(seed);
        VertexSet yset = g.empty_set();
        FixpointTrace tr{static_cast<Vertex>(seed), {}};
        for (;;) {
            VertexSet ynew = y.start_set & idx.forward(xset);
            VertexSet xnew = ynew.any() ? (x.end_set & idx.backward(ynew)) : xset;
            const bool stable = xnew == xset && ynew == yset;
            xset = std::move(xnew);
            yset = std::move(ynew);
            if (keep_trace) tr.sizes.emplace_back(xset.count(), yset.count());
            if (stable) break;
        }
        covered |= xset;
        if (keep_trace) out.trace.push_back(std::move(tr));
        if (xset.count() < 2 || yset.count() < 2 || xset.intersects(yset)) continue;
        if (!closed_check(idx, xset, yset)) continue;
        Cluster c;
        c.vertices = idx.forward(xset) & idx.backward(yset);
        c.entries = std::move(xset);
        c.exits = std::move(yset);
        c.opening_msp = x.id;
        c.closing_msp = y.id;
        out.clusters.push_back(std::move(c));
        out.found = true;
    }
    return out;
}

/// Entry and exit sets of `vset` if it satisfies the cluster definition.
inline std::optional<std::pair<VertexSet, VertexSet>> cluster_borders(const StDag &g, const VertexSet &vset) {
    if (vset.none()) return std::nullopt;
    auto sub = induced_subgraph_with_borders(g, vset);
    if (sub.entries.count() < 2 || sub.exits.count() < 2 || sub.entries.intersects(sub.exits)) return std::nullopt;
    auto twins = [](const VertexSet &set, auto neighbours) {
        auto first = neighbours(static_cast<Vertex>(set.find_first()));
        bool same = true;
        for_each_member(set, [&](Vertex v) {
            auto nb = neighbours(v);
            same = same && std::equal(nb.begin(), nb.end(), first.begin(), first.end());
        });
        return same;
    };
    if (!twins(sub.entries, [&](Vertex v) { return g.predecessors(v); })) return std::nullopt;
    if (!twins(sub.exits, [&](Vertex v) { return g.successors(v); })) return std::nullopt;
    return std::make_pair(std::move(sub.entries), std::move(sub.exits));
}

/// Validates `c` against the cluster definition and sets `is_complex`:
/// a cluster is complex when no serial or parallel step applies inside it.
inline Cluster classify_cluster(const StDag &g, Cluster c) {
    auto borders = cluster_borders(g, c.vertices);
    if (!borders) {
        throw Error(ErrorCode::not_a_cluster, "vertex set {" + [&] {
            std::string s;
            for (VertexId id : g.to_labels(c.vertices)) s += (s.empty() ? "" : ",") + std::to_string(id);
            return s;
        }() + "} is not a cluster");
    }
    c.entries = std::move(borders->first);
    c.exits = std::move(borders->second);
    c.is_complex = !has_sp_step(g, c.vertices);
    return c;
}

inline Cluster classify_cluster(const StDag &g, std::span<const VertexId> vertices) {
    Cluster c;
    c.vertices = g.make_set(vertices);
    return classify_cluster(g, std::move(c));
}

/// How MSP paths are enumerated. `stored_lists` builds every path up front
/// with pointers and separators; `levelwise` builds paths one length at a
/// time and skips superpaths of successful paths. Both check the same
/// paths. `automatic` stores lists for small MSP-DAGs only.
enum class PathSearch { automatic, stored_lists, levelwise };

struct FindOptions {
    RedundancyPolicy redundancy = RedundancyPolicy::normalize;
    std::size_t path_cap = default_path_cap;
    /// Require S_x and P_y to be disjoint before checking a pair. When false,
    /// only at least two vertices on each side outside the overlap are
    /// required; overlap vertices can never belong to a cluster.
    bool strict_disjoint_guard = false;
    PathSearch path_search = PathSearch::automatic;
    /// Largest projected path count for which `automatic` stores lists.
    std::size_t automatic_store_limit = std::size_t{1} << 20;
    /// Live paths of one length allowed in the levelwise search.
    std::size_t levelwise_cap = std::size_t{1} << 26;
    /// Drop reported clusters that strictly contain another reported one.
    bool minimality_filter = true;
};

struct Timings {
    double msps_ms = 0;
    double msp_dag_ms = 0;
    double paths_ms = 0;
    double search_ms = 0;
    double total_ms = 0;
};

struct FindResult {
    StDag graph; // the analysed graph, after normalization
    std::vector<Edge> removed_edges;
    MspDag msp_dag;
    std::vector<Cluster> clusters;
    std::size_t paths_stored = 0; // paths with at least one edge that were built
    std::size_t paths_checked = 0;
    std::size_t pair_checks = 0;
    bool used_stored_lists = true;
    Timings timings;
};

namespace detail {

inline bool labels_less(const StDag &g, const VertexSet &a, const VertexSet &b) {
    return g.to_labels(a) < g.to_labels(b);
}

/// Removes clusters whose vertex set strictly contains another one.
inline std::vector<Cluster> keep_minimal(std::vector<Cluster> in) {
    std::vector<bool> minimal(in.size(), true);
    for (std::size_t i = 0; i < in.size(); ++i) {
        for (std::size_t j = 0; j < in.size() && minimal[i]; ++j) {
            if (i != j && in[j].vertices != in[i].vertices && in[j].vertices.is_subset_of(in[i].vertices)) minimal[i] = false;
        }
    }
    std::vector<Cluster> out;
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (minimal[i]) out.push_back(std::move(in[i]));
    }
    return out;
}

} // namespace detail

/// All minimal clusters of `input`.
///
/// MSP paths are visited by increasing length; each path whose end MSPs are
/// large enough is checked with cluster_check, and the superpaths of a
/// successful path are skipped. Results are deduplicated by vertex set,
/// filtered for minimality and sorted by their label sets.
inline FindResult find_all_min_clusters(const StDag &input, const FindOptions &opts = {}) {
    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };
    const auto t_start = clock::now();

    auto [graph, removed] = normalize(input, opts.redundancy);
    FindResult res{std::move(graph), std::move(removed), {}, {}, 0, 0, 0, true, {}};
    const StDag &g = res.graph;
    if (g.vertex_count() < 2) {
        res.timings.total_ms = ms_since(t_start);
        return res;
    }

    auto t = clock::now();
    auto msps = find_all_msps(g);
    res.timings.msps_ms = ms_since(t);

    t = clock::now();
    res.msp_dag = build_msp_dag(g, std::move(msps));
    res.timings.msp_dag_ms = ms_since(t);
    const auto &sps = res.msp_dag.msps;

    t = clock::now();
    const ReachabilityIndex idx = build_reachability_index(g);
    const double index_ms = ms_since(t);
    std::vector<Cluster> found;
    // per (X,Y): -1 unchecked, else the cached outcome
    std::vector<std::int8_t> pair_state(sps.size() * sps.size(), -1);
    auto check_pair = [&](NodeId xi, NodeId yi) {
        std::int8_t &state = pair_state[static_cast<std::size_t>(xi) * sps.size() + yi];
        if (state >= 0) return state == 1;
        const Syncpoint &x = sps[xi];
        const Syncpoint &y = sps[yi];
        bool big_enough;
        if (opts.strict_disjoint_guard) {
            big_enough = x.ends.size() >= 2 && y.starts.size() >= 2 && !x.end_set.intersects(y.start_set);
        } else {
            const std::size_t overlap = (x.end_set & y.start_set).count();
            big_enough = x.ends.size() >= overlap + 2 && y.starts.size() >= overlap + 2;
        }
        bool ok = false;
        if (big_enough) {
            ++res.pair_checks;
            auto check = cluster_check(g, idx, x, y);
            ok = check.found;
            for (auto &c : check.clusters) found.push_back(std::move(c));
        }
        state = ok ? 1 : 0;
        return ok;
    };

    t = clock::now();
    bool stored = opts.path_search == PathSearch::stored_lists;
    if (opts.path_search == PathSearch::automatic) stored = projected_record_count(res.msp_dag.dag) <= opts.automatic_store_limit;
    if (stored) {
        PathsToStore store = compute_all_vertex_paths(res.msp_dag.dag, opts.path_cap);
        store.filter_relevant(sps);
        res.paths_stored = store.extension_count();
        res.timings.paths_ms = ms_since(t);
        t = clock::now();
        while (auto p = store.next_unchecked()) {
            ++res.paths_checked;
            const PathRecord &rec = store.record(*p);
            if (check_pair(rec.first, rec.last)) store.delete_superpaths(*p);
        }
    } else {
        std::vector<SyncpointKind> kinds;
        for (const auto &sp : sps) kinds.push_back(sp.kind);
        auto counts = levelwise_path_search(res.msp_dag.dag, kinds, check_pair, opts.levelwise_cap);
        res.paths_stored = counts.materialized;
        res.paths_checked = counts.checked;
    }
    res.used_stored_lists = stored;

    // dedupe by vertex set, keeping the first brackets
    std::vector<Cluster> unique;
    for (auto &c : found) {
        bool seen = std::any_of(unique.begin(), unique.end(), [&](const Cluster &u) { return u.vertices == c.vertices; });
        if (!seen) unique.push_back(std::move(c));
    }
    if (opts.minimality_filter) unique = detail::keep_minimal(std::move(unique));
    for (auto &c : unique) c = classify_cluster(g, std::move(c));
    std::sort(unique.begin(), unique.end(),
              [&](const Cluster &a, const Cluster &b) { return detail::labels_less(g, a.vertices, b.vertices); });
    res.clusters = std::move(unique);
    res.timings.search_ms = index_ms + ms_since(t);
    res.timings.total_ms = ms_since(t_start);
    return res;
}

/// Sorted label sets of the clusters in `r`.
inline std::vector<std::vector<VertexId>> cluster_families(const FindResult &r) {
    std::vector<std::vector<VertexId>> out;
    for (const auto &c : r.clusters) out.push_back(r.graph.to_labels(c.vertices));
    std::sort(out.begin(), out.end());
    return out;
}

inline nlohmann::json to_json(const FindResult &r, bool with_timings = true) {
    const StDag &g = r.graph;
    nlohmann::json j;
    j["clusters"] = nlohmann::json::array();
    for (const auto &c : r.clusters) {
        nlohmann::json jc;
        jc["vertices"] = g.to_labels(c.vertices);
        jc["entries"] = g.to_labels(c.entries);
        jc["exits"] = g.to_labels(c.exits);
        jc["complex"] = c.is_complex;
        if (c.opening_msp) jc["opening_msp"] = *c.opening_msp;
        if (c.closing_msp) jc["closing_msp"] = *c.closing_msp;
        j["clusters"].push_back(std::move(jc));
    }
    auto dag = to_json(g, r.msp_dag);
    j["msps"] = dag["msps"];
    j["msp_dag"] = {{"edges", dag["edges"]}};
    if (r.msp_dag.source) j["msp_dag"]["source"] = *r.msp_dag.source;
    if (r.msp_dag.target) j["msp_dag"]["target"] = *r.msp_dag.target;
    if (!r.removed_edges.empty()) {
        auto removed = nlohmann::json::array();
        for (const Edge &e : r.removed_edges) removed.push_back({e.from, e.to});
        j["removed_redundant_edges"] = std::move(removed);
    }
    j["paths"] = {{"strategy", r.used_stored_lists ? "stored_lists" : "levelwise"},
                  {"built", r.paths_stored},
                  {"checked", r.paths_checked},
                  {"pair_checks", r.pair_checks}};
    if (with_timings) {
        j["timings_ms"] = {{"msps", r.timings.msps_ms},
                           {"msp_dag", r.timings.msp_dag_ms},
                           {"paths", r.timings.paths_ms},
                           {"search", r.timings.search_ms},
                           {"total", r.timings.total_ms}};
    }
    return j;
}

/// The analysed graph with every reported cluster drawn as a shaded group.
inline std::string to_dot(const FindResult &r) {
    std::vector<std::vector<VertexId>> groups;
    for (const auto &c : r.clusters) groups.push_back(r.graph.to_labels(c.vertices));
    return to_dot(r.graph, "clusters", groups);
}

} // namespace mincluster
