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
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mincluster/graph.hpp"
#include "mincluster/rng.hpp"

namespace mincluster {

struct GenParams {
    std::size_t n = 50;
    double parexp = 0.33;
    double serexp = 0.33;
    std::size_t maxwidth = 5;
    double clustsettle = 0.2;
    std::size_t narb = 10;
    std::uint64_t seed = 1;
};

inline void validate_params(const GenParams &p) {
    auto fail = [](const std::string &msg) { throw Error(ErrorCode::invalid_params, msg); };
    if (p.n < 3) fail("n must be at least 3");
    if (!(p.parexp >= 0.0) || !(p.serexp >= 0.0)) fail("parexp and serexp must be non-negative");
    if (p.parexp + p.serexp > 1.0 + 1e-12) fail("parexp + serexp must not exceed 1");
    if (p.maxwidth < 2) fail("maxwidth must be at least 2");
    if (!(p.clustsettle > 0.0 && p.clustsettle < 1.0)) fail("clustsettle must lie strictly between 0 and 1");
}

inline nlohmann::json to_json(const GenParams &p) {
    return {{"n", p.n},           {"parexp", p.parexp},           {"serexp", p.serexp}, {"maxwidth", p.maxwidth},
            {"clustsettle", p.clustsettle}, {"narb", p.narb}, {"seed", p.seed}};
}

/// Bipartite block inserted by a subgraph expansion.
struct SubgraphBlock {
    std::vector<VertexId> entries;
    std::vector<VertexId> exits;
    std::vector<Edge> edges;
    /// Edge-count window drawn from; lower > upper means it was empty and
    /// the block was built with the minimal covering edge count.
    std::size_t lower = 0;
    std::size_t upper = 0;
};

/// Mutable DAG used while generating. Vertex ids are 1-based in creation
/// order; an expanded vertex keeps its id for the first replacement vertex.
class GrowingDag {
  public:
    /// The three-vertex chain 1 -> 2 -> 3.
    GrowingDag() : succ_(4), pred_(4) {
        add_edge(1, 2);
        add_edge(2, 3);
    }

    std::size_t vertex_count() const noexcept { return succ_.size() - 1; }
    std::size_t edge_count() const noexcept { return edges_; }
    VertexId source() const noexcept { return 1; }
    VertexId target() const noexcept { return 3; }

    const std::vector<VertexId> &successors(VertexId v) const { return succ_[v]; }
    const std::vector<VertexId> &predecessors(VertexId v) const { return pred_[v]; }

    /// Every vertex except the source and the target.
    std::vector<VertexId> inner_vertices() const {
        std::vector<VertexId> out;
        for (VertexId v = 1; v <= vertex_count(); ++v) {
            if (v != source() && v != target()) out.push_back(v);
        }
        return out;
    }

    /// Replaces x by k vertices sharing its predecessors and successors.
    std::vector<VertexId> expand_parallel(VertexId x, std::size_t k) {
        std::vector<VertexId> copies{x};
        for (std::size_t i = 1; i < k; ++i) {
            VertexId c = new_vertex();
            for (VertexId p : pred_[x]) add_edge(p, c);
            for (VertexId s : succ_[x]) add_edge(c, s);
            copies.push_back(c);
        }
        return copies;
    }

    /// Replaces x by the chain x -> y.
    VertexId expand_serial(VertexId x) {
        VertexId y = new_vertex();
        auto out = succ_[x];
        for (VertexId s : out) {
            remove_edge(x, s);
            add_edge(y, s);
        }
        add_edge(x, y);
        return y;
    }

    /// Replaces x by k entries and l exits joined by random bipartite edges.
    ///
    /// Entries inherit x's predecessors and exits its successors. Every entry
    /// gets at least one exit and every exit at least one entry. The number
    /// of block edges e is drawn uniformly with max(k,l)+1 < e < k*l*clustsettle;
    /// when no integer fits, e = max(k,l).
    SubgraphBlock expand_subgraph(VertexId x, std::size_t maxwidth, double clustsettle, Rng &rng) {
        const std::size_t k = static_cast<std::size_t>(rng.uniform(2, maxwidth));
        const std::size_t l = static_cast<std::size_t>(rng.uniform(2, maxwidth));
        return expand_subgraph(x, k, l, clustsettle, rng);
    }

    SubgraphBlock expand_subgraph(VertexId x, std::size_t k, std::size_t l, double clustsettle, Rng &rng) {
        SubgraphBlock block;
        const auto preds = pred_[x];
        const auto succs = succ_[x];
        for (VertexId s : succs) remove_edge(x, s);
        block.entries.push_back(x);
        for (std::size_t i = 1; i < k; ++i) {
            VertexId e = new_vertex();
            for (VertexId p : preds) add_edge(p, e);
            block.entries.push_back(e);
        }
        for (std::size_t i = 0; i < l; ++i) {
            VertexId f = new_vertex();
            for (VertexId s : succs) add_edge(f, s);
            block.exits.push_back(f);
        }

        const std::size_t cover = std::max(k, l);
        block.lower = cover + 2;
        const double bound = static_cast<double>(k * l) * clustsettle;
        const double below = std::ceil(bound) - 1.0;
        block.upper = below < 0 ? 0 : std::min(k * l, static_cast<std::size_t>(below));
        const std::size_t e =
            block.lower <= block.upper ? static_cast<std::size_t>(rng.uniform(block.lower, block.upper)) : cover;

        std::vector<std::vector<bool>> used(k, std::vector<bool>(l, false));
        auto link = [&](std::size_t i, std::size_t j) {
            if (used[i][j]) return;
            used[i][j] = true;
            add_edge(block.entries[i], block.exits[j]);
            block.edges.push_back({block.entries[i], block.exits[j]});
        };
        // minimal covering: match the smaller side injectively, then attach the rest
        std::vector<std::size_t> rows(k), cols(l);
        for (std::size_t i = 0; i < k; ++i) rows[i] = i;
        for (std::size_t j = 0; j < l; ++j) cols[j] = j;
        rng.shuffle(rows);
        rng.shuffle(cols);
        if (k >= l) {
            for (std::size_t i = 0; i < k; ++i) link(rows[i], i < l ? cols[i] : rng.index(l));
        } else {
            for (std::size_t j = 0; j < l; ++j) link(j < k ? rows[j] : rng.index(k), cols[j]);
        }
        std::vector<std::pair<std::size_t, std::size_t>> free;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < l; ++j) {
                if (!used[i][j]) free.emplace_back(i, j);
            }
        }
        rng.shuffle(free);
        for (std::size_t f = 0; block.edges.size() < e && f < free.size(); ++f) link(free[f].first, free[f].second);
        std::sort(block.edges.begin(), block.edges.end());
        return block;
    }

    /// Whether u -> v may be added without creating a cycle or a redundant
    /// edge: neither endpoint may reach the other, and no existing edge may
    /// lead from an ancestor-or-self of u to a descendant-or-self of v.
    bool disruptive_edge_allowed(VertexId u, VertexId v) const {
        if (u == v) return false;
        const auto down = reach(v, succ_);
        if (down[u]) return false; // cycle
        if (reach(u, succ_)[v]) return false; // u already reaches v
        const auto up = reach(u, pred_);
        for (VertexId a = 1; a <= vertex_count(); ++a) {
            if (!up[a]) continue;
            for (VertexId d : succ_[a]) {
                if (down[d]) return false;
            }
        }
        return true;
    }

    /// One uniformly drawn candidate; added and returned when allowed.
    std::optional<Edge> try_disruptive_edge(Rng &rng) {
        const VertexId u = static_cast<VertexId>(rng.uniform(1, vertex_count()));
        const VertexId v = static_cast<VertexId>(rng.uniform(1, vertex_count()));
        if (!disruptive_edge_allowed(u, v)) return std::nullopt;
        add_edge(u, v);
        return Edge{u, v};
    }

    void add_edge(VertexId u, VertexId v) {
        auto &s = succ_[u];
        auto it = std::lower_bound(s.begin(), s.end(), v);
        if (it != s.end() && *it == v) return;
        s.insert(it, v);
        auto &p = pred_[v];
        p.insert(std::lower_bound(p.begin(), p.end(), u), u);
        ++edges_;
    }

    StDag to_st_dag() const {
        std::vector<VertexId> ids;
        std::vector<Edge> edges;
        for (VertexId v = 1; v <= vertex_count(); ++v) {
            ids.push_back(v);
            for (VertexId w : succ_[v]) edges.push_back({v, w});
        }
        return validate_st_dag(std::move(ids), std::move(edges));
    }

  private:
    VertexId new_vertex() {
        succ_.emplace_back();
        pred_.emplace_back();
        return static_cast<VertexId>(succ_.size() - 1);
    }

    void remove_edge(VertexId u, VertexId v) {
        auto &s = succ_[u];
        s.erase(std::remove(s.begin(), s.end(), v), s.end());
        auto &p = pred_[v];
        p.erase(std::remove(p.begin(), p.end(), u), p.end());
        --edges_;
    }

    std::vector<bool> reach(VertexId from, const std::vector<std::vector<VertexId>> &adj) const {
        std::vector<bool> seen(adj.size(), false);
        std::vector<VertexId> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            VertexId x = stack.back();
            stack.pop_back();
            for (VertexId y : adj[x]) {
                if (!seen[y]) {
                    seen[y] = true;
                    stack.push_back(y);
                }
            }
        }
        return seen;
    }

    std::vector<std::vector<VertexId>> succ_;
    std::vector<std::vector<VertexId>> pred_;
    std::size_t edges_ = 0;
};

struct GeneratedDag {
    StDag graph;
    GenParams params;
    std::vector<Edge> disruptive_edges; // in insertion order
    std::size_t parallel_expansions = 0;
    std::size_t serial_expansions = 0;
    std::size_t subgraph_expansions = 0;

    std::size_t overshoot() const { return graph.vertex_count() - params.n; }
};

/// Generation record: parameters, seed, disruptive edges in order, overshoot.
inline nlohmann::json generation_record(const GeneratedDag &d) {
    auto arb = nlohmann::json::array();
    for (const Edge &e : d.disruptive_edges) arb.push_back({e.from, e.to});
    return {{"generator", to_json(d.params)},
            {"vertex_count", d.graph.vertex_count()},
            {"overshoot", d.overshoot()},
            {"expansions",
             {{"parallel", d.parallel_expansions}, {"serial", d.serial_expansions}, {"subgraph", d.subgraph_expansions}}},
            {"disruptive_edges", std::move(arb)}};
}

/// Random st-DAG without redundant edges, deterministic for a given seed.
///
/// Starting from a three-vertex chain, a uniformly chosen inner vertex is
/// expanded in parallel, serially or into a subgraph block until at least n
/// vertices exist; then narb disruptive edges are added, with at most
/// 100*narb candidate draws.
inline GeneratedDag generate_dag(const GenParams &p) {
    validate_params(p);
    Rng rng(p.seed);
    GrowingDag dag;
    GeneratedDag out{validate_st_dag({1}, {}), p, {}, 0, 0, 0};
    while (dag.vertex_count() < p.n) {
        const auto inner = dag.inner_vertices();
        const VertexId x = inner[rng.index(inner.size())];
        const double r = rng.unit();
        if (r < p.parexp) {
            dag.expand_parallel(x, static_cast<std::size_t>(rng.uniform(2, p.maxwidth)));
            ++out.parallel_expansions;
        } else if (r < p.parexp + p.serexp) {
            dag.expand_serial(x);
            ++out.serial_expansions;
        } else {
            dag.expand_subgraph(x, p.maxwidth, p.clustsettle, rng);
            ++out.subgraph_expansions;
        }
    }
    const std::size_t max_draws = 100 * p.narb;
    std::size_t draws = 0;
    while (out.disruptive_edges.size() < p.narb) {
        if (draws++ >= max_draws) {
            throw Error(ErrorCode::disruptive_edge_exhausted,
                        "placed " + std::to_string(out.disruptive_edges.size()) + " of " + std::to_string(p.narb) +
                            " disruptive edges in " + std::to_string(max_draws) + " draws");
        }
        if (auto e = dag.try_disruptive_edge(rng)) out.disruptive_edges.push_back(*e);
    }
    out.graph = dag.to_st_dag();
    return out;
}

} // namespace mincluster
