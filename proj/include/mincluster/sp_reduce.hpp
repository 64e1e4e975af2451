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
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mincluster/graph.hpp"
#include "mincluster/rng.hpp"

namespace mincluster {

enum class SpStepKind { serial, parallel };

struct SpStep {
    SpStepKind kind;
    /// Representative labels of the merged groups (smallest member label).
    std::vector<VertexId> merged;
};

struct SpResult {
    /// Remaining vertices, each listing the original labels merged into it.
    std::vector<std::vector<VertexId>> groups;
    /// Remaining edges as indices into `groups`.
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<SpStep> steps;
    bool fully_reduced = false;
};

namespace detail {

class SpReducer {
  public:
    SpReducer(std::span<const VertexId> vertices, std::span<const Edge> edges) {
        const std::size_t n = vertices.size();
        std::vector<std::pair<VertexId, std::uint32_t>> idx;
        idx.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) idx.emplace_back(vertices[i], i);
        std::sort(idx.begin(), idx.end());
        auto local = [&](VertexId id) {
            auto it = std::lower_bound(idx.begin(), idx.end(), std::make_pair(id, std::uint32_t{0}));
            if (it == idx.end() || it->first != id) {
                throw Error(ErrorCode::dangling_edge_endpoint, "edge endpoint " + std::to_string(id) + " is not a member");
            }
            return it->second;
        };
        succ_.assign(n, {});
        pred_.assign(n, {});
        groups_.resize(n);
        alive_.assign(n, true);
        for (std::uint32_t i = 0; i < n; ++i) groups_[i] = {vertices[i]};
        for (const Edge &e : edges) {
            auto u = local(e.from);
            auto v = local(e.to);
            succ_[u].push_back(v);
            pred_[v].push_back(u);
        }
        for (auto &l : succ_) normalize(l);
        for (auto &l : pred_) normalize(l);
    }

    SpResult run(std::optional<std::uint64_t> shuffle_seed) {
        std::optional<Rng> rng;
        if (shuffle_seed) rng.emplace(*shuffle_seed);
        SpResult out;
        for (;;) {
            auto candidates = applicable_steps();
            if (candidates.empty()) break;
            const std::size_t pick = rng ? rng->index(candidates.size()) : 0;
            out.steps.push_back(apply(candidates[pick]));
        }
        std::vector<std::size_t> remap(alive_.size(), 0);
        for (std::uint32_t v = 0; v < alive_.size(); ++v) {
            if (!alive_[v]) continue;
            remap[v] = out.groups.size();
            auto g = groups_[v];
            std::sort(g.begin(), g.end());
            out.groups.push_back(std::move(g));
        }
        for (std::uint32_t v = 0; v < alive_.size(); ++v) {
            if (!alive_[v]) continue;
            for (auto w : succ_[v]) out.edges.emplace_back(remap[v], remap[w]);
        }
        out.fully_reduced = out.groups.size() == 1;
        return out;
    }

    bool any_step() const { return !applicable_steps().empty(); }

  private:
    struct Candidate {
        SpStepKind kind;
        std::vector<std::uint32_t> members;
    };

    static void normalize(std::vector<std::uint32_t> &l) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }

    VertexId representative(std::uint32_t v) const {
        return *std::min_element(groups_[v].begin(), groups_[v].end());
    }

    std::vector<Candidate> applicable_steps() const {
        std::vector<Candidate> out;
        const std::uint32_t n = static_cast<std::uint32_t>(alive_.size());
        for (std::uint32_t u = 0; u < n; ++u) {
            if (!alive_[u] || succ_[u].size() != 1) continue;
            const std::uint32_t v = succ_[u].front();
            if (pred_[v].size() == 1) out.push_back({SpStepKind::serial, {u, v}});
        }
        std::unordered_map<std::vector<std::uint32_t>, std::size_t, VectorHash> seen;
        std::vector<std::vector<std::uint32_t>> buckets;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (!alive_[v]) continue;
            // key: predecessors, a marker, then successors
            std::vector<std::uint32_t> key = pred_[v];
            key.push_back(UINT32_MAX);
            key.insert(key.end(), succ_[v].begin(), succ_[v].end());
            auto [it, inserted] = seen.try_emplace(std::move(key), buckets.size());
            if (inserted) buckets.emplace_back();
            buckets[it->second].push_back(v);
        }
        for (auto &b : buckets) {
            if (b.size() >= 2) out.push_back({SpStepKind::parallel, std::move(b)});
        }
        return out;
    }

    void replace(std::vector<std::uint32_t> &list, std::uint32_t from, std::uint32_t to) {
        for (auto &x : list) {
            if (x == from) x = to;
        }
        normalize(list);
    }

    SpStep apply(const Candidate &c) {
        SpStep step{c.kind, {}};
        for (auto v : c.members) step.merged.push_back(representative(v));
        std::sort(step.merged.begin(), step.merged.end());
        if (c.kind == SpStepKind::serial) {
            const std::uint32_t u = c.members[0];
            const std::uint32_t v = c.members[1];
            succ_[u] = succ_[v];
            for (auto w : succ_[v]) replace(pred_[w], v, u);
            absorb(u, v);
        } else {
            const std::uint32_t keep = c.members.front();
            for (std::size_t i = 1; i < c.members.size(); ++i) {
                const std::uint32_t v = c.members[i];
                for (auto w : succ_[v]) replace(pred_[w], v, keep);
                for (auto w : pred_[v]) replace(succ_[w], v, keep);
                absorb(keep, v);
            }
        }
        return step;
    }

    void absorb(std::uint32_t keep, std::uint32_t gone) {
        groups_[keep].insert(groups_[keep].end(), groups_[gone].begin(), groups_[gone].end());
        groups_[gone].clear();
        succ_[gone].clear();
        pred_[gone].clear();
        alive_[gone] = false;
    }

    std::vector<std::vector<std::uint32_t>> succ_;
    std::vector<std::vector<std::uint32_t>> pred_;
    std::vector<std::vector<VertexId>> groups_;
    std::vector<bool> alive_;
};

} // namespace detail

/// Applies serial and parallel reduction steps until none applies.
///
/// The input need not have a single source or target. Without a seed the
/// first applicable step is taken each round; with a seed the step is drawn
/// uniformly from all applicable ones.
inline SpResult sp_reduce(std::span<const VertexId> vertices, std::span<const Edge> edges,
                          std::optional<std::uint64_t> shuffle_seed = std::nullopt) {
    return detail::SpReducer(vertices, edges).run(shuffle_seed);
}

inline SpResult sp_reduce(const StDag &g, std::optional<std::uint64_t> shuffle_seed = std::nullopt) {
    auto edges = g.edges();
    return sp_reduce(g.labels(), edges, shuffle_seed);
}

/// Reduction of the subgraph induced by `members`.
inline SpResult sp_reduce(const StDag &g, const VertexSet &members,
                          std::optional<std::uint64_t> shuffle_seed = std::nullopt) {
    auto sub = induced_subgraph_with_borders(g, members);
    std::vector<VertexId> ids = g.to_labels(members);
    std::vector<Edge> edges;
    edges.reserve(sub.edges.size());
    for (auto [u, v] : sub.edges) edges.push_back({g.label(u), g.label(v)});
    return sp_reduce(ids, edges, shuffle_seed);
}

/// True if at least one serial or parallel step applies to the induced subgraph.
inline bool has_sp_step(const StDag &g, const VertexSet &members) {
    auto sub = induced_subgraph_with_borders(g, members);
    std::vector<VertexId> ids = g.to_labels(members);
    std::vector<Edge> edges;
    for (auto [u, v] : sub.edges) edges.push_back({g.label(u), g.label(v)});
    return detail::SpReducer(ids, edges).any_step();
}

} // namespace mincluster
