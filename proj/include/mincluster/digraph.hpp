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
#include <functional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "mincluster/error.hpp"

namespace mincluster {

using NodeId = std::uint32_t;

/// Small DAG over dense node ids 0..n-1, used for the MSP-DAG.
/// Parallel edges collapse; redundant edges are kept.
class Digraph {
  public:
    Digraph() = default;
    explicit Digraph(std::size_t n) : succ_(n), pred_(n) {}

    std::size_t node_count() const noexcept { return succ_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    void add_edge(NodeId u, NodeId v) {
        auto &s = succ_[u];
        auto it = std::lower_bound(s.begin(), s.end(), v);
        if (it != s.end() && *it == v) return;
        s.insert(it, v);
        auto &p = pred_[v];
        p.insert(std::lower_bound(p.begin(), p.end(), u), u);
        ++edge_count_;
    }

    bool has_edge(NodeId u, NodeId v) const { return std::binary_search(succ_[u].begin(), succ_[u].end(), v); }

    std::span<const NodeId> successors(NodeId u) const { return succ_[u]; }
    std::span<const NodeId> predecessors(NodeId u) const { return pred_[u]; }

    std::vector<std::pair<NodeId, NodeId>> edges() const {
        std::vector<std::pair<NodeId, NodeId>> out;
        out.reserve(edge_count_);
        for (NodeId u = 0; u < node_count(); ++u) {
            for (NodeId v : succ_[u]) out.emplace_back(u, v);
        }
        return out;
    }

    /// Kahn's algorithm, smallest id first. Throws CycleDetected.
    std::vector<NodeId> topological_order() const {
        const std::size_t n = node_count();
        std::vector<std::size_t> indeg(n);
        std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
        for (NodeId v = 0; v < n; ++v) {
            indeg[v] = pred_[v].size();
            if (indeg[v] == 0) ready.push(v);
        }
        std::vector<NodeId> order;
        order.reserve(n);
        while (!ready.empty()) {
            NodeId u = ready.top();
            ready.pop();
            order.push_back(u);
            for (NodeId v : succ_[u]) {
                if (--indeg[v] == 0) ready.push(v);
            }
        }
        if (order.size() != n) throw Error(ErrorCode::cycle_detected, "digraph contains a directed cycle");
        return order;
    }

    std::vector<NodeId> sources() const {
        std::vector<NodeId> out;
        for (NodeId v = 0; v < node_count(); ++v) {
            if (pred_[v].empty()) out.push_back(v);
        }
        return out;
    }

    std::vector<NodeId> sinks() const {
        std::vector<NodeId> out;
        for (NodeId v = 0; v < node_count(); ++v) {
            if (succ_[v].empty()) out.push_back(v);
        }
        return out;
    }

    /// All forward edges on n nodes: the DAG with the most paths.
    static Digraph complete(std::size_t n) {
        Digraph d(n);
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v = u + 1; v < n; ++v) d.add_edge(u, v);
        }
        return d;
    }

  private:
    std::vector<std::vector<NodeId>> succ_;
    std::vector<std::vector<NodeId>> pred_;
    std::size_t edge_count_ = 0;
};

} // namespace mincluster
