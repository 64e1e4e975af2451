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
#include <string>
#include <vector>

#include "mincluster/digraph.hpp"
#include "mincluster/syncpoints.hpp"

namespace mincluster {

/// Default limit on stored path records.
inline constexpr std::size_t default_path_cap = std::size_t{1} << 24;

/// One path in a PathsTo list. The node sequence is implicit: a path of
/// vertex length l is its prefix record extended by `last`.
struct PathRecord {
    static constexpr std::uint32_t none = UINT32_MAX;

    NodeId first = 0;
    NodeId last = 0;
    std::uint32_t prefix = none;
    std::uint32_t vlen = 1;
    std::uint32_t pos = 0; // index in the list of `last`
    std::uint32_t first_child = none;
    std::uint32_t next_sibling = none;
    bool relevant = true;
    bool checked = false;
    bool deleted = false;
};

/// A list slot: either a path record index or a separator |n.
struct ListEntry {
    std::uint32_t value = 0;
    bool separator = false;
};

inline bool is_superpath(std::span<const NodeId> q, std::span<const NodeId> p) {
    return q.size() > p.size() && std::search(q.begin(), q.end(), p.begin(), p.end()) != q.end();
}

class PathsToStore {
  public:
    std::size_t node_count() const noexcept { return lists_.size(); }
    std::size_t record_count() const noexcept { return records_.size(); }

    /// Number of stored paths with at least one edge.
    std::size_t extension_count() const noexcept { return records_.size() - lists_.size(); }

    /// Sum over created paths of the edge length of the path being extended.
    std::uint64_t append_cost() const noexcept { return append_cost_; }

    const std::vector<ListEntry> &list(NodeId v) const { return lists_[v]; }
    const PathRecord &record(std::uint32_t idx) const { return records_[idx]; }
    bool list_relevant(NodeId v) const { return list_relevant_[v]; }

    std::vector<NodeId> nodes(std::uint32_t idx) const {
        std::vector<NodeId> out(records_[idx].vlen);
        for (std::uint32_t r = idx, i = records_[idx].vlen; r != PathRecord::none; r = records_[r].prefix) {
            out[--i] = records_[r].last;
        }
        return out;
    }

    std::optional<std::uint32_t> find(std::span<const NodeId> path) const {
        if (path.empty() || path.front() >= node_count()) return std::nullopt;
        std::uint32_t cur = path.front(); // seeds occupy the first records
        for (std::size_t i = 1; i < path.size(); ++i) {
            std::uint32_t c = records_[cur].first_child;
            while (c != PathRecord::none && records_[c].last != path[i]) c = records_[c].next_sibling;
            if (c == PathRecord::none) return std::nullopt;
            cur = c;
        }
        return cur;
    }

    std::uint32_t at(std::span<const NodeId> path) const {
        if (auto idx = find(path)) return *idx;
        throw Error(ErrorCode::path_not_found, "path is not stored");
    }

    /// Drops lists ending at FHSPs and paths starting at BHSPs from iteration.
    /// The records stay in place so pointer chains through them remain intact.
    PathsToStore &filter_relevant(std::span<const SyncpointKind> kinds) {
        for (NodeId v = 0; v < node_count(); ++v) list_relevant_[v] = kinds[v] != SyncpointKind::fhsp;
        for (auto &r : records_) {
            r.relevant = list_relevant_[r.last] && kinds[r.first] != SyncpointKind::bhsp;
        }
        order_.clear();
        return *this;
    }

    PathsToStore &filter_relevant(const std::vector<Syncpoint> &msps) {
        std::vector<SyncpointKind> kinds;
        kinds.reserve(msps.size());
        for (const auto &sp : msps) kinds.push_back(sp.kind);
        return filter_relevant(kinds);
    }

    /// Next relevant, unchecked, undeleted path with at least one edge, in
    /// order of vertex length, then end node, then list position. The
    /// returned path is marked checked.
    std::optional<std::uint32_t> next_unchecked() {
        if (order_.empty() && cursor_ == 0) build_order();
        while (cursor_ < order_.size()) {
            PathRecord &r = records_[order_[cursor_++]];
            if (r.deleted || r.checked || !r.relevant) continue;
            r.checked = true;
            return order_[cursor_ - 1];
        }
        return std::nullopt;
    }

    /// Restarts next_unchecked() without clearing checked flags.
    void rewind() {
        cursor_ = 0;
        order_.clear();
    }

    /// Superpaths of `idx` located through pointers and separators, without
    /// modifying the store. Sorted by record index.
    std::vector<std::uint32_t> collect_superpaths(std::uint32_t idx) const {
        std::vector<std::uint32_t> out;
        walk_superpaths(idx, false, [&](std::uint32_t r) {
            out.push_back(r);
            return true;
        });
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Marks `idx` and all of its superpaths deleted. Returns the number of
    /// superpaths newly marked (excluding `idx`). With `prune`, entries that
    /// were already deleted are not expanded again: their superpaths were
    /// deleted together with them.
    std::size_t delete_superpaths(std::uint32_t idx, bool prune = true) {
        if (prune && records_[idx].deleted) return 0;
        records_[idx].deleted = true;
        std::size_t count = 0;
        walk_superpaths(idx, prune, [&](std::uint32_t r) {
            if (records_[r].deleted) return false;
            records_[r].deleted = true;
            ++count;
            return true;
        });
        return count;
    }

    std::size_t delete_superpaths(std::span<const NodeId> path, bool prune = true) {
        return delete_superpaths(at(path), prune);
    }

    /// Lists in the bracketed textual form, one line per node, e.g.
    /// `PathsTo[E]: [[E],[AE] |1 [BE],[ABE]]`.
    std::string dump(const std::vector<std::string> &names) const {
        bool compact = std::all_of(names.begin(), names.end(), [](const std::string &s) { return s.size() == 1; });
        std::string out;
        for (NodeId v = 0; v < node_count(); ++v) {
            out += "PathsTo[" + names[v] + "]: [";
            bool after_path = false;
            for (const ListEntry &e : lists_[v]) {
                if (e.separator) {
                    out += " |" + std::to_string(e.value) + " ";
                    after_path = false;
                    continue;
                }
                if (after_path) out += ",";
                out += "[";
                auto ns = nodes(e.value);
                for (std::size_t i = 0; i < ns.size(); ++i) out += (i && !compact ? "," : "") + names[ns[i]];
                out += "]";
                after_path = true;
            }
            out += "]\n";
        }
        return out;
    }

    std::string dump() const {
        std::vector<std::string> names;
        for (NodeId v = 0; v < node_count(); ++v) names.push_back(std::to_string(v));
        return dump(names);
    }

  private:
    friend PathsToStore compute_all_vertex_paths(const Digraph &d, std::size_t cap);

    // Visits every superpath of `idx`: entries right of a pointer-reached
    // path up to the first separator below its length, and recursively all
    // pointer targets. `visit` returns false for entries to leave unexpanded.
    template <typename F>
    void walk_superpaths(std::uint32_t idx, bool prune, F &&visit) const {
        std::vector<std::uint32_t> stack{idx};
        while (!stack.empty()) {
            const std::uint32_t q = stack.back();
            stack.pop_back();
            const PathRecord &rq = records_[q];
            const auto &list = lists_[rq.last];
            for (std::size_t i = rq.pos + 1; i < list.size(); ++i) {
                if (list[i].separator) {
                    if (list[i].value < rq.vlen) break;
                    continue;
                }
                visit(list[i].value);
            }
            for (std::uint32_t c = rq.first_child; c != PathRecord::none; c = records_[c].next_sibling) {
                if (!visit(c) && prune) continue;
                stack.push_back(c);
            }
        }
    }

    // Records of one list are created in list order, so a stable bucket
    // pass over (vlen, last) yields the (vlen, last, pos) order.
    void build_order() {
        order_.clear();
        const std::size_t n = lists_.size();
        std::uint32_t max_vlen = 1;
        for (const auto &r : records_) max_vlen = std::max(max_vlen, r.vlen);
        std::vector<std::size_t> start(static_cast<std::size_t>(max_vlen) * n + 1, 0);
        auto key = [&](const PathRecord &r) { return static_cast<std::size_t>(r.vlen - 1) * n + r.last; };
        for (const auto &r : records_) {
            if (r.vlen >= 2) ++start[key(r) + 1];
        }
        for (std::size_t k = 1; k < start.size(); ++k) start[k] += start[k - 1];
        order_.resize(start.back());
        for (std::uint32_t i = 0; i < records_.size(); ++i) {
            if (records_[i].vlen >= 2) order_[start[key(records_[i])]++] = i;
        }
    }

    std::vector<std::vector<ListEntry>> lists_;
    std::vector<PathRecord> records_;
    std::vector<bool> list_relevant_;
    std::vector<std::uint32_t> order_;
    std::size_t cursor_ = 0;
    std::uint64_t append_cost_ = 0;
};

/// Number of stored records compute_all_vertex_paths would create,
/// saturating at UINT64_MAX.
namespace detail {

// Number of paths ending at each node, saturating.
inline std::vector<std::uint64_t> paths_ending_at(const Digraph &d) {
    std::vector<std::uint64_t> count(d.node_count(), 1);
    for (NodeId v : d.topological_order()) {
        for (NodeId u : d.predecessors(v)) {
            count[v] = count[v] > UINT64_MAX - count[u] ? UINT64_MAX : count[v] + count[u];
        }
    }
    return count;
}

} // namespace detail

inline std::uint64_t projected_record_count(const Digraph &d) {
    std::uint64_t total = 0;
    for (std::uint64_t c : detail::paths_ending_at(d)) total = total > UINT64_MAX - c ? UINT64_MAX : total + c;
    return total;
}

/// All vertex paths of `d`, grouped by end node.
///
/// Each list starts with the seed path [v]. Nodes are processed in
/// topological order; for every successor v of u the paths of u's list are
/// extended by v in list order. Consecutive batches in one list are split by
/// a separator |1, and separators met in u's list are copied with their
/// index raised by one.
inline PathsToStore compute_all_vertex_paths(const Digraph &d, std::size_t cap = default_path_cap) {
    const std::uint64_t projected = projected_record_count(d);
    if (projected > cap) {
        throw Error(ErrorCode::resource_cap, std::to_string(projected) + " paths exceed the cap of " + std::to_string(cap));
    }
    const std::size_t n = d.node_count();
    PathsToStore st;
    st.lists_.assign(n, {});
    const auto per_list = detail::paths_ending_at(d);
    for (NodeId v = 0; v < n; ++v) st.lists_[v].reserve(static_cast<std::size_t>(per_list[v]) + d.predecessors(v).size() * 4);
    st.list_relevant_.assign(n, true);
    st.records_.reserve(static_cast<std::size_t>(projected));
    for (NodeId v = 0; v < n; ++v) {
        PathRecord seed;
        seed.first = seed.last = v;
        st.records_.push_back(seed);
        st.lists_[v].push_back({v, false});
    }
    std::vector<std::uint32_t> batches(n, 0);
    for (NodeId u : d.topological_order()) {
        for (NodeId v : d.successors(u)) {
            auto &target = st.lists_[v];
            if (batches[v]++ > 0) target.push_back({1, true});
            const auto &source = st.lists_[u];
            for (std::size_t i = 0; i < source.size(); ++i) {
                const ListEntry e = source[i];
                if (e.separator) {
                    target.push_back({e.value + 1, true});
                    continue;
                }
                const std::uint32_t idx = static_cast<std::uint32_t>(st.records_.size());
                PathRecord r;
                r.first = st.records_[e.value].first;
                r.last = v;
                r.prefix = e.value;
                r.vlen = st.records_[e.value].vlen + 1;
                r.pos = static_cast<std::uint32_t>(target.size());
                r.next_sibling = st.records_[e.value].first_child;
                st.records_.push_back(r);
                st.records_[e.value].first_child = idx;
                st.append_cost_ += r.vlen - 1;
                target.push_back({idx, false});
            }
        }
    }
    return st;
}

struct LevelwiseCounts {
    std::size_t materialized = 0; // paths with at least one edge that were built
    std::size_t checked = 0;
};

/// Runs the search over MSP paths without a stored PathsTo structure.
///
/// Paths are built one vertex length at a time. A path is built only when
/// the path without its last node and the path without its first node are
/// both alive; a path dies when `check(first, last)` succeeds for it.
/// Relevant paths (not starting at a BHSP, not ending at a FHSP) are passed
/// to `check` in order of vertex length. The set of checked paths equals
/// the set the stored-list search checks; only the order within a length
/// differs. Throws ResourceCap when one length holds more than `cap`
/// live paths.
template <typename Check>
LevelwiseCounts levelwise_path_search(const Digraph &d, std::span<const SyncpointKind> kinds, Check &&check,
                                      std::size_t cap = default_path_cap) {
    struct Node {
        NodeId first;
        NodeId last;
        std::uint32_t suffix; // index of the path without `first` in the previous level
    };
    constexpr std::uint32_t none = UINT32_MAX;
    const std::size_t n = d.node_count();
    LevelwiseCounts counts;

    // buffers are swapped between lengths to keep their capacity
    std::vector<Node> cur, next;
    std::vector<std::uint8_t> cur_dead(n, 0), next_dead, prev_dead;
    std::vector<std::uint32_t> cur_children, prev_children; // ranges of children in the following length
    for (NodeId v = 0; v < n; ++v) cur.push_back({v, v, none});
    bool first_level = true;

    while (!cur.empty()) {
        next.clear();
        cur_children.assign(cur.size() + 1, 0);
        for (std::uint32_t i = 0; i < cur.size(); ++i) {
            cur_children[i] = static_cast<std::uint32_t>(next.size());
            if (cur_dead[i]) continue;
            const Node r = cur[i];
            for (NodeId w : d.successors(r.last)) {
                std::uint32_t suffix;
                if (first_level) {
                    suffix = w; // the one-node path [w]
                } else {
                    if (prev_dead[r.suffix]) continue;
                    const auto lo = cur.begin() + prev_children[r.suffix];
                    const auto hi = cur.begin() + prev_children[r.suffix + 1];
                    auto it = std::lower_bound(lo, hi, w, [](const Node &a, NodeId x) { return a.last < x; });
                    if (it == hi || it->last != w) continue;
                    suffix = static_cast<std::uint32_t>(it - cur.begin());
                }
                if (cur_dead[suffix]) continue;
                next.push_back({r.first, w, suffix});
            }
            if (next.size() > cap) {
                throw Error(ErrorCode::resource_cap,
                            "more than " + std::to_string(cap) + " live paths of one length");
            }
        }
        cur_children[cur.size()] = static_cast<std::uint32_t>(next.size());
        counts.materialized += next.size();

        next_dead.assign(next.size(), 0);
        for (std::uint32_t i = 0; i < next.size(); ++i) {
            const Node &q = next[i];
            if (kinds[q.last] == SyncpointKind::fhsp || kinds[q.first] == SyncpointKind::bhsp) continue;
            ++counts.checked;
            if (check(q.first, q.last)) next_dead[i] = 1;
        }

        std::swap(prev_children, cur_children);
        std::swap(prev_dead, cur_dead);
        std::swap(cur_dead, next_dead);
        std::swap(cur, next);
        first_level = false;
    }
    return counts;
}

} // namespace mincluster
