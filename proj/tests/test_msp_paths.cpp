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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "mincluster/oracle.hpp"
#include "test_support.hpp"

using namespace mincluster;
using namespace mincluster::testing;

namespace {

// MSP-DAG of the fig6 fixture; node ids 2,3,4,5,0,1 play A..F
enum Fig8 : NodeId { E = 0, F = 1, A = 2, B = 3, C = 4, D = 5 };

const std::vector<std::string> fig8_names{"E", "F", "A", "B", "C", "D"};

Digraph fig8() { return build_msp_dag(fixture("fig6")).dag; }

std::vector<std::vector<NodeId>> paths_of(const PathsToStore &st, const std::vector<std::uint32_t> &records) {
    std::vector<std::vector<NodeId>> out;
    for (auto r : records) out.push_back(st.nodes(r));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<NodeId>> deleted_paths(const PathsToStore &st) {
    std::vector<std::vector<NodeId>> out;
    for (std::uint32_t r = 0; r < st.record_count(); ++r) {
        if (st.record(r).deleted) out.push_back(st.nodes(r));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<NodeId>> sorted(std::vector<std::vector<NodeId>> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// random DAG on n nodes, node ids in topological order
Digraph random_dag(std::size_t n, double density, std::mt19937_64 &rng) {
    std::bernoulli_distribution coin(density);
    Digraph d(n);
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (coin(rng)) d.add_edge(u, v);
        }
    }
    return d;
}

} // namespace

TEST(PathsToStore, Fig8Dump) {
    auto st = compute_all_vertex_paths(fig8());
    EXPECT_EQ(st.dump(fig8_names),
              "PathsTo[E]: [[E],[AE] |1 [BE],[ABE] |1 [CE],[ACE] |1 [DE],[CDE],[ACDE]]\n"
              "PathsTo[F]: [[F],[DF],[CDF],[ACDF] |1 [EF],[AEF] |2 [BEF],[ABEF] |2 [CEF],[ACEF] |2 [DEF],[CDEF],[ACDEF]]\n"
              "PathsTo[A]: [[A]]\n"
              "PathsTo[B]: [[B],[AB]]\n"
              "PathsTo[C]: [[C],[AC]]\n"
              "PathsTo[D]: [[D],[CD],[ACD]]\n");
}

TEST(PathsToStore, CompleteThree) {
    auto st = compute_all_vertex_paths(complete_digraph(3));
    EXPECT_EQ(st.extension_count(), 4u);
    std::vector<std::vector<NodeId>> last;
    for (const auto &e : st.list(2)) {
        if (!e.separator) last.push_back(st.nodes(e.value));
    }
    EXPECT_EQ(last, (std::vector<std::vector<NodeId>>{{2}, {0, 2}, {1, 2}, {0, 1, 2}}));
}

TEST(PathsToStore, SingleNode) {
    auto st = compute_all_vertex_paths(Digraph(1));
    ASSERT_EQ(st.node_count(), 1u);
    ASSERT_EQ(st.list(0).size(), 1u);
    EXPECT_EQ(st.extension_count(), 0u);
}

// 2^n - (n+1) paths and (2n-4) 2^(n-2) + 1 appended nodes
TEST(PathsToStore, WorstCaseFormulas) {
    for (std::size_t n = 3; n <= 12; ++n) {
        const Digraph k = complete_digraph(n);
        auto st = compute_all_vertex_paths(k);
        const std::uint64_t paths = (std::uint64_t{1} << n) - (n + 1);
        EXPECT_EQ(st.extension_count(), paths) << n;
        EXPECT_EQ(oracle_count_paths(k), paths) << n;
        EXPECT_EQ(projected_record_count(k), paths + n) << n;
        EXPECT_EQ(st.append_cost(), (2 * n - 4) * (std::uint64_t{1} << (n - 2)) + 1) << n;
    }
}

TEST(PathsToStore, ResourceCap) {
    try {
        compute_all_vertex_paths(complete_digraph(12), 100);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::resource_cap);
    }
}

TEST(PathsToStore, Find) {
    auto st = compute_all_vertex_paths(fig8());
    std::vector<NodeId> acde{A, C, D, E};
    auto idx = st.find(acde);
    ASSERT_TRUE(idx.has_value());
    EXPECT_EQ(st.nodes(*idx), acde);
    std::vector<NodeId> missing{B, C};
    EXPECT_FALSE(st.find(missing).has_value());
    EXPECT_THROW(st.at(missing), Error);
}

TEST(IsSuperpath, Examples) {
    std::vector<NodeId> abcd{A, B, C, D}, abc{A, B, C}, acd{A, C, D};
    EXPECT_TRUE(is_superpath(abcd, abc));
    EXPECT_FALSE(is_superpath(abcd, acd));
    EXPECT_FALSE(is_superpath(abc, abc));
}

TEST(FilterRelevant, W6KeepsEverything) {
    StDag g = w6();
    auto d = build_msp_dag(g);
    auto st = compute_all_vertex_paths(d.dag);
    st.filter_relevant(d.msps);
    for (NodeId v = 0; v < st.node_count(); ++v) EXPECT_TRUE(st.list_relevant(v));
    std::vector<std::vector<NodeId>> yielded;
    while (auto p = st.next_unchecked()) yielded.push_back(st.nodes(*p));
    ASSERT_EQ(yielded.size(), 1u);
    EXPECT_EQ(yielded[0], (std::vector<NodeId>{*d.source, *d.target}));
}

TEST(FilterRelevant, HalfSyncpointRules) {
    // 0 -> 1 -> 2 with 1 a BHSP and 2 an FHSP
    Digraph d(4);
    d.add_edge(0, 1);
    d.add_edge(1, 2);
    d.add_edge(1, 3);
    auto st = compute_all_vertex_paths(d);
    std::vector<SyncpointKind> kinds{SyncpointKind::fsp, SyncpointKind::bhsp, SyncpointKind::fhsp, SyncpointKind::fsp};
    st.filter_relevant(kinds);
    EXPECT_FALSE(st.list_relevant(2));
    EXPECT_TRUE(st.list_relevant(3));
    std::vector<NodeId> from_bhsp{1, 3}, through_bhsp{0, 1, 3};
    EXPECT_FALSE(st.record(st.at(from_bhsp)).relevant);
    EXPECT_TRUE(st.record(st.at(through_bhsp)).relevant);
}

TEST(NextUnchecked, Fig8LengthOrder) {
    auto st = compute_all_vertex_paths(fig8());
    std::vector<std::vector<NodeId>> order;
    while (auto p = st.next_unchecked()) order.push_back(st.nodes(*p));
    ASSERT_EQ(order.size(), 24u);
    std::vector<std::vector<NodeId>> two(order.begin(), order.begin() + 9);
    std::sort(two.begin(), two.end());
    EXPECT_EQ(two, sorted({{A, B}, {A, C}, {C, D}, {A, E}, {B, E}, {C, E}, {D, E}, {D, F}, {E, F}}));
    EXPECT_TRUE(std::is_sorted(order.begin(), order.end(),
                               [](const auto &x, const auto &y) { return x.size() < y.size(); }));
}

TEST(DeleteSuperpaths, Fig8BE) {
    auto st = compute_all_vertex_paths(fig8());
    std::vector<NodeId> be{B, E};
    EXPECT_EQ(paths_of(st, st.collect_superpaths(st.at(be))),
              sorted({{A, B, E}, {B, E, F}, {A, B, E, F}}));
    EXPECT_EQ(st.delete_superpaths(be), 3u);
    std::vector<std::vector<NodeId>> yielded;
    while (auto p = st.next_unchecked()) yielded.push_back(st.nodes(*p));
    EXPECT_EQ(std::count(yielded.begin(), yielded.end(), std::vector<NodeId>{A, B, E}), 0);
    EXPECT_EQ(std::count(yielded.begin(), yielded.end(), std::vector<NodeId>{B, E}), 0);
}

TEST(DeleteSuperpaths, Fig8EFSkipsShortSeparators) {
    auto st = compute_all_vertex_paths(fig8());
    std::vector<NodeId> ef{E, F};
    st.delete_superpaths(ef);
    EXPECT_EQ(deleted_paths(st), sorted({{E, F},
                                         {A, E, F},
                                         {B, E, F},
                                         {A, B, E, F},
                                         {C, E, F},
                                         {A, C, E, F},
                                         {D, E, F},
                                         {C, D, E, F},
                                         {A, C, D, E, F}}));
}

TEST(DeleteSuperpaths, W6Nothing) {
    auto d = build_msp_dag(w6());
    auto st = compute_all_vertex_paths(d.dag);
    std::vector<NodeId> xy{*d.source, *d.target};
    EXPECT_EQ(st.delete_superpaths(xy), 0u);
}

TEST(DeleteSuperpaths, MatchesNaiveScan) {
    std::mt19937_64 rng(5);
    std::size_t graphs = 0;
    while (graphs < 100) {
        const std::size_t n = 2 + rng() % 11;
        Digraph d = random_dag(n, 0.2 + 0.6 * static_cast<double>(rng() % 100) / 100.0, rng);
        ++graphs;
        const auto all = oracle_all_paths(d);
        auto st = compute_all_vertex_paths(d);
        ASSERT_EQ(st.extension_count(), all.size());
        for (const auto &p : all) {
            const auto expect = oracle_superpaths(all, p);
            EXPECT_EQ(paths_of(st, st.collect_superpaths(st.at(p))), expect);
            auto fresh = compute_all_vertex_paths(d);
            fresh.delete_superpaths(p);
            auto removed = deleted_paths(fresh);
            removed.erase(std::find(removed.begin(), removed.end(), p));
            EXPECT_EQ(removed, expect);
        }
    }
}

// pruned deletion over several successive calls marks the same union
TEST(DeleteSuperpaths, PrunedEqualsUnpruned) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        Digraph d = random_dag(4 + rng() % 8, 0.5, rng);
        const auto all = oracle_all_paths(d);
        auto pruned = compute_all_vertex_paths(d);
        auto plain = compute_all_vertex_paths(d);
        for (int k = 0; k < 4 && !all.empty(); ++k) {
            const auto &p = all[rng() % all.size()];
            pruned.delete_superpaths(p, true);
            plain.delete_superpaths(p, false);
        }
        EXPECT_EQ(deleted_paths(pruned), deleted_paths(plain));
    }
}

TEST(Levelwise, ComplexityCountsMatchStoredLists) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = 2 + rng() % 14;
        Digraph d = random_dag(n, 0.45, rng);
        std::vector<SyncpointKind> kinds(n);
        for (auto &k : kinds) k = static_cast<SyncpointKind>(rng() % 4);
        std::vector<std::uint8_t> success(n * n);
        for (auto &x : success) x = rng() % 4 == 0;
        auto check = [&](NodeId x, NodeId y) { return success[x * n + y] != 0; };

        auto st = compute_all_vertex_paths(d);
        st.filter_relevant(kinds);
        std::vector<std::vector<NodeId>> stored;
        while (auto p = st.next_unchecked()) {
            stored.push_back(st.nodes(*p));
            if (check(st.record(*p).first, st.record(*p).last)) st.delete_superpaths(*p);
        }
        std::vector<std::pair<NodeId, NodeId>> stored_pairs, level_pairs;
        for (const auto &p : stored) stored_pairs.emplace_back(p.front(), p.back());
        auto counts = levelwise_path_search(d, kinds, [&](NodeId x, NodeId y) {
            level_pairs.emplace_back(x, y);
            return check(x, y);
        });
        EXPECT_EQ(counts.checked, stored.size());
        std::sort(stored_pairs.begin(), stored_pairs.end());
        std::sort(level_pairs.begin(), level_pairs.end());
        EXPECT_EQ(level_pairs, stored_pairs);
    }
}
