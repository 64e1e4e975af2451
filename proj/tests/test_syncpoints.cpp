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
#include <set>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mincluster;
using namespace mincluster::testing;

namespace {

using EdgeList = std::vector<Edge>;

std::size_t redundant_msp_edges(const Digraph &d) {
    std::size_t count = 0;
    for (auto [u, v] : d.edges()) {
        std::vector<NodeId> stack;
        std::vector<bool> seen(d.node_count());
        for (NodeId w : d.successors(u)) {
            if (w != v) stack.push_back(w);
        }
        bool found = false;
        while (!stack.empty() && !found) {
            NodeId x = stack.back();
            stack.pop_back();
            found = x == v;
            if (seen[x]) continue;
            seen[x] = true;
            for (NodeId y : d.successors(x)) stack.push_back(y);
        }
        count += found;
    }
    return count;
}

std::size_t count_with(const std::vector<std::size_t> &degrees, std::size_t value) {
    return static_cast<std::size_t>(std::count(degrees.begin(), degrees.end(), value));
}

} // namespace

TEST(IsSyncpoint, W6) {
    StDag g = w6();
    EXPECT_EQ(is_syncpoint(g, EdgeList{{s, a}, {s, b}}), SyncpointKind::fsp);
    EXPECT_EQ(is_syncpoint(g, EdgeList{{a, c}}), std::nullopt);
    EXPECT_EQ(is_syncpoint(g, EdgeList{{c, t}, {d, t}}), SyncpointKind::fsp);
    // b) holds for {b}, a) fails since d also has predecessor a
    EXPECT_EQ(is_syncpoint(g, EdgeList{{b, d}}), std::nullopt);
}

TEST(IsSyncpoint, HalfSyncpoints) {
    StDag g = fixture("fig6");
    // 2 -> 10 leaves the bipartite block, so only condition a) holds
    EXPECT_EQ(is_syncpoint(g, EdgeList{{2, 4}, {2, 5}, {3, 4}, {3, 5}}), SyncpointKind::fhsp);
    StDag f5 = fixture("fig5");
    EXPECT_EQ(is_syncpoint(f5, EdgeList{{13, 17}, {14, 17}}), SyncpointKind::bhsp);
}

TEST(IsSyncpoint, Chain) {
    StDag g = chain3();
    EXPECT_EQ(is_syncpoint(g, EdgeList{{1, 2}}), SyncpointKind::sp11);
}

TEST(IsSyncpoint, EdgeNotInGraph) {
    try {
        is_syncpoint(w6(), EdgeList{{s, t}});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::edge_not_in_graph);
    }
}

TEST(FindAllMsps, W6) {
    StDag g = w6();
    auto msps = find_all_msps(g);
    ASSERT_EQ(msps.size(), 2u);
    std::set<EdgeList> sets;
    for (const auto &m : msps) {
        EXPECT_EQ(m.kind, SyncpointKind::fsp);
        sets.insert(edge_labels(g, m));
    }
    EXPECT_EQ(sets, (std::set<EdgeList>{{{s, a}, {s, b}}, {{c, t}, {d, t}}}));
}

TEST(FindAllMsps, Chain) {
    StDag g = chain3();
    auto msps = find_all_msps(g);
    ASSERT_EQ(msps.size(), 2u);
    for (const auto &m : msps) EXPECT_EQ(m.kind, SyncpointKind::sp11);
}

TEST(FindAllMsps, Fig6) {
    StDag g = fixture("fig6");
    auto msps = find_all_msps(g);
    ASSERT_EQ(msps.size(), 6u);
    std::vector<std::pair<std::vector<VertexId>, std::vector<VertexId>>> sides;
    for (const auto &m : msps) {
        EXPECT_EQ(m.id, static_cast<std::uint32_t>(&m - msps.data()));
        sides.emplace_back(g.to_labels(m.starts), g.to_labels(m.ends));
    }
    using V = std::vector<VertexId>;
    EXPECT_EQ(sides[0], std::make_pair(V{8, 9, 10, 11, 13, 14}, V{12}));
    EXPECT_EQ(sides[1], std::make_pair(V{12, 15}, V{16}));
    EXPECT_EQ(sides[2], std::make_pair(V{1}, V{2, 3, 6}));
    EXPECT_EQ(sides[3], std::make_pair(V{2, 3}, V{4, 5}));
    EXPECT_EQ(sides[4], std::make_pair(V{6}, V{7, 13}));
    EXPECT_EQ(sides[5], std::make_pair(V{7}, V{14, 15}));
    EXPECT_EQ(msps[3].kind, SyncpointKind::fhsp);
}

TEST(MspDag, W6) {
    auto d = build_msp_dag(w6());
    EXPECT_EQ(d.size(), 2u);
    EXPECT_EQ(d.dag.edge_count(), 1u);
    ASSERT_TRUE(d.source && d.target);
    EXPECT_TRUE(d.dag.has_edge(*d.source, *d.target));
}

TEST(MspDag, Fig6RedundantEdges) {
    auto d = build_msp_dag(fixture("fig6"));
    // A=2 B=3 C=4 D=5 E=0 F=1
    EXPECT_EQ(d.dag.edges(), (std::vector<std::pair<NodeId, NodeId>>{
                                 {0, 1}, {2, 0}, {2, 3}, {2, 4}, {3, 0}, {4, 0}, {4, 5}, {5, 0}, {5, 1}}));
    EXPECT_EQ(redundant_msp_edges(d.dag), 3u);
    EXPECT_EQ(d.source, 2u);
    EXPECT_EQ(d.target, 1u);
}

TEST(MspDag, Fig5RedundantEdges) {
    auto d = build_msp_dag(fixture("fig5"));
    EXPECT_EQ(d.size(), 12u);
    EXPECT_EQ(d.dag.edge_count(), 15u);
    EXPECT_EQ(redundant_msp_edges(d.dag), 3u);
}

// Everything the twin-class enumeration emits is a syncpoint of the stated
// kind; s and t are bracketed by FSPs; the MSP-DAG has one source and sink.
TEST(FindAllMsps, SelfValidation) {
    GenParams p;
    p.n = 60;
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        p.seed = seed;
        p.maxwidth = 3 + seed % 6;
        auto gen = try_generate(p);
        if (!gen) continue;
        const StDag &g = gen->graph;
        auto d = build_msp_dag(g);
        for (const auto &m : d.msps) {
            EXPECT_EQ(is_syncpoint(g, edge_labels(g, m)), m.kind) << "seed " << seed << " msp " << m.id;
        }
        ASSERT_TRUE(d.source && d.target) << "seed " << seed;
        const auto &src = d.msps[*d.source];
        const auto &tgt = d.msps[*d.target];
        EXPECT_EQ(src.starts, std::vector<Vertex>{g.source()});
        EXPECT_EQ(tgt.ends, std::vector<Vertex>{g.target()});
        std::vector<std::size_t> indeg(d.size()), outdeg(d.size());
        for (NodeId v = 0; v < d.size(); ++v) {
            indeg[v] = d.dag.predecessors(v).size();
            outdeg[v] = d.dag.successors(v).size();
        }
        EXPECT_EQ(count_with(indeg, 0), 1u);
        EXPECT_EQ(count_with(outdeg, 0), 1u);
        EXPECT_EQ(indeg[*d.source], 0u);
        EXPECT_EQ(outdeg[*d.target], 0u);
    }
}

TEST(MspDag, Json) {
    StDag g = w6();
    auto j = to_json(g, build_msp_dag(g));
    ASSERT_EQ(j["msps"].size(), 2u);
    EXPECT_EQ(j["edges"].size(), 1u);
    EXPECT_NE(to_dot(g, build_msp_dag(g)).find("FSP"), std::string::npos);
}
