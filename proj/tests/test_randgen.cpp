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

#include <map>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mincluster;
using namespace mincluster::testing;

namespace {

ErrorCode params_error(const GenParams &p) {
    try {
        validate_params(p);
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::parse_error; // sentinel: accepted
}

// block degrees: every entry leaves, every exit is entered
void expect_covering(const SubgraphBlock &block) {
    std::map<VertexId, int> out, in;
    for (const Edge &e : block.edges) {
        ++out[e.from];
        ++in[e.to];
    }
    for (VertexId v : block.entries) EXPECT_GE(out[v], 1);
    for (VertexId v : block.exits) EXPECT_GE(in[v], 1);
}

} // namespace

TEST(GenParams, Validation) {
    GenParams p;
    EXPECT_EQ(params_error(p), ErrorCode::parse_error);
    p.parexp = 0.7;
    p.serexp = 0.7;
    EXPECT_EQ(params_error(p), ErrorCode::invalid_params);
    p = {};
    p.n = 2;
    EXPECT_EQ(params_error(p), ErrorCode::invalid_params);
    p = {};
    p.maxwidth = 1;
    EXPECT_EQ(params_error(p), ErrorCode::invalid_params);
    p = {};
    p.clustsettle = 1.0;
    EXPECT_EQ(params_error(p), ErrorCode::invalid_params);
}

TEST(SubgraphBlock, EdgeCountWindow) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed);
        GrowingDag dag;
        auto block = dag.expand_subgraph(2, 3, 3, 0.9, rng);
        EXPECT_EQ(block.lower, 5u);
        EXPECT_EQ(block.upper, 8u);
        EXPECT_GE(block.edges.size(), 5u);
        EXPECT_LE(block.edges.size(), 8u);
        EXPECT_EQ(block.entries.size(), 3u);
        EXPECT_EQ(block.exits.size(), 3u);
        expect_covering(block);
    }
}

TEST(SubgraphBlock, EmptyWindowFallsBackToCover) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        GrowingDag dag;
        auto block = dag.expand_subgraph(2, 2, 2, 0.99, rng);
        EXPECT_GT(block.lower, block.upper);
        EXPECT_EQ(block.edges.size(), 2u);
        expect_covering(block);
        Rng wide(seed);
        GrowingDag other;
        auto lopsided = other.expand_subgraph(2, 2, 5, 0.3, wide);
        EXPECT_EQ(lopsided.edges.size(), 5u);
        expect_covering(lopsided);
    }
}

TEST(DisruptiveEdge, DiamondCandidates) {
    GrowingDag dag; // 1 -> 2 -> 3
    dag.expand_parallel(2, 2); // 1 -> {2,4} -> 3
    EXPECT_FALSE(dag.disruptive_edge_allowed(1, 3)); // 1 already reaches 3
    EXPECT_FALSE(dag.disruptive_edge_allowed(2, 4)); // 1 -> 4 would become redundant
    EXPECT_FALSE(dag.disruptive_edge_allowed(3, 1)); // cycle
    EXPECT_FALSE(dag.disruptive_edge_allowed(2, 2));
}

TEST(DisruptiveEdge, AcceptedEdgeKeepsReduction) {
    GrowingDag dag;
    dag.expand_serial(2);      // 1 -> 2 -> 4 -> 3
    dag.expand_parallel(2, 2); // 1 -> {2,5} -> 4 -> 3
    dag.expand_serial(5);      // 1 -> 5 -> 6 -> 4
    dag.expand_serial(2);      // 1 -> 2 -> 7 -> 4
    EXPECT_TRUE(dag.disruptive_edge_allowed(2, 6));
    dag.add_edge(2, 6);
    StDag g = dag.to_st_dag();
    EXPECT_TRUE(redundant_edges(g).empty());
}

TEST(GenerateDag, Deterministic) {
    GenParams p;
    p.seed = 17;
    auto x = generate_dag(p);
    auto y = generate_dag(p);
    EXPECT_EQ(x.graph.edges(), y.graph.edges());
    EXPECT_EQ(x.disruptive_edges, y.disruptive_edges);
    EXPECT_EQ(generation_record(x), generation_record(y));
    p.seed = 18;
    EXPECT_NE(generate_dag(p).graph.edges(), x.graph.edges());
}

TEST(GenerateDag, DefaultParameters) {
    GenParams p;
    auto d = generate_dag(p);
    EXPECT_GE(d.graph.vertex_count(), 50u);
    EXPECT_LE(d.graph.vertex_count(), 50u - 1 + 2 * p.maxwidth);
    EXPECT_EQ(d.disruptive_edges.size(), 10u);
    auto rec = generation_record(d);
    EXPECT_EQ(rec["overshoot"], d.graph.vertex_count() - 50);
    EXPECT_EQ(rec["generator"]["seed"], 1);
}

TEST(GenerateDag, SmallestGraph) {
    GenParams p;
    p.n = 3;
    p.narb = 0;
    p.seed = 7;
    auto d = generate_dag(p);
    EXPECT_EQ(d.graph.vertex_count(), 3u);
    EXPECT_EQ(d.graph.edges(), chain3().edges());
}

TEST(GenerateDag, Exhausted) {
    GenParams p;
    p.n = 8;
    p.maxwidth = 2;
    p.narb = 200;
    try {
        generate_dag(p);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::disruptive_edge_exhausted);
    }
}

TEST(GenerateDag, ParallelOnly) {
    GenParams p;
    p.n = 30;
    p.narb = 0;
    p.parexp = 1.0;
    p.serexp = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        p.seed = seed;
        auto d = generate_dag(p);
        EXPECT_EQ(d.serial_expansions + d.subgraph_expansions, 0u);
        EXPECT_TRUE(sp_reduce(d.graph).fully_reduced);
    }
}

TEST(GenerateDag, ValidityGrid) {
    std::size_t checked = 0;
    for (std::size_t n : {10, 40, 90}) {
        for (std::size_t maxwidth : {2, 5, 9}) {
            for (std::size_t narb : {0, 4}) {
                for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                    GenParams p;
                    p.n = n;
                    p.maxwidth = maxwidth;
                    p.narb = narb;
                    p.seed = seed;
                    auto d = try_generate(p);
                    if (!d) continue;
                    ++checked;
                    const std::size_t v = d->graph.vertex_count();
                    EXPECT_GE(v, n);
                    EXPECT_LE(v, n - 1 + 2 * maxwidth);
                    EXPECT_TRUE(redundant_edges(d->graph).empty());
                }
            }
        }
    }
    EXPECT_GT(checked, 80u);
}
