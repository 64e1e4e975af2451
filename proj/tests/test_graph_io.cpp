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

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mincluster;
using namespace mincluster::testing;

namespace {

ErrorCode parse_error_of(std::string_view text, bool dot) {
    try {
        if (dot) {
            parse_graph_dot(text);
        } else {
            parse_graph_json(text);
        }
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::empty_vertex_set; // sentinel: nothing thrown
}

} // namespace

TEST(GraphJson, RoundTrip) {
    StDag g = fixture("fig6");
    StDag back = validate_st_dag(parse_graph_json(to_json(g).dump()));
    EXPECT_EQ(back.edges(), g.edges());
    EXPECT_EQ(back.labels(), g.labels());
}

TEST(GraphJson, Metadata) {
    auto raw = parse_graph_json(R"({"vertices":[1,2],"edges":[[1,2]],"metadata":{"seed":4}})");
    EXPECT_EQ(raw.metadata["seed"], 4);
    EXPECT_EQ(raw.edges, (std::vector<Edge>{{1, 2}}));
}

TEST(GraphJson, Malformed) {
    EXPECT_EQ(parse_error_of("{", false), ErrorCode::parse_error);
    EXPECT_EQ(parse_error_of(R"({"edges":[]})", false), ErrorCode::parse_error);
    EXPECT_EQ(parse_error_of(R"({"vertices":[1,-2],"edges":[]})", false), ErrorCode::parse_error);
    EXPECT_EQ(parse_error_of(R"({"vertices":[1,2],"edges":[[1]]})", false), ErrorCode::parse_error);
}

TEST(GraphDot, RoundTrip) {
    StDag g = w6();
    StDag back = validate_st_dag(parse_graph_dot(to_dot(g, "w6", {{a, b, c, d}})));
    EXPECT_EQ(back.edges(), g.edges());
}

TEST(GraphDot, ChainsAndAttributes) {
    auto raw = parse_graph_dot(R"(strict digraph "x" {
        rankdir = LR;
        node [shape=box];
        1 -> 2 -> 4 [color=red];
        1 -> 3; 3 -> 4
        subgraph cluster_0 { 2; 3; }
    })");
    EXPECT_EQ(raw.vertices, (std::vector<VertexId>{1, 2, 3, 4}));
    StDag g = validate_st_dag(raw);
    EXPECT_EQ(g.edges(), diamond().edges());
}

TEST(GraphDot, Malformed) {
    EXPECT_EQ(parse_error_of("graph { 1 -- 2 }", true), ErrorCode::parse_error);
    EXPECT_EQ(parse_error_of("digraph { a -> b }", true), ErrorCode::parse_error);
    EXPECT_EQ(parse_error_of("digraph { 1 -> }", true), ErrorCode::parse_error);
    EXPECT_EQ(parse_error_of("digraph { 1 -> 2", true), ErrorCode::parse_error);
}

TEST(GraphFile, MissingFile) {
    try {
        read_graph_file("/nonexistent/graph.json");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::parse_error);
    }
}

TEST(GraphFile, Fixtures) {
    for (const char *name : {"fig1", "fig5", "fig6", "w6", "diamond"}) {
        StDag g = fixture(name);
        EXPECT_TRUE(redundant_edges(g).empty()) << name;
    }
    EXPECT_EQ(fixture("w6").edges(), w6().edges());
    EXPECT_EQ(fixture("diamond").edges(), diamond().edges());
}
