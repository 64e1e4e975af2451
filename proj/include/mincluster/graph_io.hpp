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

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mincluster/graph.hpp"

namespace mincluster {

/// Graph data as read from a file, before st-DAG validation.
struct RawGraph {
    std::vector<VertexId> vertices;
    std::vector<Edge> edges;
    nlohmann::json metadata; // null when absent
};

inline StDag validate_st_dag(const RawGraph &raw) { return validate_st_dag(raw.vertices, raw.edges); }

inline nlohmann::json to_json(const StDag &g) {
    nlohmann::json j;
    std::vector<VertexId> ids = g.labels();
    std::sort(ids.begin(), ids.end());
    j["vertices"] = ids;
    auto edges = nlohmann::json::array();
    for (const Edge &e : g.edges()) edges.push_back({e.from, e.to});
    j["edges"] = std::move(edges);
    return j;
}

inline RawGraph raw_graph_from_json(const nlohmann::json &j) {
    auto fail = [](const std::string &msg) -> void { throw Error(ErrorCode::parse_error, msg); };
    if (!j.is_object()) fail("graph JSON must be an object");
    if (!j.contains("vertices") || !j["vertices"].is_array()) fail("missing \"vertices\" array");
    if (!j.contains("edges") || !j["edges"].is_array()) fail("missing \"edges\" array");
    RawGraph raw;
    for (const auto &v : j["vertices"]) {
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() > UINT32_MAX) fail("vertex ids must be non-negative 32-bit integers");
        raw.vertices.push_back(v.get<VertexId>());
    }
    for (const auto &e : j["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
            fail("each edge must be a pair of non-negative integers");
        }
        raw.edges.push_back({e[0].get<VertexId>(), e[1].get<VertexId>()});
    }
    if (j.contains("metadata")) raw.metadata = j["metadata"];
    return raw;
}

inline RawGraph parse_graph_json(std::string_view text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::parse_error, "malformed JSON");
    return raw_graph_from_json(j);
}

/// DOT output; each entry of `groups` is drawn as a shaded subgraph.
inline std::string to_dot(const StDag &g, std::string_view name = "G",
                          const std::vector<std::vector<VertexId>> &groups = {}) {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    std::vector<VertexId> ids = g.labels();
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        os << "  subgraph cluster_" << i << " {\n    style=filled; color=lightgrey;\n";
        for (VertexId v : groups[i]) os << "    " << v << ";\n";
        os << "  }\n";
    }
    for (VertexId v : ids) os << "  " << v << ";\n";
    for (const Edge &e : g.edges()) os << "  " << e.from << " -> " << e.to << ";\n";
    os << "}\n";
    return os.str();
}

namespace detail {

class DotLexer {
  public:
    explicit DotLexer(std::string_view text) : s_(text) {}

    // Empty string means end of input.
    std::string next() {
        skip();
        if (i_ >= s_.size()) return {};
        char c = s_[i_];
        if (c == '-' && i_ + 1 < s_.size() && (s_[i_ + 1] == '>' || s_[i_ + 1] == '-')) {
            i_ += 2;
            return s_[i_ - 1] == '>' ? "->" : "--";
        }
        if (c == '"') {
            std::string out = "\"";
            ++i_;
            while (i_ < s_.size() && s_[i_] != '"') {
                if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
                out += s_[i_++];
            }
            if (i_ >= s_.size()) throw Error(ErrorCode::parse_error, "unterminated string in DOT input");
            ++i_;
            return out;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-') {
            std::size_t start = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '.' ||
                                      s_[i_] == '-')) {
                if (s_[i_] == '-' && i_ + 1 < s_.size() && (s_[i_ + 1] == '>' || s_[i_ + 1] == '-')) break;
                ++i_;
            }
            return std::string(s_.substr(start, i_ - start));
        }
        ++i_;
        return std::string(1, c);
    }

  private:
    void skip() {
        for (;;) {
            while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (s_.substr(i_, 2) == "//" || (i_ < s_.size() && s_[i_] == '#')) {
                while (i_ < s_.size() && s_[i_] != '\n') ++i_;
            } else if (s_.substr(i_, 2) == "/*") {
                auto end = s_.find("*/", i_ + 2);
                i_ = end == std::string_view::npos ? s_.size() : end + 2;
            } else {
                return;
            }
        }
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

inline VertexId dot_vertex_id(std::string tok) {
    if (!tok.empty() && tok.front() == '"') tok.erase(0, 1);
    VertexId id = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), id);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw Error(ErrorCode::parse_error, "DOT node name '" + tok + "' is not a non-negative integer");
    }
    return id;
}

} // namespace detail

/// Reads a digraph whose node names are non-negative integers.
/// Attributes and subgraph braces are accepted and ignored.
inline RawGraph parse_graph_dot(std::string_view text) {
    detail::DotLexer lex(text);
    std::string tok = lex.next();
    if (tok == "strict") tok = lex.next();
    if (tok != "digraph") throw Error(ErrorCode::parse_error, "DOT input must start with 'digraph'");
    tok = lex.next();
    if (tok != "{") tok = lex.next();
    if (tok != "{") throw Error(ErrorCode::parse_error, "expected '{' after digraph name");

    RawGraph raw;
    std::vector<std::string> chain;
    int depth = 1;
    auto flush = [&] {
        std::vector<VertexId> ids;
        for (const auto &name : chain) ids.push_back(detail::dot_vertex_id(name));
        for (std::size_t i = 0; i < ids.size(); ++i) {
            raw.vertices.push_back(ids[i]);
            if (i + 1 < ids.size()) raw.edges.push_back({ids[i], ids[i + 1]});
        }
        chain.clear();
    };
    bool expect_target = false;
    for (tok = lex.next(); !tok.empty(); tok = lex.next()) {
        if (tok == "[") {
            while (!tok.empty() && tok != "]") tok = lex.next();
            if (tok.empty()) throw Error(ErrorCode::parse_error, "unterminated attribute list");
            continue;
        }
        if (tok == ";" || tok == ",") {
            flush();
            continue;
        }
        if (tok == "{") {
            flush();
            ++depth;
            continue;
        }
        if (tok == "}") {
            flush();
            if (--depth == 0) break;
            continue;
        }
        if (tok == "->") {
            if (chain.empty()) throw Error(ErrorCode::parse_error, "edge without a tail node");
            expect_target = true;
            continue;
        }
        if (tok == "--") throw Error(ErrorCode::parse_error, "undirected edges are not supported");
        if (tok == "subgraph") {
            flush();
            tok = lex.next();
            if (tok != "{") tok = lex.next();
            if (tok != "{") throw Error(ErrorCode::parse_error, "expected '{' after subgraph name");
            ++depth;
            continue;
        }
        if (tok == "graph" || tok == "node" || tok == "edge") {
            flush();
            continue;
        }
        if (tok == "=") {
            // graph-level attribute assignment: drop the key and the value
            if (!chain.empty()) chain.pop_back();
            lex.next();
            continue;
        }
        if (!chain.empty() && !expect_target) flush();
        chain.push_back(tok);
        expect_target = false;
    }
    if (depth != 0) throw Error(ErrorCode::parse_error, "unbalanced braces in DOT input");
    if (expect_target) throw Error(ErrorCode::parse_error, "edge without a head node");
    std::sort(raw.vertices.begin(), raw.vertices.end());
    raw.vertices.erase(std::unique(raw.vertices.begin(), raw.vertices.end()), raw.vertices.end());
    return raw;
}

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::parse_error, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Reads JSON, or DOT when the file name ends in .dot or .gv.
inline RawGraph read_graph_file(const std::string &path) {
    std::string text = read_text_file(path);
    auto ends_with = [&](std::string_view suffix) {
        return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".dot") || ends_with(".gv")) return parse_graph_dot(text);
    return parse_graph_json(text);
}

} // namespace mincluster
