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

#include <stdexcept>
#include <string>
#include <string_view>

namespace mincluster {

enum class ErrorCode {
    empty_vertex_set,
    duplicate_vertex,
    dangling_edge_endpoint,
    cycle_detected,
    multiple_sources,
    multiple_targets,
    redundant_edge,
    edge_not_in_graph,
    path_not_found,
    not_a_cluster,
    resource_cap,
    too_large,
    invalid_params,
    disruptive_edge_exhausted,
    parse_error,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::empty_vertex_set: return "EmptyVertexSet";
        case ErrorCode::duplicate_vertex: return "DuplicateVertex";
        case ErrorCode::dangling_edge_endpoint: return "DanglingEdgeEndpoint";
        case ErrorCode::cycle_detected: return "CycleDetected";
        case ErrorCode::multiple_sources: return "MultipleSources";
        case ErrorCode::multiple_targets: return "MultipleTargets";
        case ErrorCode::redundant_edge: return "RedundantEdge";
        case ErrorCode::edge_not_in_graph: return "EdgeNotInGraph";
        case ErrorCode::path_not_found: return "PathNotFound";
        case ErrorCode::not_a_cluster: return "NotACluster";
        case ErrorCode::resource_cap: return "ResourceCap";
        case ErrorCode::too_large: return "TooLarge";
        case ErrorCode::invalid_params: return "InvalidParams";
        case ErrorCode::disruptive_edge_exhausted: return "DisruptiveEdgeExhausted";
        case ErrorCode::parse_error: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace mincluster
