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
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mincluster/cluster_find.hpp"
#include "mincluster/randgen.hpp"

namespace mincluster {

/// mean / sample variance / min / max of a series.
struct Summary {
    std::size_t count = 0;
    double mean = 0;
    double var = 0; // divisor count-1; 0 for a single value
    double min = 0;
    double max = 0;
};

inline Summary summarize(const std::vector<double> &xs) {
    Summary s;
    s.count = xs.size();
    if (xs.empty()) return s;
    s.min = *std::min_element(xs.begin(), xs.end());
    s.max = *std::max_element(xs.begin(), xs.end());
    double sum = 0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double sq = 0;
        for (double x : xs) sq += (x - s.mean) * (x - s.mean);
        s.var = sq / static_cast<double>(xs.size() - 1);
    }
    return s;
}

inline nlohmann::json to_json(const Summary &s) {
    return {{"count", s.count}, {"mean", s.mean}, {"var", s.var}, {"min", s.min}, {"max", s.max}};
}

struct SampleResult {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::size_t vertices = 0;
    std::size_t msps = 0;
    std::size_t max_msp_side = 0; // largest |P| or |S| over all MSPs
    std::vector<std::size_t> cluster_sizes;
    double seconds = 0; // MSP detection through cluster output
};

struct RunStats {
    GenParams params;
    std::size_t samples = 0;
    std::size_t failures = 0;
    Summary msps;
    Summary max_msp_side;
    Summary clusters_per_dag;
    Summary cluster_sizes;
    Summary runtime_s;
    std::vector<SampleResult> per_sample;
};

/// Generates and analyses one sample. Generation and I/O are not timed.
inline SampleResult run_sample(const GenParams &p, const FindOptions &opts = {}) {
    SampleResult r;
    r.seed = p.seed;
    try {
        auto gen = generate_dag(p);
        r.vertices = gen.graph.vertex_count();
        const auto t0 = std::chrono::steady_clock::now();
        auto res = find_all_min_clusters(gen.graph, opts);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.msps = res.msp_dag.size();
        for (const auto &sp : res.msp_dag.msps) r.max_msp_side = std::max({r.max_msp_side, sp.starts.size(), sp.ends.size()});
        for (const auto &c : res.clusters) r.cluster_sizes.push_back(c.vertices.count());
        r.ok = true;
    } catch (const Error &e) {
        r.error = e.what();
    }
    return r;
}

/// Runs `samples` seeded samples; sample i uses seed base.seed + i.
inline RunStats run_batch(const GenParams &base, std::size_t samples, const FindOptions &opts = {}) {
    RunStats st;
    st.params = base;
    st.samples = samples;
    std::vector<double> msps, sides, per_dag, sizes, secs;
    for (std::size_t i = 0; i < samples; ++i) {
        GenParams p = base;
        p.seed = base.seed + i;
        SampleResult r = run_sample(p, opts);
        if (r.ok) {
            msps.push_back(static_cast<double>(r.msps));
            sides.push_back(static_cast<double>(r.max_msp_side));
            per_dag.push_back(static_cast<double>(r.cluster_sizes.size()));
            for (auto s : r.cluster_sizes) sizes.push_back(static_cast<double>(s));
            secs.push_back(r.seconds);
        } else {
            ++st.failures;
        }
        st.per_sample.push_back(std::move(r));
    }
    st.msps = summarize(msps);
    st.max_msp_side = summarize(sides);
    st.clusters_per_dag = summarize(per_dag);
    st.cluster_sizes = summarize(sizes);
    st.runtime_s = summarize(secs);
    return st;
}

inline nlohmann::json to_json(const RunStats &st, bool with_timings = true) {
    nlohmann::json j;
    j["params"] = to_json(st.params);
    j["samples"] = st.samples;
    j["failures"] = st.failures;
    j["msps"] = to_json(st.msps);
    j["max_msp_side"] = to_json(st.max_msp_side);
    j["clusters_per_dag"] = to_json(st.clusters_per_dag);
    j["cluster_sizes"] = to_json(st.cluster_sizes);
    if (with_timings) j["runtime_s"] = to_json(st.runtime_s);
    auto errors = nlohmann::json::array();
    for (const auto &r : st.per_sample) {
        if (!r.ok) errors.push_back({{"seed", r.seed}, {"error", r.error}});
    }
    j["errors"] = std::move(errors);
    return j;
}

/// Row parameters of the benchmark table; parexp = serexp = 0.33 and
/// clustsettle = 0.4 throughout.
inline std::vector<GenParams> table_rows() {
    std::vector<GenParams> rows;
    const std::size_t presets[][3] = {{200, 10, 20}, {400, 13, 40}, {600, 16, 60}, {800, 19, 80}, {1000, 22, 100}};
    for (const auto &r : presets) {
        GenParams p;
        p.n = r[0];
        p.maxwidth = r[1];
        p.narb = r[2];
        p.parexp = 0.33;
        p.serexp = 0.33;
        p.clustsettle = 0.4;
        p.seed = 1;
        rows.push_back(p);
    }
    return rows;
}

} // namespace mincluster
