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

// mincluster command-line frontend.
//
// Exit codes: 0 success, 1 oracle mismatch, 2 bad input or parameters,
// 3 disruptive edges exhausted, 4 graph validation failure, 5 resource cap.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <nlohmann/json.hpp>

#include "mincluster/mincluster.hpp"
#ifdef MINCLUSTER_WITH_ORACLE
#include "mincluster/oracle.hpp"
#endif

namespace {

using namespace mincluster;

enum Exit : int { ok = 0, mismatch = 1, bad_input = 2, exhausted = 3, invalid_graph = 4, capped = 5 };

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_params:
        case ErrorCode::parse_error: return bad_input;
        case ErrorCode::disruptive_edge_exhausted: return exhausted;
        case ErrorCode::resource_cap:
        case ErrorCode::too_large: return capped;
        default: return invalid_graph;
    }
}

std::uint64_t default_seed() {
    if (const char *env = std::getenv("MINCLUSTER_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception &) {
            std::cerr << "warning: ignoring non-numeric MINCLUSTER_SEED\n";
        }
    }
    return 1;
}

void emit(const std::string &text, const std::string &out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream os(out_path);
    if (!os) throw Error(ErrorCode::parse_error, "cannot write " + out_path);
    os << text;
    if (!text.empty() && text.back() != '\n') os << '\n';
}

struct OutputOpts {
    bool dot = false;
    std::string out;
};

void add_output_flags(CLI::App *cmd, OutputOpts &o, bool allow_dot = true) {
    if (allow_dot) cmd->add_flag("--dot", o.dot, "Write DOT instead of JSON");
    cmd->add_option("--out", o.out, "Write to FILE instead of stdout");
}

void add_gen_flags(CLI::App *cmd, GenParams &p) {
    cmd->add_option("--n", p.n, "Total number of vertices of the final DAG")->capture_default_str();
    cmd->add_option("--parexp", p.parexp, "Probability of parallel expansions")->capture_default_str();
    cmd->add_option("--serexp", p.serexp, "Probability of serial expansions")->capture_default_str();
    cmd->add_option("--maxwidth", p.maxwidth, "Maximum width of parallel and subgraph expansions")
        ->capture_default_str();
    cmd->add_option("--clustsettle", p.clustsettle, "Edge factor for subgraph expansions")->capture_default_str();
    cmd->add_option("--narb", p.narb, "Number of disruptive edges")->capture_default_str();
    cmd->add_option("--seed", p.seed, "Base seed (default: $MINCLUSTER_SEED or 1)");
}

StDag load_graph(const std::string &path) { return validate_st_dag(read_graph_file(path)); }

int cmd_gen(const GenParams &p, const OutputOpts &o) {
    GeneratedDag d = generate_dag(p);
    if (o.dot) {
        std::ostringstream os;
        os << "// " << generation_record(d).dump() << '\n' << to_dot(d.graph, "generated");
        emit(os.str(), o.out);
    } else {
        nlohmann::json j = to_json(d.graph);
        j["metadata"] = generation_record(d);
        emit(j.dump(2), o.out);
    }
    return ok;
}

struct FindFlags {
    std::string input;
    bool reject_redundant = false;
    bool strict_guard = false;
    bool no_timings = false;
    std::string path_search = "automatic";
    std::size_t path_cap = default_path_cap;
};

FindOptions find_options(const FindFlags &f) {
    FindOptions opts;
    opts.redundancy = f.reject_redundant ? RedundancyPolicy::reject : RedundancyPolicy::normalize;
    opts.strict_disjoint_guard = f.strict_guard;
    opts.path_cap = f.path_cap;
    if (f.path_search == "stored") opts.path_search = PathSearch::stored_lists;
    if (f.path_search == "levelwise") opts.path_search = PathSearch::levelwise;
    return opts;
}

int cmd_find(const FindFlags &f, const OutputOpts &o) {
    const StDag g = load_graph(f.input);
    const FindResult r = find_all_min_clusters(g, find_options(f));
    emit(o.dot ? to_dot(r) : to_json(r, !f.no_timings).dump(2), o.out);
    return ok;
}

int cmd_mspdag(const std::string &input, const OutputOpts &o) {
    const StDag g = normalize(load_graph(input)).graph;
    const MspDag d = build_msp_dag(g);
    emit(o.dot ? to_dot(g, d) : to_json(g, d).dump(2), o.out);
    return ok;
}

int cmd_reduce(const std::string &input, const std::string &mode, const OutputOpts &o) {
    const StDag g = load_graph(input);
    if (mode == "transitive") {
        const Normalized n = normalize(g);
        if (o.dot) {
            emit(to_dot(n.graph, "reduced"), o.out);
            return ok;
        }
        nlohmann::json j = to_json(n.graph);
        auto removed = nlohmann::json::array();
        for (const Edge &e : n.removed) removed.push_back({e.from, e.to});
        j["removed_edges"] = std::move(removed);
        emit(j.dump(2), o.out);
        return ok;
    }
    const SpResult r = sp_reduce(g);
    if (o.dot) {
        std::ostringstream os;
        os << "digraph reduced {\n";
        for (std::size_t i = 0; i < r.groups.size(); ++i) {
            os << "  n" << i << " [label=\"";
            for (std::size_t k = 0; k < r.groups[i].size(); ++k) os << (k ? "," : "") << r.groups[i][k];
            os << "\"];\n";
        }
        for (auto [a, b] : r.edges) os << "  n" << a << " -> n" << b << ";\n";
        os << "}\n";
        emit(os.str(), o.out);
        return ok;
    }
    nlohmann::json j;
    j["fully_reduced"] = r.fully_reduced;
    j["groups"] = r.groups;
    j["edges"] = r.edges;
    j["steps"] = {{"serial", std::count_if(r.steps.begin(), r.steps.end(),
                                           [](const SpStep &s) { return s.kind == SpStepKind::serial; })},
                  {"parallel", std::count_if(r.steps.begin(), r.steps.end(),
                                             [](const SpStep &s) { return s.kind == SpStepKind::parallel; })}};
    emit(j.dump(2), o.out);
    return ok;
}

std::string stats_table(const std::vector<RunStats> &rows) {
    std::ostringstream os;
    os << std::fixed;
    os << std::setw(6) << "n" << std::setw(9) << "maxwidth" << std::setw(6) << "narb" << " |" << std::setw(9) << "N mean"
       << std::setw(9) << "N var" << std::setw(5) << "min" << std::setw(5) << "max" << " |" << std::setw(7) << "k mean"
       << std::setw(8) << "k var" << std::setw(4) << "min" << std::setw(4) << "max" << " |" << std::setw(9)
       << "sz mean" << std::setw(11) << "sz var" << std::setw(5) << "min" << std::setw(6) << "max" << " |"
       << std::setw(9) << "t mean" << std::setw(10) << "t var" << std::setw(9) << "t min" << std::setw(9) << "t max"
       << " | fail\n";
    for (const auto &st : rows) {
        const auto &p = st.params;
        os << std::setw(6) << p.n << std::setw(9) << p.maxwidth << std::setw(6) << p.narb << " |" << std::setprecision(2)
           << std::setw(9) << st.msps.mean << std::setw(9) << st.msps.var << std::setprecision(0) << std::setw(5)
           << st.msps.min << std::setw(5) << st.msps.max << " |" << std::setprecision(2) << std::setw(7)
           << st.clusters_per_dag.mean << std::setw(8) << st.clusters_per_dag.var << std::setprecision(0)
           << std::setw(4) << st.clusters_per_dag.min << std::setw(4) << st.clusters_per_dag.max << " |"
           << std::setprecision(2) << std::setw(9) << st.cluster_sizes.mean << std::setprecision(0) << std::setw(11)
           << st.cluster_sizes.var << std::setw(5) << st.cluster_sizes.min << std::setw(6) << st.cluster_sizes.max
           << " |" << std::setprecision(4) << std::setw(9) << st.runtime_s.mean << std::setw(10) << st.runtime_s.var
           << std::setw(9) << st.runtime_s.min << std::setw(9) << st.runtime_s.max << " | " << st.failures << "\n";
    }
    return os.str();
}

int cmd_stats(const GenParams &base, std::size_t samples, const std::string &preset, bool no_timings, bool text,
              const std::string &out) {
    if (samples < 1) throw Error(ErrorCode::invalid_params, "samples must be at least 1");
    std::vector<GenParams> rows;
    if (preset == "table1") {
        for (GenParams p : table_rows()) {
            p.seed = base.seed;
            rows.push_back(p);
        }
    } else {
        rows.push_back(base);
    }
    for (const auto &p : rows) validate_params(p);

    std::vector<RunStats> results;
    std::size_t all_failed = 0;
    for (const auto &p : rows) {
        results.push_back(run_batch(p, samples));
        if (results.back().failures == samples) ++all_failed;
    }

    if (text) {
        emit(stats_table(results), out);
    } else {
        nlohmann::json j;
        j["samples"] = samples;
        j["rows"] = nlohmann::json::array();
        for (const auto &st : results) j["rows"].push_back(to_json(st, !no_timings));
        if (!no_timings && results.size() > 1) {
            // growth of the mean runtime between consecutive rows
            auto ratios = nlohmann::json::array();
            for (std::size_t i = 1; i < results.size(); ++i) {
                const double prev = results[i - 1].runtime_s.mean;
                ratios.push_back({{"from_n", results[i - 1].params.n},
                                  {"to_n", results[i].params.n},
                                  {"ratio", prev > 0 ? results[i].runtime_s.mean / prev : 0.0}});
            }
            j["runtime_ratios"] = std::move(ratios);
        }
        emit(j.dump(2), out);
    }
    return all_failed == results.size() ? bad_input : ok;
}

#ifdef MINCLUSTER_WITH_ORACLE
std::string family_string(const std::vector<std::vector<VertexId>> &fam) {
    nlohmann::json j = fam;
    return j.dump();
}

int cmd_oracle_compare(const GenParams &base, std::size_t samples, std::size_t max_n, const std::string &notion_name,
                       bool corrupt, const std::string &out) {
    if (max_n > oracle_vertex_cap) {
        throw Error(ErrorCode::invalid_params, "max-n must not exceed " + std::to_string(oracle_vertex_cap));
    }
    validate_params(base);
    const ClusterNotion notion = notion_name == "literal" ? ClusterNotion::literal : ClusterNotion::connected;
    std::size_t compared = 0, mismatches = 0, gen_failures = 0, too_big = 0, clusters = 0;
    nlohmann::json counterexamples = nlohmann::json::array();
    for (std::size_t i = 0; i < samples; ++i) {
        GenParams p = base;
        p.seed = base.seed + i;
        std::optional<GeneratedDag> d;
        try {
            d.emplace(generate_dag(p));
        } catch (const Error &e) {
            if (e.code() != ErrorCode::disruptive_edge_exhausted) throw;
            ++gen_failures;
            continue;
        }
        if (d->graph.vertex_count() > max_n) {
            ++too_big;
            continue;
        }
        ++compared;
        auto found = cluster_families(find_all_min_clusters(d->graph));
        if (corrupt && !found.empty()) found.erase(found.begin());
        auto expected = oracle_minimal_clusters(d->graph, notion);
        std::sort(expected.begin(), expected.end());
        clusters += expected.size();
        if (found != expected) {
            ++mismatches;
            nlohmann::json g = to_json(d->graph);
            g["metadata"] = generation_record(*d);
            counterexamples.push_back({{"seed", p.seed}, {"found", found}, {"oracle", expected}, {"graph", g}});
            std::cerr << "mismatch at seed " << p.seed << ": found " << family_string(found) << ", oracle "
                      << family_string(expected) << "\n";
        }
    }
    nlohmann::json j;
    j["params"] = to_json(base);
    j["notion"] = notion_name;
    j["requested"] = samples;
    j["compared"] = compared;
    j["skipped_generation_failures"] = gen_failures;
    j["skipped_too_large"] = too_big;
    j["oracle_clusters"] = clusters;
    j["mismatches"] = mismatches;
    j["counterexamples"] = std::move(counterexamples);
    emit(j.dump(2), out);
    return mismatches == 0 ? ok : mismatch;
}
#endif

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Minimal cluster finder for st-DAGs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "mincluster 0.1.0");

    GenParams gen_params;
    gen_params.seed = default_seed();
    OutputOpts gen_out;
    auto *gen = app.add_subcommand("gen", "Generate a random st-DAG");
    add_gen_flags(gen, gen_params);
    add_output_flags(gen, gen_out);

    FindFlags find_flags;
    OutputOpts find_out;
    auto *find = app.add_subcommand("find", "Find all minimal clusters of a graph file (JSON or DOT)");
    find->add_option("graph", find_flags.input, "Input graph")->required();
    find->add_flag("--reject-redundant", find_flags.reject_redundant, "Fail on redundant edges instead of removing them");
    find->add_flag("--strict-guard", find_flags.strict_guard, "Require S_X and P_Y to be disjoint before a pair check");
    find->add_flag("--no-timings", find_flags.no_timings, "Omit timings for reproducible output");
    find->add_option("--path-search", find_flags.path_search, "automatic, stored or levelwise")
        ->check(CLI::IsMember({"automatic", "stored", "levelwise"}))
        ->capture_default_str();
    find->add_option("--path-cap", find_flags.path_cap, "Maximum number of stored MSP paths")->capture_default_str();
    add_output_flags(find, find_out);

    std::string msp_input;
    OutputOpts msp_out;
    auto *mspdag = app.add_subcommand("mspdag", "Print the MSPs and the MSP-DAG of a graph file");
    mspdag->add_option("graph", msp_input, "Input graph")->required();
    add_output_flags(mspdag, msp_out);

    std::string reduce_input, reduce_mode = "transitive";
    OutputOpts reduce_out;
    auto *reduce = app.add_subcommand("reduce", "Transitive reduction or series-parallel reduction");
    reduce->add_option("graph", reduce_input, "Input graph")->required();
    reduce->add_option("--mode", reduce_mode, "transitive or sp")
        ->check(CLI::IsMember({"transitive", "sp"}))
        ->capture_default_str();
    add_output_flags(reduce, reduce_out);

    GenParams stats_params;
    stats_params.seed = default_seed();
    std::size_t stats_samples = 100;
    std::string stats_preset;
    bool stats_no_timings = false, stats_text = false;
    OutputOpts stats_out;
    auto *stats = app.add_subcommand("stats", "Batch statistics over seeded random DAGs");
    add_gen_flags(stats, stats_params);
    stats->add_option("--samples", stats_samples, "Samples per row")->capture_default_str();
    stats->add_option("--preset", stats_preset, "table1: the five benchmark rows n=200..1000")
        ->check(CLI::IsMember({"table1"}));
    stats->add_flag("--no-timings", stats_no_timings, "Omit runtimes so equal seeds give identical output");
    stats->add_flag("--text", stats_text, "Print a text table instead of JSON");
    add_output_flags(stats, stats_out, false);

#ifdef MINCLUSTER_WITH_ORACLE
    GenParams oc_params;
    oc_params.n = 12;
    oc_params.maxwidth = 4;
    oc_params.narb = 3;
    oc_params.seed = default_seed();
    std::size_t oc_samples = 300, oc_max_n = oracle_vertex_cap;
    std::string oc_notion = "literal";
    bool oc_corrupt = false;
    OutputOpts oc_out;
    auto *oracle = app.add_subcommand("oracle-compare", "Compare against brute-force enumeration on small DAGs");
    add_gen_flags(oracle, oc_params);
    oracle->add_option("--samples", oc_samples, "Number of samples")->capture_default_str();
    oracle->add_option("--max-n", oc_max_n, "Skip generated graphs with more vertices")->capture_default_str();
    oracle->add_option("--notion", oc_notion, "literal or connected")
        ->check(CLI::IsMember({"literal", "connected"}))
        ->capture_default_str();
    oracle->add_flag("--corrupt-for-test", oc_corrupt, "Drop one found cluster per sample (harness self-test)")
        ->group("");
    add_output_flags(oracle, oc_out, false);
#endif

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : bad_input;
    }

    try {
        if (*gen) return cmd_gen(gen_params, gen_out);
        if (*find) return cmd_find(find_flags, find_out);
        if (*mspdag) return cmd_mspdag(msp_input, msp_out);
        if (*reduce) return cmd_reduce(reduce_input, reduce_mode, reduce_out);
        if (*stats) return cmd_stats(stats_params, stats_samples, stats_preset, stats_no_timings, stats_text, stats_out.out);
#ifdef MINCLUSTER_WITH_ORACLE
        if (*oracle) return cmd_oracle_compare(oc_params, oc_samples, oc_max_n, oc_notion, oc_corrupt, oc_out.out);
#endif
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    }
    return ok;
}
