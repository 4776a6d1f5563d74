#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "htn/generators.hpp"
#include "htn/hierarchy.hpp"
#include "htn/json_io.hpp"
#include "htn/oracle.hpp"
#include "htn/ordergraph.hpp"
#include "htn/solvers.hpp"
#include "htn/stategraph.hpp"

namespace {

using htn::PrimitiveInstance;
using htn::Query;
using htn::SolveOptions;
using htn::Verdict;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!s.empty()) out.push_back(cur);
    return out;
}

bool network_is_primitive(const PrimitiveInstance& inst) {
    for (const std::string& l : inst.network.labels)
        if (!inst.domain.is_action(l)) return false;
    return true;
}

std::map<std::string, int> full_demand(const htn::TaskNetwork& tn) {
    std::map<std::string, int> dem;
    for (const std::string& l : tn.labels) dem[l]++;
    return dem;
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw htn::Error("cannot write " + out_path);
    out << text;
}

// --- solve -------------------------------------------------------------------

Verdict solve_forced(const PrimitiveInstance& inst, const std::string& route,
                     const SolveOptions& opts) {
    const htn::Domain& d = inst.domain;
    const htn::TaskNetwork& tn = inst.network;
    if (route == "oracle") return htn::oracle_primitive(inst, opts.node_budget);
    Query q = inst.query;
    std::map<std::string, int> demand = inst.demand;
    if (q == Query::Exists) {
        q = Query::Executable;
        demand = full_demand(tn);
    }
    if (route == "antichain") {
        if (inst.query == Query::Verify)
            throw htn::Error("route antichain does not apply to verification");
        if (q == Query::Reach) return htn::reach_antichain(d, tn, inst.s0, inst.goal, opts);
        return htn::exec_antichain(d, tn, inst.s0, demand, opts);
    }
    if (route == "gpow") {
        if (inst.query == Query::Verify)
            return htn::verify_gpow(d, tn, inst.s0, inst.plan, opts);
        return htn::reach_exec_gpow(d, tn, inst.s0, q, demand, inst.goal, opts);
    }
    if (route == "vcn") {
        if (inst.query == Query::Verify)
            return htn::verify_vcn(d, tn, inst.s0, inst.plan, opts);
        return htn::reach_exec_vcn(d, tn, inst.s0, q, demand, inst.goal, opts);
    }
    throw htn::Error("unknown route " + route);
}

int cmd_solve(const std::string& file, const std::string& route, const SolveOptions& opts,
              bool as_json) {
    PrimitiveInstance inst = htn::load_instance_file(file);
    Verdict v;
    std::optional<htn::TaskNetwork> decomposition;
    if (network_is_primitive(inst)) {
        v = route == "auto" ? htn::dispatch(inst, opts) : solve_forced(inst, route, opts);
        decomposition = inst.network;
    } else {
        if (route != "auto" && route != "oracle")
            throw htn::Error("forced route " + route + " requires a primitive network");
        if (route == "oracle") {
            v = htn::oracle_compound(inst, opts.node_budget);
        } else {
            htn::CompoundVerdict cv = htn::solve_compound(inst, opts);
            v = cv.verdict;
            decomposition = cv.decomposition;
        }
    }
    std::vector<std::string> witness_names;
    if (v.yes && decomposition)
        for (int t : v.witness_tasks) witness_names.push_back(decomposition->names[t]);
    if (as_json) {
        nlohmann::json j;
        j["yes"] = v.yes;
        j["route"] = v.stats.route;
        j["witness_plan"] = v.witness_plan;
        j["witness_tasks"] = witness_names;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "verdict: " << (v.yes ? "yes" : "no") << "\n";
        std::cout << "route: " << v.stats.route << "\n";
        if (v.yes) {
            std::cout << "plan:";
            for (const std::string& a : v.witness_plan) std::cout << " " << a;
            std::cout << "\ntasks:";
            for (const std::string& t : witness_names) std::cout << " " << t;
            std::cout << "\n";
        }
    }
    return v.yes ? 0 : 1;
}

// --- measures ------------------------------------------------------------------

int cmd_measures(const std::string& file, bool as_json) {
    PrimitiveInstance inst = htn::load_instance_file(file);
    htn::OrderMeasures om = htn::measures(inst.network);
    htn::HierarchyMeasures hm = htn::measure_hierarchy(inst.domain, inst.network);
    if (as_json) {
        nlohmann::json j;
        j["tasks"] = om.num_tasks;
        j["isolated"] = om.num_isolated;
        j["width"] = om.width;
        j["vertex_cover"] = om.vcn;
        j["compound_tasks"] = hm.compound_count;
        j["max_method_size"] = hm.max_method_size;
        if (hm.depth)
            j["depth"] = *hm.depth;
        else
            j["depth"] = nullptr;
        j["max_methods_per_compound"] = hm.max_methods_per_compound;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "tasks: " << om.num_tasks << "\n"
                  << "isolated: " << om.num_isolated << "\n"
                  << "width: " << om.width << "\n"
                  << "vertex_cover: " << om.vcn << "\n"
                  << "compound_tasks: " << hm.compound_count << "\n"
                  << "max_method_size: " << hm.max_method_size << "\n"
                  << "depth: " << (hm.depth ? std::to_string(*hm.depth) : "unbounded") << "\n"
                  << "max_methods_per_compound: " << hm.max_methods_per_compound << "\n";
    }
    return 0;
}

// --- generate ------------------------------------------------------------------

struct GenerateArgs {
    std::string kind;
    std::string out;
    // shuffle
    std::string parts;
    std::string target;
    std::string word;
    std::string query = "exists";
    // clique
    int vertices = 0;
    int colors = 0;
    std::string coloring;
    std::string edges;
    std::string variant = "compound-count";
    // random
    std::uint64_t seed = 1;
    int tasks = 6;
    int props = 4;
    int actions = 4;
    std::string shape = "random-dag";
    int width = 2;
    double density = 0.3;
};

int cmd_generate(const GenerateArgs& a) {
    PrimitiveInstance inst;
    if (a.kind == "shuffle-verify") {
        inst = htn::gen_shuffle_verification(split(a.parts, ','), a.target);
    } else if (a.kind == "shuffle-state") {
        inst = htn::gen_shuffle_state(a.word, split(a.parts, ','),
                                      htn::query_from_name(a.query));
    } else if (a.kind == "clique") {
        htn::ColoredGraph g;
        g.num_vertices = a.vertices;
        g.num_colors = a.colors;
        for (const std::string& c : split(a.coloring, ','))
            g.color.push_back(std::stoi(c));
        for (const std::string& e : split(a.edges, ',')) {
            auto ends = split(e, '-');
            if (ends.size() != 2) throw htn::Error("edges must look like \"0-1,1-2\"");
            g.edges.emplace_back(std::stoi(ends[0]), std::stoi(ends[1]));
        }
        htn::CliqueVariant variant;
        if (a.variant == "compound-count") variant = htn::CliqueVariant::CompoundCount;
        else if (a.variant == "method-size") variant = htn::CliqueVariant::MethodSize;
        else if (a.variant == "depth") variant = htn::CliqueVariant::Depth;
        else throw htn::Error("unknown clique variant " + a.variant);
        inst = htn::gen_clique(g, variant, htn::query_from_name(a.query));
    } else if (a.kind == "random") {
        htn::RandomSpec spec;
        spec.num_tasks = a.tasks;
        spec.num_props = a.props;
        spec.num_actions = a.actions;
        spec.width = a.width;
        spec.density = a.density;
        spec.query = htn::query_from_name(a.query);
        if (a.shape == "antichain") spec.shape = htn::RandomShape::Antichain;
        else if (a.shape == "chains") spec.shape = htn::RandomShape::Chains;
        else if (a.shape == "star-forest") spec.shape = htn::RandomShape::StarForest;
        else if (a.shape == "random-dag") spec.shape = htn::RandomShape::RandomDag;
        else throw htn::Error("unknown shape " + a.shape);
        inst = htn::gen_random(a.seed, spec);
    } else {
        throw htn::Error("unknown generator kind " + a.kind);
    }
    write_output(htn::save_instance(inst), a.out);
    return 0;
}

// --- export-stg ------------------------------------------------------------------

int cmd_export_stg(const std::string& file, int state_cap, const std::string& out) {
    PrimitiveInstance inst = htn::load_instance_file(file);
    htn::StateGraph g = htn::build_state_graph(inst.domain, inst.s0, state_cap);
    write_output(htn::to_dot(inst.domain, g), out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Task network decision toolkit: plan verification, plan existence, "
                 "action executability, and state reachability"};
    app.require_subcommand(1);

    std::string file, route = "auto", out;
    SolveOptions opts;
    bool as_json = false;

    CLI::App* solve = app.add_subcommand("solve", "Answer an instance's query");
    solve->add_option("file", file, "instance JSON file")->required();
    solve->add_option("--route", route, "auto|antichain|gpow|vcn|oracle")
        ->check(CLI::IsMember({"auto", "antichain", "gpow", "vcn", "oracle"}))
        ->envname("HTN_ROUTE");
    solve->add_option("--budget", opts.node_budget, "search node budget")
        ->envname("HTN_BUDGET");
    solve->add_option("--gpow-threshold", opts.gpow_threshold,
                      "maximum width for the chain DP")
        ->envname("HTN_GPOW_THRESHOLD");
    solve->add_option("--vcn-threshold", opts.vcn_threshold,
                      "maximum cover size for the cover branching")
        ->envname("HTN_VCN_THRESHOLD");
    solve->add_option("--state-cap", opts.state_cap, "maximum number of states")
        ->envname("HTN_STATE_CAP");
    solve->add_option("--oracle-cap", opts.oracle_task_cap,
                      "maximum task count for the exhaustive fallback")
        ->envname("HTN_ORACLE_CAP");
    solve->add_flag("--json", as_json, "machine-readable output");

    CLI::App* measures_cmd = app.add_subcommand("measures", "Print structural measures");
    measures_cmd->add_option("file", file, "instance JSON file")->required();
    measures_cmd->add_flag("--json", as_json, "machine-readable output");

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "Generate an instance family member");
    generate->add_option("kind", gen.kind, "shuffle-verify|shuffle-state|clique|random")
        ->required();
    generate->add_option("--out", gen.out, "output file (default stdout)");
    generate->add_option("--parts", gen.parts, "comma-separated words over {a,b}");
    generate->add_option("--target", gen.target, "shuffle-verify: word to verify");
    generate->add_option("--word", gen.word, "shuffle-state: word to match");
    generate->add_option("--query", gen.query, "query type for the instance");
    generate->add_option("--vertices", gen.vertices, "clique: vertex count");
    generate->add_option("--colors", gen.colors, "clique: color count");
    generate->add_option("--coloring", gen.coloring, "clique: comma-separated vertex colors");
    generate->add_option("--edges", gen.edges, "clique: edges like \"0-1,1-2\"");
    generate->add_option("--variant", gen.variant, "clique: compound-count|method-size|depth");
    generate->add_option("--seed", gen.seed, "random: seed");
    generate->add_option("--tasks", gen.tasks, "random: task count");
    generate->add_option("--props", gen.props, "random: proposition count");
    generate->add_option("--actions", gen.actions, "random: action count");
    generate->add_option("--shape", gen.shape,
                         "random: antichain|chains|star-forest|random-dag");
    generate->add_option("--width", gen.width, "random: chain count for shape=chains");
    generate->add_option("--density", gen.density, "random: arc probability for random-dag");

    int state_cap = 4096;
    CLI::App* export_stg = app.add_subcommand("export-stg", "Export the state graph as DOT");
    export_stg->add_option("file", file, "instance JSON file")->required();
    export_stg->add_option("--state-cap", state_cap, "maximum number of states")
        ->envname("HTN_STATE_CAP");
    export_stg->add_option("--out", out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(file, route, opts, as_json);
        if (measures_cmd->parsed()) return cmd_measures(file, as_json);
        if (generate->parsed()) return cmd_generate(gen);
        if (export_stg->parsed()) return cmd_export_stg(file, state_cap, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
