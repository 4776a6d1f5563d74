#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "htn/json_io.hpp"

#include "helpers.hpp"

using namespace htn;
using namespace htn_tests;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(HTN_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe))
        r.output.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

// Environment prefixes go through the shell that popen spawns.
RunResult run_cli_env(const std::string& env, const std::string& args) {
    std::string cmd = env + " " + std::string(HTN_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe))
        r.output.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string write_diamond(Query q) {
    PrimitiveInstance inst = diamond_instance(q);
    if (q == Query::Verify) inst.plan = {"a2", "a1", "a3", "a1"};
    if (q == Query::Executable) inst.demand = {{"a1", 2}};
    if (q == Query::Reach) inst.goal = inst.domain.make_state({"p1", "p2"});
    std::string path = "cli_diamond_" + query_name(q) + ".json";
    save_instance_file(inst, path);
    return path;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("solve exit codes: yes, no, error") {
    std::string path = write_diamond(Query::Verify);
    RunResult yes = run_cli("solve " + path);
    CHECK(yes.exit_code == 0);
    CHECK(contains(yes.output, "verdict: yes"));
    CHECK(contains(yes.output, "route: gpow-dp"));
    CHECK(contains(yes.output, "plan: a2 a1 a3 a1"));
    CHECK(contains(yes.output, "tasks: t1 t2 t3 t4"));

    PrimitiveInstance bad = diamond_instance(Query::Verify);
    bad.plan = {"a1", "a2", "a3", "a1"};
    save_instance_file(bad, "cli_bad_plan.json");
    RunResult no = run_cli("solve cli_bad_plan.json");
    CHECK(no.exit_code == 1);
    CHECK(contains(no.output, "verdict: no"));

    RunResult err = run_cli("solve cli_no_such_file.json");
    CHECK(err.exit_code == 2);
    CHECK(contains(err.output, "error:"));

    std::remove(path.c_str());
    std::remove("cli_bad_plan.json");
}

TEST_CASE("solve --json emits machine-readable verdicts") {
    std::string path = write_diamond(Query::Reach);
    RunResult r = run_cli("solve --json " + path);
    CHECK(r.exit_code == 0);
    json j = json::parse(r.output);
    CHECK(j["yes"] == true);
    CHECK(j["route"] == "gpow-dp");
    // Reaching {p1, p2} needs only the prefix t1, t2 of the diamond.
    CHECK(j["witness_plan"] == json::array({"a2", "a1"}));
    CHECK(j["witness_tasks"] == json::array({"t1", "t2"}));
    std::remove(path.c_str());
}

TEST_CASE("forced routes agree with automatic routing") {
    std::string verify = write_diamond(Query::Verify);
    std::string reach = write_diamond(Query::Reach);
    std::string exec = write_diamond(Query::Executable);
    std::string exists = write_diamond(Query::Exists);
    for (const std::string& route : {"gpow", "vcn", "oracle"}) {
        for (const std::string& path : {verify, reach, exec, exists}) {
            RunResult r = run_cli("solve --route " + route + " --json " + path);
            CAPTURE(route);
            CAPTURE(path);
            CHECK(r.exit_code == 0);
            CHECK(json::parse(r.output)["yes"] == true);
        }
    }
    // The antichain route needs an unordered network and a non-verify query.
    CHECK(run_cli("solve --route antichain " + verify).exit_code == 2);
    CHECK(run_cli("solve --route antichain " + reach).exit_code == 2);

    PrimitiveInstance flat;
    flat.domain = Domain({"p"}, {{"on", {}, {}, {"p"}}});
    flat.network = TaskNetwork({"t0", "t1"}, {"on", "on"}, {});
    flat.s0 = Bitset(1);
    flat.query = Query::Reach;
    flat.goal = flat.domain.make_state({"p"});
    save_instance_file(flat, "cli_flat.json");
    RunResult r = run_cli("solve --route antichain --json cli_flat.json");
    CHECK(r.exit_code == 0);
    CHECK(json::parse(r.output)["route"] == "antichain");

    // An unrecognized route never reaches the solver.
    CHECK(run_cli("solve --route warp " + verify).exit_code == 2);

    for (const std::string& p : {verify, reach, exec, exists, std::string("cli_flat.json")})
        std::remove(p.c_str());
}

TEST_CASE("route and thresholds come from the environment when set") {
    std::string path = write_diamond(Query::Verify);
    RunResult r = run_cli_env("HTN_ROUTE=oracle", "solve --json " + path);
    CHECK(r.exit_code == 0);
    CHECK(json::parse(r.output)["route"] == "oracle");

    RunResult t = run_cli_env("HTN_GPOW_THRESHOLD=0", "solve --json " + path);
    CHECK(t.exit_code == 0);
    CHECK(json::parse(t.output)["route"] == "vcn");
    std::remove(path.c_str());
}

TEST_CASE("generate then solve round trips") {
    SUBCASE("shuffle verification") {
        RunResult gen = run_cli(
            "generate shuffle-verify --parts ab,b --target abb --out cli_sv.json");
        CHECK(gen.exit_code == 0);
        CHECK(run_cli("solve cli_sv.json").exit_code == 0);
        RunResult gen_no = run_cli(
            "generate shuffle-verify --parts ab,b --target bba --out cli_sv_no.json");
        CHECK(gen_no.exit_code == 0);
        CHECK(run_cli("solve cli_sv_no.json").exit_code == 1);
        std::remove("cli_sv.json");
        std::remove("cli_sv_no.json");
    }
    SUBCASE("shuffle state") {
        RunResult gen = run_cli(
            "generate shuffle-state --word abb --parts ab,b --query reach --out cli_ss.json");
        CHECK(gen.exit_code == 0);
        CHECK(run_cli("solve cli_ss.json").exit_code == 0);
        // Verification is not a supported query for this family.
        CHECK(run_cli("generate shuffle-state --word a --parts a --query verify").exit_code ==
              2);
        std::remove("cli_ss.json");
    }
    SUBCASE("clique") {
        std::string common =
            " --vertices 3 --colors 3 --coloring 0,1,2 --query reach --variant depth";
        RunResult gen = run_cli("generate clique --edges 0-1,0-2,1-2 --out cli_k3.json" +
                                common);
        CHECK(gen.exit_code == 0);
        CHECK(run_cli("solve cli_k3.json").exit_code == 0);

        RunResult gen_no =
            run_cli("generate clique --edges 0-1,1-2 --out cli_p3.json" + common);
        CHECK(gen_no.exit_code == 0);
        CHECK(run_cli("solve cli_p3.json").exit_code == 1);

        // Forced non-oracle routes reject networks with compound tasks; the
        // exhaustive route accepts them.
        CHECK(run_cli("solve --route gpow cli_k3.json").exit_code == 2);
        CHECK(run_cli("solve --route oracle cli_k3.json").exit_code == 0);
        std::remove("cli_k3.json");
        std::remove("cli_p3.json");
    }
    SUBCASE("random instances are identical per seed") {
        std::string args = "generate random --seed 11 --tasks 7 --shape chains --width 3"
                           " --query executable";
        RunResult a = run_cli(args);
        RunResult b = run_cli(args);
        CHECK(a.exit_code == 0);
        CHECK(a.output == b.output);
        CHECK_FALSE(a.output.empty());
        json j = json::parse(a.output);
        CHECK(j["format"] == "htn-instance");

        CHECK(run_cli("generate random --shape blob").exit_code == 2);
        CHECK(run_cli("generate nonsense").exit_code == 2);
    }
}

TEST_CASE("measures reports order and hierarchy numbers") {
    std::string path = write_diamond(Query::Exists);
    RunResult human = run_cli("measures " + path);
    CHECK(human.exit_code == 0);
    CHECK(contains(human.output, "tasks: 4"));
    CHECK(contains(human.output, "width: 2"));
    CHECK(contains(human.output, "vertex_cover: 2"));
    CHECK(contains(human.output, "depth: 0"));

    RunResult machine = run_cli("measures --json " + path);
    CHECK(machine.exit_code == 0);
    json j = json::parse(machine.output);
    CHECK(j["tasks"] == 4);
    CHECK(j["isolated"] == 0);
    CHECK(j["width"] == 2);
    CHECK(j["vertex_cover"] == 2);
    CHECK(j["compound_tasks"] == 0);
    CHECK(j["depth"] == 0);
    std::remove(path.c_str());

    // Unbounded recursion renders as "unbounded" / null.
    Domain rec({}, {{"x", {}, {}, {}}}, {"r"});
    rec.add_method("r", TaskNetwork({"again"}, {"r"}, {}));
    PrimitiveInstance inst;
    inst.domain = rec;
    inst.network = TaskNetwork({"t"}, {"r"}, {});
    inst.s0 = Bitset(0);
    inst.query = Query::Exists;
    inst.goal = Bitset(0);
    save_instance_file(inst, "cli_rec.json");
    RunResult unbounded = run_cli("measures cli_rec.json");
    CHECK(unbounded.exit_code == 0);
    CHECK(contains(unbounded.output, "depth: unbounded"));
    RunResult unbounded_json = run_cli("measures --json cli_rec.json");
    CHECK(json::parse(unbounded_json.output)["depth"].is_null());
    std::remove("cli_rec.json");
}

TEST_CASE("export-stg renders the state graph") {
    std::string path = write_diamond(Query::Exists);
    RunResult r = run_cli("export-stg " + path);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "digraph"));
    CHECK(contains(r.output, "a1"));

    RunResult capped = run_cli("export-stg --state-cap 2 " + path);
    CHECK(capped.exit_code == 2);

    RunResult to_file = run_cli("export-stg --out cli_stg.dot " + path);
    CHECK(to_file.exit_code == 0);
    std::ifstream dot("cli_stg.dot");
    REQUIRE(dot.good());
    std::string first_line;
    std::getline(dot, first_line);
    CHECK(contains(first_line, "digraph"));
    dot.close();
    std::remove("cli_stg.dot");
    std::remove(path.c_str());
}

TEST_CASE("top-level usage errors") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("solve").exit_code == 2); // missing required file argument
}
