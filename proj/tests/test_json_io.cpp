#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

#include "htn/json_io.hpp"

#include "helpers.hpp"

using namespace htn;
using namespace htn_tests;
using nlohmann::json;

namespace {

// A valid instance covering every optional domain feature.
json base_instance() {
    return json::parse(R"({
      "format": "htn-instance",
      "version": 1,
      "domain": {
        "propositions": ["p1", "p2"],
        "actions": [
          {"name": "a1", "pre": [], "del": [], "add": ["p1"]},
          {"name": "a2", "pre": [], "del": [], "add": ["p2"]},
          {"name": "a3", "pre": ["p2"], "del": ["p1"], "add": []}
        ],
        "compounds": ["c"],
        "methods": [
          {"compound": "c",
           "network": {"tasks": [{"id": "m1", "label": "a1"}], "order": []}}
        ]
      },
      "network": {
        "tasks": [
          {"id": "t1", "label": "a2"},
          {"id": "t2", "label": "a1"},
          {"id": "t3", "label": "a3"},
          {"id": "t4", "label": "a1"}
        ],
        "order": [["t1", "t2"], ["t1", "t3"], ["t2", "t4"], ["t3", "t4"]],
        "order_kind": "cover"
      },
      "s0": [],
      "query": {"type": "verify", "plan": ["a2", "a1", "a3", "a1"]}
    })");
}

void expect_rejected(const json& j) {
    CHECK_THROWS_AS(load_instance(j.dump()), ParseError);
}

} // namespace

TEST_CASE("loading a full instance") {
    PrimitiveInstance inst = load_instance(base_instance().dump());
    CHECK(inst.domain.num_propositions() == 2);
    CHECK(inst.domain.num_actions() == 3);
    CHECK(inst.domain.is_compound("c"));
    CHECK(inst.domain.methods().size() == 1);
    CHECK(inst.network.size() == 4);
    CHECK(inst.network.names == std::vector<std::string>{"t1", "t2", "t3", "t4"});
    CHECK(inst.network.labels == std::vector<std::string>{"a2", "a1", "a3", "a1"});
    CHECK(inst.network.cover_arcs() == diamond_network().cover_arcs());
    CHECK(inst.s0.none());
    CHECK(inst.query == Query::Verify);
    CHECK(inst.plan == std::vector<std::string>{"a2", "a1", "a3", "a1"});
}

TEST_CASE("saving and reloading is the identity") {
    for (Query q : {Query::Verify, Query::Exists, Query::Executable, Query::Reach}) {
        PrimitiveInstance inst = diamond_instance(q);
        if (q == Query::Verify) inst.plan = {"a2", "a1", "a3", "a1"};
        if (q == Query::Executable) inst.demand = {{"a1", 2}, {"a3", 1}};
        if (q == Query::Reach) inst.goal = inst.domain.make_state({"p1"});
        std::string once = save_instance(inst);
        PrimitiveInstance back = load_instance(once);
        CHECK(save_instance(back) == once);
        CHECK(back.query == q);
        CHECK(back.network.names == inst.network.names);
        CHECK(back.network.cover_arcs() == inst.network.cover_arcs());
        CHECK(back.s0 == inst.s0);
        CHECK(back.plan == inst.plan);
        CHECK(back.demand == inst.demand);
        CHECK(back.goal == inst.goal);
    }

    // Domains with methods survive the round trip too.
    PrimitiveInstance inst = load_instance(base_instance().dump());
    std::string once = save_instance(inst);
    CHECK(save_instance(load_instance(once)) == once);
}

TEST_CASE("closure order input rebuilds the same cover") {
    json j = base_instance();
    j["network"]["order"] = json::array();
    for (auto pair : {std::pair{"t1", "t2"}, {"t1", "t3"}, {"t1", "t4"},
                      {"t2", "t4"}, {"t3", "t4"}})
        j["network"]["order"].push_back(json::array({pair.first, pair.second}));
    j["network"]["order_kind"] = "closure";
    PrimitiveInstance inst = load_instance(j.dump());
    CHECK(inst.network.cover_arcs() == diamond_network().cover_arcs());
    // order_kind is optional entirely.
    j["network"].erase("order_kind");
    CHECK(load_instance(j.dump()).network.cover_arcs() == diamond_network().cover_arcs());
}

TEST_CASE("unknown fields are rejected at every level") {
    json j = base_instance();
    j["extra"] = 1;
    expect_rejected(j);

    j = base_instance();
    j["domain"]["extra"] = 1;
    expect_rejected(j);

    j = base_instance();
    j["domain"]["actions"][0]["extra"] = 1;
    expect_rejected(j);

    j = base_instance();
    j["domain"]["methods"][0]["extra"] = 1;
    expect_rejected(j);

    j = base_instance();
    j["domain"]["methods"][0]["network"]["extra"] = 1;
    expect_rejected(j);

    j = base_instance();
    j["network"]["extra"] = 1;
    expect_rejected(j);

    j = base_instance();
    j["network"]["tasks"][0]["extra"] = 1;
    expect_rejected(j);

    j = base_instance();
    j["query"]["extra"] = 1;
    expect_rejected(j);

    // Query payloads from the wrong query type count as unknown fields.
    j = base_instance();
    j["query"] = {{"type", "exists"}, {"plan", json::array()}};
    expect_rejected(j);
    j["query"] = {{"type", "reach"}, {"goal", json::array()}, {"demand", json::object()}};
    expect_rejected(j);
}

TEST_CASE("format and version gates") {
    json j = base_instance();
    j["format"] = "other";
    expect_rejected(j);

    j = base_instance();
    j["version"] = 2;
    expect_rejected(j);
    j["version"] = "1";
    expect_rejected(j);
    j.erase("version");
    expect_rejected(j);

    CHECK_THROWS_AS(load_instance("not json at all {"), ParseError);
    CHECK_THROWS_AS(load_instance("[1, 2, 3]"), ParseError);
}

TEST_CASE("network validation") {
    json j = base_instance();
    j["network"]["tasks"][1]["id"] = "t1"; // duplicate id
    expect_rejected(j);

    j = base_instance();
    j["network"]["order"][0][1] = "nope"; // unknown task id
    expect_rejected(j);

    j = base_instance();
    j["network"]["order"][0] = json::array({"t1", "t2", "t3"}); // not a pair
    expect_rejected(j);

    j = base_instance();
    j["network"]["order_kind"] = "partial"; // not a recognized kind
    expect_rejected(j);

    j = base_instance();
    j["network"]["tasks"][0]["label"] = "mystery"; // neither action nor compound
    expect_rejected(j);

    // A cyclic order is rejected by the network itself.
    j = base_instance();
    j["network"]["order"].push_back(json::array({"t4", "t1"}));
    CHECK_THROWS_AS(load_instance(j.dump()), CycleDetected);
}

TEST_CASE("query payload validation") {
    json j = base_instance();
    j["query"]["plan"][0] = "c"; // compound name is not a plan step
    expect_rejected(j);
    j["query"]["plan"][0] = 7; // not a string
    expect_rejected(j);
    j["query"].erase("plan");
    expect_rejected(j);

    j = base_instance();
    j["query"] = {{"type", "executable"}, {"demand", {{"a1", -1}}}};
    expect_rejected(j);
    j["query"] = {{"type", "executable"}, {"demand", {{"a1", 1.5}}}};
    expect_rejected(j);
    j["query"] = {{"type", "executable"}, {"demand", {{"mystery", 1}}}};
    expect_rejected(j);
    j["query"] = {{"type", "executable"}, {"demand", json::array()}};
    expect_rejected(j);

    j = base_instance();
    j["query"] = {{"type", "reach"}, {"goal", json::array({"ghost"})}};
    CHECK_THROWS_AS(load_instance(j.dump()), Error); // unknown proposition

    j = base_instance();
    j["query"] = {{"type", "unknown-query"}};
    CHECK_THROWS_AS(load_instance(j.dump()), Error);
}

TEST_CASE("file round trip and missing files") {
    std::string path = "htn_json_io_test_tmp.json";
    PrimitiveInstance inst = diamond_instance(Query::Reach);
    inst.goal = inst.domain.make_state({"p1", "p2"});
    save_instance_file(inst, path);
    PrimitiveInstance back = load_instance_file(path);
    CHECK(save_instance(back) == save_instance(inst));
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_instance_file(path), ParseError);
}
