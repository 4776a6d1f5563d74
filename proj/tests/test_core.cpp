#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "htn/core.hpp"

#include <algorithm>

#include "helpers.hpp"

using namespace htn;
using namespace htn_tests;

TEST_CASE("bitset basics") {
    Bitset b(130);
    CHECK(b.size() == 130);
    CHECK(b.none());
    b.set(0);
    b.set(64);
    b.set(129);
    CHECK(b.count() == 3);
    CHECK(b.test(64));
    CHECK_FALSE(b.test(63));
    b.reset(64);
    CHECK_FALSE(b.test(64));
    CHECK(b.members() == std::vector<int>{0, 129});

    Bitset c(130);
    c.set(0);
    CHECK(c.is_subset_of(b));
    CHECK_FALSE(b.is_subset_of(c));
    CHECK(b.intersects(c));
    c.reset(0);
    c.set(5);
    CHECK_FALSE(b.intersects(c));

    Bitset u = b;
    u |= c;
    CHECK(u.count() == 3);
    u.subtract(b);
    CHECK(u.members() == std::vector<int>{5});
    Bitset i = u;
    i &= c;
    CHECK(i == u);

    Bitset h1(130), h2(130);
    h1.set(77);
    h2.set(77);
    CHECK(h1.hash() == h2.hash());
    CHECK(h1 == h2);
}

TEST_CASE("domain construction and validation") {
    Domain d = diamond_domain();
    CHECK(d.num_propositions() == 2);
    CHECK(d.num_actions() == 3);
    CHECK(d.is_action("a3"));
    CHECK_FALSE(d.is_action("missing"));
    CHECK(d.action_index("a2") == 1);
    CHECK_THROWS_AS(d.action_index("missing"), Error);
    CHECK(d.proposition_index("p2") == 1);
    CHECK_THROWS_AS(d.proposition_index("nope"), Error);

    CHECK(d.pre_mask(2).members() == std::vector<int>{1});  // a3 needs p2
    CHECK(d.del_mask(2).members() == std::vector<int>{0});  // a3 deletes p1
    CHECK(d.add_mask(0).members() == std::vector<int>{0});  // a1 adds p1

    CHECK_THROWS_AS(Domain({"p", "p"}, {}), Error);
    CHECK_THROWS_AS(Domain({"p"}, {{"a", {}, {}, {}}, {"a", {}, {}, {}}}), Error);
    CHECK_THROWS_AS(Domain({"p"}, {{"x", {}, {}, {}}}, {"x"}), Error);
    CHECK_THROWS_AS(Domain({"p"}, {{"a", {"nope"}, {}, {}}}), Error);

    Bitset s = d.make_state({"p1"});
    CHECK(s.members() == std::vector<int>{0});
    CHECK(d.state_names(s) == std::vector<std::string>{"p1"});
    CHECK_THROWS_AS(d.make_state({"zzz"}), Error);
}

TEST_CASE("methods attach to compounds and validate labels") {
    Domain d({"p"}, {{"act", {}, {}, {}}}, {"comp", "other"});
    d.add_method("comp", TaskNetwork({"x"}, {"act"}, {}));
    d.add_method("comp", TaskNetwork({"x"}, {"other"}, {}));
    CHECK(d.methods().size() == 2);
    CHECK(d.methods_of("comp").size() == 2);
    CHECK(d.methods_of("other").empty());
    CHECK(d.method_network(d.methods()[0].network_index).labels[0] == "act");
    CHECK_THROWS_AS(d.add_method("missing", TaskNetwork({"x"}, {"act"}, {})), Error);
    CHECK_THROWS_AS(d.add_method("comp", TaskNetwork({"x"}, {"bogus"}, {})), Error);
}

TEST_CASE("task network order closure") {
    TaskNetwork tn = diamond_network();
    CHECK(tn.size() == 4);
    CHECK(tn.precedes(0, 3)); // closure of the diamond
    CHECK(tn.precedes(0, 1));
    CHECK_FALSE(tn.precedes(1, 2));
    CHECK_FALSE(tn.precedes(3, 0));
    CHECK(tn.successors(0).count() == 3);
    CHECK(tn.predecessors(3).count() == 3);

    // Cover arcs are recovered even when the input lists the full closure.
    TaskNetwork closed({"t1", "t2", "t3", "t4"}, {"a2", "a1", "a3", "a1"},
                       {{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}});
    auto cover = closed.cover_arcs();
    std::sort(cover.begin(), cover.end());
    CHECK(cover == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});

    CHECK_THROWS_AS(TaskNetwork({"a", "b"}, {"x", "x"}, {{0, 1}, {1, 0}}), CycleDetected);
    CHECK_THROWS_AS(TaskNetwork({"a"}, {"x"}, {{0, 0}}), CycleDetected);

    TaskNetwork loose({"t1", "t2", "t3"}, {"a1", "a1", "a2"}, {{0, 1}});
    CHECK(loose.isolated_tasks() == std::vector<int>{2});
    auto by_label = loose.tasks_by_label();
    CHECK(by_label["a1"] == std::vector<int>{0, 1});
    CHECK(by_label["a2"] == std::vector<int>{2});

    CHECK_THROWS_AS(TaskNetwork({"t", "t"}, {"a1", "a1"}, {}), Error); // dup names
}

TEST_CASE("execution semantics") {
    Domain d = diamond_domain();
    Bitset s0(2);
    CHECK(is_executable(d, 0, s0));
    CHECK_FALSE(is_executable(d, 2, s0)); // a3 needs p2

    Bitset s1 = apply_effects(d, 1, s0); // a2 adds p2
    CHECK(s1.members() == std::vector<int>{1});
    Bitset s2 = execute_action(d, "a3", s1); // deletes p1 (absent), keeps p2
    CHECK(s2.members() == std::vector<int>{1});
    CHECK_THROWS_AS(execute_action(d, "a3", s0), PreconditionUnsatisfied);
    try {
        execute_action(d, "a3", s0);
    } catch (const PreconditionUnsatisfied& e) {
        CHECK(e.missing == std::vector<std::string>{"p2"});
    }

    PlanResult good = execute_plan(d, {"a2", "a1", "a3", "a1"}, s0);
    CHECK(good.executable);
    CHECK(good.final_state == d.make_state({"p1", "p2"}));

    PlanResult bad = execute_plan(d, {"a1", "a3"}, s0);
    CHECK_FALSE(bad.executable);
    CHECK(bad.failed_at == 1);
}

TEST_CASE("linearization and solution checks") {
    Domain d = diamond_domain();
    TaskNetwork tn = diamond_network();
    Bitset s0(2);

    CHECK(is_linearization(tn, {0, 1, 2, 3}));
    CHECK(is_linearization(tn, {0, 2, 1, 3}));
    CHECK_FALSE(is_linearization(tn, {1, 0, 2, 3})); // violates t1 before t2
    CHECK_FALSE(is_linearization(tn, {0, 1, 2}));    // not all tasks
    CHECK_FALSE(is_linearization(tn, {0, 1, 2, 2})); // repeats

    CHECK(is_solution(d, tn, s0, {0, 1, 2, 3}, true));
    CHECK(is_solution(d, tn, s0, {0, 2, 1, 3}, true));
    CHECK_FALSE(is_solution(d, tn, s0, {0, 1, 3, 2}, true)); // a1 a1 then a3? order violated
    CHECK_FALSE(is_solution(d, tn, s0, {0, 1}, true));       // full required
    CHECK(is_solution(d, tn, s0, {0, 1}, false));            // prefix is order-closed
    CHECK_FALSE(is_solution(d, tn, s0, {1}, false));         // t2 needs t1 first
    CHECK(is_solution(d, tn, s0, {}, false));                // empty selection
    CHECK_FALSE(is_solution(d, tn, s0, {2, 0}, false));      // t3 before its pred t1
}

TEST_CASE("transitive closure utility") {
    auto closure = transitive_closure(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(closure[0].test(3));
    CHECK(closure[1].test(3));
    CHECK_FALSE(closure[3].test(0));
    CHECK_THROWS_AS(transitive_closure(2, {{0, 1}, {1, 0}}), CycleDetected);

    auto cover = cover_of(closure);
    std::sort(cover.begin(), cover.end());
    CHECK(cover == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}});
}
