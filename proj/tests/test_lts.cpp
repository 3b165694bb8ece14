#include "pdab/lts.hpp"

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

using namespace pdab;

namespace {

Config cfg(const Pda& pda, const std::string& text) { return parse_config(pda, text); }

}  // namespace

TEST_CASE("step semantics per rule kind") {
    Pda pda;
    StateId P = pda.state("P"), Q = pda.state("Q"), R = pda.state("R");
    SymId X = pda.symbol("X"), Y = pda.symbol("Y");
    ActId a = pda.action("a"), b = pda.action("b"), c = pda.action("c");
    pda.add_internal(P, a, Q);
    pda.add_push(P, b, Q, X);
    pda.add_pop(P, X, c, R);

    // Internal and push fire on any stack, pop needs its symbol on top.
    auto on_empty = step(pda, Config{P, {}});
    REQUIRE(on_empty.size() == 2);
    CHECK(on_empty[0].act == a);
    CHECK(on_empty[0].to == Config{Q, {}});
    CHECK(on_empty[1].act == b);
    CHECK(on_empty[1].to == Config{Q, {X}});

    auto on_x = step(pda, Config{P, {X, Y}});
    REQUIRE(on_x.size() == 3);  // rule order preserved
    CHECK(on_x[0].to == Config{Q, {X, Y}});
    CHECK(on_x[1].to == Config{Q, {X, X, Y}});  // push goes on top
    CHECK(on_x[2].act == c);
    CHECK(on_x[2].to == Config{R, {Y}});

    auto on_y = step(pda, Config{P, {Y}});
    CHECK(on_y.size() == 2);  // pop does not apply

    CHECK(step(pda, Config{Q, {X}}).empty());  // no rules from Q
    CHECK(step(pda, Config{R, {}}).empty());
}

TEST_CASE("reachable cuts at the stack cap and reports non-closure") {
    Pda pda;
    StateId P = pda.state("P");
    pda.add_push(P, pda.action("a"), P, pda.symbol("X"));
    ReachResult rr = reachable(pda, {Config{P, {}}}, 3, 1000);
    CHECK(rr.configs.size() == 4);  // heights 0..3
    CHECK_FALSE(rr.closed);
    // Breadth-first discovery order from the root.
    for (std::size_t i = 0; i < rr.configs.size(); ++i)
        CHECK(rr.configs[i].stack.size() == i);
}

TEST_CASE("reachable closed on a finite system") {
    Pda pda;
    StateId P = pda.state("P"), Q = pda.state("Q");
    SymId X = pda.symbol("X");
    ActId a = pda.action("a");
    pda.add_pop(P, X, a, P);
    pda.add_internal(P, a, Q);
    ReachResult rr = reachable(pda, {Config{P, {X, X}}}, 64, 1000);
    CHECK(rr.closed);
    CHECK(rr.configs.size() == 6);  // (P|Q) x {XX, X, empty}
}

TEST_CASE("reachable throws on budget exhaustion") {
    Pda pda;
    StateId P = pda.state("P");
    pda.add_push(P, pda.action("a"), P, pda.symbol("X"));
    CHECK_THROWS_AS(reachable(pda, {Config{P, {}}}, 100, 5), budget_error);
}

TEST_CASE("text format round trip is byte-stable") {
    const std::string text = R"(# a tiny system
state S0
symbol Z
action tau
internal S0 tau S1
push S0 a S1 X
pop S1 X b S0
pop S1 Z tau S1
)";
    Pda pda = parse_pda_string(text);
    CHECK(pda.num_states() == 2);
    CHECK(pda.num_symbols() == 2);
    CHECK(pda.num_actions() == 3);
    CHECK(pda.num_rules() == 4);
    CHECK(pda.size() == 2 + 3 + 4);
    std::string printed = print_pda(pda);
    Pda again = parse_pda_string(printed);
    CHECK(print_pda(again) == printed);
}

TEST_CASE("'#' is an ordinary action name, comments only start lines") {
    Pda pda = parse_pda_string("action #\ninternal p # q\npop p X # q\n");
    REQUIRE(pda.find_action("#").has_value());
    CHECK(pda.num_rules() == 2);
    std::string printed = print_pda(pda);
    Pda again = parse_pda_string(printed);
    CHECK(print_pda(again) == printed);
}

TEST_CASE("parse errors name the offending line") {
    auto expect_line = [](const std::string& text, const std::string& frag) {
        try {
            parse_pda_string(text);
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(std::string(e.what()).find(frag) != std::string::npos);
        }
    };
    expect_line("state A\nstate\n", "line 2");
    expect_line("internal p a\n", "line 1");
    expect_line("push p a q\n", "line 1");
    expect_line("pop p X a\n", "line 1");
    expect_line("frobnicate p\n", "line 1");
}

TEST_CASE("config print and parse") {
    Pda pda = parse_pda_string("push P a Q X\npush Q b P Y\n");
    Config c = cfg(pda, "P | X Y X");
    CHECK(print_config(pda, c) == "P | X Y X");
    CHECK(cfg(pda, "Q |") == Config{*pda.find_state("Q"), {}});
    CHECK(print_config(pda, cfg(pda, "Q |")) == "Q |");
    CHECK_THROWS_AS(cfg(pda, "nosuch | X"), parse_error);
    CHECK_THROWS_AS(cfg(pda, "P | nosym"), parse_error);
    CHECK_THROWS_AS(cfg(pda, "P"), parse_error);
}

TEST_CASE("finite restriction mirrors step edges inside the set") {
    Pda pda;
    StateId P = pda.state("P"), Q = pda.state("Q");
    SymId X = pda.symbol("X");
    ActId a = pda.action("a"), b = pda.action("b");
    pda.add_push(P, a, Q, X);
    pda.add_pop(Q, X, b, P);
    ReachResult rr = reachable(pda, {Config{P, {}}}, 1, 1000);
    CHECK(rr.closed);
    FiniteLts lts = finite_restriction(pda, rr.configs);
    REQUIRE(lts.out.size() == rr.configs.size());
    std::size_t edges = 0;
    for (const auto& out : lts.out) edges += out.size();
    CHECK(edges == 2);  // P| --a--> Q|X --b--> P|
}
