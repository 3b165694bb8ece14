#include "pdab/reduction.hpp"

#include "pdab/bisim.hpp"
#include "pdab/counters.hpp"
#include "pdab/lts.hpp"

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#ifndef PDAB_DATA_DIR
#error "PDAB_DATA_DIR must point at the bundled data directory"
#endif

using namespace pdab;

namespace {

CheckOptions probe_opts() {
    CheckOptions o;
    o.stack_cap = 32;
    o.max_rounds = 128;
    o.node_budget = 500'000;
    return o;
}

// Independent increment oracle: expected transducer output for a canonical
// level-`level` counter word holding `value`, followed by a terminator.
// Low-level filler symbols map to 'a'; level-`level` bits spell out
// `value + delta` low-bit-first; the terminator closes with 'a', or 'b' when
// the increment overflowed.
std::vector<std::string> expected_inc_output(int level, int n, const BigInt& value, int delta,
                                             const std::string& terminator) {
    std::vector<std::string> word = canonical_counter(level, n, value);
    BigInt bits = level == 0 ? BigInt(n) : tow(level, n);
    BigInt target = value + delta;
    BigInt modulus = BigInt(1) << bits.convert_to<unsigned>();
    bool overflow = target >= modulus;
    target %= modulus;

    std::vector<std::string> out;
    unsigned bit_pos = 0;
    std::string suffix = "_" + std::to_string(level);
    for (const std::string& sym : word) {
        if (sym.size() >= suffix.size() &&
            sym.compare(sym.size() - suffix.size(), suffix.size(), suffix) == 0) {
            out.push_back(bit_test(target, bit_pos) ? "1" : "0");
            ++bit_pos;
        } else {
            out.push_back("a");
        }
    }
    (void)terminator;
    out.push_back(overflow ? "b" : "a");
    return out;
}

}  // namespace

TEST_CASE("bundled machines dead-end where advertised") {
    MachineRun good = simulate_machine(toy_machine_bisimilar());
    REQUIRE(good.words.size() == 2);
    CHECK(good.words[0] == std::vector<int>{1, 1});
    CHECK(good.words[1] == std::vector<int>{0, 0});
    CHECK(good.dead_end);
    CHECK_FALSE(good.hit_step_bound);
    CHECK(zero_word_is_dead_end(toy_machine_bisimilar()));

    MachineRun bad = simulate_machine(toy_machine_nonbisimilar());
    REQUIRE(bad.words.size() == 1);
    CHECK(bad.words[0] == std::vector<int>{1, 1});
    CHECK(bad.dead_end);
    CHECK(zero_word_is_dead_end(toy_machine_nonbisimilar()));
}

TEST_CASE("simulate_machine rejects ambiguous and cyclic steps") {
    // Constant second transducer: every word shares one image, so the very
    // first successor lookup is ambiguous.
    Transducer ident = hom_transducer({{"1", {"p"}}, {"0", {"x"}}});
    Transducer constant = hom_transducer({{"1", {"p"}}, {"0", {"p"}}});
    CHECK_THROWS_AS(simulate_machine(TransducerMachine{2, ident, constant}), reduction_error);

    // Identical transducers: the successor of every word is itself.
    CHECK_THROWS_AS(simulate_machine(TransducerMachine{2, ident, ident}), reduction_error);

    TransducerMachine degenerate{0, ident, ident};
    CHECK_THROWS_AS(simulate_machine(degenerate), reduction_error);
    TransducerMachine huge{21, ident, ident};
    CHECK_THROWS_AS(simulate_machine(huge), reduction_error);
}

TEST_CASE("machine text round trip matches the bundled files") {
    std::string dir = PDAB_DATA_DIR;
    TransducerMachine from_file = parse_machine_file(dir + "/machine_bisim_k1n1.txt");
    CHECK(print_machine(from_file) == print_machine(toy_machine_bisimilar()));
    TransducerMachine from_file2 = parse_machine_file(dir + "/machine_nonbisim_k1n1.txt");
    CHECK(print_machine(from_file2) == print_machine(toy_machine_nonbisimilar()));

    // print -> parse -> print is byte-stable.
    std::istringstream in(print_machine(from_file));
    TransducerMachine again = parse_machine(in);
    CHECK(print_machine(again) == print_machine(from_file));
}

TEST_CASE("increment transducers: pinned small cases") {
    auto [plus0, plus1] = make_inc_transducers(0);
    CHECK(plus0.letter_to_letter());
    CHECK(plus1.letter_to_letter());
    using V = std::vector<std::string>;
    CHECK(run_transducer(plus1, {"1_0", "1_0", "0_1"}) == V{"0", "0", "b"});  // 3+1 overflows
    CHECK(run_transducer(plus1, {"1_0", "0_0", "0_1"}) == V{"0", "1", "a"});  // 1+1 = 2
    CHECK(run_transducer(plus0, {"0_0", "1_0", "0_1"}) == V{"0", "1", "a"});  // copy
    CHECK(run_transducer(plus1, {"0_0", "0_0", "1_1"}) == V{"1", "0", "a"});  // 0+1 = 1
    // Malformed shapes run into the absorbing sink instead of failing.
    CHECK(run_transducer(plus1, {"0_1", "1_0"}) == V{"b", "a"});
    CHECK_THROWS_AS(make_inc_transducers(-1), reduction_error);
}

TEST_CASE("increment transducers: level-0 sweep against the value oracle") {
    auto [plus0, plus1] = make_inc_transducers(0);
    for (int n = 1; n <= 4; ++n) {
        BigInt top = tow(1, n);
        for (BigInt v = 0; v < top; ++v) {
            std::vector<std::string> w = canonical_counter(0, n, v);
            for (const std::string& term : {counter_sym(0, 1), counter_sym(1, 1)}) {
                std::vector<std::string> input = w;
                input.push_back(term);
                CHECK(run_transducer(plus0, input) == expected_inc_output(0, n, v, 0, term));
                CHECK(run_transducer(plus1, input) == expected_inc_output(0, n, v, 1, term));
            }
        }
    }
}

TEST_CASE("increment transducers: level-1 sweep through the low-symbol shuffle") {
    // Level-1 counter words carry level-0 index counters; the construction
    // routes those through a parallel component that emits 'a' for each.
    auto [plus0, plus1] = make_inc_transducers(1);
    Transducer low = hom_transducer({{counter_sym(0, 0), {"a"}}, {counter_sym(1, 0), {"a"}}});
    Transducer t0 = shuffle(plus0, low);
    Transducer t1 = shuffle(plus1, low);
    for (int n = 1; n <= 2; ++n) {
        BigInt top = tow(2, n);
        for (BigInt v = 0; v < top; ++v) {
            std::vector<std::string> input = canonical_counter(1, n, v);
            input.push_back(counter_sym(0, 2));
            CHECK(run_transducer(t0, input) == expected_inc_output(1, n, v, 0, counter_sym(0, 2)));
            CHECK(run_transducer(t1, input) == expected_inc_output(1, n, v, 1, counter_sym(0, 2)));
        }
    }
}

TEST_CASE("increment outputs match exactly on successive values") {
    // The instance compares plus0 on one word with plus1 on another: outputs
    // agree iff the first value is the second plus one (terminators and
    // overflow marks can never fake it).
    auto [plus0, plus1] = make_inc_transducers(0);
    const int n = 2;
    for (BigInt v1 = 0; v1 < 4; ++v1)
        for (BigInt v2 = 0; v2 < 4; ++v2)
            for (const std::string& s1 : {counter_sym(0, 1), counter_sym(1, 1)})
                for (const std::string& s2 : {counter_sym(0, 1), counter_sym(1, 1)}) {
                    std::vector<std::string> w1 = canonical_counter(0, n, v1);
                    w1.push_back(s1);
                    std::vector<std::string> w2 = canonical_counter(0, n, v2);
                    w2.push_back(s2);
                    bool equal = run_transducer(plus0, w1) == run_transducer(plus1, w2);
                    CHECK(equal == (v1 == v2 + 1));
                }
}

TEST_CASE("reduction stats are pinned and builds are byte-stable") {
    Reduction plain = build_reduction(toy_machine_bisimilar(), 1, 1, false);
    CHECK(plain.stats.macros == 47);
    CHECK(plain.stats.states == 221);
    CHECK(plain.stats.symbols == 5);
    CHECK(plain.stats.actions == 8);
    CHECK(plain.stats.rules == 412);
    CHECK(plain.stats.size == 425);
    CHECK(plain.stats.size == plain.stats.symbols + plain.stats.actions + plain.stats.rules);
    CHECK(plain.pda.num_states() == plain.stats.states);
    CHECK(plain.pda.num_rules() == plain.stats.rules);
    CHECK(plain.left_start == "l:start");
    CHECK(plain.right_start == "r:start");
    CHECK(plain.pda.find_state("l:start").has_value());
    CHECK(plain.pda.find_state("r:start").has_value());

    Reduction normed = build_reduction(toy_machine_bisimilar(), 1, 1, true);
    CHECK(normed.stats.macros == 82);
    CHECK(normed.stats.states == 231);
    CHECK(normed.stats.rules == 454);
    CHECK(normed.stats.size == 467);

    // Same machine, same flags => identical text, run to run.
    Reduction plain2 = build_reduction(toy_machine_bisimilar(), 1, 1, false);
    CHECK(print_pda(plain2.pda) == print_pda(plain.pda));

    // The two bundled machines differ only in transducer outputs, so the
    // instance dimensions coincide even though the rules do not.
    Reduction other = build_reduction(toy_machine_nonbisimilar(), 1, 1, false);
    CHECK(other.stats.rules == plain.stats.rules);
    CHECK(print_pda(other.pda) != print_pda(plain.pda));
}

TEST_CASE("reduction validates width and reserved actions") {
    TransducerMachine tm = toy_machine_bisimilar();
    tm.ell = 3;  // should be tow(1, 1) = 2
    CHECK_THROWS_AS(build_reduction(tm, 1, 1, false), reduction_error);

    // Machine output letters may not collide with the instance's own actions.
    Transducer t1 = hom_transducer({{"1", {"a"}}, {"0", {"x"}}});
    Transducer t2 = hom_transducer({{"0", {"a"}}, {"1", {"y"}}});
    CHECK_THROWS_AS(build_reduction(TransducerMachine{2, t1, t2}, 1, 1, false), reduction_error);
}

TEST_CASE("decrement gadget: honest window pair is bisimilar, false claim is refuted") {
    Reduction red = build_reduction(toy_machine_bisimilar(), 1, 1, false);
    // Segments top-first: [skipped | value v | value v+1], each one level-0
    // bit plus its level-1 terminator, over the bottom marker.
    Config l_ok = parse_config(red.pda, "l:testDec_0 | 0_0 0_1 0_0 0_1 1_0 0_1 $");
    Config r_ok = parse_config(red.pda, "r:testDec_0 | 0_0 0_1 0_0 0_1 1_0 0_1 $");
    Verdict ok = capped_bisim(red.pda, l_ok, r_ok, probe_opts());
    CHECK(ok.kind == Verdict::Bisimilar);

    // Claiming 1 is the decrement of 1 fails after the guards replay.
    Config l_bad = parse_config(red.pda, "l:testDec_0 | 0_0 0_1 1_0 0_1 1_0 0_1 $");
    Config r_bad = parse_config(red.pda, "r:testDec_0 | 0_0 0_1 1_0 0_1 1_0 0_1 $");
    Verdict bad = capped_bisim(red.pda, l_bad, r_bad, probe_opts());
    CHECK(bad.kind == Verdict::NotBisimilar);
    CHECK(bad.round == 8);
}

TEST_CASE("stop states: draining variant rejoins at matched heights") {
    Reduction red = build_reduction(toy_machine_bisimilar(), 1, 1, true);
    auto probe = [&](const std::string& l, const std::string& r) {
        return capped_bisim(red.pda, parse_config(red.pda, l), parse_config(red.pda, r),
                            probe_opts());
    };
    // Entry heights produced by the gadgets: the left side sits one window
    // (level-0: two symbols; level-1: five) above the right side's drain.
    CHECK(probe("l:stop_0 | $", "r:stop_0 | 0_0 0_1 $").kind == Verdict::Bisimilar);
    CHECK(probe("l:stop_1 |", "r:stop_1 | 0_0 0_1 1_0 0_1 $").kind == Verdict::Bisimilar);
    // A short stack on the right leaves the drains misaligned.
    Verdict off = probe("l:stop_0 | $", "r:stop_0 | 0_0 $");
    CHECK(off.kind == Verdict::NotBisimilar);
    CHECK(off.round == 3);
}

TEST_CASE("stop states: plain variant freezes both sides") {
    Reduction red = build_reduction(toy_machine_bisimilar(), 1, 1, false);
    Config l = parse_config(red.pda, "l:stop_0 | $");
    Config r = parse_config(red.pda, "r:stop_0 | 0_0 0_1 $");
    CHECK(step(red.pda, l).empty());
    CHECK(step(red.pda, r).empty());
    CHECK(capped_bisim(red.pda, l, r, probe_opts()).kind == Verdict::Bisimilar);
}

TEST_CASE("end to end: halting run away from the zero word refutes the instance") {
    Reduction red = build_reduction(toy_machine_nonbisimilar(), 1, 1, false);
    CheckOptions o;
    o.stack_cap = 64;
    o.max_rounds = 256;
    o.node_budget = 1'000'000;
    Verdict v = capped_bisim(red.pda, parse_config(red.pda, red.left_start + " |"),
                             parse_config(red.pda, red.right_start + " |"), o);
    CHECK(v.kind == Verdict::NotBisimilar);
    CHECK(v.round == 55);
}
