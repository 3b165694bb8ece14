// Acceptance suite for the pushdown bisimilarity workbench.
//
// Each numbered check prints exactly one PASS/FAIL line.  Tolerances and wall
// budgets are pinned in code next to the checks; the process exits with the
// number of failed checks.

#include "pdab/bisim.hpp"
#include "pdab/counters.hpp"
#include "pdab/dtm.hpp"
#include "pdab/fsa.hpp"
#include "pdab/lts.hpp"
#include "pdab/macros.hpp"
#include "pdab/reduction.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace pdab;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;  // keep the first reason
        ok = false;
    }
    void expect(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

int g_failures = 0;

void run_check(int index, const std::string& title, double budget_seconds,
               const std::function<void(Outcome&)>& body) {
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.fail(std::string("exception: ") + e.what());
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > budget_seconds)
        out.fail("exceeded the " + std::to_string(budget_seconds) + "s wall budget");
    std::printf("%s  %d. %s (%.2fs)%s%s\n", out.ok ? "PASS" : "FAIL", index, title.c_str(),
                elapsed, out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.ok) ++g_failures;
}

// --- helpers ---------------------------------------------------------------

// Finite-system bisimilarity of the two polarities of a pair base, for
// systems whose reachable parts are closed (internal rules only here).
bool pair_bisimilar(const Pda& pda, const std::string& base) {
    Config l{*pda.find_state("l:" + base), {}};
    Config r{*pda.find_state("r:" + base), {}};
    ReachResult rr = reachable(pda, {l, r}, 8, 100000);
    FiniteLts lts = finite_restriction(pda, rr.configs);
    return finite_lts_bisim(lts, 0, 1).bisimilar;
}

// A two-option choice instance whose option tails are independently bisimilar
// (true) or distinguishable (false).
Pda choice_instance(bool defender_owned, bool tail1, bool tail2) {
    Pda pda;
    for (const char* b : {"s", "p", "q"}) {
        pda.state(std::string("l:") + b);
        pda.state(std::string("r:") + b);
    }
    // A distinguishable tail: only its left polarity can keep moving.
    ActId z = pda.action("z");
    if (!tail1) pda.add_internal(*pda.find_state("l:p"), z, *pda.find_state("l:p"));
    if (!tail2) pda.add_internal(*pda.find_state("l:q"), z, *pda.find_state("l:q"));
    std::vector<PairOption> options = {{pair_of("p"), {}}, {pair_of("q"), {}}};
    std::vector<MacroRule> ms;
    if (defender_owned)
        ms.push_back(DefChoiceMacro{pair_of("s"), options});
    else
        ms.push_back(AttChoiceMacro{pair_of("s"), options});
    expand_macros(pda, ms);
    return pda;
}

std::string output_key(const std::vector<std::string>& word) {
    std::string key;
    for (const std::string& w : word) {
        key += w;
        key += '\x1f';
    }
    return key;
}

TransducerMachine hom_machine(std::size_t ell) {
    // t1 separates by letter; t2 can only reproduce t1's image of the all-ones
    // word on the all-zero word, whose own image nothing reproduces: the run
    // is 1^ell -> 0^ell -> dead end at every width.
    Transducer t1 = hom_transducer({{"1", {"p"}}, {"0", {"x"}}});
    Transducer t2 = hom_transducer({{"0", {"p"}}, {"1", {"y"}}});
    return TransducerMachine{ell, t1, t2};
}

std::vector<std::string> letters_of_bits(const std::vector<int>& bits) {
    std::vector<std::string> out;
    out.reserve(bits.size());
    for (int b : bits) out.push_back(b ? "1" : "0");
    return out;
}

}  // namespace

// --- checks -----------------------------------------------------------------

int main() {
    // 1. The two choice gadgets implement disjunction (defender picks) and
    //    conjunction (attacker picks) over the outcomes of their option tails.
    run_check(1, "choice gadgets realize or/and over their option outcomes", 1.0, [](Outcome& out) {
        for (bool t1 : {true, false})
            for (bool t2 : {true, false}) {
                Pda def = choice_instance(true, t1, t2);
                Pda att = choice_instance(false, t1, t2);
                bool def_bisim = pair_bisimilar(def, "s");
                bool att_bisim = pair_bisimilar(att, "s");
                out.expect(def_bisim == (t1 || t2),
                           "defender choice over tails (" + std::to_string(t1) + "," +
                               std::to_string(t2) + ") broke disjunction");
                out.expect(att_bisim == (t1 && t2),
                           "attacker choice over tails (" + std::to_string(t1) + "," +
                               std::to_string(t2) + ") broke conjunction");
            }
    });

    // 2. The increment transducer pair agrees exactly on successive values:
    //    copying word w1 equals incrementing word w2 iff val(w1) = val(w2)+1,
    //    regardless of the terminator bits.  1360 cases over widths 1..4.
    run_check(2, "increment pair matches exactly successive counter values (1360 cases)", 1.0,
              [](Outcome& out) {
                  auto [plus0, plus1] = make_inc_transducers(0);
                  std::size_t cases = 0;
                  for (int n = 1; n <= 4; ++n) {
                      BigInt top = tow(1, n);
                      for (BigInt v1 = 0; v1 < top; ++v1)
                          for (BigInt v2 = 0; v2 < top; ++v2)
                              for (int s1 : {0, 1})
                                  for (int s2 : {0, 1}) {
                                      std::vector<std::string> w1 = canonical_counter(0, n, v1);
                                      w1.push_back(counter_sym(s1, 1));
                                      std::vector<std::string> w2 = canonical_counter(0, n, v2);
                                      w2.push_back(counter_sym(s2, 1));
                                      bool equal = run_transducer(plus0, w1) ==
                                                   run_transducer(plus1, w2);
                                      if (equal != (v1 == v2 + 1))
                                          out.fail("disagreement at n=" + std::to_string(n) +
                                                   " v1=" + v1.str() + " v2=" + v2.str());
                                      ++cases;
                                  }
                  }
                  out.expect(cases == 1360, "expected 1360 cases, saw " + std::to_string(cases));
              });

    // 3. The decrement window gadget, run as a real game on the instance,
    //    declares exactly the stacks whose bottom window holds one more than
    //    the middle window (the top window is the skipped filler).
    run_check(3, "decrement gadget accepts exactly value drops of one (16 stack pairs)", 30.0,
              [](Outcome& out) {
                  Reduction red = build_reduction(hom_machine(4), 1, 2, false);
                  CheckOptions opts;
                  opts.stack_cap = 32;
                  opts.max_rounds = 128;
                  opts.node_budget = 1'000'000;
                  auto seg = [](const BigInt& v) {
                      std::vector<std::string> s = canonical_counter(0, 2, v);
                      s.push_back(counter_sym(0, 1));
                      return s;
                  };
                  for (BigInt v1 = 0; v1 < 4; ++v1)
                      for (BigInt v2 = 0; v2 < 4; ++v2) {
                          std::vector<std::string> stack = seg(0);  // skipped filler window
                          for (const auto& s : {seg(v2), seg(v1)})
                              stack.insert(stack.end(), s.begin(), s.end());
                          stack.push_back("$");
                          std::ostringstream word;
                          for (const std::string& s : stack) word << " " << s;
                          Config l = parse_config(red.pda, "l:testDec_0 |" + word.str());
                          Config r = parse_config(red.pda, "r:testDec_0 |" + word.str());
                          Verdict v = capped_bisim(red.pda, l, r, opts);
                          if (v.kind == Verdict::Unknown) {
                              out.fail("inconclusive at v1=" + v1.str() + " v2=" + v2.str());
                              continue;
                          }
                          bool expect = v1 == v2 + 1;
                          out.expect((v.kind == Verdict::Bisimilar) == expect,
                                     "wrong verdict at v1=" + v1.str() + " v2=" + v2.str() +
                                         ": " + v.to_string());
                      }
              });

    // 4. Counter words: pinned lengths, value round trips, and the all-zero /
    //    all-one boundary identities, up to the 208-symbol double-nested case.
    run_check(4, "counter words: lengths, round trips, boundary identities", 1.0, [](Outcome& out) {
        out.expect(counter_length(0, 2) == 2, "level-0 length");
        out.expect(counter_length(1, 1) == 4, "level-1 width-1 length");
        out.expect(counter_length(1, 2) == 12, "level-1 width-2 length");
        out.expect(counter_length(2, 1) == 20, "level-2 width-1 length");
        out.expect(counter_length(2, 2) == 208, "level-2 width-2 length");

        auto round_trip = [&](int level, int n, const BigInt& v) {
            std::vector<std::string> w = canonical_counter(level, n, v);
            out.expect(BigInt(w.size()) == counter_length(level, n),
                       "wrong word length at level " + std::to_string(level));
            out.expect(counter_value(w, level, n) == v,
                       "round trip failed at level " + std::to_string(level) + " value " + v.str());
        };
        for (int n = 1; n <= 2; ++n) {
            for (BigInt v = 0; v < tow(1, n); ++v) round_trip(0, n, v);
            for (BigInt v = 0; v < tow(2, n); ++v) round_trip(1, n, v);
        }
        for (BigInt v = 0; v < 16; ++v) round_trip(2, 1, v);
        for (const char* s : {"0", "1", "255", "256", "32767", "65534", "65535"})
            round_trip(2, 2, BigInt(s));

        // Boundary identities: value 0 has every payload bit low, the maximal
        // value has every payload bit high.
        for (int level : {1, 2}) {
            std::string suffix = "_" + std::to_string(level);
            BigInt max_v = tow(level + 1, 1) - 1;
            for (const std::string& sym : canonical_counter(level, 1, 0))
                if (sym.size() > suffix.size() && sym.ends_with(suffix))
                    out.expect(sym[0] == '0', "all-zero word has a high payload bit");
            for (const std::string& sym : canonical_counter(level, 1, max_v))
                if (sym.size() > suffix.size() && sym.ends_with(suffix))
                    out.expect(sym[0] == '1', "all-one word has a low payload bit");
        }

        // Malformed words are rejected rather than misread.
        std::vector<std::string> swapped = canonical_counter(1, 1, 2);
        std::swap(swapped[0], swapped[2]);  // swap the two block index counters
        try {
            counter_value(swapped, 1, 1);
            out.fail("a block-swapped word was accepted");
        } catch (const std::exception&) {
        }
    });

    // 5. Guarded pops are deterministic replays: across 200 randomized
    //    transducer/word combinations, every step of the entry-transduce-exit
    //    corridor has exactly one successor and lands on the exit state with
    //    the guard's word consumed and the transducer's output played.
    run_check(5, "guarded pops replay deterministically (200 randomized traces)", 30.0,
              [](Outcome& out) {
                  std::mt19937 rng(20260815);
                  for (int iter = 0; iter < 200 && out.ok; ++iter) {
                      std::size_t nletters = 1 + rng() % 3;
                      std::vector<std::string> alpha;
                      std::vector<std::pair<std::string, std::vector<std::string>>> image;
                      for (std::size_t i = 0; i < nletters; ++i) {
                          alpha.push_back("X" + std::to_string(i));
                          std::vector<std::string> word;
                          std::size_t olen = 1 + rng() % 2;
                          for (std::size_t j = 0; j < olen; ++j)
                              word.push_back(rng() % 2 ? "o1" : "o0");
                          image.emplace_back(alpha.back(), word);
                      }
                      Transducer trans = hom_transducer(image);

                      std::size_t wlen = 1 + rng() % 5;
                      std::vector<std::string> word;
                      Re guard;
                      for (std::size_t i = 0; i < wlen; ++i) {
                          word.push_back(alpha[rng() % nletters]);
                          Re atom = re_class({word.back()});
                          guard = guard ? re_cat(guard, atom) : atom;
                      }
                      std::vector<std::string> below;
                      for (std::size_t i = 0, extra = rng() % 3; i < extra; ++i)
                          below.push_back(alpha[rng() % nletters]);

                      Pda pda;
                      pda.state("src");
                      pda.state("dst");
                      expand_macros(pda, {GuardedPopMacro{"src", "dst", guard, trans}});

                      Config c{*pda.find_state("src"), {}};
                      for (const std::string& s : below) c.stack.insert(c.stack.begin(),
                                                                        pda.symbol(s));
                      for (auto it = word.rbegin(); it != word.rend(); ++it)
                          c.stack.insert(c.stack.begin(), pda.symbol(*it));

                      std::vector<std::string> trace;
                      while (pda.state_name(c.state) != "dst") {
                          auto succ = step(pda, c);
                          if (succ.size() != 1) {
                              out.fail("iteration " + std::to_string(iter) + ": " +
                                       std::to_string(succ.size()) + " successors at " +
                                       print_config(pda, c));
                              break;
                          }
                          trace.push_back(pda.action_name(succ[0].act));
                          c = succ[0].to;
                          if (trace.size() > 100) {
                              out.fail("trace runaway");
                              break;
                          }
                      }
                      if (!out.ok) break;

                      std::vector<std::string> expect = {"#"};
                      for (const std::string& o : run_transducer(trans, word))
                          expect.push_back(o);
                      expect.push_back("#");
                      out.expect(trace == expect,
                                 "iteration " + std::to_string(iter) + ": wrong action trace");
                      out.expect(c.stack.size() == below.size(),
                                 "iteration " + std::to_string(iter) + ": wrong leftover stack");
                  }
              });

    // 6. The two bundled desk-scale machines decide end to end: the run that
    //    dead-ends on the all-zero word yields Bisimilar, the one that halts
    //    early yields NotBisimilar at a finite round, at stack cap 128.
    run_check(6, "bundled instances decide end to end at stack cap 128", 300.0, [](Outcome& out) {
        CheckOptions opts;
        opts.stack_cap = 128;
        opts.max_rounds = 256;
        opts.node_budget = 1'000'000;

        Reduction good = build_reduction(toy_machine_bisimilar(), 1, 1, false);
        Verdict vg = capped_bisim(good.pda, parse_config(good.pda, "l:start |"),
                                  parse_config(good.pda, "r:start |"), opts);
        out.expect(vg.kind == Verdict::Bisimilar,
                   "run dead-ending at the zero word gave " + vg.to_string());

        Reduction bad = build_reduction(toy_machine_nonbisimilar(), 1, 1, false);
        Verdict vb = capped_bisim(bad.pda, parse_config(bad.pda, "l:start |"),
                                  parse_config(bad.pda, "r:start |"), opts);
        out.expect(vb.kind == Verdict::NotBisimilar,
                   "run halting at the ones word gave " + vb.to_string());
        out.expect(vb.round == 55, "expected refutation at round 55, got round " +
                                       std::to_string(vb.round));
    });

    // 7. The draining instance variant preserves both verdicts, and every
    //    configuration reachable from either root can empty its stack within
    //    the checked horizon (the freezing variant provably cannot).
    run_check(7, "draining variant keeps verdicts and is normed at the horizon", 600.0,
              [](Outcome& out) {
                  CheckOptions opts;
                  opts.stack_cap = 128;
                  opts.max_rounds = 256;
                  opts.node_budget = 1'000'000;

                  Reduction good = build_reduction(toy_machine_bisimilar(), 1, 1, true);
                  Verdict vg = capped_bisim(good.pda, parse_config(good.pda, "l:start |"),
                                            parse_config(good.pda, "r:start |"), opts);
                  out.expect(vg.kind == Verdict::Bisimilar,
                             "draining positive instance gave " + vg.to_string());

                  Reduction bad = build_reduction(toy_machine_nonbisimilar(), 1, 1, true);
                  Verdict vb = capped_bisim(bad.pda, parse_config(bad.pda, "l:start |"),
                                            parse_config(bad.pda, "r:start |"), opts);
                  out.expect(vb.kind == Verdict::NotBisimilar,
                             "draining negative instance gave " + vb.to_string());
                  out.expect(vb.round == 55,
                             "draining refutation moved to round " + std::to_string(vb.round));

                  const std::size_t cap = 18, budget = 4'000'000;
                  for (const Reduction* red : {&good, &bad})
                      for (const char* root : {"l:start |", "r:start |"}) {
                          NormedResult nr =
                              check_normed(red->pda, parse_config(red->pda, root), cap, budget);
                          out.expect(nr.kind == NormedResult::Normed,
                                     std::string("draining instance not normed from ") + root);
                      }

                  Reduction frozen = build_reduction(toy_machine_bisimilar(), 1, 1, false);
                  NormedResult nf = check_normed(frozen.pda,
                                                 parse_config(frozen.pda, "l:start |"), cap,
                                                 budget);
                  out.expect(nf.kind == NormedResult::NotNormed,
                             "freezing instance unexpectedly normed");
              });

    // 8. The tape-machine encoding tracks single steps over the whole
    //    configuration universe: first images collide with second images
    //    exactly on (configuration, successor) pairs, the initial and
    //    accepting configurations sit on the all-ones / all-zero anchors, and
    //    the step machine replays the run.
    run_check(8, "tape-machine encoding tracks steps across the configuration universe", 30.0,
              [](Outcome& out) {
                  DtmSpec toy = toy_dtm();
                  DtmEncoding enc = encode_dtm(toy, 2, 2);
                  out.expect(enc.machine.ell == 16, "expected width 16");

                  std::vector<DtmConfig> all;
                  for (int q = 0; q < 4; ++q)
                      for (int head = 0; head < 2; ++head)
                          for (int c0 = 0; c0 < 2; ++c0)
                              for (int c1 = 0; c1 < 2; ++c1) all.push_back({q, head, {c0, c1}});

                  std::vector<std::string> img1, img2;
                  for (const DtmConfig& c : all) {
                      auto bits = letters_of_bits(enc.encode_config(toy, c));
                      img1.push_back(output_key(run_transducer(enc.machine.t1, bits)));
                      img2.push_back(output_key(run_transducer(enc.machine.t2, bits)));
                  }
                  std::size_t matched = 0;
                  for (std::size_t i = 0; i < all.size(); ++i) {
                      std::optional<DtmConfig> succ = dtm_step(toy, all[i]);
                      for (std::size_t j = 0; j < all.size(); ++j) {
                          bool eq = img1[i] == img2[j];
                          bool should = succ.has_value() && *succ == all[j];
                          if (eq != should)
                              out.fail("image collision mismatch at pair (" + std::to_string(i) +
                                       "," + std::to_string(j) + ")");
                          if (eq) ++matched;
                      }
                  }
                  out.expect(matched > 0, "no (configuration, successor) pair matched at all");

                  DtmRun run = run_dtm(toy);
                  out.expect(enc.encode_config(toy, run.configs.front()) ==
                                 std::vector<int>(16, 1),
                             "initial configuration is not the all-ones word");
                  out.expect(enc.encode_config(toy, run.configs.back()) == std::vector<int>(16, 0),
                             "accepting configuration is not the all-zero word");

                  MachineRun mr = simulate_machine(enc.machine);
                  out.expect(mr.words.size() == run.configs.size() && mr.dead_end,
                             "step machine does not replay the run");
                  for (std::size_t i = 0; i < mr.words.size(); ++i)
                      out.expect(mr.words[i] == enc.encode_config(toy, run.configs[i]),
                                 "step machine diverges at word " + std::to_string(i));
              });

    // 9. Instance size scales tamely in the base width: rule counts for
    //    widths 1..6 (machine words of length 2^n) fit a cubic polynomial
    //    with every relative residual below 5%.
    run_check(9, "instance growth fits a low-degree polynomial (residual < 5%)", 60.0,
              [](Outcome& out) {
                  std::vector<double> ns, rules;
                  for (int n = 1; n <= 6; ++n) {
                      Reduction red = build_reduction(hom_machine(1ull << n), 1, n, false);
                      ns.push_back(n);
                      rules.push_back(static_cast<double>(red.stats.rules));
                  }

                  // Least squares for a + b n + c n^2 + d n^3 via the normal
                  // equations, solved with Gaussian elimination.
                  constexpr int D = 4;
                  double ata[D][D] = {};
                  double atb[D] = {};
                  for (std::size_t i = 0; i < ns.size(); ++i) {
                      double row[D] = {1, ns[i], ns[i] * ns[i], ns[i] * ns[i] * ns[i]};
                      for (int r = 0; r < D; ++r) {
                          for (int c = 0; c < D; ++c) ata[r][c] += row[r] * row[c];
                          atb[r] += row[r] * rules[i];
                      }
                  }
                  for (int col = 0; col < D; ++col) {  // elimination with partial pivoting
                      int pivot = col;
                      for (int r = col + 1; r < D; ++r)
                          if (std::fabs(ata[r][col]) > std::fabs(ata[pivot][col])) pivot = r;
                      std::swap(ata[col], ata[pivot]);
                      std::swap(atb[col], atb[pivot]);
                      for (int r = 0; r < D; ++r) {
                          if (r == col || ata[col][col] == 0) continue;
                          double f = ata[r][col] / ata[col][col];
                          for (int c = 0; c < D; ++c) ata[r][c] -= f * ata[col][c];
                          atb[r] -= f * atb[col];
                      }
                  }
                  double beta[D];
                  for (int r = 0; r < D; ++r) beta[r] = atb[r] / ata[r][r];

                  for (std::size_t i = 0; i < ns.size(); ++i) {
                      double pred = beta[0] + beta[1] * ns[i] + beta[2] * ns[i] * ns[i] +
                                    beta[3] * ns[i] * ns[i] * ns[i];
                      double rel = std::fabs(pred - rules[i]) / rules[i];
                      if (rel >= 0.05)
                          out.fail("relative residual " + std::to_string(rel) + " at width " +
                                   std::to_string(static_cast<int>(ns[i])));
                  }
              });

    std::printf("%d/9 checks passed\n", 9 - g_failures);
    return g_failures;
}
