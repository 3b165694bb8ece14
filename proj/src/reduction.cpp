#include "pdab/reduction.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pdab {

namespace {

Transducer make_transducer(std::vector<std::string> states, std::vector<std::string> in_alpha,
                           std::vector<std::string> out_alpha,
                           const std::vector<std::vector<Transducer::Edge>>& delta) {
    Transducer t;
    t.state_names = std::move(states);
    t.init = 0;
    t.in_alpha = std::move(in_alpha);
    for (std::size_t i = 0; i < t.in_alpha.size(); ++i) t.in_index[t.in_alpha[i]] = i;
    t.out_alpha = std::move(out_alpha);
    t.delta = delta;
    return t;
}

std::vector<int> bits_of(std::uint32_t w, std::size_t ell) {
    std::vector<int> out(ell);
    for (std::size_t i = 0; i < ell; ++i) out[i] = (w >> i) & 1u;
    return out;
}

std::vector<std::string> letters_of(std::uint32_t w, std::size_t ell) {
    std::vector<std::string> out(ell);
    for (std::size_t i = 0; i < ell; ++i) out[i] = ((w >> i) & 1u) ? "1" : "0";
    return out;
}

std::string output_key(const std::vector<std::string>& out) {
    std::string key;
    for (const std::string& o : out) {
        key += o;
        key += ',';
    }
    return key;
}

void validate_machine_shape(const TransducerMachine& tm) {
    for (const Transducer* t : {&tm.t1, &tm.t2}) {
        std::set<std::string> in(t->in_alpha.begin(), t->in_alpha.end());
        if (in != std::set<std::string>{"0", "1"})
            throw reduction_error("machine transducers must read the letters 0 and 1");
        if (!t->letter_to_letter())
            throw reduction_error("machine transducers must emit exactly one letter per step");
    }
}

}  // namespace

std::pair<Transducer, Transducer> make_inc_transducers(int level) {
    if (level < 0) throw reduction_error("increment transducer level must be >= 0");
    const std::string b0 = counter_sym(0, level), b1 = counter_sym(1, level);
    const std::string t0 = counter_sym(0, level + 1), t1 = counter_sym(1, level + 1);
    const std::vector<std::string> in = {b0, b1, t0, t1};
    using E = Transducer::Edge;

    // Plus-zero: copy the counter bits, close with 'a'.  States: i (reading), f (done).
    std::vector<std::vector<E>> d0 = {
        {E{0, {"0"}}, E{0, {"1"}}, E{1, {"a"}}, E{1, {"a"}}},
        {E{1, {"a"}}, E{1, {"a"}}, E{1, {"a"}}, E{1, {"a"}}},
    };
    Transducer plus0 = make_transducer({"i", "f"}, in, {"0", "1", "a"}, d0);

    // Plus-one: add one low-bit-first.  States: i (still carrying), c (carry
    // absorbed), f (done).  Closing while still carrying emits 'b' (overflow).
    std::vector<std::vector<E>> d1 = {
        {E{1, {"1"}}, E{0, {"0"}}, E{2, {"b"}}, E{2, {"b"}}},
        {E{1, {"0"}}, E{1, {"1"}}, E{2, {"a"}}, E{2, {"a"}}},
        {E{2, {"a"}}, E{2, {"a"}}, E{2, {"a"}}, E{2, {"a"}}},
    };
    Transducer plus1 = make_transducer({"i", "c", "f"}, in, {"0", "1", "a", "b"}, d1);
    return {plus0, plus1};
}

MachineRun simulate_machine(const TransducerMachine& tm, std::size_t max_steps) {
    validate_machine_shape(tm);
    if (tm.ell == 0 || tm.ell > 20)
        throw reduction_error("word width " + std::to_string(tm.ell) +
                              " is outside the enumerable range 1..20");
    const std::uint32_t universe = 1u << tm.ell;

    // Index every word by its image under t2 so successor lookup is O(1).
    std::unordered_map<std::string, std::vector<std::uint32_t>> by_image;
    for (std::uint32_t w = 0; w < universe; ++w) {
        std::string key = output_key(run_transducer(tm.t2, letters_of(w, tm.ell)));
        auto& bucket = by_image[key];
        if (bucket.size() < 2) bucket.push_back(w);
    }

    MachineRun run;
    std::set<std::uint32_t> seen;
    std::uint32_t z = universe - 1;
    seen.insert(z);
    run.words.push_back(bits_of(z, tm.ell));
    while (true) {
        std::string key = output_key(run_transducer(tm.t1, letters_of(z, tm.ell)));
        auto it = by_image.find(key);
        if (it == by_image.end()) {
            run.dead_end = true;
            return run;
        }
        if (it->second.size() > 1)
            throw reduction_error("machine is not deterministic: word " + std::to_string(z) +
                                  " has two successors");
        z = it->second[0];
        if (!seen.insert(z).second) throw reduction_error("machine run revisits a word");
        run.words.push_back(bits_of(z, tm.ell));
        if (run.words.size() > max_steps) {
            run.hit_step_bound = true;
            return run;
        }
    }
}

bool zero_word_is_dead_end(const TransducerMachine& tm) {
    validate_machine_shape(tm);
    if (tm.ell == 0 || tm.ell > 20)
        throw reduction_error("word width " + std::to_string(tm.ell) +
                              " is outside the enumerable range 1..20");
    const std::uint32_t universe = 1u << tm.ell;
    std::string key = output_key(run_transducer(tm.t1, letters_of(0, tm.ell)));
    for (std::uint32_t w = 0; w < universe; ++w)
        if (output_key(run_transducer(tm.t2, letters_of(w, tm.ell))) == key) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Instance builder
// ---------------------------------------------------------------------------

namespace {

// Head shapes of the pair names driving the build.  Pair names are
// comma-joined words of basic symbols; the first symbol decides what rules
// the pair gets, the rest is the continuation.
struct Head {
    std::string fam;
    int level = -1;
    int step = -1;  // bit position for the level-0 decrement stepper
};

Head parse_head(const std::string& tok) {
    Head h;
    if (tok.rfind("dec_0(", 0) == 0 && tok.back() == ')') {
        h.fam = "decstep";
        h.level = 0;
        h.step = std::stoi(tok.substr(6, tok.size() - 7));
        return h;
    }
    auto p = tok.rfind('_');
    if (p != std::string::npos && p + 1 < tok.size() &&
        tok.find_first_not_of("0123456789", p + 1) == std::string::npos) {
        h.fam = tok.substr(0, p);
        h.level = std::stoi(tok.substr(p + 1));
        return h;
    }
    h.fam = tok;
    return h;
}

class InstanceBuilder {
public:
    InstanceBuilder(const TransducerMachine& tm, int k, int n, bool normed)
        : tm_(tm), k_(k), n_(n), normed_(normed) {}

    Reduction build() {
        want({"start"});
        while (!queue_.empty()) {
            std::vector<std::string> word = queue_.front();
            queue_.pop_front();
            define(word);
        }

        Reduction red;
        // Intern symbols and the fixed actions up front in a stable order.
        for (int l = 0; l <= k_; ++l)
            for (int b = 0; b <= 1; ++b) red.pda.symbol(counter_sym(b, l));
        red.pda.symbol(bottom());
        for (const char* a : {"a", "b", "#", "0", "1"}) red.pda.action(a);
        std::set<std::string> outs(tm_.t1.out_alpha.begin(), tm_.t1.out_alpha.end());
        outs.insert(tm_.t2.out_alpha.begin(), tm_.t2.out_alpha.end());
        for (const std::string& o : outs) red.pda.action(o);

        expand_macros(red.pda, macros_);
        for (const InternalRule& r : extra_internals_)
            red.pda.add_internal(red.pda.state(r.src), red.pda.action(r.act),
                                 red.pda.state(r.dst));
        for (const std::string& s : extra_states_) red.pda.state(s);

        red.stats.macros = macros_.size();
        red.stats.states = red.pda.num_states();
        red.stats.symbols = red.pda.num_symbols();
        red.stats.actions = red.pda.num_actions();
        red.stats.rules = red.pda.num_rules();
        red.stats.size = red.pda.size();
        return red;
    }

private:
    using Word = std::vector<std::string>;

    std::string bottom() const { return "$"; }

    // The stack alphabet is layered: two bit symbols per level 0..k, plus the
    // bottom marker serving as the single level-(k+1) symbol.
    std::vector<std::string> omega(int level) const {
        if (level == k_ + 1) return {bottom()};
        return {counter_sym(0, level), counter_sym(1, level)};
    }

    std::vector<std::string> omega_le(int level) const {
        std::vector<std::string> out;
        for (int l = 0; l <= level; ++l)
            for (const std::string& s : omega(l)) out.push_back(s);
        return out;
    }

    static std::string join_name(const Word& w) {
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) out += ',';
            out += w[i];
        }
        return out;
    }

    void want(Word w) {
        if (w.size() > static_cast<std::size_t>(k_) + 3)
            throw reduction_error("internal error: pair name grew past the expected bound: " +
                                  join_name(w));
        if (defined_.insert(join_name(w)).second) queue_.push_back(std::move(w));
    }

    StatePair pr(const Word& w) { return pair_of(join_name(w)); }

    static Word cat(std::initializer_list<std::string> head, const Word& tail) {
        Word out(head);
        out.insert(out.end(), tail.begin(), tail.end());
        return out;
    }

    // Both sides push `word` and continue as `dst`.
    void push_to(const Word& src, const Word& dst, std::vector<std::string> word) {
        macros_.push_back(PairPushMacro{pr(src), pr(dst), std::move(word)});
        want(dst);
    }

    struct Opt {
        Word dst;
        std::vector<std::string> word;
    };

    void choice(bool defender, const Word& src, std::vector<Opt> opts) {
        std::vector<PairOption> options;
        for (Opt& o : opts) {
            options.push_back(PairOption{pr(o.dst), std::move(o.word)});
            want(o.dst);
        }
        if (defender)
            macros_.push_back(DefChoiceMacro{pr(src), std::move(options)});
        else
            macros_.push_back(AttChoiceMacro{pr(src), std::move(options)});
    }

    // One side of a guarded pop; also schedules the destination pair.
    void guarded(char side, const Word& src, const Word& dst, Re guard, Transducer trans) {
        std::string pol(1, side);
        pol += ':';
        macros_.push_back(
            GuardedPopMacro{pol + join_name(src), pol + join_name(dst), std::move(guard),
                            std::move(trans)});
        want(dst);
    }

    Transducer hom_const(const std::vector<std::string>& alpha,
                         const std::vector<std::string>& image) const {
        std::vector<std::pair<std::string, std::vector<std::string>>> m;
        for (const std::string& x : alpha) m.emplace_back(x, image);
        return hom_transducer(m);
    }

    // (Omega_{<=level})* Omega_{level+1} — one block of a level-(level+1)
    // counter: a level-`level` counter word followed by the bit it indexes.
    Re seg(int level) const {
        return re_cat(re_star(re_class(omega_le(level))), re_class(omega(level + 1)));
    }

    // (Omega_{<=level-1}* Omega_level)* Omega_{level+1} — a full level-`level`
    // counter followed by one level-(level+1) bit.
    Re counter_then_bit(int level) const {
        Re block = re_cat(re_star(re_class(omega_le(level - 1))), re_class(omega(level)));
        return re_cat(re_star(block), re_class(omega(level + 1)));
    }

    void define(const Word& word) {
        Head h = parse_head(word[0]);
        Word tail(word.begin() + 1, word.end());
        const bool has_tail = !tail.empty();

        auto need_tail = [&](bool want_tail) {
            if (want_tail != has_tail)
                throw reduction_error("internal error: unexpected continuation for " +
                                      join_name(word));
        };

        const std::string one = counter_sym(1, h.level), zero = counter_sym(0, h.level);

        if (h.fam == "ones") {
            need_tail(true);
            if (h.level == 0) {
                push_to(word, tail, std::vector<std::string>(n_, counter_sym(1, 0)));
            } else {
                push_to(word, cat({lvl("ones", h.level - 1), lvl("ones1", h.level)}, tail), {one});
            }
        } else if (h.fam == "ones1") {
            need_tail(true);
            choice(true, word,
                   {{cat({lvl("dec", h.level - 1), lvl("ones1", h.level)}, tail), {one}},
                    {cat({lvl("zero", h.level - 1)}, tail), {one}}});
        } else if (h.fam == "zero") {
            need_tail(true);
            if (h.level == 0) {
                push_to(word, cat({"decOk_0"}, tail),
                        std::vector<std::string>(n_, counter_sym(0, 0)));
            } else {
                push_to(word, cat({lvl("ones", h.level - 1), lvl("zero1", h.level)}, tail), {zero});
            }
        } else if (h.fam == "zero1") {
            need_tail(true);
            choice(true, word,
                   {{cat({lvl("dec", h.level - 1), lvl("zero1", h.level)}, tail), {zero}},
                    {cat({lvl("zero", h.level - 1), lvl("decOk", h.level)}, tail), {zero}}});
        } else if (h.fam == "dec") {
            need_tail(true);
            if (h.level == 0) {
                choice(true, word,
                       {{cat({step_name(1)}, tail), {counter_sym(0, 0)}},
                        {cat({step_name(1)}, tail), {counter_sym(1, 0)}}});
            } else {
                choice(true, word,
                       {{cat({lvl("ones", h.level - 1), lvl("dec1", h.level)}, tail), {zero}},
                        {cat({lvl("ones", h.level - 1), lvl("dec1", h.level)}, tail), {one}}});
            }
        } else if (h.fam == "decstep") {
            need_tail(true);
            if (h.step == n_) {
                push_to(word, cat({"decOk_0"}, tail), {});
            } else {
                choice(true, word,
                       {{cat({step_name(h.step + 1)}, tail), {counter_sym(0, 0)}},
                        {cat({step_name(h.step + 1)}, tail), {counter_sym(1, 0)}}});
            }
        } else if (h.fam == "dec1") {
            need_tail(true);
            choice(true, word,
                   {{cat({lvl("dec", h.level - 1), lvl("dec1", h.level)}, tail), {zero}},
                    {cat({lvl("zero", h.level - 1), lvl("decOk", h.level)}, tail), {zero}},
                    {cat({lvl("dec", h.level - 1), lvl("dec1", h.level)}, tail), {one}},
                    {cat({lvl("zero", h.level - 1), lvl("decOk", h.level)}, tail), {one}}});
        } else if (h.fam == "decOk") {
            need_tail(true);
            // The challenge option comes first so that refutation searches
            // probe it before descending continue-and-pump branches.
            if (h.level == 0) {
                std::vector<std::string> challenge(n_, counter_sym(0, 0));
                challenge.push_back(counter_sym(0, 1));
                choice(false, word, {{{"testDec_0"}, std::move(challenge)}, {tail, {}}});
            } else {
                choice(false, word,
                       {{{lvl("ones", h.level), lvl("testDec", h.level)},
                         {counter_sym(0, h.level + 1)}},
                        {tail, {}}});
            }
        } else if (h.fam == "start") {
            need_tail(false);
            push_to(word, {lvl("ones", k_), "fin"}, {bottom()});
        } else if (h.fam == "fin") {
            need_tail(false);
            choice(true, word, {{{"testFin"}, {}}, {{"next"}, {bottom()}}});
        } else if (h.fam == "next") {
            need_tail(false);
            choice(true, word,
                   {{{lvl("ones", k_ - 1), "next1"}, {counter_sym(0, k_)}},
                    {{lvl("ones", k_ - 1), "next1"}, {counter_sym(1, k_)}}});
        } else if (h.fam == "next1") {
            need_tail(false);
            choice(true, word,
                   {{{lvl("dec", k_ - 1), "next1"}, {counter_sym(0, k_)}},
                    {{lvl("zero", k_ - 1), "tran"}, {counter_sym(0, k_)}},
                    {{lvl("dec", k_ - 1), "next1"}, {counter_sym(1, k_)}},
                    {{lvl("zero", k_ - 1), "tran"}, {counter_sym(1, k_)}}});
        } else if (h.fam == "tran") {
            need_tail(false);
            choice(false, word,
                   {{{lvl("ones", k_), "testTran"}, {bottom()}}, {{"fin"}, {}}});
        } else if (h.fam == "testDec") {
            need_tail(false);
            auto alpha = omega_le(h.level + 1);
            guarded('l', word, {lvl("testDec1", h.level)}, re_cat(seg(h.level), seg(h.level)),
                    hom_const(alpha, {"a"}));
            guarded('r', word, {lvl("testDec1", h.level)}, seg(h.level),
                    hom_const(alpha, {"a", "a"}));
        } else if (h.fam == "testDec1") {
            need_tail(false);
            auto [plus0, plus1] = make_inc_transducers(h.level);
            Transducer low = hom_const(omega_le(h.level - 1), {"a"});
            guarded('l', word, {lvl("stop", h.level)}, counter_then_bit(h.level),
                    shuffle(plus0, low));
            guarded('r', word, {lvl("stop", h.level)}, counter_then_bit(h.level),
                    shuffle(plus1, low));
        } else if (h.fam == "testFin") {
            need_tail(false);
            auto alpha = omega_le(k_ + 1);
            std::vector<std::pair<std::string, std::vector<std::string>>> mark;
            for (const std::string& x : alpha)
                mark.emplace_back(x, std::vector<std::string>{x == counter_sym(1, k_) ? "b" : "a"});
            guarded('l', word, {"popAll"}, counter_then_bit(k_), hom_transducer(mark));
            guarded('r', word, {"popAll"}, counter_then_bit(k_), hom_const(alpha, {"a"}));
        } else if (h.fam == "testTran") {
            need_tail(false);
            auto alpha = omega_le(k_ + 1);
            Re word_then_bottom = re_cat(re_star(re_class(omega_le(k_))), re_class({bottom()}));
            guarded('l', word, {"testTran1"}, re_cat(word_then_bottom, word_then_bottom),
                    hom_const(alpha, {"a"}));
            guarded('r', word, {"testTran1"}, word_then_bottom, hom_const(alpha, {"a", "a"}));
        } else if (h.fam == "testTran1") {
            need_tail(false);
            std::map<std::string, std::string> ren = {{"0", counter_sym(0, k_)},
                                                      {"1", counter_sym(1, k_)}};
            std::vector<std::string> rest = omega_le(k_ - 1);
            rest.push_back(bottom());
            Transducer low = hom_const(rest, {"a"});
            guarded('l', word, {lvl("stop", k_)}, counter_then_bit(k_),
                    shuffle(relabel_inputs(tm_.t1, ren), low));
            guarded('r', word, {lvl("stop", k_)}, counter_then_bit(k_),
                    shuffle(relabel_inputs(tm_.t2, ren), low));
        } else if (h.fam == "stop") {
            need_tail(false);
            if (normed_) {
                // The comparison macros leave the left side exactly one
                // window (a level-`level` counter plus its terminator)
                // deeper than the right.  Realign by length, not by shape:
                // the left plays the window length in internal 'a' moves
                // while the right pops that many raw symbols, then both
                // sides drain through popAll at equal heights.  Shape-based
                // realignment would deadlock when the residual stack starts
                // at a word boundary.
                BigInt win = counter_length(h.level, n_) + 1;
                if (win > 1'000'000)
                    throw reduction_error("normed drain chains too long at this scale");
                std::size_t len = win.convert_to<std::size_t>();
                const std::string base = join_name(word);
                auto at = [&](char side, std::size_t i) {
                    std::string s(1, side);
                    s += ':';
                    if (i == len)
                        s += "popAll";
                    else if (i == 0)
                        s += base;
                    else
                        s += base + "." + std::to_string(i);
                    return s;
                };
                for (std::size_t i = 0; i < len; ++i) {
                    extra_internals_.push_back({at('l', i), "a", at('l', i + 1)});
                    for (const std::string& w : omega_le(k_ + 1))
                        macros_.push_back(ChainMacro{at('r', i), w, {"a"}, at('r', i + 1)});
                }
                want({"popAll"});
            } else {
                extra_states_.push_back("l:" + join_name(word));
                extra_states_.push_back("r:" + join_name(word));
            }
        } else if (h.fam == "popAll") {
            need_tail(false);
            for (const std::string& w : omega_le(k_ + 1))
                for (const char* side : {"l:popAll", "r:popAll"})
                    macros_.push_back(ChainMacro{side, w, {"a"}, side});
        } else {
            throw reduction_error("internal error: no rules for pair " + join_name(word));
        }
    }

    static std::string lvl(const std::string& fam, int level) {
        return fam + "_" + std::to_string(level);
    }

    static std::string step_name(int i) { return "dec_0(" + std::to_string(i) + ")"; }

    struct InternalRule {
        std::string src, act, dst;
    };

    const TransducerMachine& tm_;
    int k_, n_;
    bool normed_;
    std::vector<MacroRule> macros_;
    std::deque<Word> queue_;
    std::set<std::string> defined_;
    std::vector<std::string> extra_states_;
    std::vector<InternalRule> extra_internals_;
};

}  // namespace

Reduction build_reduction(const TransducerMachine& tm, int k, int n, bool normed) {
    if (k < 1 || n < 1) throw reduction_error("reduction needs k >= 1 and n >= 1");
    validate_machine_shape(tm);

    std::set<std::string> outs(tm.t1.out_alpha.begin(), tm.t1.out_alpha.end());
    outs.insert(tm.t2.out_alpha.begin(), tm.t2.out_alpha.end());
    for (const char* reserved : {"0", "1", "#", "a", "b"})
        if (outs.count(reserved))
            throw reduction_error(std::string("machine output letter '") + reserved +
                                  "' collides with a reserved action");

    BigInt width;
    try {
        width = tow(k, n);
    } catch (const counter_error&) {
        throw reduction_error("tow(k, n) is too large to state the required word width");
    }
    if (width != BigInt(tm.ell))
        throw reduction_error("machine word width " + std::to_string(tm.ell) +
                              " does not equal tow(" + std::to_string(k) + ", " +
                              std::to_string(n) + ") = " + width.str());

    return InstanceBuilder(tm, k, n, normed).build();
}

// ---------------------------------------------------------------------------
// Machine text format
// ---------------------------------------------------------------------------

TransducerMachine parse_machine(std::istream& in) {
    TransducerMachine tm;
    bool have_ell = false, have_t1 = false, have_t2 = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) {
            if (tok[0] == '#') break;
            toks.push_back(tok);
        }
        if (toks.empty()) continue;
        if (toks[0] == "ell:") {
            if (toks.size() != 2 || have_ell) throw parse_error_at(lineno, "expected one 'ell: N'");
            try {
                tm.ell = std::stoul(toks[1]);
            } catch (const std::exception&) {
                throw parse_error_at(lineno, "bad word width '" + toks[1] + "'");
            }
            have_ell = true;
        } else if (toks[0] == "transducer") {
            if (toks.size() != 3 || toks[2] != "{")
                throw parse_error_at(lineno, "expected 'transducer NAME {'");
            Transducer t = parse_transducer_block(in, lineno);
            if (toks[1] == "T1" && !have_t1) {
                tm.t1 = std::move(t);
                have_t1 = true;
            } else if (toks[1] == "T2" && !have_t2) {
                tm.t2 = std::move(t);
                have_t2 = true;
            } else {
                throw parse_error_at(lineno, "machine needs exactly one T1 and one T2 block");
            }
        } else {
            throw parse_error_at(lineno, "unrecognized directive '" + toks[0] + "'");
        }
    }
    if (!have_ell || !have_t1 || !have_t2)
        throw parse_error("machine file needs 'ell:' plus transducer blocks T1 and T2");
    validate_machine_shape(tm);
    return tm;
}

TransducerMachine parse_machine_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    return parse_machine(in);
}

std::string print_machine(const TransducerMachine& tm) {
    std::ostringstream out;
    out << "ell: " << tm.ell << "\n";
    out << "transducer T1 {\n" << print_transducer_block(tm.t1);
    out << "transducer T2 {\n" << print_transducer_block(tm.t2);
    return out.str();
}

TransducerMachine toy_machine_bisimilar() {
    TransducerMachine tm;
    tm.ell = 2;
    tm.t1 = hom_transducer({{"0", {"x"}}, {"1", {"p"}}});
    tm.t2 = hom_transducer({{"0", {"p"}}, {"1", {"y"}}});
    return tm;
}

TransducerMachine toy_machine_nonbisimilar() {
    TransducerMachine tm;
    tm.ell = 2;
    tm.t1 = hom_transducer({{"0", {"q"}}, {"1", {"p"}}});
    tm.t2 = hom_transducer({{"0", {"w"}}, {"1", {"w"}}});
    return tm;
}

}  // namespace pdab
