#include "pdab/dtm.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pdab {

std::size_t DtmSpec::state_index(const std::string& name) const {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) throw dtm_error("unknown machine state '" + name + "'");
    return it - states.begin();
}

std::size_t DtmSpec::sym_index(const std::string& name) const {
    auto it = std::find(tape_syms.begin(), tape_syms.end(), name);
    if (it == tape_syms.end()) throw dtm_error("unknown tape symbol '" + name + "'");
    return it - tape_syms.begin();
}

namespace {

void validate_dtm(const DtmSpec& d) {
    if (d.states.empty() || d.tape_syms.empty())
        throw dtm_error("machine needs at least one state and one tape symbol");
    auto check_names = [](const std::vector<std::string>& names, const char* what) {
        std::set<std::string> seen;
        for (const std::string& s : names) {
            if (s.empty() || s.find_first_of(" \t#") != std::string::npos)
                throw dtm_error(std::string("bad ") + what + " name '" + s + "'");
            if (!seen.insert(s).second)
                throw dtm_error(std::string("duplicate ") + what + " name '" + s + "'");
        }
    };
    check_names(d.states, "state");
    check_names(d.tape_syms, "tape symbol");
    d.sym_index(d.blank);
    d.state_index(d.init_state);
    d.state_index(d.accept_state);
    d.state_index(d.reject_state);
    if (d.accept_state == d.reject_state) throw dtm_error("accept and reject states must differ");
    if (d.init_state == d.accept_state || d.init_state == d.reject_state)
        throw dtm_error("the initial state must not be halting");
    if (d.space < 1) throw dtm_error("tape window must have at least one cell");

    for (const auto& [key, a] : d.delta) {
        const auto& [q, s] = key;
        if (q == d.accept_state || q == d.reject_state)
            throw dtm_error("halting state '" + q + "' must not have outgoing arrows");
        d.state_index(q);
        d.sym_index(s);
        d.state_index(a.state);
        d.sym_index(a.write);
        if (a.move < -1 || a.move > 1) throw dtm_error("arrow move must be -1, 0, or 1");
        if (a.state == d.init_state)
            throw dtm_error("no arrow may re-enter the initial state (the all-ones anchor)");
    }
    for (const std::string& q : d.states) {
        if (q == d.accept_state || q == d.reject_state) continue;
        for (const std::string& s : d.tape_syms)
            if (!d.delta.count({q, s}))
                throw dtm_error("transition table is not total: no arrow for (" + q + ", " + s +
                                ")");
    }
}

struct ArrowIx {
    int state = -1, write = -1, move = 0;
};

// Code tables plus index helpers shared by the two coder transducers.
struct Tables {
    int B = 0;  // block bits
    int s = 0;  // cells
    int num_syms = 0, num_states = 0;
    int accept = -1, reject = -1;
    std::vector<std::optional<ArrowIx>> arrows;  // [q * num_syms + sym]
    std::vector<std::uint64_t> codeA, codeB;     // by content id
    std::unordered_map<std::uint64_t, int> invA, invB;

    int plain(int sym) const { return sym; }
    int pair_id(int q, int sym) const { return num_syms + q * num_syms + sym; }
    bool is_pair(int id) const { return id >= num_syms; }
    int pair_state(int id) const { return (id - num_syms) / num_syms; }
    int pair_sym(int id) const { return (id - num_syms) % num_syms; }
    int universe() const { return num_syms + num_states * num_syms; }
    bool halting(int q) const { return q == accept || q == reject; }
    const std::optional<ArrowIx>& arrow(int q, int sym) const {
        return arrows[q * num_syms + sym];
    }
    const std::vector<std::uint64_t>& table(int cell) const { return cell == 0 ? codeA : codeB; }
};

int count_pairs(const Tables& tb, const std::vector<int>& cont) {
    int n = 0;
    for (int c : cont)
        if (tb.is_pair(c)) ++n;
    return n;
}

// Full successor of a decoded configuration (exactly one head pair), or
// nullopt when it halts or the head would leave the window.
std::optional<std::vector<int>> succ_contents(const Tables& tb, const std::vector<int>& cont) {
    int hc = -1;
    for (std::size_t c = 0; c < cont.size(); ++c)
        if (tb.is_pair(cont[c])) hc = static_cast<int>(c);
    int q = tb.pair_state(cont[hc]), sym = tb.pair_sym(cont[hc]);
    if (tb.halting(q)) return std::nullopt;
    const auto& a = tb.arrow(q, sym);
    int h2 = hc + a->move;
    if (h2 < 0 || h2 >= tb.s) return std::nullopt;
    std::vector<int> out = cont;
    out[hc] = a->move == 0 ? tb.pair_id(a->state, a->write) : tb.plain(a->write);
    if (a->move != 0) out[h2] = tb.pair_id(a->state, cont[h2]);
    return out;
}

struct HaltMark {};

// Successor content of one cell from its decoded window (cells c-1..c+1).
// The window holds at most one head pair (states with two pairs are sunk
// before any bit is emitted).  HaltMark means a halting or stuck head
// governs this window.
std::variant<int, HaltMark> succ_cell(const Tables& tb, const std::vector<int>& cont, int c) {
    auto pair_at = [&](int i) -> int {
        if (i < 0 || i >= static_cast<int>(cont.size())) return -1;
        return tb.is_pair(cont[i]) ? cont[i] : -1;
    };
    if (int pc = pair_at(c); pc >= 0) {
        int q = tb.pair_state(pc), sym = tb.pair_sym(pc);
        if (tb.halting(q)) return HaltMark{};
        const auto& a = tb.arrow(q, sym);
        int h2 = c + a->move;
        if (h2 < 0 || h2 >= tb.s) return HaltMark{};
        return a->move == 0 ? tb.pair_id(a->state, a->write) : tb.plain(a->write);
    }
    if (int pl = pair_at(c - 1); pl >= 0) {
        int q = tb.pair_state(pl), sym = tb.pair_sym(pl);
        if (tb.halting(q)) return HaltMark{};
        const auto& a = tb.arrow(q, sym);
        int h2 = c - 1 + a->move;
        if (h2 < 0 || h2 >= tb.s) return HaltMark{};
        if (h2 == c) return tb.pair_id(a->state, cont[c]);
    }
    if (int prr = pair_at(c + 1); prr >= 0) {
        int q = tb.pair_state(prr), sym = tb.pair_sym(prr);
        if (tb.halting(q)) return HaltMark{};
        const auto& a = tb.arrow(q, sym);
        int h2 = c + 1 + a->move;
        if (h2 < 0 || h2 >= tb.s) return HaltMark{};
        if (h2 == c) return tb.pair_id(a->state, cont[c]);
    }
    return cont[c];
}

enum class Mode { Self, Succ };

// Word bits of a decoded configuration: bit t is bit (t % B) of cell
// (t / B)'s code.
std::string packed_suffix(const Tables& tb, const std::vector<int>& cont, std::size_t from,
                          std::size_t ell) {
    std::string out;
    for (std::size_t t = from; t < ell; ++t) {
        int cell = static_cast<int>(t / tb.B);
        std::uint64_t code = tb.table(cell)[cont[cell]];
        out += ((code >> (t % tb.B)) & 1u) ? '1' : '0';
    }
    return out;
}

Transducer build_coder(const Tables& tb, Mode mode) {
    const int B = tb.B;
    const std::size_t ell = static_cast<std::size_t>(B) * tb.s;
    const std::size_t delay = 2 * static_cast<std::size_t>(B);  // output delay D
    constexpr std::size_t kMaxStates = 200'000;

    using Key = std::vector<std::uint64_t>;  // [position, partial bits, contents...]
    std::map<Key, std::size_t> ids;
    std::vector<Key> keys;
    std::deque<std::size_t> queue;
    auto intern = [&](Key k) {
        auto [it, fresh] = ids.emplace(std::move(k), keys.size());
        if (fresh) {
            keys.push_back(it->first);
            if (keys.size() > kMaxStates)
                throw dtm_error("encoded transducer exceeds the desk-scale state bound");
            queue.push_back(it->second);
        }
        return it->second;
    };
    const Key sink_key = {std::numeric_limits<std::uint64_t>::max()};
    std::size_t init_id = intern(Key{0, 0});
    std::size_t sink_id = intern(sink_key);

    std::vector<std::vector<Transducer::Edge>> delta;
    std::set<std::string> letters;

    while (!queue.empty()) {
        std::size_t id = queue.front();
        queue.pop_front();
        Key key = keys[id];
        if (delta.size() <= id) delta.resize(id + 1);
        if (key == sink_key) {
            delta[id] = {Transducer::Edge{sink_id, {"u"}}, Transducer::Edge{sink_id, {"u"}}};
            letters.insert("u");
            continue;
        }
        const std::size_t p = key[0];
        const std::uint64_t v = key[1];
        const std::vector<int> cont(key.begin() + 2, key.end());
        delta[id].resize(2);

        for (int beta = 0; beta <= 1; ++beta) {
            const int r = static_cast<int>(p % B);
            std::uint64_t v2 = v | (static_cast<std::uint64_t>(beta) << r);
            std::vector<int> cont2 = cont;
            bool garbage = false;
            if (r == B - 1) {
                const auto& inv = (p / B == 0) ? tb.invA : tb.invB;
                auto it = inv.find(v2);
                if (it == inv.end()) {
                    garbage = true;
                } else {
                    cont2.push_back(it->second);
                    if (count_pairs(tb, cont2) > 1) garbage = true;
                }
                v2 = 0;
            }

            std::string letter;
            std::size_t target;
            if (garbage) {
                letter = "u";
                target = sink_id;
            } else if (p == ell - 1) {
                target = sink_id;
                if (count_pairs(tb, cont2) != 1) {
                    letter = "u";
                } else if (mode == Mode::Self) {
                    letter = "f" + packed_suffix(tb, cont2, ell - std::min(delay, ell), ell);
                } else {
                    auto nxt = succ_contents(tb, cont2);
                    if (!nxt)
                        letter = "halt";
                    else
                        letter = "f" + packed_suffix(tb, *nxt, ell - std::min(delay, ell), ell);
                }
            } else {
                if (p + 1 < delay) {
                    letter = "u";
                } else {
                    const std::size_t j = p + 1 - delay;  // word bit due at this position
                    const int cell = static_cast<int>(j / B), jb = static_cast<int>(j % B);
                    int content;
                    bool halted = false;
                    if (mode == Mode::Self) {
                        content = cont2[cell];
                    } else {
                        auto sc = succ_cell(tb, cont2, cell);
                        if (std::holds_alternative<HaltMark>(sc))
                            halted = true;
                        else
                            content = std::get<int>(sc);
                    }
                    if (halted)
                        letter = "u";
                    else
                        letter = ((tb.table(cell)[content] >> jb) & 1u) ? "o1" : "o0";
                }
                Key k2;
                k2.reserve(cont2.size() + 2);
                k2.push_back(p + 1);
                k2.push_back(v2);
                for (int c : cont2) k2.push_back(static_cast<std::uint64_t>(c));
                target = intern(std::move(k2));
            }
            letters.insert(letter);
            delta[id][beta] = Transducer::Edge{target, {letter}};
        }
    }

    Transducer t;
    t.state_names.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
        t.state_names[i] = (i == sink_id) ? "sink" : "s" + std::to_string(i);
    t.init = init_id;
    t.in_alpha = {"0", "1"};
    t.in_index = {{"0", 0}, {"1", 1}};
    t.out_alpha.assign(letters.begin(), letters.end());
    delta.resize(keys.size());
    t.delta = std::move(delta);
    return t;
}

}  // namespace

std::optional<DtmConfig> dtm_step(const DtmSpec& dtm, const DtmConfig& c) {
    const std::string& q = dtm.states[c.state];
    if (q == dtm.accept_state || q == dtm.reject_state) return std::nullopt;
    const std::string& sym = dtm.tape_syms[c.tape[c.head]];
    auto it = dtm.delta.find({q, sym});
    if (it == dtm.delta.end()) return std::nullopt;
    const DtmSpec::Arrow& a = it->second;
    int h2 = c.head + a.move;
    if (h2 < 0 || h2 >= dtm.space) return std::nullopt;
    DtmConfig out = c;
    out.state = static_cast<int>(dtm.state_index(a.state));
    out.tape[c.head] = static_cast<int>(dtm.sym_index(a.write));
    out.head = h2;
    return out;
}

DtmRun run_dtm(const DtmSpec& dtm, std::size_t max_steps) {
    validate_dtm(dtm);
    DtmRun run;
    DtmConfig c;
    c.state = static_cast<int>(dtm.state_index(dtm.init_state));
    c.head = 0;
    c.tape.assign(dtm.space, static_cast<int>(dtm.sym_index(dtm.blank)));
    run.configs.push_back(c);
    while (true) {
        const std::string& q = dtm.states[run.configs.back().state];
        if (q == dtm.accept_state) {
            run.accepted = true;
            return run;
        }
        if (q == dtm.reject_state) {
            run.rejected = true;
            return run;
        }
        auto next = dtm_step(dtm, run.configs.back());
        if (!next) return run;  // stuck at the window edge
        run.configs.push_back(*next);
        if (run.configs.size() > max_steps) {
            run.hit_bound = true;
            return run;
        }
    }
}

std::vector<int> DtmEncoding::encode_config(const DtmSpec& dtm, const DtmConfig& c) const {
    if (static_cast<int>(c.tape.size()) != cells)
        throw dtm_error("configuration tape length does not match the window size");
    const int num_syms = static_cast<int>(dtm.tape_syms.size());
    std::vector<int> bits;
    bits.reserve(static_cast<std::size_t>(block_bits) * cells);
    for (int cell = 0; cell < cells; ++cell) {
        int id = c.tape[cell];
        if (c.head == cell) id = num_syms + c.state * num_syms + c.tape[cell];
        std::uint64_t code = (cell == 0 ? code_cell0 : code_tail)[id];
        for (int b = 0; b < block_bits; ++b) bits.push_back((code >> b) & 1u);
    }
    return bits;
}

DtmEncoding encode_dtm(const DtmSpec& dtm, int k, int n) {
    validate_dtm(dtm);
    if (k < 1 || n < 1) throw dtm_error("encoding needs k >= 1 and n >= 1");

    Tables tb;
    tb.num_syms = static_cast<int>(dtm.tape_syms.size());
    tb.num_states = static_cast<int>(dtm.states.size());
    tb.accept = static_cast<int>(dtm.state_index(dtm.accept_state));
    tb.reject = static_cast<int>(dtm.state_index(dtm.reject_state));
    tb.s = dtm.space;
    tb.B = n + tb.num_states + tb.num_syms;
    if (tb.B > 62) throw dtm_error("cell block width exceeds 62 bits");

    BigInt width;
    try {
        width = tow(k, n);
    } catch (const counter_error&) {
        throw dtm_error("tow(k, n) is too large for a desk-scale encoding");
    }
    if (width != BigInt(tb.B) * tb.s)
        throw dtm_error("tow(" + std::to_string(k) + ", " + std::to_string(n) + ") = " +
                        width.str() + " does not equal block_bits * space = " +
                        std::to_string(tb.B) + " * " + std::to_string(dtm.space) +
                        "; adjust n (block_bits = n + states + tape symbols) or space");
    const std::size_t ell = static_cast<std::size_t>(tb.B) * tb.s;
    if (ell > 4096) throw dtm_error("encoded word width exceeds the desk-scale bound 4096");

    tb.arrows.assign(static_cast<std::size_t>(tb.num_states) * tb.num_syms, std::nullopt);
    for (const auto& [key, a] : dtm.delta) {
        ArrowIx ix;
        ix.state = static_cast<int>(dtm.state_index(a.state));
        ix.write = static_cast<int>(dtm.sym_index(a.write));
        ix.move = a.move;
        tb.arrows[dtm.state_index(key.first) * tb.num_syms + dtm.sym_index(key.second)] = ix;
    }

    // The run decides where the all-zero anchor goes.
    double universe = static_cast<double>(tb.num_states) * tb.s;
    for (int c = 0; c < tb.s; ++c) universe *= tb.num_syms;
    if (universe > 2e6) throw dtm_error("configuration universe too large for a desk-scale run");
    DtmRun run = run_dtm(dtm, static_cast<std::size_t>(universe) + 2);
    if (run.hit_bound)
        throw dtm_error("machine does not halt within its configuration universe");

    const int blank = static_cast<int>(dtm.sym_index(dtm.blank));
    int anchor0;                     // cell-0 content of the all-zero configuration
    std::optional<int> anchor_tail;  // uniform content of cells >= 1
    if (run.accepted) {
        const DtmConfig& fc = run.configs.back();
        if (fc.head == 0) {
            anchor0 = tb.pair_id(fc.state, fc.tape[0]);
            if (tb.s >= 2) {
                for (int c = 2; c < tb.s; ++c)
                    if (fc.tape[c] != fc.tape[1])
                        throw dtm_error("accepting tape is not uniform past cell 0; the "
                                        "all-zero anchor needs a uniform tail");
                if (fc.tape[1] == blank)
                    throw dtm_error("accepting tape keeps blank cells; the blank already "
                                    "anchors the all-ones word");
                anchor_tail = tb.plain(fc.tape[1]);
            }
        } else if (fc.head == 1 && tb.s == 2) {
            anchor0 = tb.plain(fc.tape[0]);
            anchor_tail = tb.pair_id(fc.state, fc.tape[1]);
        } else {
            throw dtm_error("accepting configuration shape is not supported: the head must "
                            "rest at cell 0 (or cell 1 of a 2-cell window)");
        }
    } else {
        // Rejecting or stuck: anchor an unreachable accepting configuration.
        if (tb.s == 1) {
            anchor0 = tb.pair_id(tb.accept, blank);
        } else {
            int nonblank = -1;
            for (int s = 0; s < tb.num_syms; ++s)
                if (s != blank) {
                    nonblank = s;
                    break;
                }
            if (nonblank < 0)
                throw dtm_error("a rejecting machine with a blank-only tape alphabet cannot "
                                "be encoded (no unreachable accepting configuration exists)");
            anchor0 = tb.pair_id(tb.accept, nonblank);
            anchor_tail = tb.plain(nonblank);
        }
    }

    const std::uint64_t ones = (tb.B == 63) ? ~0ull >> 1 : (1ull << tb.B) - 1;
    const std::uint64_t unset = std::numeric_limits<std::uint64_t>::max();
    tb.codeA.assign(tb.universe(), unset);
    tb.codeB.assign(tb.universe(), unset);
    const int init_ix = static_cast<int>(dtm.state_index(dtm.init_state));
    tb.codeA[tb.pair_id(init_ix, blank)] = ones;
    tb.codeA[anchor0] = 0;
    tb.codeB[tb.plain(blank)] = ones;
    if (anchor_tail) tb.codeB[*anchor_tail] = 0;

    if (static_cast<std::uint64_t>(tb.universe()) + 2 > (ones == 0 ? 0 : ones + 1))
        throw dtm_error("cell contents do not fit the block width");
    for (auto* code : {&tb.codeA, &tb.codeB}) {
        std::uint64_t v = 1;
        for (int id = 0; id < tb.universe(); ++id) {
            if ((*code)[id] != unset) continue;
            while (v == ones) ++v;
            (*code)[id] = v++;
        }
    }
    for (int id = 0; id < tb.universe(); ++id) {
        tb.invA[tb.codeA[id]] = id;
        tb.invB[tb.codeB[id]] = id;
    }

    DtmEncoding enc;
    enc.block_bits = tb.B;
    enc.cells = tb.s;
    enc.code_cell0 = tb.codeA;
    enc.code_tail = tb.codeB;
    enc.machine.ell = ell;
    enc.machine.t1 = build_coder(tb, Mode::Succ);
    enc.machine.t2 = build_coder(tb, Mode::Self);

    // The run anchors must land on the all-ones / all-zero words.
    std::vector<int> z0 = enc.encode_config(dtm, run.configs.front());
    if (std::count(z0.begin(), z0.end(), 1) != static_cast<long>(ell))
        throw dtm_error("internal error: initial configuration is not the all-ones word");
    if (run.accepted) {
        std::vector<int> zf = enc.encode_config(dtm, run.configs.back());
        if (std::count(zf.begin(), zf.end(), 0) != static_cast<long>(ell))
            throw dtm_error("internal error: accepting configuration is not the all-zero word");
    }
    return enc;
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

DtmSpec parse_dtm(std::istream& in) {
    DtmSpec d;
    bool have_space = false;
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
        const std::string& head = toks[0];
        auto rest = [&](std::size_t want_at_least) -> std::vector<std::string> {
            if (toks.size() < want_at_least + 1)
                throw parse_error_at(lineno, "directive '" + head + "' needs more arguments");
            return {toks.begin() + 1, toks.end()};
        };
        if (head == "states:") {
            d.states = rest(1);
        } else if (head == "tape:") {
            d.tape_syms = rest(1);
        } else if (head == "blank:") {
            if (toks.size() != 2) throw parse_error_at(lineno, "blank: needs one symbol");
            d.blank = toks[1];
        } else if (head == "init:") {
            if (toks.size() != 2) throw parse_error_at(lineno, "init: needs one state");
            d.init_state = toks[1];
        } else if (head == "accept:") {
            if (toks.size() != 2) throw parse_error_at(lineno, "accept: needs one state");
            d.accept_state = toks[1];
        } else if (head == "reject:") {
            if (toks.size() != 2) throw parse_error_at(lineno, "reject: needs one state");
            d.reject_state = toks[1];
        } else if (head == "space:") {
            if (toks.size() != 2) throw parse_error_at(lineno, "space: needs one number");
            try {
                d.space = std::stoi(toks[1]);
            } catch (const std::exception&) {
                throw parse_error_at(lineno, "bad window size '" + toks[1] + "'");
            }
            have_space = true;
        } else if (head == "delta") {
            if (toks.size() != 7 || toks[3] != "->")
                throw parse_error_at(lineno, "expected 'delta STATE SYM -> STATE SYM L|R|S'");
            DtmSpec::Arrow a;
            a.state = toks[4];
            a.write = toks[5];
            if (toks[6] == "L")
                a.move = -1;
            else if (toks[6] == "R")
                a.move = 1;
            else if (toks[6] == "S")
                a.move = 0;
            else
                throw parse_error_at(lineno, "move must be L, R, or S");
            if (!d.delta.emplace(std::make_pair(toks[1], toks[2]), a).second)
                throw parse_error_at(lineno, "duplicate arrow for (" + toks[1] + ", " + toks[2] +
                                                 ")");
        } else {
            throw parse_error_at(lineno, "unrecognized directive '" + head + "'");
        }
    }
    if (!have_space) throw parse_error("machine file needs a 'space:' directive");
    validate_dtm(d);
    return d;
}

DtmSpec parse_dtm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    return parse_dtm(in);
}

std::string print_dtm(const DtmSpec& d) {
    std::ostringstream out;
    out << "states:";
    for (const std::string& s : d.states) out << " " << s;
    out << "\ntape:";
    for (const std::string& s : d.tape_syms) out << " " << s;
    out << "\nblank: " << d.blank << "\ninit: " << d.init_state << "\naccept: " << d.accept_state
        << "\nreject: " << d.reject_state << "\nspace: " << d.space << "\n";
    for (const auto& [key, a] : d.delta)
        out << "delta " << key.first << " " << key.second << " -> " << a.state << " " << a.write
            << " " << (a.move < 0 ? "L" : a.move > 0 ? "R" : "S") << "\n";
    return out.str();
}

DtmSpec toy_dtm() {
    DtmSpec d;
    d.states = {"q0", "q1", "qacc", "qrej"};
    d.tape_syms = {"_", "x"};
    d.blank = "_";
    d.init_state = "q0";
    d.accept_state = "qacc";
    d.reject_state = "qrej";
    d.space = 2;
    d.delta[{"q0", "_"}] = {"q1", "x", 1};
    d.delta[{"q1", "_"}] = {"qacc", "x", -1};
    d.delta[{"q0", "x"}] = {"qrej", "x", 0};
    d.delta[{"q1", "x"}] = {"qrej", "x", 0};
    return d;
}

}  // namespace pdab
