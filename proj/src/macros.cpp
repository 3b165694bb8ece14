#include "pdab/macros.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace pdab {

StatePair pair_of(const std::string& base) { return {"l:" + base, "r:" + base}; }

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Expander {
    Pda& pda;
    std::string prefix;  // "g<i>" for macro i

    StateId st(const std::string& name) { return pda.state(name); }

    // src --pop sym, actions[0]--> . --actions[1]--> ... --actions[n-1]--> dst
    void chain(const std::string& src, const std::string& pop_sym,
               const std::vector<std::string>& actions, const std::string& dst,
               const std::string& tag) {
        if (actions.empty()) throw fsa_error("chain macro needs at least one action");
        std::string cur = src;
        for (std::size_t j = 0; j < actions.size(); ++j) {
            std::string next =
                j + 1 == actions.size() ? dst : prefix + tag + ".c" + std::to_string(j + 1);
            if (j == 0)
                pda.add_pop(st(cur), pda.symbol(pop_sym), pda.action(actions[0]), st(next));
            else
                pda.add_internal(st(cur), pda.action(actions[j]), st(next));
            cur = next;
        }
    }

    void guarded(const GuardedPopMacro& m) {
        if (!m.trans.non_erasing())
            throw fsa_error("guarded pop: transducer must be non-erasing");
        Dfa dfa = regex_to_min_dfa(m.guard, m.trans.in_alpha);
        ActId hash = pda.action("#");
        auto pname = [&](std::size_t d, std::size_t t) {
            return prefix + ".q" + std::to_string(d) + "x" + std::to_string(t);
        };
        pda.add_internal(st(m.src), hash, st(pname(dfa.init, m.trans.init)));
        for (std::size_t d = 0; d < dfa.num_states(); ++d)
            for (std::size_t t = 0; t < m.trans.num_states(); ++t) {
                if (dfa.accepting[d]) {
                    // guard matched: leave the product (shortest-match stop)
                    pda.add_internal(st(pname(d, t)), hash, st(m.dst));
                } else {
                    for (std::size_t c = 0; c < m.trans.in_alpha.size(); ++c) {
                        const Transducer::Edge& e = m.trans.delta[t][c];
                        chain(pname(d, t), m.trans.in_alpha[c], e.out,
                              pname(dfa.delta[d][c], e.next),
                              ".q" + std::to_string(d) + "x" + std::to_string(t) + "c" +
                                  std::to_string(c));
                    }
                }
            }
    }

    // Both sides push word (top-first) over 'a' moves.
    void pairpush(const StatePair& src, const StatePair& dst,
                  const std::vector<std::string>& word, const std::string& tag) {
        ActId a = pda.action("a");
        std::size_t l = word.size();
        for (int side = 0; side < 2; ++side) {
            std::string pol = side == 0 ? "l:" : "r:";
            std::string cur = side == 0 ? src.left : src.right;
            for (std::size_t j = 0; j < l; ++j) {
                // push bottom-most first: word[l-1-j]
                std::string next = pol + prefix + tag + ".p" + std::to_string(l - 1 - j);
                pda.add_push(st(cur), a, st(next), pda.symbol(word[l - 1 - j]));
                cur = next;
            }
            pda.add_internal(st(cur), a, st(side == 0 ? dst.left : dst.right));
        }
    }

    std::string opt_tag(std::size_t j) { return ".o" + std::to_string(j + 1); }

    // Creates the landing pair for options needing a multi-symbol push.
    void prepare_option(const PairOption& o, const std::string& tag) {
        if (o.word.size() >= 2) pairpush(pair_of(prefix + tag), o.target, o.word, tag);
    }

    // Edge entering option o at the given polarity (0 = left, 1 = right).
    void option_edge(const std::string& from, ActId act, const PairOption& o, int side,
                     const std::string& tag) {
        const std::string& tgt = side == 0 ? o.target.left : o.target.right;
        if (o.word.empty()) {
            pda.add_internal(st(from), act, st(tgt));
        } else if (o.word.size() == 1) {
            pda.add_push(st(from), act, st(tgt), pda.symbol(o.word[0]));
        } else {
            std::string f = (side == 0 ? "l:" : "r:") + prefix + tag;
            pda.add_internal(st(from), act, st(f));
        }
    }

    // Two-option choice for the equality-defending player: middle states let
    // the defender answer the first move by naming the option both sides take.
    void def_binary(const StatePair& src, const PairOption& o1, const std::string& t1,
                    const PairOption& o2, const std::string& t2, const std::string& utag) {
        ActId a = pda.action("a"), b = pda.action("b");
        std::string u1 = prefix + utag + ".u1";
        std::string u2 = prefix + utag + ".u2";
        std::string u3 = prefix + utag + ".u3";
        pda.add_internal(st(src.left), a, st(u1));
        pda.add_internal(st(src.left), a, st(u2));
        pda.add_internal(st(src.left), a, st(u3));
        pda.add_internal(st(src.right), a, st(u2));
        pda.add_internal(st(src.right), a, st(u3));
        option_edge(u1, a, o1, 0, t1);
        option_edge(u1, b, o2, 0, t2);
        option_edge(u2, a, o1, 0, t1);
        option_edge(u2, b, o2, 1, t2);
        option_edge(u3, a, o1, 1, t1);
        option_edge(u3, b, o2, 0, t2);
    }

    void att_binary(const StatePair& src, const PairOption& o1, const std::string& t1,
                    const PairOption& o2, const std::string& t2) {
        ActId a = pda.action("a"), b = pda.action("b");
        option_edge(src.left, a, o1, 0, t1);
        option_edge(src.left, b, o2, 0, t2);
        option_edge(src.right, a, o1, 1, t1);
        option_edge(src.right, b, o2, 1, t2);
    }

    void choice(const StatePair& src, const std::vector<PairOption>& options, bool defender) {
        if (options.empty()) throw fsa_error("choice macro needs at least one option");
        for (std::size_t j = 0; j < options.size(); ++j) prepare_option(options[j], opt_tag(j));
        if (options.size() == 1) {
            ActId a = pda.action("a");
            option_edge(src.left, a, options[0], 0, opt_tag(0));
            option_edge(src.right, a, options[0], 1, opt_tag(0));
            return;
        }
        StatePair cur = src;
        for (std::size_t j = 0; j + 1 < options.size(); ++j) {
            bool last = j + 2 == options.size();
            PairOption second;
            std::string t2;
            if (last) {
                second = options[j + 1];
                t2 = opt_tag(j + 1);
            } else {
                second = {pair_of(prefix + ".n" + std::to_string(j + 1)), {}};
                t2 = "";
            }
            if (defender)
                def_binary(cur, options[j], opt_tag(j), second, t2, ".d" + std::to_string(j));
            else
                att_binary(cur, options[j], opt_tag(j), second, t2);
            cur = second.target;
        }
    }
};

}  // namespace

ExpandStats expand_macros(Pda& pda, const std::vector<MacroRule>& macros) {
    std::size_t s0 = pda.num_states(), r0 = pda.num_rules();
    for (std::size_t i = 0; i < macros.size(); ++i) {
        Expander ex{pda, "g" + std::to_string(i)};
        std::visit(overloaded{
                       [&](const ChainMacro& m) { ex.chain(m.src, m.pop_sym, m.actions, m.dst, ""); },
                       [&](const GuardedPopMacro& m) { ex.guarded(m); },
                       [&](const PairPushMacro& m) { ex.pairpush(m.src, m.dst, m.word, ""); },
                       [&](const DefChoiceMacro& m) { ex.choice(m.src, m.options, true); },
                       [&](const AttChoiceMacro& m) { ex.choice(m.src, m.options, false); },
                   },
                   macros[i]);
    }
    return {pda.num_rules() - r0, pda.num_states() - s0};
}

// ---------------------------------------------------------------------------
// macro file parsing

namespace {

std::vector<std::string> lex_regex(const std::string& text, std::size_t lineno) {
    std::vector<std::string> toks;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            toks.push_back(cur);
            cur.clear();
        }
    };
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            flush();
        } else if (ch == '(' || ch == ')' || ch == '*' || ch == '|') {
            flush();
            toks.push_back(std::string(1, ch));
        } else {
            cur.push_back(ch);
        }
    }
    flush();
    if (toks.empty()) throw parse_error_at(lineno, "empty regex");
    return toks;
}

struct RegexParser {
    const std::vector<std::string>& toks;
    const std::map<std::string, std::vector<std::string>>& classes;
    std::size_t pos = 0;
    std::size_t lineno;

    bool at(const std::string& t) const { return pos < toks.size() && toks[pos] == t; }

    Re expr() {
        Re r = term();
        while (at("|")) {
            ++pos;
            r = re_alt(r, term());
        }
        return r;
    }
    Re term() {
        Re r = factor();
        while (pos < toks.size() && !at("|") && !at(")")) r = re_cat(r, factor());
        return r;
    }
    Re factor() {
        Re r = atom();
        while (at("*")) {
            ++pos;
            r = re_star(r);
        }
        return r;
    }
    Re atom() {
        if (pos >= toks.size()) throw parse_error_at(lineno, "regex ends unexpectedly");
        if (at("(")) {
            ++pos;
            Re r = expr();
            if (!at(")")) throw parse_error_at(lineno, "expected ')' in regex");
            ++pos;
            return r;
        }
        if (at(")") || at("*") || at("|"))
            throw parse_error_at(lineno, "misplaced '" + toks[pos] + "' in regex");
        std::string name = toks[pos++];
        auto it = classes.find(name);
        if (it != classes.end()) return re_class(it->second);
        return re_class({name});
    }
};

}  // namespace

std::vector<MacroRule> parse_macro_file(std::istream& in) {
    std::vector<MacroRule> out;
    std::map<std::string, std::vector<std::string>> classes;
    std::map<std::string, Transducer> transducers;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        // '#' only starts a comment at the start of a line ('#' can occur as
        // an action in chain words).
        if (toks.empty() || toks[0][0] == '#') continue;
        auto fail = [&](const std::string& why) { throw parse_error_at(lineno, why); };

        if (toks[0] == "class") {
            if (toks.size() < 3 || toks[2] != "=") fail("expected: class NAME = SYM...");
            std::vector<std::string> syms(toks.begin() + 3, toks.end());
            if (!classes.emplace(toks[1], std::move(syms)).second)
                fail("class '" + toks[1] + "' redefined");
        } else if (toks[0] == "transducer") {
            if (toks.size() != 3 || toks[2] != "{") fail("expected: transducer NAME {");
            Transducer t = parse_transducer_block(in, lineno);
            if (!transducers.emplace(toks[1], std::move(t)).second)
                fail("transducer '" + toks[1] + "' redefined");
        } else if (toks[0] == "chain") {
            if (toks.size() < 5) fail("expected: chain SRC POPSYM DST ACT...");
            ChainMacro m;
            m.src = toks[1];
            m.pop_sym = toks[2];
            m.dst = toks[3];
            m.actions.assign(toks.begin() + 4, toks.end());
            out.push_back(std::move(m));
        } else if (toks[0] == "guarded") {
            if (toks.size() < 5) fail("expected: guarded SRC DST TRANSDUCER REGEX");
            auto it = transducers.find(toks[3]);
            if (it == transducers.end()) fail("unknown transducer '" + toks[3] + "'");
            std::string rest;
            for (std::size_t i = 4; i < toks.size(); ++i) rest += toks[i] + " ";
            std::vector<std::string> rtoks = lex_regex(rest, lineno);
            RegexParser rp{rtoks, classes, 0, lineno};
            Re guard = rp.expr();
            if (rp.pos != rtoks.size()) fail("trailing regex tokens");
            out.push_back(GuardedPopMacro{toks[1], toks[2], guard, it->second});
        } else if (toks[0] == "pairpush") {
            if (toks.size() < 3) fail("expected: pairpush SRC DST [SYM...]");
            PairPushMacro m;
            m.src = pair_of(toks[1]);
            m.dst = pair_of(toks[2]);
            m.word.assign(toks.begin() + 3, toks.end());
            out.push_back(std::move(m));
        } else if (toks[0] == "def" || toks[0] == "att") {
            if (toks.size() < 4 || toks[2] != "::")
                fail("expected: " + toks[0] + " SRC :: TGT [SYM...] | ...");
            std::vector<PairOption> options;
            std::vector<std::string> cur;
            auto flush_option = [&] {
                if (cur.empty()) fail("empty option in choice");
                PairOption o;
                o.target = pair_of(cur[0]);
                o.word.assign(cur.begin() + 1, cur.end());
                options.push_back(std::move(o));
                cur.clear();
            };
            for (std::size_t i = 3; i < toks.size(); ++i) {
                if (toks[i] == "|")
                    flush_option();
                else
                    cur.push_back(toks[i]);
            }
            flush_option();
            if (toks[0] == "def")
                out.push_back(DefChoiceMacro{pair_of(toks[1]), std::move(options)});
            else
                out.push_back(AttChoiceMacro{pair_of(toks[1]), std::move(options)});
        } else {
            fail("unknown directive '" + toks[0] + "'");
        }
    }
    return out;
}

std::vector<MacroRule> parse_macro_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    return parse_macro_file(in);
}

}  // namespace pdab
