#include "pdab/fsa.hpp"

#include "pdab/lts.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace pdab {

Re re_class(std::vector<std::string> syms) {
    auto re = std::make_shared<ClassRegex>();
    re->kind = ClassRegex::Class;
    re->syms = std::move(syms);
    return re;
}
Re re_cat(Re a, Re b) {
    auto re = std::make_shared<ClassRegex>();
    re->kind = ClassRegex::Concat;
    re->left = std::move(a);
    re->right = std::move(b);
    return re;
}
Re re_alt(Re a, Re b) {
    auto re = std::make_shared<ClassRegex>();
    re->kind = ClassRegex::Union;
    re->left = std::move(a);
    re->right = std::move(b);
    return re;
}
Re re_star(Re a) {
    auto re = std::make_shared<ClassRegex>();
    re->kind = ClassRegex::Star;
    re->left = std::move(a);
    return re;
}

std::size_t Dfa::letter(const std::string& name) const {
    auto it = alpha_index.find(name);
    if (it == alpha_index.end()) throw fsa_error("unknown letter '" + name + "'");
    return it->second;
}

namespace {

struct NfaState {
    std::vector<std::size_t> eps;
    std::vector<std::pair<std::size_t, std::size_t>> arcs;  // (letter, target)
};

struct Nfa {
    std::vector<NfaState> states;
    std::size_t add() {
        states.emplace_back();
        return states.size() - 1;
    }
};

struct Frag {
    std::size_t start, accept;
};

Frag thompson(Nfa& nfa, const Re& re, const std::unordered_map<std::string, std::size_t>& alpha) {
    switch (re->kind) {
        case ClassRegex::Class: {
            std::size_t s = nfa.add(), a = nfa.add();
            for (const std::string& sym : re->syms) {
                auto it = alpha.find(sym);
                if (it == alpha.end())
                    throw fsa_error("regex class symbol '" + sym + "' is not in the alphabet");
                nfa.states[s].arcs.push_back({it->second, a});
            }
            return {s, a};
        }
        case ClassRegex::Concat: {
            Frag l = thompson(nfa, re->left, alpha);
            Frag r = thompson(nfa, re->right, alpha);
            nfa.states[l.accept].eps.push_back(r.start);
            return {l.start, r.accept};
        }
        case ClassRegex::Union: {
            Frag l = thompson(nfa, re->left, alpha);
            Frag r = thompson(nfa, re->right, alpha);
            std::size_t s = nfa.add(), a = nfa.add();
            nfa.states[s].eps.push_back(l.start);
            nfa.states[s].eps.push_back(r.start);
            nfa.states[l.accept].eps.push_back(a);
            nfa.states[r.accept].eps.push_back(a);
            return {s, a};
        }
        case ClassRegex::Star: {
            Frag l = thompson(nfa, re->left, alpha);
            std::size_t s = nfa.add();
            nfa.states[s].eps.push_back(l.start);
            nfa.states[l.accept].eps.push_back(s);
            return {s, s};
        }
    }
    throw fsa_error("corrupt regex node");
}

std::vector<std::uint32_t> eps_closure(const Nfa& nfa, std::vector<std::uint32_t> set) {
    std::vector<bool> in(nfa.states.size(), false);
    std::deque<std::uint32_t> todo;
    for (auto s : set) {
        in[s] = true;
        todo.push_back(s);
    }
    while (!todo.empty()) {
        std::uint32_t s = todo.front();
        todo.pop_front();
        for (std::size_t t : nfa.states[s].eps)
            if (!in[t]) {
                in[t] = true;
                set.push_back(static_cast<std::uint32_t>(t));
                todo.push_back(static_cast<std::uint32_t>(t));
            }
    }
    std::sort(set.begin(), set.end());
    return set;
}

// Hopcroft partition refinement; returns the block index of each state.
std::vector<std::size_t> hopcroft(const std::vector<std::vector<std::size_t>>& delta,
                                  const std::vector<bool>& accepting, std::size_t letters) {
    std::size_t n = delta.size();
    // inverse edges per letter
    std::vector<std::vector<std::vector<std::size_t>>> inv(
        letters, std::vector<std::vector<std::size_t>>(n));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t c = 0; c < letters; ++c) inv[c][delta[s][c]].push_back(s);

    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::size_t> block_of(n);
    std::vector<std::size_t> acc, rej;
    for (std::size_t s = 0; s < n; ++s) (accepting[s] ? acc : rej).push_back(s);
    if (!acc.empty()) blocks.push_back(acc);
    if (!rej.empty()) blocks.push_back(rej);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t s : blocks[b]) block_of[s] = b;

    std::deque<std::pair<std::size_t, std::size_t>> work;
    std::set<std::pair<std::size_t, std::size_t>> in_work;
    auto push_work = [&](std::size_t b, std::size_t c) {
        if (in_work.insert({b, c}).second) work.push_back({b, c});
    };
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t c = 0; c < letters; ++c) push_work(b, c);

    std::vector<char> marked(n, 0);
    while (!work.empty()) {
        auto [a_id, c] = work.front();
        work.pop_front();
        in_work.erase({a_id, c});
        std::vector<std::size_t> splitter = blocks[a_id];  // snapshot

        // X = states moving into the splitter on letter c, grouped by block
        std::vector<std::size_t> touched;
        std::map<std::size_t, std::vector<std::size_t>> hits;
        for (std::size_t t : splitter)
            for (std::size_t s : inv[c][t])
                if (!marked[s]) {
                    marked[s] = 1;
                    hits[block_of[s]].push_back(s);
                    touched.push_back(s);
                }
        for (auto& [b, members] : hits) {
            if (members.size() == blocks[b].size()) continue;  // no split
            std::size_t nb = blocks.size();
            std::vector<std::size_t> rest;
            rest.reserve(blocks[b].size() - members.size());
            for (std::size_t s : blocks[b])
                if (!marked[s]) rest.push_back(s);
            blocks[b] = rest;
            blocks.push_back(members);
            for (std::size_t s : members) block_of[s] = nb;
            for (std::size_t c2 = 0; c2 < letters; ++c2) {
                if (in_work.count({b, c2})) {
                    push_work(nb, c2);  // pending (b,c2) still covers the rest
                } else {
                    push_work(members.size() <= blocks[b].size() ? nb : b, c2);
                }
            }
        }
        for (std::size_t s : touched) marked[s] = 0;
    }
    return block_of;
}

// Rebuilds a DFA from a block partition with canonical breadth-first
// numbering from the initial state's block.
Dfa rebuild(const Dfa& dfa, const std::vector<std::size_t>& block_of) {
    Dfa out;
    out.alphabet = dfa.alphabet;
    out.alpha_index = dfa.alpha_index;
    std::size_t nblocks = 0;
    for (std::size_t b : block_of) nblocks = std::max(nblocks, b + 1);

    // representative per block
    std::vector<std::size_t> rep(nblocks, SIZE_MAX);
    for (std::size_t s = 0; s < block_of.size(); ++s)
        if (rep[block_of[s]] == SIZE_MAX) rep[block_of[s]] = s;

    std::vector<std::size_t> renum(nblocks, SIZE_MAX);
    std::deque<std::size_t> todo;
    renum[block_of[dfa.init]] = 0;
    todo.push_back(block_of[dfa.init]);
    std::vector<std::size_t> order{block_of[dfa.init]};
    while (!todo.empty()) {
        std::size_t b = todo.front();
        todo.pop_front();
        for (std::size_t c = 0; c < dfa.alphabet.size(); ++c) {
            std::size_t tb = block_of[dfa.delta[rep[b]][c]];
            if (renum[tb] == SIZE_MAX) {
                renum[tb] = order.size();
                order.push_back(tb);
                todo.push_back(tb);
            }
        }
    }
    out.init = 0;
    out.accepting.resize(order.size());
    out.delta.assign(order.size(), std::vector<std::size_t>(dfa.alphabet.size()));
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t b = order[i];
        out.accepting[i] = dfa.accepting[rep[b]];
        for (std::size_t c = 0; c < dfa.alphabet.size(); ++c)
            out.delta[i][c] = renum[block_of[dfa.delta[rep[b]][c]]];
    }
    return out;
}

}  // namespace

Dfa minimize_dfa(const Dfa& dfa) {
    // trim to init-reachable states first
    std::vector<std::size_t> keep;
    std::vector<std::size_t> renum(dfa.num_states(), SIZE_MAX);
    std::deque<std::size_t> todo;
    renum[dfa.init] = 0;
    keep.push_back(dfa.init);
    todo.push_back(dfa.init);
    while (!todo.empty()) {
        std::size_t s = todo.front();
        todo.pop_front();
        for (std::size_t t : dfa.delta[s])
            if (renum[t] == SIZE_MAX) {
                renum[t] = keep.size();
                keep.push_back(t);
                todo.push_back(t);
            }
    }
    Dfa trimmed;
    trimmed.alphabet = dfa.alphabet;
    trimmed.alpha_index = dfa.alpha_index;
    trimmed.init = 0;
    trimmed.accepting.resize(keep.size());
    trimmed.delta.assign(keep.size(), std::vector<std::size_t>(dfa.alphabet.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        trimmed.accepting[i] = dfa.accepting[keep[i]];
        for (std::size_t c = 0; c < dfa.alphabet.size(); ++c)
            trimmed.delta[i][c] = renum[dfa.delta[keep[i]][c]];
    }
    if (trimmed.num_states() == 0) return trimmed;
    return rebuild(trimmed, hopcroft(trimmed.delta, trimmed.accepting, trimmed.alphabet.size()));
}

Dfa regex_to_min_dfa(const Re& re, const std::vector<std::string>& alphabet) {
    Dfa out;
    out.alphabet = alphabet;
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
        if (!out.alpha_index.emplace(alphabet[i], i).second)
            throw fsa_error("duplicate alphabet letter '" + alphabet[i] + "'");
    }

    Nfa nfa;
    Frag frag = thompson(nfa, re, out.alpha_index);

    // subset construction (complete; the empty subset is the dead state)
    std::map<std::vector<std::uint32_t>, std::size_t> ids;
    std::vector<std::vector<std::uint32_t>> sets;
    auto intern = [&](std::vector<std::uint32_t> set) {
        auto [it, fresh] = ids.emplace(set, sets.size());
        if (fresh) sets.push_back(std::move(set));
        return it->second;
    };
    std::size_t start =
        intern(eps_closure(nfa, {static_cast<std::uint32_t>(frag.start)}));
    out.init = start;
    std::deque<std::size_t> todo{start};
    while (!todo.empty()) {
        std::size_t id = todo.front();
        todo.pop_front();
        if (out.delta.size() <= id) out.delta.resize(id + 1);
        out.delta[id].assign(alphabet.size(), 0);
        std::vector<std::uint32_t> cur = sets[id];
        for (std::size_t c = 0; c < alphabet.size(); ++c) {
            std::vector<std::uint32_t> next;
            for (std::uint32_t s : cur)
                for (auto [letter, tgt] : nfa.states[s].arcs)
                    if (letter == c) next.push_back(static_cast<std::uint32_t>(tgt));
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            std::size_t before = sets.size();
            std::size_t tid = intern(eps_closure(nfa, std::move(next)));
            if (tid == before) todo.push_back(tid);
            out.delta[id][c] = tid;
        }
    }
    out.delta.resize(sets.size());
    for (auto& row : out.delta)
        if (row.empty()) row.assign(alphabet.size(), 0);
    out.accepting.resize(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i)
        out.accepting[i] =
            std::binary_search(sets[i].begin(), sets[i].end(),
                               static_cast<std::uint32_t>(frag.accept));
    return minimize_dfa(out);
}

bool dfa_accepts(const Dfa& dfa, const std::vector<std::string>& word) {
    std::size_t s = dfa.init;
    for (const std::string& w : word) s = dfa.delta[s][dfa.letter(w)];
    return dfa.accepting[s];
}

// ---------------------------------------------------------------------------

bool Transducer::letter_to_letter() const {
    for (const auto& row : delta)
        for (const Edge& e : row)
            if (e.out.size() != 1) return false;
    return true;
}

bool Transducer::non_erasing() const {
    for (const auto& row : delta)
        for (const Edge& e : row)
            if (e.out.empty()) return false;
    return true;
}

std::size_t Transducer::size() const {
    std::size_t total_out = 0;
    for (const auto& row : delta)
        for (const Edge& e : row) total_out += e.out.size();
    return num_states() + in_alpha.size() + out_alpha.size() + total_out;
}

std::size_t Transducer::letter(const std::string& name) const {
    auto it = in_index.find(name);
    if (it == in_index.end()) throw fsa_error("unknown input letter '" + name + "'");
    return it->second;
}

std::vector<std::string> run_transducer(const Transducer& t,
                                        const std::vector<std::string>& input) {
    std::vector<std::string> out;
    std::size_t s = t.init;
    for (const std::string& l : input) {
        const Transducer::Edge& e = t.delta[s][t.letter(l)];
        out.insert(out.end(), e.out.begin(), e.out.end());
        s = e.next;
    }
    return out;
}

Transducer hom_transducer(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& image) {
    Transducer t;
    t.state_names = {"h0"};
    t.init = 0;
    t.delta.resize(1);
    for (const auto& [in, out] : image) {
        if (!t.in_index.emplace(in, t.in_alpha.size()).second)
            throw fsa_error("hom_transducer: duplicate input letter '" + in + "'");
        t.in_alpha.push_back(in);
        for (const std::string& o : out)
            if (std::find(t.out_alpha.begin(), t.out_alpha.end(), o) == t.out_alpha.end())
                t.out_alpha.push_back(o);
        t.delta[0].push_back({0, out});
    }
    return t;
}

Transducer shuffle(const Transducer& a, const Transducer& b) {
    Transducer t;
    for (const std::string& l : a.in_alpha) {
        t.in_index.emplace(l, t.in_alpha.size());
        t.in_alpha.push_back(l);
    }
    for (const std::string& l : b.in_alpha) {
        if (!t.in_index.emplace(l, t.in_alpha.size()).second)
            throw fsa_error("shuffle: input alphabets overlap on '" + l + "'");
        t.in_alpha.push_back(l);
    }
    t.out_alpha = a.out_alpha;
    for (const std::string& l : b.out_alpha)
        if (std::find(t.out_alpha.begin(), t.out_alpha.end(), l) == t.out_alpha.end())
            t.out_alpha.push_back(l);

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
    std::deque<std::pair<std::size_t, std::size_t>> todo;
    auto intern = [&](std::size_t sa, std::size_t sb) {
        auto [it, fresh] = ids.emplace(std::make_pair(sa, sb), ids.size());
        if (fresh) {
            t.state_names.push_back(a.state_names[sa] + "&" + b.state_names[sb]);
            todo.push_back({sa, sb});
        }
        return it->second;
    };
    t.init = intern(a.init, b.init);
    while (!todo.empty()) {
        auto [sa, sb] = todo.front();
        todo.pop_front();
        std::size_t id = ids[{sa, sb}];
        if (t.delta.size() <= id) t.delta.resize(id + 1);
        t.delta[id].resize(t.in_alpha.size());
        for (std::size_t c = 0; c < a.in_alpha.size(); ++c) {
            const Transducer::Edge& e = a.delta[sa][c];
            t.delta[id][c] = {intern(e.next, sb), e.out};
        }
        for (std::size_t c = 0; c < b.in_alpha.size(); ++c) {
            const Transducer::Edge& e = b.delta[sb][c];
            t.delta[id][a.in_alpha.size() + c] = {intern(sa, e.next), e.out};
        }
    }
    t.delta.resize(ids.size());
    return t;
}

Transducer relabel_inputs(const Transducer& t, const std::map<std::string, std::string>& ren) {
    Transducer out = t;
    out.in_index.clear();
    for (std::size_t i = 0; i < out.in_alpha.size(); ++i) {
        auto it = ren.find(out.in_alpha[i]);
        if (it != ren.end()) out.in_alpha[i] = it->second;
        if (!out.in_index.emplace(out.in_alpha[i], i).second)
            throw fsa_error("relabel_inputs: renaming is not injective on '" + out.in_alpha[i] +
                            "'");
    }
    return out;
}

Transducer parse_transducer_block(std::istream& in, std::size_t& lineno) {
    Transducer t;
    std::unordered_map<std::string, std::size_t> state_ids;
    auto state_id = [&](const std::string& name) {
        auto [it, fresh] = state_ids.emplace(name, state_ids.size());
        if (fresh) t.state_names.push_back(name);
        return it->second;
    };
    std::string init_name;
    struct Line {
        std::string src, in, dst;
        std::vector<std::string> out;
        std::size_t lineno;
    };
    std::vector<Line> lines;
    std::string line;
    bool closed = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        // Comments start the line; '#' may occur as an output letter.
        if (toks.empty() || toks[0][0] == '#') continue;
        auto fail = [&](const std::string& why) {
            throw parse_error_at(lineno, why);
        };
        if (toks[0] == "}") {
            if (toks.size() != 1) fail("unexpected tokens after '}'");
            closed = true;
            break;
        }
        if (toks[0] == "in:") {
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (!t.in_index.emplace(toks[i], t.in_alpha.size()).second)
                    fail("duplicate input letter '" + toks[i] + "'");
                t.in_alpha.push_back(toks[i]);
            }
        } else if (toks[0] == "out:") {
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (std::find(t.out_alpha.begin(), t.out_alpha.end(), toks[i]) !=
                    t.out_alpha.end())
                    fail("duplicate output letter '" + toks[i] + "'");
                t.out_alpha.push_back(toks[i]);
            }
        } else if (toks[0] == "init:") {
            if (toks.size() != 2) fail("expected: init: STATE");
            init_name = toks[1];
            state_id(init_name);
        } else {
            if (toks.size() < 4 || toks[2] != "->")
                fail("expected: SRC IN -> DST [OUT...]");
            Line l;
            l.src = toks[0];
            l.in = toks[1];
            l.dst = toks[3];
            l.out.assign(toks.begin() + 4, toks.end());
            l.lineno = lineno;
            lines.push_back(std::move(l));
        }
    }
    if (!closed) throw parse_error_at(lineno, "transducer block not closed with '}'");
    if (init_name.empty()) throw parse_error_at(lineno, "transducer block lacks 'init:'");
    for (const Line& l : lines) {
        state_id(l.src);
        state_id(l.dst);
    }
    t.init = state_ids[init_name];
    t.delta.assign(t.state_names.size(), std::vector<Transducer::Edge>(t.in_alpha.size()));
    std::vector<std::vector<bool>> seen(t.state_names.size(),
                                        std::vector<bool>(t.in_alpha.size(), false));
    for (const Line& l : lines) {
        auto it = t.in_index.find(l.in);
        if (it == t.in_index.end())
            throw parse_error_at(l.lineno, "undeclared input letter '" + l.in + "'");
        for (const std::string& o : l.out)
            if (std::find(t.out_alpha.begin(), t.out_alpha.end(), o) == t.out_alpha.end())
                throw parse_error_at(l.lineno, "undeclared output letter '" + o + "'");
        std::size_t s = state_ids[l.src];
        if (seen[s][it->second])
            throw parse_error_at(l.lineno,
                                 "duplicate transition for (" + l.src + ", " + l.in + ")");
        seen[s][it->second] = true;
        t.delta[s][it->second] = {state_ids[l.dst], l.out};
    }
    for (std::size_t s = 0; s < t.num_states(); ++s)
        for (std::size_t c = 0; c < t.in_alpha.size(); ++c)
            if (!seen[s][c])
                throw parse_error_at(lineno, "transducer is not total: no transition for (" +
                                                 t.state_names[s] + ", " + t.in_alpha[c] + ")");
    return t;
}

std::string print_transducer_block(const Transducer& t) {
    std::ostringstream out;
    out << "  in:";
    for (const std::string& l : t.in_alpha) out << " " << l;
    out << "\n  out:";
    for (const std::string& l : t.out_alpha) out << " " << l;
    out << "\n  init: " << t.state_names[t.init] << "\n";
    for (std::size_t s = 0; s < t.num_states(); ++s)
        for (std::size_t c = 0; c < t.in_alpha.size(); ++c) {
            const Transducer::Edge& e = t.delta[s][c];
            out << "  " << t.state_names[s] << " " << t.in_alpha[c] << " -> "
                << t.state_names[e.next];
            for (const std::string& o : e.out) out << " " << o;
            out << "\n";
        }
    out << "}\n";
    return out.str();
}

}  // namespace pdab
