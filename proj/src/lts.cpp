#include "pdab/lts.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace pdab {

const std::vector<std::uint32_t> Pda::no_rules_;

template <typename Map>
std::uint32_t Pda::intern(Map& map, std::vector<std::string>& names, const std::string& name) {
    auto it = map.find(name);
    if (it != map.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(names.size());
    names.push_back(name);
    map.emplace(name, id);
    return id;
}

StateId Pda::state(const std::string& name) { return intern(state_ids_, state_names_, name); }
SymId Pda::symbol(const std::string& name) { return intern(symbol_ids_, symbol_names_, name); }
ActId Pda::action(const std::string& name) { return intern(action_ids_, action_names_, name); }

std::optional<StateId> Pda::find_state(const std::string& name) const {
    auto it = state_ids_.find(name);
    if (it == state_ids_.end()) return std::nullopt;
    return it->second;
}
std::optional<SymId> Pda::find_symbol(const std::string& name) const {
    auto it = symbol_ids_.find(name);
    if (it == symbol_ids_.end()) return std::nullopt;
    return it->second;
}
std::optional<ActId> Pda::find_action(const std::string& name) const {
    auto it = action_ids_.find(name);
    if (it == action_ids_.end()) return std::nullopt;
    return it->second;
}

void Pda::add_internal(StateId p, ActId a, StateId q) {
    if (by_src_.size() <= p) by_src_.resize(p + 1);
    by_src_[p].push_back(static_cast<std::uint32_t>(rules_.size()));
    rules_.push_back({RuleKind::Internal, p, a, q, 0});
}
void Pda::add_push(StateId p, ActId a, StateId q, SymId sym) {
    if (by_src_.size() <= p) by_src_.resize(p + 1);
    by_src_[p].push_back(static_cast<std::uint32_t>(rules_.size()));
    rules_.push_back({RuleKind::Push, p, a, q, sym});
}
void Pda::add_pop(StateId p, SymId sym, ActId a, StateId q) {
    if (by_src_.size() <= p) by_src_.resize(p + 1);
    by_src_[p].push_back(static_cast<std::uint32_t>(rules_.size()));
    rules_.push_back({RuleKind::Pop, p, a, q, sym});
}

const std::vector<std::uint32_t>& Pda::rules_from(StateId p) const {
    if (p >= by_src_.size()) return no_rules_;
    return by_src_[p];
}

std::size_t ConfigHash::operator()(const Config& c) const noexcept {
    // FNV-1a over the state id and the stack word
    std::size_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(c.state);
    for (SymId s : c.stack) mix(s);
    return h;
}

std::vector<Step> step(const Pda& pda, const Config& c) {
    std::vector<Step> out;
    for (std::uint32_t ri : pda.rules_from(c.state)) {
        const Rule& r = pda.rules()[ri];
        switch (r.kind) {
            case RuleKind::Internal:
                out.push_back({r.act, {r.dst, c.stack}});
                break;
            case RuleKind::Push: {
                Config to{r.dst, {}};
                to.stack.reserve(c.stack.size() + 1);
                to.stack.push_back(r.sym);
                to.stack.insert(to.stack.end(), c.stack.begin(), c.stack.end());
                out.push_back({r.act, std::move(to)});
                break;
            }
            case RuleKind::Pop:
                if (!c.stack.empty() && c.stack.front() == r.sym) {
                    Config to{r.dst, {c.stack.begin() + 1, c.stack.end()}};
                    out.push_back({r.act, std::move(to)});
                }
                break;
        }
    }
    return out;
}

ReachResult reachable(const Pda& pda, const std::vector<Config>& roots,
                      std::size_t stack_cap, std::size_t node_budget) {
    ReachResult res;
    std::unordered_set<Config, ConfigHash> seen;
    std::deque<const Config*> queue;
    for (const Config& r : roots) {
        auto [it, fresh] = seen.insert(r);
        if (!fresh) continue;
        if (seen.size() > node_budget) throw budget_error("reachable: node budget exceeded");
        res.configs.push_back(r);
        queue.push_back(&*it);
    }
    while (!queue.empty()) {
        const Config* c = queue.front();
        queue.pop_front();
        for (Step& s : step(pda, *c)) {
            if (s.to.stack.size() > stack_cap) {
                res.closed = false;
                continue;
            }
            auto [it, fresh] = seen.insert(std::move(s.to));
            if (!fresh) continue;
            if (seen.size() > node_budget) throw budget_error("reachable: node budget exceeded");
            res.configs.push_back(*it);
            queue.push_back(&*it);
        }
    }
    return res;
}

FiniteLts finite_restriction(const Pda& pda, const std::vector<Config>& configs) {
    FiniteLts lts;
    std::unordered_map<Config, std::uint32_t, ConfigHash> index;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        index.emplace(configs[i], static_cast<std::uint32_t>(i));
        lts.state_names.push_back(print_config(pda, configs[i]));
    }
    for (std::size_t a = 0; a < pda.num_actions(); ++a)
        lts.action_names.push_back(pda.action_name(static_cast<ActId>(a)));
    lts.out.resize(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i)
        for (const Step& s : step(pda, configs[i])) {
            auto it = index.find(s.to);
            if (it != index.end()) lts.out[i].push_back({s.act, it->second});
        }
    return lts;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

}  // namespace

Pda parse_pda(std::istream& in) {
    Pda pda;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::string> t = tokenize(line);
        // '#' only introduces a comment at the start of a line: it is a
        // legitimate action name inside rules.
        if (t.empty() || t[0][0] == '#') continue;
        auto fail = [&](const std::string& why) {
            throw parse_error("line " + std::to_string(lineno) + ": " + why);
        };
        if (t[0] == "state") {
            if (t.size() != 2) fail("expected: state NAME");
            pda.state(t[1]);
        } else if (t[0] == "symbol") {
            if (t.size() != 2) fail("expected: symbol NAME");
            pda.symbol(t[1]);
        } else if (t[0] == "action") {
            if (t.size() != 2) fail("expected: action NAME");
            pda.action(t[1]);
        } else if (t[0] == "internal") {
            if (t.size() != 4) fail("expected: internal P A Q");
            pda.add_internal(pda.state(t[1]), pda.action(t[2]), pda.state(t[3]));
        } else if (t[0] == "push") {
            if (t.size() != 5) fail("expected: push P A Q SYM");
            pda.add_push(pda.state(t[1]), pda.action(t[2]), pda.state(t[3]), pda.symbol(t[4]));
        } else if (t[0] == "pop") {
            if (t.size() != 5) fail("expected: pop P SYM A Q");
            pda.add_pop(pda.state(t[1]), pda.symbol(t[2]), pda.action(t[3]), pda.state(t[4]));
        } else {
            fail("unknown directive '" + t[0] + "'");
        }
    }
    return pda;
}

Pda parse_pda_string(const std::string& text) {
    std::istringstream in(text);
    return parse_pda(in);
}

Pda parse_pda_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    return parse_pda(in);
}

std::string print_pda(const Pda& pda) {
    std::vector<std::string> decls, rules;
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    std::vector<std::string> names;
    for (std::size_t i = 0; i < pda.num_states(); ++i) names.push_back(pda.state_name(i));
    for (const std::string& n : sorted(names)) decls.push_back("state " + n);
    names.clear();
    for (std::size_t i = 0; i < pda.num_symbols(); ++i) names.push_back(pda.symbol_name(i));
    for (const std::string& n : sorted(names)) decls.push_back("symbol " + n);
    names.clear();
    for (std::size_t i = 0; i < pda.num_actions(); ++i) names.push_back(pda.action_name(i));
    for (const std::string& n : sorted(names)) decls.push_back("action " + n);

    for (const Rule& r : pda.rules()) {
        switch (r.kind) {
            case RuleKind::Internal:
                rules.push_back("internal " + pda.state_name(r.src) + " " +
                                pda.action_name(r.act) + " " + pda.state_name(r.dst));
                break;
            case RuleKind::Push:
                rules.push_back("push " + pda.state_name(r.src) + " " + pda.action_name(r.act) +
                                " " + pda.state_name(r.dst) + " " + pda.symbol_name(r.sym));
                break;
            case RuleKind::Pop:
                rules.push_back("pop " + pda.state_name(r.src) + " " + pda.symbol_name(r.sym) +
                                " " + pda.action_name(r.act) + " " + pda.state_name(r.dst));
                break;
        }
    }
    std::sort(rules.begin(), rules.end());
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());

    std::string out;
    for (const std::string& d : decls) out += d + "\n";
    for (const std::string& r : rules) out += r + "\n";
    return out;
}

std::string print_config(const Pda& pda, const Config& c) {
    std::string out = pda.state_name(c.state) + " |";
    for (SymId s : c.stack) out += " " + pda.symbol_name(s);
    return out;
}

Config parse_config(const Pda& pda, const std::string& text) {
    auto bar = text.find('|');
    if (bar == std::string::npos)
        throw parse_error("configuration must look like 'STATE | SYM SYM ...'");
    std::vector<std::string> st = tokenize(text.substr(0, bar));
    if (st.size() != 1) throw parse_error("configuration needs exactly one state before '|'");
    auto sid = pda.find_state(st[0]);
    if (!sid) throw parse_error("unknown state '" + st[0] + "'");
    Config c{*sid, {}};
    for (const std::string& tok : tokenize(text.substr(bar + 1))) {
        auto sym = pda.find_symbol(tok);
        if (!sym) throw parse_error("unknown stack symbol '" + tok + "'");
        c.stack.push_back(*sym);
    }
    return c;
}

}  // namespace pdab
