#include "pdab/bisim.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace pdab {

std::string Witness::to_string() const {
    std::string out;
    for (const Move& m : moves) {
        if (!out.empty()) out += " ";
        out += m.side;
        out += ":";
        out += m.action;
    }
    return out;
}

std::string Verdict::to_string() const {
    switch (kind) {
        case Bisimilar:
            return "Bisimilar";
        case NotBisimilar:
            return "NotBisimilar(r=" + std::to_string(round) + ")";
        case Unknown:
            break;
    }
    return reason == BudgetHit ? "Unknown(budget)" : "Unknown(cap-hit)";
}

namespace {

struct PairKey {
    Config a, b;
    bool operator==(const PairKey&) const = default;
};

struct PairKeyHash {
    std::size_t operator()(const PairKey& k) const noexcept {
        ConfigHash h;
        std::size_t x = h(k.a), y = h(k.b);
        return x ^ (y * 0x9e3779b97f4a7c15ull + (x << 6) + (x >> 2));
    }
};

// Memoized successor lists.  Values are stable under rehashing, so references
// handed out stay valid while the cache grows.
class StepCache {
public:
    explicit StepCache(const Pda& pda) : pda_(pda) {}
    const std::vector<Step>& get(const Config& c) {
        auto it = cache_.find(c);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(c, step(pda_, c)).first->second;
    }

private:
    const Pda& pda_;
    std::unordered_map<Config, std::vector<Step>, ConfigHash> cache_;
};

constexpr std::size_t NOWIN = SIZE_MAX;

// Bounded minimax over the bisimulation game.  solve(a, b, d) returns the
// least r <= d such that the attacker can win within r rounds, or nothing if
// the defender survives d rounds.  Configurations beyond the stack cap count
// as defender wins, which keeps attacker wins sound under the cap.
class Game {
public:
    Game(const Pda& pda, std::size_t cap, std::size_t budget)
        : pda_(pda), steps_(pda), cap_(cap), budget_(budget) {}

    std::optional<std::size_t> solve(const Config& a, const Config& b, std::size_t depth) {
        if (a == b) return std::nullopt;
        if (a.stack.size() > cap_ || b.stack.size() > cap_) return std::nullopt;
        if (depth == 0) return std::nullopt;
        Entry& e = entry(a, b);
        if (e.win_rank <= depth) return e.win_rank;
        if (e.safe_depth >= depth) return std::nullopt;

        const std::vector<Step>& sa = steps_.get(a);
        const std::vector<Step>& sb = steps_.get(b);
        std::size_t best = NOWIN;
        for (int side = 0; side < 2 && best > 1; ++side) {
            const std::vector<Step>& mine = side == 0 ? sa : sb;
            const std::vector<Step>& theirs = side == 0 ? sb : sa;
            for (const Step& m : mine) {
                std::size_t worst = 0;  // max over defender responses
                for (const Step& r : theirs) {
                    if (r.act != m.act) continue;
                    auto sub = side == 0 ? solve(m.to, r.to, depth - 1)
                                         : solve(r.to, m.to, depth - 1);
                    if (!sub) {
                        worst = NOWIN;
                        break;
                    }
                    worst = std::max(worst, *sub);
                }
                if (worst != NOWIN && worst + 1 < best) best = worst + 1;
                if (best == 1) break;
            }
        }
        Entry& e2 = entry(a, b);
        if (best != NOWIN) {
            e2.win_rank = best;
            return best;
        }
        e2.safe_depth = std::max(e2.safe_depth, depth);
        return std::nullopt;
    }

    // Rebuilds a winning attacker play of length `rank` (defender answering
    // as well as possible).  Call only after solve(a, b, rank) reported a win.
    Witness witness(Config a, Config b, std::size_t rank) {
        Witness w;
        std::size_t d = rank;
        while (d > 0) {
            const std::vector<Step>& sa = steps_.get(a);
            const std::vector<Step>& sb = steps_.get(b);
            // an unanswerable move ends the play
            for (int side = 0; side < 2; ++side) {
                const std::vector<Step>& mine = side == 0 ? sa : sb;
                const std::vector<Step>& theirs = side == 0 ? sb : sa;
                for (const Step& m : mine) {
                    bool answered = false;
                    for (const Step& r : theirs)
                        if (r.act == m.act) {
                            answered = true;
                            break;
                        }
                    if (!answered) {
                        w.moves.push_back({side == 0 ? 'L' : 'R', pda_.action_name(m.act)});
                        return w;
                    }
                }
            }
            // otherwise follow the quickest forced win
            int best_side = -1;
            const Step* best_move = nullptr;
            const Step* best_resp = nullptr;
            std::size_t best_worst = NOWIN;
            for (int side = 0; side < 2; ++side) {
                const std::vector<Step>& mine = side == 0 ? sa : sb;
                const std::vector<Step>& theirs = side == 0 ? sb : sa;
                for (const Step& m : mine) {
                    std::size_t worst = 0;
                    const Step* resp = nullptr;
                    for (const Step& r : theirs) {
                        if (r.act != m.act) continue;
                        auto sub = side == 0 ? solve(m.to, r.to, d - 1)
                                             : solve(r.to, m.to, d - 1);
                        if (!sub) {
                            worst = NOWIN;
                            break;
                        }
                        if (!resp || *sub >= worst) {
                            worst = *sub;
                            resp = &r;
                        }
                    }
                    if (worst != NOWIN && worst < best_worst) {
                        best_side = side;
                        best_move = &m;
                        best_resp = resp;
                        best_worst = worst;
                    }
                }
            }
            if (best_side < 0) break;  // should not happen after a solved win
            w.moves.push_back({best_side == 0 ? 'L' : 'R', pda_.action_name(best_move->act)});
            Config na = best_side == 0 ? best_move->to : best_resp->to;
            Config nb = best_side == 0 ? best_resp->to : best_move->to;
            a = std::move(na);
            b = std::move(nb);
            d = best_worst;
        }
        return w;
    }

private:
    struct Entry {
        std::size_t win_rank = NOWIN;
        std::size_t safe_depth = 0;
    };

    Entry& entry(const Config& a, const Config& b) {
        auto [it, fresh] = memo_.try_emplace(PairKey{a, b});
        if (fresh && ++nodes_ > budget_)
            throw budget_error("game search: node budget exceeded");
        return it->second;
    }

    const Pda& pda_;
    StepCache steps_;
    std::size_t cap_, budget_, nodes_ = 0;
    std::unordered_map<PairKey, Entry, PairKeyHash> memo_;
};

// Searches a finite bisimulation-up-to-identity containing the root pair:
// a coinductive depth-first search assumes pairs on the current path are
// good, then a validation pass shrinks the tentative set to a genuine
// fixpoint, so anything that survives (plus the identity) is a real
// bisimulation on the full system.
class CertProver {
public:
    CertProver(const Pda& pda, std::size_t cap, std::size_t budget)
        : steps_(pda), cap_(cap), budget_(budget) {}

    bool prove_root(const Config& a, const Config& b) {
        if (!prove(a, b, 0)) return false;
        std::unordered_set<PairKey, PairKeyHash> W;
        for (const auto& [k, st] : status_)
            if (st == Won) W.insert(k);
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto it = W.begin(); it != W.end();) {
                if (validates(*it, W)) {
                    ++it;
                } else {
                    it = W.erase(it);
                    changed = true;
                }
            }
        }
        if (!W.count(PairKey{a, b})) return false;
        relation_size_ = W.size();
        return true;
    }

    std::size_t relation_size() const { return relation_size_; }

private:
    enum Status : char { Grey, Won, Failed };

    bool validates(const PairKey& k, const std::unordered_set<PairKey, PairKeyHash>& W) {
        const std::vector<Step>& sa = steps_.get(k.a);
        const std::vector<Step>& sb = steps_.get(k.b);
        for (int side = 0; side < 2; ++side) {
            const std::vector<Step>& mine = side == 0 ? sa : sb;
            const std::vector<Step>& theirs = side == 0 ? sb : sa;
            for (const Step& m : mine) {
                bool matched = false;
                for (const Step& r : theirs) {
                    if (r.act != m.act) continue;
                    if (r.to == m.to) {
                        matched = true;
                        break;
                    }
                    PairKey p = side == 0 ? PairKey{m.to, r.to} : PairKey{r.to, m.to};
                    if (W.count(p)) {
                        matched = true;
                        break;
                    }
                }
                if (!matched) return false;
            }
        }
        return true;
    }

    bool prove(const Config& a, const Config& b, std::size_t depth) {
        if (a == b) return true;
        if (a.stack.size() > cap_ || b.stack.size() > cap_) return false;
        auto it = status_.find(PairKey{a, b});
        if (it != status_.end()) return it->second != Failed;  // Grey = coinductive yes
        if (depth > 10'000) throw budget_error("certificate search: recursion too deep");
        if (++nodes_ > budget_) throw budget_error("certificate search: node budget exceeded");
        Status* st = &status_.emplace(PairKey{a, b}, Grey).first->second;

        const std::vector<Step>& sa = steps_.get(a);
        const std::vector<Step>& sb = steps_.get(b);
        bool ok = true;
        for (int side = 0; side < 2 && ok; ++side) {
            const std::vector<Step>& mine = side == 0 ? sa : sb;
            const std::vector<Step>& theirs = side == 0 ? sb : sa;
            for (const Step& m : mine) {
                bool matched = false;
                // prefer answers landing on identical configurations
                for (const Step& r : theirs)
                    if (r.act == m.act && r.to == m.to) {
                        matched = true;
                        break;
                    }
                for (const Step& r : theirs) {
                    if (matched) break;
                    if (r.act != m.act) continue;
                    matched = side == 0 ? prove(m.to, r.to, depth + 1)
                                        : prove(r.to, m.to, depth + 1);
                }
                if (!matched) {
                    ok = false;
                    break;
                }
            }
        }
        *st = ok ? Won : Failed;
        return ok;
    }

    StepCache steps_;
    std::size_t cap_, budget_, nodes_ = 0, relation_size_ = 0;
    std::unordered_map<PairKey, Status, PairKeyHash> status_;
};

}  // namespace

FiniteBisim finite_lts_bisim(const FiniteLts& lts, std::uint32_t s, std::uint32_t t) {
    std::size_t n = lts.out.size();
    FiniteBisim res;
    std::vector<std::uint32_t> block(n, 0);
    std::size_t blocks = 1, round = 0;
    while (true) {
        std::map<std::pair<std::uint32_t, std::vector<std::pair<ActId, std::uint32_t>>>,
                 std::uint32_t>
            ids;
        std::vector<std::uint32_t> nb(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::pair<ActId, std::uint32_t>> sig;
            sig.reserve(lts.out[i].size());
            for (auto [a, tgt] : lts.out[i]) sig.push_back({a, block[tgt]});
            std::sort(sig.begin(), sig.end());
            sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
            auto key = std::make_pair(block[i], std::move(sig));
            auto [it2, fresh] = ids.emplace(std::move(key), static_cast<std::uint32_t>(ids.size()));
            nb[i] = it2->second;
        }
        ++round;
        if (nb[s] != nb[t]) {
            res.bisimilar = false;
            res.round = round;
            return res;
        }
        if (ids.size() == blocks) {
            res.bisimilar = true;
            res.rounds_to_fixpoint = round - 1;
            std::map<std::uint32_t, std::size_t> sizes;
            for (std::uint32_t b : nb) ++sizes[b];
            res.relation_size = 0;
            for (auto& [b, sz] : sizes) res.relation_size += sz * (sz - 1) / 2;
            return res;
        }
        block = std::move(nb);
        blocks = ids.size();
    }
}

namespace {

// One full pipeline run at a fixed stack cap. Every definite verdict it
// produces is sound on the uncapped system: exceeding the cap counts against
// whichever player the current stage must be pessimistic about.
Verdict capped_bisim_single(const Pda& pda, const Config& c1, const Config& c2,
                            const CheckOptions& opts) {
    Verdict v;
    bool budget_hit = false;

    std::optional<ReachResult> rr;
    try {
        rr = reachable(pda, {c1, c2}, opts.stack_cap, opts.node_budget);
    } catch (const budget_error&) {
        budget_hit = true;
    }
    if (rr && rr->closed) {
        // exact on the closed finite restriction; roots are configs[0] and [1]
        FiniteLts lts = finite_restriction(pda, rr->configs);
        FiniteBisim fb = finite_lts_bisim(lts, 0, 1);
        if (fb.bisimilar) {
            v.kind = Verdict::Bisimilar;
            v.relation_size = fb.relation_size;
            return v;
        }
        v.kind = Verdict::NotBisimilar;
        v.round = fb.round;
        try {
            Game g(pda, opts.stack_cap, opts.node_budget);
            if (auto win = g.solve(c1, c2, fb.round)) v.witness = g.witness(c1, c2, *win);
        } catch (const budget_error&) {
        }
        return v;
    }

    try {
        CertProver cp(pda, opts.stack_cap, opts.node_budget);
        if (cp.prove_root(c1, c2)) {
            v.kind = Verdict::Bisimilar;
            v.relation_size = cp.relation_size();
            return v;
        }
    } catch (const budget_error&) {
        budget_hit = true;
    }

    try {
        Game g(pda, opts.stack_cap, opts.node_budget);
        for (std::size_t r = 1; r <= opts.max_rounds; ++r)
            if (auto win = g.solve(c1, c2, r)) {
                v.kind = Verdict::NotBisimilar;
                v.round = *win;
                v.witness = g.witness(c1, c2, *win);
                return v;
            }
    } catch (const budget_error&) {
        budget_hit = true;
    }

    v.kind = Verdict::Unknown;
    v.reason = budget_hit ? Verdict::BudgetHit : Verdict::CapHit;
    return v;
}

}  // namespace

Verdict capped_bisim(const Pda& pda, const Config& c1, const Config& c2,
                     const CheckOptions& opts) {
    Verdict v;
    if (c1 == c2) {
        v.kind = Verdict::Bisimilar;
        v.relation_size = 0;
        return v;
    }
    // Ascending cap ladder: small caps keep wrong-branch refutations cheap,
    // and any definite verdict at a small cap is already sound, so we only
    // pay for large caps when the small ones stay inconclusive.
    std::vector<std::size_t> rungs;
    for (std::size_t c = 16; c < opts.stack_cap; c *= 2) rungs.push_back(c);
    rungs.push_back(opts.stack_cap);
    for (std::size_t cap : rungs) {
        CheckOptions o = opts;
        o.stack_cap = cap;
        v = capped_bisim_single(pda, c1, c2, o);
        if (v.kind != Verdict::Unknown) return v;
    }
    return v;
}

Verdict approx_distinguish(const Pda& pda, const Config& c1, const Config& c2,
                           std::size_t max_rounds, std::size_t node_budget) {
    Verdict v;
    v.kind = Verdict::Unknown;
    v.reason = Verdict::BudgetHit;  // rounds or nodes exhausted
    try {
        Game g(pda, SIZE_MAX, node_budget);
        for (std::size_t r = 1; r <= max_rounds; ++r)
            if (auto win = g.solve(c1, c2, r)) {
                v.kind = Verdict::NotBisimilar;
                v.round = *win;
                v.witness = g.witness(c1, c2, *win);
                v.reason = Verdict::None;
                return v;
            }
    } catch (const budget_error&) {
    }
    return v;
}

NormedResult check_normed(const Pda& pda, const Config& root, std::size_t stack_cap,
                          std::size_t node_budget) {
    NormedResult res;
    ReachResult rr;
    try {
        rr = reachable(pda, {root}, stack_cap, node_budget);
    } catch (const budget_error&) {
        res.kind = NormedResult::Unknown;
        return res;
    }
    std::size_t n = rr.configs.size();
    std::unordered_map<Config, std::uint32_t, ConfigHash> idx;
    for (std::size_t i = 0; i < n; ++i) idx.emplace(rr.configs[i], static_cast<std::uint32_t>(i));

    std::vector<std::vector<std::uint32_t>> rev(n);
    std::vector<char> exits(n, 0);       // has a successor beyond the cap
    std::vector<char> dead_empty(n, 0);  // empty-stack deadlock
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Step> succs = step(pda, rr.configs[i]);
        dead_empty[i] = succs.empty() && rr.configs[i].stack.empty();
        for (const Step& s : succs) {
            if (s.to.stack.size() > stack_cap) {
                exits[i] = 1;
                continue;
            }
            rev[idx.at(s.to)].push_back(static_cast<std::uint32_t>(i));
        }
    }

    auto back_closure = [&](const std::vector<char>& seed) {
        std::vector<char> in(n, 0);
        std::deque<std::uint32_t> todo;
        for (std::size_t i = 0; i < n; ++i)
            if (seed[i]) {
                in[i] = 1;
                todo.push_back(static_cast<std::uint32_t>(i));
            }
        while (!todo.empty()) {
            std::uint32_t c = todo.front();
            todo.pop_front();
            for (std::uint32_t p : rev[c])
                if (!in[p]) {
                    in[p] = 1;
                    todo.push_back(p);
                }
        }
        return in;
    };

    // A configuration whose successors were cut by the cap counts as good:
    // the verdict is a claim about the capped horizon only.  Conversely, a
    // not-good configuration keeps its whole forward closure inside the
    // explored set without ever draining, so it is a sound witness for the
    // uncapped system too.
    std::vector<char> seed(n, 0);
    for (std::size_t i = 0; i < n; ++i) seed[i] = dead_empty[i] || exits[i];
    std::vector<char> good = back_closure(seed);
    for (std::size_t i = 0; i < n; ++i)
        if (!good[i]) {
            res.kind = NormedResult::NotNormed;
            res.witness = rr.configs[i];
            return res;
        }
    res.kind = NormedResult::Normed;
    return res;
}

}  // namespace pdab
