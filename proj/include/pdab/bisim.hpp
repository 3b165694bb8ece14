#pragma once

#include "pdab/lts.hpp"

#include <optional>

namespace pdab {

// One attacker move in a distinguishing play: which side moved and the action.
struct Witness {
    struct Move {
        char side;  // 'L' or 'R'
        std::string action;
    };
    std::vector<Move> moves;
    std::string to_string() const;
};

struct Verdict {
    enum Kind { Bisimilar, NotBisimilar, Unknown };
    enum Reason { None, CapHit, BudgetHit };

    Kind kind = Unknown;
    Reason reason = None;
    std::size_t relation_size = 0;  // Bisimilar: size of the witnessing relation
    std::size_t round = 0;          // NotBisimilar: least distinguishing round
    Witness witness;                // NotBisimilar: a winning attacker play

    std::string to_string() const;  // "Bisimilar" / "NotBisimilar(r=5)" / "Unknown(cap-hit)"
};

struct CheckOptions {
    std::size_t stack_cap = 64;
    std::size_t max_rounds = 256;
    std::size_t node_budget = 1'000'000;
};

// Decides bisimilarity of two configurations of an (in general infinite-state)
// pushdown system, at desk scale:
//   0. identical configurations are bisimilar;
//   1. if the joint reachable set within the stack cap is closed, the answer
//      is computed exactly by partition refinement (the reported round is the
//      first approximation level separating the pair);
//   2. otherwise a finite bisimulation-up-to-identity certificate is searched
//      within the cap: a finite relation R containing the pair such that
//      every move from a pair in R is answered into R or into an identical
//      pair.  R plus the identity is then a bisimulation of the full system,
//      so Bisimilar answers are sound without any closure assumption;
//   3. otherwise an iteratively deepened game search looks for an attacker
//      win within max_rounds; configurations beyond the cap count as
//      defender wins there, so NotBisimilar answers are sound too.
// If all three stages are inconclusive the verdict is Unknown(cap-hit), or
// Unknown(budget) if a node budget interrupted any stage.
Verdict capped_bisim(const Pda& pda, const Config& c1, const Config& c2,
                     const CheckOptions& opts);

// Stage 3 alone, without a stack cap: searches for a distinguishing attacker
// strategy of at most max_rounds rounds.  Never answers Bisimilar.
Verdict approx_distinguish(const Pda& pda, const Config& c1, const Config& c2,
                           std::size_t max_rounds, std::size_t node_budget);

// Exact bisimilarity on an explicit finite system via synchronized partition
// refinement.  On separation, `round` is the first refinement round (=
// game-approximation level) distinguishing the two states.
struct FiniteBisim {
    bool bisimilar = false;
    std::size_t round = 0;          // separation round when not bisimilar
    std::size_t relation_size = 0;  // same-block pairs when bisimilar
    std::size_t rounds_to_fixpoint = 0;
};
FiniteBisim finite_lts_bisim(const FiniteLts& lts, std::uint32_t s, std::uint32_t t);

// Normedness over the capped reachable set E of `root`: a configuration is
// good if, moving inside E, it can reach an empty-stack deadlock or a
// configuration with a successor beyond the cap (the verdict is a claim
// about the capped horizon, so escaping it counts as good).  All of E good
// => Normed at this horizon.  A bad configuration keeps its entire forward
// closure inside E without ever draining, so it witnesses NotNormed for the
// uncapped system as well.  Unknown only when the node budget ran out.
struct NormedResult {
    enum Kind { Normed, NotNormed, Unknown };
    Kind kind = Unknown;
    std::optional<Config> witness;  // NotNormed: a configuration with no exit
};
NormedResult check_normed(const Pda& pda, const Config& root, std::size_t stack_cap,
                          std::size_t node_budget);

}  // namespace pdab
