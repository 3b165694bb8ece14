#pragma once

#include "pdab/fsa.hpp"
#include "pdab/lts.hpp"

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace pdab {

// A pair of control states tracked in lockstep on the two sides of a
// bisimilarity instance.  pair_of("x") = {"l:x", "r:x"}.
struct StatePair {
    std::string left, right;
};
StatePair pair_of(const std::string& base);

// Pops one symbol and plays a fixed action word: the pop carries the first
// action, the rest are internal moves through fresh states.
struct ChainMacro {
    std::string src;
    std::string pop_sym;
    std::vector<std::string> actions;  // non-empty
    std::string dst;
};

// From src, a '#' move enters a product of the guard automaton and the
// transducer; the product pops stack symbols (= transducer input letters)
// while playing the transducer output, and a '#' move exits to dst exactly
// when the popped word so far matches the guard (shortest match, since
// accepting product states have no pop rules).  Stack symbols outside the
// transducer's input alphabet deadlock the product.
struct GuardedPopMacro {
    std::string src, dst;
    Re guard;          // classes must be subsets of trans.in_alpha
    Transducer trans;  // total, non-erasing
};

// Both sides of the pair push `word` (given top-first, like stack prints)
// over 'a' moves and land on the dst pair.
struct PairPushMacro {
    StatePair src, dst;
    std::vector<std::string> word;
};

struct PairOption {
    StatePair target;
    std::vector<std::string> word;  // pushed word, top-first
};

// The side that moves first loses the choice: middle states let the other
// player pick which option both sides commit to.  DefChoice gives the choice
// to the player defending equality, AttChoice to the player attacking it.
struct DefChoiceMacro {
    StatePair src;
    std::vector<PairOption> options;  // non-empty; >2 options nest right
};

struct AttChoiceMacro {
    StatePair src;
    std::vector<PairOption> options;
};

using MacroRule =
    std::variant<ChainMacro, GuardedPopMacro, PairPushMacro, DefChoiceMacro, AttChoiceMacro>;

struct ExpandStats {
    std::size_t rules_added = 0;
    std::size_t states_added = 0;
};

// Expands the macro list into concrete rules.  Fresh states of macro i are
// named "g<i>.<tag>", so expansion is deterministic and re-runs are
// byte-stable.  Throws fsa_error / parse_error on malformed macros.
ExpandStats expand_macros(Pda& pda, const std::vector<MacroRule>& macros);

// Text format for macro lists:
//   class NAME = SYM...
//   transducer NAME { ... }        (block format from fsa.hpp)
//   chain SRC POPSYM DST ACT...
//   guarded SRC DST TRANSDUCER REGEX
//   pairpush SRC DST [SYM...]
//   def SRC :: TGT [SYM...] | TGT [SYM...] | ...
//   att SRC :: TGT [SYM...] | ...
// REGEX uses class/symbol names, juxtaposition, '|', '*', parentheses.
// chain/guarded name raw control states; pairpush/def/att name pair bases.
std::vector<MacroRule> parse_macro_file(std::istream& in);
std::vector<MacroRule> parse_macro_file(const std::string& path);

}  // namespace pdab
