#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pdab {

using StateId = std::uint32_t;
using SymId = std::uint32_t;
using ActId = std::uint32_t;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline parse_error parse_error_at(std::size_t lineno, const std::string& why) {
    return parse_error("line " + std::to_string(lineno) + ": " + why);
}

// Thrown when an exploration or solver exceeds its node budget.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RuleKind { Internal, Push, Pop };

struct Rule {
    RuleKind kind;
    StateId src;
    ActId act;
    StateId dst;
    SymId sym = 0;  // pushed symbol (Push) / popped symbol (Pop); unused for Internal
};

// A pushdown system: control states, stack symbols, actions, and rules.
// Internal and push rules fire on any stack; a pop rule needs its symbol on
// top.  There are no silent actions.  Treat as immutable once in use; all
// operations on it are pure.
class Pda {
public:
    StateId state(const std::string& name);
    SymId symbol(const std::string& name);
    ActId action(const std::string& name);

    std::optional<StateId> find_state(const std::string& name) const;
    std::optional<SymId> find_symbol(const std::string& name) const;
    std::optional<ActId> find_action(const std::string& name) const;

    void add_internal(StateId p, ActId a, StateId q);
    void add_push(StateId p, ActId a, StateId q, SymId sym);
    void add_pop(StateId p, SymId sym, ActId a, StateId q);

    const std::string& state_name(StateId s) const { return state_names_[s]; }
    const std::string& symbol_name(SymId s) const { return symbol_names_[s]; }
    const std::string& action_name(ActId a) const { return action_names_[a]; }

    std::size_t num_states() const { return state_names_.size(); }
    std::size_t num_symbols() const { return symbol_names_.size(); }
    std::size_t num_actions() const { return action_names_.size(); }
    std::size_t num_rules() const { return rules_.size(); }

    // Size measure of the system: stack symbols + actions + rules.
    std::size_t size() const { return num_symbols() + num_actions() + num_rules(); }

    const std::vector<Rule>& rules() const { return rules_; }
    // Indices into rules() of the rules with source state p.
    const std::vector<std::uint32_t>& rules_from(StateId p) const;

private:
    template <typename Map>
    static std::uint32_t intern(Map& map, std::vector<std::string>& names,
                                const std::string& name);

    std::vector<std::string> state_names_, symbol_names_, action_names_;
    std::unordered_map<std::string, StateId> state_ids_;
    std::unordered_map<std::string, SymId> symbol_ids_;
    std::unordered_map<std::string, ActId> action_ids_;
    std::vector<Rule> rules_;
    std::vector<std::vector<std::uint32_t>> by_src_;
    static const std::vector<std::uint32_t> no_rules_;
};

struct Config {
    StateId state = 0;
    std::vector<SymId> stack;  // stack[0] is the top symbol
    bool operator==(const Config&) const = default;
};

struct ConfigHash {
    std::size_t operator()(const Config& c) const noexcept;
};

struct Step {
    ActId act;
    Config to;
};

// All single-step successors of c, in rule order.
std::vector<Step> step(const Pda& pda, const Config& c);

struct ReachResult {
    std::vector<Config> configs;  // breadth-first discovery order; includes roots
    bool closed = true;           // false if a successor exceeded the stack cap
};

// Breadth-first exploration keeping configurations whose stack height is at
// most stack_cap.  Deeper successors are dropped and mark the result as not
// closed.  Roots are always included.  Throws budget_error if more than
// node_budget configurations would be kept.
ReachResult reachable(const Pda& pda, const std::vector<Config>& roots,
                      std::size_t stack_cap, std::size_t node_budget);

// An explicit finite transition system (used for the exact finite checker).
struct FiniteLts {
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
    std::vector<std::vector<std::pair<ActId, std::uint32_t>>> out;  // per state
};

// Builds the explicit transition system over `configs` (edges leading outside
// the set are dropped; meant for closed exploration results).
FiniteLts finite_restriction(const Pda& pda, const std::vector<Config>& configs);

// Text format
// ---------------------------------------------------------------------------
//   state NAME / symbol NAME / action NAME     declarations (optional for
//                                              anything a rule mentions)
//   internal P A Q                             P --A--> Q
//   push P A Q SYM                             P --A--> Q pushing SYM
//   pop P SYM A Q                              P with top SYM --A--> Q popping
// Blank lines are skipped, as are comment lines whose first token starts
// with '#' ('#' elsewhere is an ordinary name, e.g. the guard action).
Pda parse_pda(std::istream& in);
Pda parse_pda_string(const std::string& text);
Pda parse_pda_file(const std::string& path);

// Canonical printer: sorted declarations, then sorted rule lines.  Stable
// under parse/print round trips.
std::string print_pda(const Pda& pda);

// "STATE | SYM SYM ..." (top first; empty stack prints as "STATE |").
std::string print_config(const Pda& pda, const Config& c);
// Parses the same shape; all names must already exist in the system.
Config parse_config(const Pda& pda, const std::string& text);

}  // namespace pdab
