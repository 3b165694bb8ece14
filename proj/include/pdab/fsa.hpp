#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pdab {

struct fsa_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Regular expressions whose atoms are classes (finite sets) of symbols.
struct ClassRegex;
using Re = std::shared_ptr<const ClassRegex>;

struct ClassRegex {
    enum Kind { Class, Concat, Union, Star } kind;
    std::vector<std::string> syms;  // Class only
    Re left, right;                 // Concat/Union use both, Star uses left
};

Re re_class(std::vector<std::string> syms);
Re re_cat(Re a, Re b);
Re re_alt(Re a, Re b);
Re re_star(Re a);
inline Re re_eps() { return re_star(re_class({})); }  // empty-class star = {empty word}

// A complete deterministic finite automaton over a named alphabet.
struct Dfa {
    std::vector<std::string> alphabet;
    std::unordered_map<std::string, std::size_t> alpha_index;
    std::size_t init = 0;
    std::vector<bool> accepting;
    std::vector<std::vector<std::size_t>> delta;  // [state][letter index]

    std::size_t num_states() const { return delta.size(); }
    std::size_t letter(const std::string& name) const;
};

// Thompson construction + subset construction + Hopcroft minimization.
// Every class mentioned by the regex must be a subset of `alphabet`.
// The result is complete (a dead state is materialized if needed), has only
// init-reachable states, and is numbered canonically (breadth-first from the
// initial state), so equal languages give byte-equal automata.
Dfa regex_to_min_dfa(const Re& re, const std::vector<std::string>& alphabet);

// Hopcroft minimization of a complete DFA (also canonicalizes numbering).
Dfa minimize_dfa(const Dfa& dfa);

bool dfa_accepts(const Dfa& dfa, const std::vector<std::string>& word);

// A real-time transducer: reads one input letter per step, appends a fixed
// output word (possibly empty) per edge.  The transition function is total
// over in_alpha.
struct Transducer {
    struct Edge {
        std::size_t next = 0;
        std::vector<std::string> out;
    };

    std::vector<std::string> state_names;
    std::size_t init = 0;
    std::vector<std::string> in_alpha;
    std::unordered_map<std::string, std::size_t> in_index;
    std::vector<std::string> out_alpha;
    std::vector<std::vector<Edge>> delta;  // [state][input letter index]

    std::size_t num_states() const { return delta.size(); }
    bool letter_to_letter() const;  // every edge emits exactly one letter
    bool non_erasing() const;       // every edge emits at least one letter
    // Size measure: states + input letters + output letters + total output length.
    std::size_t size() const;
    std::size_t letter(const std::string& name) const;
};

// Runs the transducer on input (letters must belong to in_alpha).
std::vector<std::string> run_transducer(const Transducer& t,
                                        const std::vector<std::string>& input);

// Single-state transducer mapping each input letter to a fixed output word.
Transducer hom_transducer(const std::vector<std::pair<std::string, std::vector<std::string>>>& image);

// Interleaved product of two transducers with disjoint input alphabets: each
// component keeps its own state and consumes only letters of its own
// alphabet; outputs appear in input order.  Only reachable pair states are
// materialized.
Transducer shuffle(const Transducer& a, const Transducer& b);

// Renames input letters (ren must be injective on in_alpha; letters missing
// from ren keep their names).
Transducer relabel_inputs(const Transducer& t, const std::map<std::string, std::string>& ren);

// Text block format (the caller consumes the "transducer NAME {" header):
//   in: LETTER...
//   out: LETTER...
//   init: STATE
//   SRC IN -> DST [OUT...]
//   }
Transducer parse_transducer_block(std::istream& in, std::size_t& lineno);
std::string print_transducer_block(const Transducer& t);

}  // namespace pdab
