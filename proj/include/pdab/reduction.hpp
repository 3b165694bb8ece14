#pragma once

#include "pdab/counters.hpp"
#include "pdab/fsa.hpp"
#include "pdab/lts.hpp"
#include "pdab/macros.hpp"

#include <iosfwd>

namespace pdab {

struct reduction_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A step machine: two letter-to-letter transducers over {0,1} and a word
// width.  From word z the machine moves to the unique z' with
// t2(z') == t1(z); a word with no such z' is a dead end.  The run starts at
// the all-ones word.
struct TransducerMachine {
    std::size_t ell = 0;
    Transducer t1, t2;
};

struct MachineRun {
    std::vector<std::vector<int>> words;  // visited words, all-ones first
    bool dead_end = false;                // run ended in a word with no successor
    bool hit_step_bound = false;
};

// Simulates the run from 1^ell.  Enumerates candidate successors, so ell is
// limited (<= 20).  Throws reduction_error if some step has two successors
// or the run revisits a word.
MachineRun simulate_machine(const TransducerMachine& tm, std::size_t max_steps = 1u << 20);

// True if the all-zero word has no successor (required for the reduction's
// headline semantics: instance bisimilar iff the run dead-ends at 0^ell).
bool zero_word_is_dead_end(const TransducerMachine& tm);

// The two counter-increment transducers of a given level: both read a
// low-bit-first level-`level` counter followed by one level-(level+1) bit and
// emit the bits of the counter's value plus 0 / plus 1, ending with 'a', or
// 'b' if the +1 overflows.  Inputs outside the expected shape fall into a
// sink that keeps emitting 'a'.
std::pair<Transducer, Transducer> make_inc_transducers(int level);

struct ReductionStats {
    std::size_t macros = 0;
    std::size_t states = 0;
    std::size_t symbols = 0;
    std::size_t actions = 0;
    std::size_t rules = 0;
    std::size_t size = 0;  // symbols + actions + rules
};

// A pushdown bisimilarity instance: the machine run from 1^tow(k,n)
// dead-ends at the all-zero word iff left_start | (empty stack) is bisimilar
// to right_start | (empty stack).
struct Reduction {
    Pda pda;
    std::string left_start = "l:start";
    std::string right_start = "r:start";
    ReductionStats stats;
};

// Builds the instance for a machine with ell == tow(k, n).  The machine's
// output letters must avoid the reserved actions {0, 1, #, a, b}.  With
// `normed` the instance additionally drains every reachable configuration to
// an empty-stack deadlock (stop states pop down at matched speeds instead of
// freezing).
Reduction build_reduction(const TransducerMachine& tm, int k, int n, bool normed);

// Machine text format:
//   ell: N
//   transducer T1 { ... }     (block format from fsa.hpp)
//   transducer T2 { ... }
TransducerMachine parse_machine(std::istream& in);
TransducerMachine parse_machine_file(const std::string& path);
std::string print_machine(const TransducerMachine& tm);

// Bundled desk-scale instances (ell = 2 = tow(1,1), for k = 1, n = 1).
TransducerMachine toy_machine_bisimilar();
TransducerMachine toy_machine_nonbisimilar();

}  // namespace pdab
