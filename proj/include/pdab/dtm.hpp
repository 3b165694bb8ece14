#pragma once

#include "pdab/reduction.hpp"

#include <cstdint>
#include <map>
#include <optional>

namespace pdab {

struct dtm_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A deterministic Turing machine run in a fixed tape window of `space` cells
// (the head may never leave it).  The transition table must be total on
// non-halting states; accept and reject states have no outgoing arrows.
struct DtmSpec {
    std::vector<std::string> states;
    std::vector<std::string> tape_syms;
    std::string blank;
    std::string init_state, accept_state, reject_state;

    struct Arrow {
        std::string state, write;
        int move = 0;  // -1 left, 0 stay, +1 right
    };
    std::map<std::pair<std::string, std::string>, Arrow> delta;
    int space = 1;

    std::size_t state_index(const std::string& name) const;
    std::size_t sym_index(const std::string& name) const;
};

struct DtmConfig {
    int state = 0;  // index into states
    int head = 0;
    std::vector<int> tape;  // indices into tape_syms; length == space
    bool operator==(const DtmConfig&) const = default;
};

// One step.  nullopt when the configuration is halting (accept/reject) or the
// head would leave the tape window.
std::optional<DtmConfig> dtm_step(const DtmSpec& dtm, const DtmConfig& c);

struct DtmRun {
    std::vector<DtmConfig> configs;  // initial configuration first
    bool accepted = false;
    bool rejected = false;
    bool hit_bound = false;
};

DtmRun run_dtm(const DtmSpec& dtm, std::size_t max_steps = 1u << 20);

// The encoding packs each tape cell into a fixed-width block of bits; cell 0
// and the remaining cells use separate code tables so that the initial
// configuration reads as the all-ones word and the accepting configuration as
// the all-zero word.
struct DtmEncoding {
    TransducerMachine machine;
    int block_bits = 0;  // bits per tape cell
    int cells = 0;       // tape window size

    // Cell-content codes, indexed by content id:
    //   plain symbol s            -> id s
    //   head pair (state q, s)    -> id num_syms + q * num_syms + s
    std::vector<std::uint64_t> code_cell0, code_tail;

    std::vector<int> encode_config(const DtmSpec& dtm, const DtmConfig& c) const;
};

// Encodes the machine as a step machine with word width block_bits * space,
// which must equal tow(k, n) with n >= states + tape symbols... precisely:
// block_bits = n + |states| + |tape_syms|.  The machine's run from the
// all-ones word tracks the DTM run and dead-ends at the all-zero word exactly
// when the DTM accepts.  The DTM must halt within its configuration universe.
DtmEncoding encode_dtm(const DtmSpec& dtm, int k, int n);

// Text format:
//   states: NAME...
//   tape: SYM...
//   blank: SYM
//   init: NAME / accept: NAME / reject: NAME
//   space: N
//   delta STATE SYM -> STATE SYM L|R|S
DtmSpec parse_dtm(std::istream& in);
DtmSpec parse_dtm_file(const std::string& path);
std::string print_dtm(const DtmSpec& dtm);

// Two-cell machine accepting in two steps; fits k = 2, n = 2 (word width 16).
DtmSpec toy_dtm();

}  // namespace pdab
