#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace pdab {

using BigInt = boost::multiprecision::cpp_int;

struct counter_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// tow(0, n) = n, tow(level, n) = 2^tow(level-1, n).
// Throws counter_error once a result would need more than max_bits bits.
BigInt tow(int level, int n, unsigned max_bits = 1u << 20);

// Number of stack symbols in a level-`level` counter word:
//   len(0) = n,  len(level) = tow(level, n) * (len(level-1) + 1).
BigInt counter_length(int level, int n, unsigned max_bits = 1u << 20);

// Stack-symbol spelling for counter bits: counter_sym(1, 2) == "1_2".
std::string counter_sym(int bit, int level);

// Parses "0_3" style symbols; returns false if tok is not of that shape.
bool parse_counter_sym(const std::string& tok, int& bit, int& level);

// The canonical counter word holding `value`, top of stack first (the
// low-order bit of `value` is the first level-`level` bit in the word; each
// level>=1 bit is preceded by the canonical lower-level counter holding its
// position).  Throws counter_error if value is out of range or the word
// would exceed max_len symbols.
std::vector<std::string> canonical_counter(int level, int n, const BigInt& value,
                                           std::size_t max_len = 10'000'000);

// Value stored in a counter word.  Validates the full canonical shape
// (including position sub-counters) and throws counter_error naming the
// first offending token position otherwise.
BigInt counter_value(const std::vector<std::string>& word, int level, int n);

}  // namespace pdab
