#include "pdab/counters.hpp"

#include <cstdlib>

namespace pdab {

BigInt tow(int level, int n, unsigned max_bits) {
    if (level < 0) throw counter_error("tow: negative level");
    if (n < 0) throw counter_error("tow: negative n");
    BigInt t = n;
    for (int l = 0; l < level; ++l) {
        // 2^t has t+1 bits; refuse to build numbers beyond the guard.
        if (t > max_bits - 1)
            throw counter_error("tow: result exceeds " + std::to_string(max_bits) + " bits");
        t = BigInt(1) << static_cast<unsigned>(t);
    }
    return t;
}

BigInt counter_length(int level, int n, unsigned max_bits) {
    if (level < 0) throw counter_error("counter_length: negative level");
    if (n < 0) throw counter_error("counter_length: negative n");
    BigInt len = n;
    for (int l = 1; l <= level; ++l)
        len = tow(l, n, max_bits) * (len + 1);
    return len;
}

std::string counter_sym(int bit, int level) {
    return std::to_string(bit) + "_" + std::to_string(level);
}

bool parse_counter_sym(const std::string& tok, int& bit, int& level) {
    auto us = tok.find('_');
    if (us == std::string::npos || us == 0 || us + 1 >= tok.size()) return false;
    std::string b = tok.substr(0, us), l = tok.substr(us + 1);
    if (b != "0" && b != "1") return false;
    for (char c : l)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    bit = b == "1" ? 1 : 0;
    level = std::atoi(l.c_str());
    return true;
}

namespace {

void append_canonical(std::vector<std::string>& out, int level, int n,
                      const BigInt& value, std::size_t max_len) {
    if (level == 0) {
        for (int i = 0; i < n; ++i) {
            if (out.size() >= max_len) throw counter_error("canonical_counter: word too long");
            out.push_back(counter_sym(static_cast<int>(bit_test(value, i)), 0));
        }
        return;
    }
    BigInt blocks = tow(level, n);
    for (BigInt i = 0; i < blocks; ++i) {
        append_canonical(out, level - 1, n, i, max_len);
        if (out.size() >= max_len) throw counter_error("canonical_counter: word too long");
        int bit = i < (1u << 30) ? static_cast<int>(bit_test(value, static_cast<unsigned>(i)))
                                 : 0;  // bits beyond range of the checked value are zero
        out.push_back(counter_sym(bit, level));
    }
}

}  // namespace

std::vector<std::string> canonical_counter(int level, int n, const BigInt& value,
                                           std::size_t max_len) {
    if (level < 0 || n < 0) throw counter_error("canonical_counter: negative argument");
    if (value < 0) throw counter_error("canonical_counter: negative value");
    BigInt bits = tow(level, n);
    if (bits <= (1u << 26) && value >> static_cast<unsigned>(bits) != 0)
        throw counter_error("canonical_counter: value out of range for level/n");
    BigInt len = counter_length(level, n);
    if (len > max_len) throw counter_error("canonical_counter: word too long to materialize");
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(len));
    append_canonical(out, level, n, value, max_len);
    return out;
}

namespace {

// Parses one level-`level` counter starting at word[pos]; advances pos.
BigInt parse_counter(const std::vector<std::string>& word, std::size_t& pos,
                     int level, int n) {
    auto need = [&](int want_level) -> int {
        if (pos >= word.size())
            throw counter_error("counter_value: word ends early at token " + std::to_string(pos));
        int bit, lv;
        if (!parse_counter_sym(word[pos], bit, lv))
            throw counter_error("counter_value: token " + std::to_string(pos) + " ('" +
                                word[pos] + "') is not a counter bit");
        if (lv != want_level)
            throw counter_error("counter_value: token " + std::to_string(pos) + " ('" +
                                word[pos] + "') has level " + std::to_string(lv) +
                                ", expected " + std::to_string(want_level));
        ++pos;
        return bit;
    };

    BigInt value = 0;
    if (level == 0) {
        for (int i = 0; i < n; ++i)
            if (need(0)) bit_set(value, i);
        return value;
    }
    BigInt blocks = tow(level, n);
    for (BigInt i = 0; i < blocks; ++i) {
        std::size_t block_start = pos;
        BigInt idx = parse_counter(word, pos, level - 1, n);
        if (idx != i)
            throw counter_error("counter_value: position sub-counter at token " +
                                std::to_string(block_start) + " holds wrong index");
        if (need(level)) bit_set(value, static_cast<unsigned>(i));
    }
    return value;
}

}  // namespace

BigInt counter_value(const std::vector<std::string>& word, int level, int n) {
    if (level < 0 || n < 0) throw counter_error("counter_value: negative argument");
    std::size_t pos = 0;
    BigInt v = parse_counter(word, pos, level, n);
    if (pos != word.size())
        throw counter_error("counter_value: trailing tokens starting at " + std::to_string(pos));
    return v;
}

}  // namespace pdab
