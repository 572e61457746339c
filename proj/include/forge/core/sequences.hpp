#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "forge/core/error.hpp"

namespace forge {

// A finite sequence of naturals; bit strings are sequences over {0,1}.
using Seq = std::vector<int>;

inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

// Number of sequences over {0..b-1} of length strictly below k.
inline std::uint64_t count_shorter(std::uint64_t b, std::size_t k) {
  std::uint64_t total = 0;
  for (std::size_t m = 0; m < k; ++m) total += ipow(b, static_cast<unsigned>(m));
  return total;
}

// Position of s among sequences of the same length over {0..b-1}, read as a
// base-b numeral.
inline std::uint64_t lex_position(const Seq& s, std::uint64_t b) {
  std::uint64_t pos = 0;
  for (int x : s) {
    if (x < 0 || static_cast<std::uint64_t>(x) >= b) throw PreconditionError("sequence entry out of alphabet");
    pos = pos * b + static_cast<std::uint64_t>(x);
  }
  return pos;
}

// Length-lexicographic rank of s over {0..b-1}^{<omega}: shorter sequences
// first, then lexicographic. Used both for the sequence rank (`#`) and, with
// b = 2, for the bit-string rank (`theta`), which is increasing in length.
inline std::uint64_t length_lex_rank(const Seq& s, std::uint64_t b) {
  return count_shorter(b, s.size()) + lex_position(s, b);
}

inline Seq unrank_length_lex(std::uint64_t rank, std::uint64_t b) {
  std::size_t k = 0;
  while (rank >= ipow(b, static_cast<unsigned>(k))) {
    rank -= ipow(b, static_cast<unsigned>(k));
    ++k;
  }
  Seq s(k, 0);
  for (std::size_t i = k; i-- > 0;) {
    s[i] = static_cast<int>(rank % b);
    rank /= b;
  }
  return s;
}

// All sequences of length exactly k over {0..b-1}, lexicographic.
inline std::vector<Seq> sequences_of_length(std::size_t k, int b) {
  std::vector<Seq> out;
  std::uint64_t total = ipow(static_cast<std::uint64_t>(b), static_cast<unsigned>(k));
  out.reserve(total);
  for (std::uint64_t pos = 0; pos < total; ++pos) {
    Seq s(k, 0);
    std::uint64_t r = pos;
    for (std::size_t i = k; i-- > 0;) {
      s[i] = static_cast<int>(r % static_cast<std::uint64_t>(b));
      r /= static_cast<std::uint64_t>(b);
    }
    out.push_back(std::move(s));
  }
  return out;
}

// {0..b-1}^{<=d} in length-lex order, so out[i] has rank i.
inline std::vector<Seq> sequences_up_to(std::size_t d, int b) {
  std::vector<Seq> out;
  for (std::size_t k = 0; k <= d; ++k) {
    auto level = sequences_of_length(k, b);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

// {0..b-1}^{<=d} in lexicographic (pre-order) order: t comes before t^i.
inline std::vector<Seq> sequences_preorder(std::size_t d, int b) {
  std::vector<Seq> out;
  Seq cur;
  auto rec = [&](auto&& self) -> void {
    out.push_back(cur);
    if (cur.size() == d) return;
    for (int i = 0; i < b; ++i) {
      cur.push_back(i);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

inline bool is_prefix(const Seq& p, const Seq& s) {
  if (p.size() > s.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != s[i]) return false;
  return true;
}

inline Seq prefix(const Seq& s, std::size_t k) { return Seq(s.begin(), s.begin() + static_cast<long>(k)); }

// Pointwise s <= t on equal-length sequences.
inline bool pointwise_leq(const Seq& s, const Seq& t) {
  if (s.size() != t.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] > t[i]) return false;
  return true;
}

// Bit strings print as "0110"; the empty string prints as "".
inline std::string bits_to_string(const Seq& u) {
  std::string out;
  out.reserve(u.size());
  for (int x : u) out.push_back(x ? '1' : '0');
  return out;
}

inline Seq bits_from_string(const std::string& text) {
  Seq u;
  u.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw MalformedInput("", "bit string expected, got '" + text + "'");
    u.push_back(c - '0');
  }
  return u;
}

// Numeric sequences print comma-separated: "0,1,1"; empty prints as "".
inline std::string seq_to_string(const Seq& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(s[i]);
  }
  return out;
}

}  // namespace forge
