#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synchro/errors.hpp"

namespace synchro {

// A finite word over the alphabet {0, ..., n-1}, leftmost letter read first.
using Word = std::vector<int>;

// Number of length-k words over n letters, as a checked 64-bit value.
inline std::int64_t word_count(int n, int k) {
  std::int64_t c = 1;
  for (int i = 0; i < k; ++i) {
    if (c > (INT64_MAX / n)) throw CapExceeded("word_count: n^k overflows");
    c *= n;
  }
  return c;
}

// Lexicographic rank of a word among all words of its length.
inline std::int64_t word_rank(const Word& w, int n) {
  std::int64_t r = 0;
  for (int x : w) {
    if (x < 0 || x >= n) throw LetterOutOfRange("word_rank: letter out of range");
    r = r * n + x;
  }
  return r;
}

// Inverse of word_rank for fixed length k.
inline Word word_unrank(std::int64_t rank, int k, int n) {
  Word w(k, 0);
  for (int i = k - 1; i >= 0; --i) {
    w[i] = static_cast<int>(rank % n);
    rank /= n;
  }
  return w;
}

// Compact rendering: digits for small alphabets, dot-separated otherwise.
// The empty word renders as "e".
inline std::string word_to_string(const Word& w, int n) {
  if (w.empty()) return "e";
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (n > 10 && i > 0) s += '.';
    s += std::to_string(w[i]);
  }
  return s;
}

inline Word word_from_digits(const std::string& digits) {
  Word w;
  w.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9') throw SyntaxError("word_from_digits: expected digits, got '" + digits + "'");
    w.push_back(c - '0');
  }
  return w;
}

}  // namespace synchro
