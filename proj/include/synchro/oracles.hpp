#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "synchro/errors.hpp"
#include "synchro/transducer.hpp"
#include "synchro/word.hpp"

namespace synchro {

// Literal-definition reference implementations. Deliberately naive: each
// one takes a different route than the production code it double-checks.

// Smallest k <= cap such that every length-k word drives all states to one
// state, found by enumerating the words outright.
inline std::optional<int> brute_force_sync_level(const Transducer& t, int cap) {
  const int n = t.alphabet_size();
  const int s = t.num_states();
  for (int k = 0; k <= cap; ++k) {
    const std::int64_t total = word_count(n, k);
    bool all_force = true;
    for (std::int64_t r = 0; r < total && all_force; ++r) {
      const Word w = word_unrank(r, k, n);
      int target = -1;
      for (int q = 0; q < s && all_force; ++q) {
        int at = q;
        for (int x : w) at = t.next(x, at);
        if (target < 0)
          target = at;
        else
          all_force = target == at;
      }
    }
    if (all_force) return k;
  }
  return std::nullopt;
}

inline std::optional<int> brute_force_sync_level(const Transducer& t) {
  return brute_force_sync_level(t, t.num_states());
}

// Core by its word characterization: the states hit by length-k forcing
// words. Empty when the machine never synchronizes within the cap.
inline std::optional<std::vector<int>> brute_force_core(const Transducer& t) {
  const auto k = brute_force_sync_level(t);
  if (!k) return std::nullopt;
  const int n = t.alphabet_size();
  std::vector<char> hit(t.num_states(), 0);
  const std::int64_t total = word_count(n, *k);
  for (std::int64_t r = 0; r < total; ++r) {
    const Word w = word_unrank(r, *k, n);
    int at = 0;
    for (int x : w) at = t.next(x, at);
    hit[at] = 1;
  }
  std::vector<int> states;
  for (int q = 0; q < t.num_states(); ++q)
    if (hit[q]) states.push_back(q);
  return states;
}

// eq[q1][q2] says whether q1 in a and q2 in b produce identical outputs on
// every word up to the given length. Straightforward pair dynamic program,
// iterated until the requested depth or stabilization.
inline std::vector<std::vector<char>> bounded_depth_equivalent(const Transducer& a,
                                                               const Transducer& b, int depth) {
  if (a.alphabet_size() != b.alphabet_size())
    throw AlphabetMismatch("bounded_depth_equivalent: machines read different alphabets");
  const int n = a.alphabet_size();
  std::vector<std::vector<char>> eq(a.num_states(),
                                    std::vector<char>(b.num_states(), 1));
  for (int d = 0; d < depth; ++d) {
    auto next = eq;
    bool changed = false;
    for (int q = 0; q < a.num_states(); ++q)
      for (int p = 0; p < b.num_states(); ++p) {
        if (!eq[q][p]) continue;
        bool ok = true;
        for (int x = 0; x < n && ok; ++x)
          ok = a.out(x, q) == b.out(x, p) && eq[a.next(x, q)][b.next(x, p)];
        if (!ok) {
          next[q][p] = 0;
          changed = true;
        }
      }
    eq = std::move(next);
    if (!changed) break;
  }
  return eq;
}

// Pascal-triangle binomial, exact, overflow-checked.
inline std::int64_t binom(int a, int b) {
  if (b < 0 || b > a) return 0;
  std::vector<std::int64_t> row(static_cast<size_t>(a) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= a; ++i)
    for (int j = i; j >= 1; --j) {
      if (row[j] > INT64_MAX - row[j - 1]) throw CapExceeded("binom: value exceeds 64-bit range");
      row[j] += row[j - 1];
    }
  return row[static_cast<size_t>(b)];
}

}  // namespace synchro
