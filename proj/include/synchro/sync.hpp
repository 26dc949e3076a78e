#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <vector>

#include "synchro/errors.hpp"
#include "synchro/transducer.hpp"
#include "synchro/word.hpp"

namespace synchro {

namespace detail {

struct IntVecHash {
  size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

}  // namespace detail

// Minimal level at which the machine forces its state, or nullopt if it
// never does. A machine is strongly synchronizing at level k when the state
// reached by any length-k word is independent of the start state.
//
// Computed by the collapsing procedure on the underlying automaton (outputs
// ignored): each pass simultaneously merges all state classes that share a
// transition row; the machine synchronizes iff the passes reach a single
// class, and the number of passes is the minimal level. A pass that makes no
// progress while more than one class remains certifies non-synchronization.
inline std::optional<int> sync_level(const Transducer& t) {
  const int s = t.num_states();
  const int n = t.alphabet_size();
  std::vector<int> cls(s, 0);
  std::iota(cls.begin(), cls.end(), 0);
  int count = s;
  int level = 0;
  while (count > 1) {
    std::unordered_map<std::vector<int>, int, detail::IntVecHash> ids;
    ids.reserve(count * 2);
    std::vector<int> merged(s);
    std::vector<int> row(n);
    int fresh = 0;
    for (int q = 0; q < s; ++q) {
      for (int x = 0; x < n; ++x) row[x] = cls[t.next(x, q)];
      auto [it, inserted] = ids.emplace(row, fresh);
      if (inserted) ++fresh;
      merged[q] = it->second;
    }
    if (fresh == count) return std::nullopt;  // no pass can make progress later
    cls = std::move(merged);
    count = fresh;
    ++level;
  }
  return level;
}

// State forced by a word of length >= the machine's level. Internal helper:
// reads from state 0, which by synchronization is as good as any.
inline int forced_state(const Transducer& t, const Word& w) {
  return read_word(t, 0, w).first;
}

// The synchronizing map at level k: word rank (see word_rank) -> forced
// state, total on all n^k words. Requires the machine to synchronize at
// level <= k.
inline std::vector<int> sync_map(const Transducer& t, int k) {
  auto lvl = sync_level(t);
  if (!lvl) throw NotSynchronizing("sync_map: machine never synchronizes");
  if (*lvl > k)
    throw NotSynchronizingAtLevel("sync_map: minimal level is " + std::to_string(*lvl) +
                                  ", requested " + std::to_string(k));
  const std::int64_t total = word_count(t.alphabet_size(), k);
  std::vector<int> map(static_cast<size_t>(total));
  for (std::int64_t r = 0; r < total; ++r)
    map[static_cast<size_t>(r)] = forced_state(t, word_unrank(r, k, t.alphabet_size()));
  return map;
}

namespace detail {

// Forward state-set iteration: S_0 = Q, S_{t+1} = image of S_t under all
// letters. The sets decrease and stabilize at the core; the stabilization
// time is the core distance. Returns (membership mask, distance).
inline std::pair<std::vector<char>, int> stable_image(const Transducer& t) {
  const int s = t.num_states();
  const int n = t.alphabet_size();
  std::vector<char> cur(s, 1);
  int steps = 0;
  while (true) {
    std::vector<char> nxt(s, 0);
    for (int q = 0; q < s; ++q)
      if (cur[q])
        for (int x = 0; x < n; ++x) nxt[t.next(x, q)] = 1;
    if (nxt == cur) return {cur, steps};
    cur = std::move(nxt);
    ++steps;
    if (steps > s)
      throw Error("internal: state-set iteration failed to stabilize within the state count");
  }
}

}  // namespace detail

struct CoreResult {
  Transducer machine;
  std::vector<int> index_map;  // original state -> core index, or -1 outside the core
};

// Sub-machine on the image of the synchronizing map (equivalently, the
// stable forward image of the full state set). Labels and relative state
// order are preserved.
inline CoreResult core_with_map(const Transducer& t) {
  if (!sync_level(t)) throw NotSynchronizing("core: machine never synchronizes");
  auto [mask, dist] = detail::stable_image(t);
  (void)dist;
  const int s = t.num_states();
  const int n = t.alphabet_size();
  std::vector<int> index(s, -1);
  std::vector<std::string> labels;
  for (int q = 0; q < s; ++q)
    if (mask[q]) {
      index[q] = static_cast<int>(labels.size());
      labels.push_back(t.label(q));
    }
  std::vector<int> next(labels.size() * n);
  std::vector<int> out(labels.size() * n);
  for (int q = 0; q < s; ++q) {
    if (index[q] < 0) continue;
    for (int x = 0; x < n; ++x) {
      next[static_cast<size_t>(index[q]) * n + x] = index[t.next(x, q)];
      out[static_cast<size_t>(index[q]) * n + x] = t.out(x, q);
    }
  }
  return {Transducer(n, std::move(labels), std::move(next), std::move(out)), std::move(index)};
}

inline Transducer core(const Transducer& t) { return core_with_map(t).machine; }

inline bool is_core(const Transducer& t) {
  if (!sync_level(t)) return false;
  auto [mask, dist] = detail::stable_image(t);
  (void)dist;
  for (char m : mask)
    if (!m) return false;
  return true;
}

// Minimal k such that every length-k read from every state lands in the
// core. Zero exactly when the machine is core.
inline int core_dist(const Transducer& t) {
  if (!sync_level(t)) throw NotSynchronizing("core_dist: machine never synchronizes");
  return detail::stable_image(t).second;
}

// Larger of the minimal levels of the machine and its inverse, when both
// exist. nullopt when the machine is not invertible or either direction
// fails to synchronize.
inline std::optional<int> bisync_level(const Transducer& t) {
  auto fwd = sync_level(t);
  if (!fwd || !is_invertible(t)) return std::nullopt;
  auto bwd = sync_level(invert(t));
  if (!bwd) return std::nullopt;
  return std::max(*fwd, *bwd);
}

// Summary of the synchronization analysis of one machine. sync_map is
// filled only when the word table is reasonably small.
struct SyncProfile {
  bool is_synchronizing = false;
  std::optional<int> level;
  std::optional<std::vector<int>> map;  // rank-indexed, at the minimal level
  std::vector<int> core_states;         // original indices, ascending
  std::optional<int> distance;          // core distance
  std::optional<int> bisync;            // bi-synchronizing level
  bool one_way = false;                  // synchronizing but not bi-synchronizing

  static constexpr std::int64_t kMapLimit = 1 << 16;
};

inline SyncProfile profile(const Transducer& t) {
  SyncProfile p;
  auto lvl = sync_level(t);
  if (!lvl) return p;
  p.is_synchronizing = true;
  p.level = *lvl;
  auto [mask, dist] = detail::stable_image(t);
  for (int q = 0; q < t.num_states(); ++q)
    if (mask[q]) p.core_states.push_back(q);
  p.distance = dist;
  if (word_count(t.alphabet_size(), *lvl) <= SyncProfile::kMapLimit)
    p.map = sync_map(t, *lvl);
  p.bisync = bisync_level(t);
  p.one_way = is_invertible(t) && !p.bisync.has_value();
  return p;
}

// Checks the surjectivity condition under which a core machine's powers are
// all core: with k the minimal level and s the synchronizing map, for every
// length-k word G the map p -> s(lambda(G, p)) must be onto the state set.
inline bool check_core_power_condition(const Transducer& t) {
  auto lvl = sync_level(t);
  if (!lvl) throw NotSynchronizing("check_core_power_condition: machine never synchronizes");
  if (!is_core(t)) throw NotCore("check_core_power_condition: machine has non-core states");
  const int k = *lvl;
  const int s = t.num_states();
  auto smap = sync_map(t, k);
  const std::int64_t total = word_count(t.alphabet_size(), k);
  std::vector<char> hit(s);
  for (std::int64_t r = 0; r < total; ++r) {
    const Word g = word_unrank(r, k, t.alphabet_size());
    std::fill(hit.begin(), hit.end(), 0);
    int covered = 0;
    for (int p = 0; p < s; ++p) {
      const Word img = read_word(t, p, g).second;
      const int forced = smap[static_cast<size_t>(word_rank(img, t.alphabet_size()))];
      if (!hit[forced]) {
        hit[forced] = 1;
        ++covered;
      }
    }
    if (covered != s) return false;
  }
  return true;
}

}  // namespace synchro
