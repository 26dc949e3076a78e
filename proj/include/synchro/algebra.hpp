#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "synchro/errors.hpp"
#include "synchro/periodic_word.hpp"
#include "synchro/sync.hpp"
#include "synchro/transducer.hpp"
#include "synchro/word.hpp"

namespace synchro {

// Synchronous composition: the first machine reads the input, the second
// reads the first's output. State (p, q) is stored at index p * |B| + q and
// labeled by joining the component labels with a comma.
inline Transducer product(const Transducer& a, const Transducer& b) {
  if (a.alphabet_size() != b.alphabet_size())
    throw AlphabetMismatch("product: alphabets differ (" + std::to_string(a.alphabet_size()) +
                           " vs " + std::to_string(b.alphabet_size()) + ")");
  const int n = a.alphabet_size();
  const int sa = a.num_states();
  const int sb = b.num_states();
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(sa) * sb);
  std::unordered_set<std::string> used;
  for (int i = 0; i < sa; ++i)
    for (int j = 0; j < sb; ++j) {
      // '#' is reserved for comments in the text format, so collisions get '~'
      std::string l = a.label(i) + "," + b.label(j);
      int suffix = 2;
      while (!used.insert(l).second) l = a.label(i) + "," + b.label(j) + "~" + std::to_string(suffix++);
      labels.push_back(std::move(l));
    }
  std::vector<int> next(static_cast<size_t>(sa) * sb * n);
  std::vector<int> out(static_cast<size_t>(sa) * sb * n);
  for (int i = 0; i < sa; ++i)
    for (int j = 0; j < sb; ++j) {
      const size_t base = (static_cast<size_t>(i) * sb + j) * n;
      for (int x = 0; x < n; ++x) {
        const int y = a.out(x, i);
        next[base + x] = a.next(x, i) * sb + b.next(y, j);
        out[base + x] = b.out(y, j);
      }
    }
  return Transducer(n, std::move(labels), std::move(next), std::move(out));
}

inline constexpr std::int64_t kDefaultPowerCap = std::int64_t(1) << 22;

// Raw m-th power as an iterated product; states are m-tuples. Guarded by a
// state budget because the size is |Q|^m.
inline Transducer power(const Transducer& a, int m, std::int64_t max_states = kDefaultPowerCap) {
  if (m < 1) throw Error("power: exponent must be at least 1");
  std::int64_t states = 1;
  for (int i = 0; i < m; ++i) {
    states *= a.num_states();
    if (states > max_states)
      throw CapExceeded("power: " + std::to_string(a.num_states()) + "^" + std::to_string(m) +
                        " states exceed the budget of " + std::to_string(max_states));
  }
  Transducer r = a;
  for (int i = 2; i <= m; ++i) r = product(r, a);
  return r;
}

struct Partition {
  std::vector<int> cls;  // state -> class, classes numbered by first occurrence
  int count = 0;
};

// Partition of the states into classes inducing the same output for every
// input word (equivalently, the same map on one-sided infinite sequences).
// Moore-style refinement: start from single-letter output rows, then split
// by successor classes until stable.
inline Partition omega_partition(const Transducer& t) {
  const int s = t.num_states();
  const int n = t.alphabet_size();
  std::vector<int> cls(s);
  int count = 0;
  {
    std::unordered_map<std::vector<int>, int, detail::IntVecHash> ids;
    std::vector<int> row(n);
    for (int q = 0; q < s; ++q) {
      for (int x = 0; x < n; ++x) row[x] = t.out(x, q);
      auto [it, inserted] = ids.emplace(row, count);
      if (inserted) ++count;
      cls[q] = it->second;
    }
  }
  while (true) {
    std::unordered_map<std::vector<int>, int, detail::IntVecHash> ids;
    ids.reserve(count * 2);
    std::vector<int> refined(s);
    std::vector<int> key(n + 1);
    int fresh = 0;
    for (int q = 0; q < s; ++q) {
      key[0] = cls[q];
      for (int x = 0; x < n; ++x) key[x + 1] = cls[t.next(x, q)];
      auto [it, inserted] = ids.emplace(key, fresh);
      if (inserted) ++fresh;
      refined[q] = it->second;
    }
    if (fresh == count) return {std::move(refined), fresh};
    cls = std::move(refined);
    count = fresh;
  }
}

// Quotient by a partition whose classes are closed under transitions and
// outputs. Class c keeps the label of its first member.
inline Transducer quotient(const Transducer& t, const Partition& part) {
  const int n = t.alphabet_size();
  std::vector<int> rep(part.count, -1);
  for (int q = 0; q < t.num_states(); ++q)
    if (rep[part.cls[q]] < 0) rep[part.cls[q]] = q;
  std::vector<std::string> labels;
  labels.reserve(part.count);
  for (int c = 0; c < part.count; ++c) labels.push_back(t.label(rep[c]));
  std::vector<int> next(static_cast<size_t>(part.count) * n);
  std::vector<int> out(static_cast<size_t>(part.count) * n);
  for (int c = 0; c < part.count; ++c)
    for (int x = 0; x < n; ++x) {
      next[static_cast<size_t>(c) * n + x] = part.cls[t.next(x, rep[c])];
      out[static_cast<size_t>(c) * n + x] = t.out(x, rep[c]);
    }
  return Transducer(n, std::move(labels), std::move(next), std::move(out));
}

inline Transducer minimize(const Transducer& t) { return quotient(t, omega_partition(t)); }

// Do two states (possibly of different machines) induce the same map on
// infinite input sequences?
inline bool omega_equivalent(const Transducer& t1, int q1, const Transducer& t2, int q2) {
  if (t1.alphabet_size() != t2.alphabet_size())
    throw AlphabetMismatch("omega_equivalent: alphabets differ");
  if (q1 < 0 || q1 >= t1.num_states() || q2 < 0 || q2 >= t2.num_states())
    throw UnknownState("omega_equivalent: state index out of range");
  const int n = t1.alphabet_size();
  const int s1 = t1.num_states();
  const int s2 = t2.num_states();
  std::vector<std::string> labels;
  labels.reserve(s1 + s2);
  for (int q = 0; q < s1 + s2; ++q) labels.push_back("u" + std::to_string(q));
  std::vector<int> next(static_cast<size_t>(s1 + s2) * n);
  std::vector<int> out(static_cast<size_t>(s1 + s2) * n);
  for (int q = 0; q < s1; ++q)
    for (int x = 0; x < n; ++x) {
      next[static_cast<size_t>(q) * n + x] = t1.next(x, q);
      out[static_cast<size_t>(q) * n + x] = t1.out(x, q);
    }
  for (int q = 0; q < s2; ++q)
    for (int x = 0; x < n; ++x) {
      next[static_cast<size_t>(s1 + q) * n + x] = s1 + t2.next(x, q);
      out[static_cast<size_t>(s1 + q) * n + x] = t2.out(x, q);
    }
  Transducer u(n, std::move(labels), std::move(next), std::move(out));
  auto part = omega_partition(u);
  return part.cls[q1] == part.cls[s1 + q2];
}

// Canonical representative of the class of a synchronizing machine: the
// minimized core, states labeled by the lexicographically least word (at the
// machine's own minimal level) forcing them and sorted by that word. Two
// machines inducing the same map have identical normal forms, labels
// included, so equality is plain structural equality.
struct NormalForm {
  Transducer machine;
  int level = 0;  // minimal synchronizing level of `machine`
  // original state -> canonical state, nullopt for states outside the core
  std::vector<std::optional<int>> state_map;
};

inline bool operator==(const NormalForm& a, const NormalForm& b) { return a.machine == b.machine; }
inline bool operator!=(const NormalForm& a, const NormalForm& b) { return !(a == b); }

namespace detail {

// Relabels a minimal core machine canonically; returns the machine and the
// old-index -> new-index permutation.
inline std::pair<Transducer, std::vector<int>> canonicalize_core(const Transducer& m) {
  const int n = m.alphabet_size();
  const int s = m.num_states();
  const int k = *sync_level(m);
  std::vector<std::int64_t> least(s, -1);
  int assigned = 0;
  const std::int64_t total = word_count(n, k);
  for (std::int64_t r = 0; r < total && assigned < s; ++r) {
    const int st = forced_state(m, word_unrank(r, k, n));
    if (least[st] < 0) {
      least[st] = r;
      ++assigned;
    }
  }
  if (assigned != s) throw Error("internal: canonicalize_core saw a state no word forces");
  std::vector<int> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return least[a] < least[b]; });
  std::vector<int> perm(s);
  for (int c = 0; c < s; ++c) perm[order[c]] = c;
  std::vector<std::string> labels;
  labels.reserve(s);
  for (int c = 0; c < s; ++c) labels.push_back(word_to_string(word_unrank(least[order[c]], k, n), n));
  std::vector<int> next(static_cast<size_t>(s) * n);
  std::vector<int> out(static_cast<size_t>(s) * n);
  for (int c = 0; c < s; ++c)
    for (int x = 0; x < n; ++x) {
      next[static_cast<size_t>(c) * n + x] = perm[m.next(x, order[c])];
      out[static_cast<size_t>(c) * n + x] = m.out(x, order[c]);
    }
  return {Transducer(n, std::move(labels), std::move(next), std::move(out)), std::move(perm)};
}

}  // namespace detail

inline NormalForm min_core(const Transducer& t) {
  if (!sync_level(t)) throw NotSynchronizing("min_core: machine never synchronizes");
  auto cr = core_with_map(t);
  auto part = omega_partition(cr.machine);
  auto reduced = quotient(cr.machine, part);
  auto [canon, perm] = detail::canonicalize_core(reduced);
  NormalForm nf{std::move(canon), 0, {}};
  nf.level = *sync_level(nf.machine);
  nf.state_map.resize(t.num_states());
  for (int q = 0; q < t.num_states(); ++q) {
    const int ci = cr.index_map[q];
    if (ci >= 0) nf.state_map[q] = perm[part.cls[ci]];
  }
  return nf;
}

// The monoid operation on normal forms.
inline NormalForm monoid_product(const NormalForm& a, const NormalForm& b) {
  return min_core(product(a.machine, b.machine));
}

// m-th power in normal form, computed incrementally so intermediate machines
// stay near |min core| * |base| states instead of |base|^m.
inline NormalForm nf_power(const Transducer& t, int m) {
  if (m < 1) throw Error("nf_power: exponent must be at least 1");
  NormalForm base = min_core(t);
  NormalForm acc = base;
  for (int i = 2; i <= m; ++i) acc = monoid_product(acc, base);
  return acc;
}

// The transformation of length-k words induced by a machine synchronizing at
// level <= k: w maps to the output read from the state w itself forces.
struct LevelTransformation {
  int alphabet_size = 0;
  int level = 0;
  std::vector<std::int64_t> image;  // image[word_rank(w)] = word_rank(w')

  std::int64_t operator()(std::int64_t rank) const { return image[static_cast<size_t>(rank)]; }
};

inline LevelTransformation level_transformation(const Transducer& t, int k) {
  auto lvl = sync_level(t);
  if (!lvl) throw NotSynchronizing("level_transformation: machine never synchronizes");
  if (*lvl > k)
    throw NotSynchronizingAtLevel("level_transformation: minimal level is " +
                                  std::to_string(*lvl) + ", requested " + std::to_string(k));
  const int n = t.alphabet_size();
  const std::int64_t total = word_count(n, k);
  LevelTransformation lt{n, k, std::vector<std::int64_t>(static_cast<size_t>(total))};
  for (std::int64_t r = 0; r < total; ++r) {
    const Word w = word_unrank(r, k, n);
    const int s = forced_state(t, w);
    lt.image[static_cast<size_t>(r)] = word_rank(read_word(t, s, w).second, n);
  }
  return lt;
}

// first, then second; matches the product order of machines.
inline LevelTransformation compose(const LevelTransformation& first,
                                   const LevelTransformation& then) {
  if (first.alphabet_size != then.alphabet_size || first.level != then.level)
    throw AlphabetMismatch("compose: transformations act on different word sets");
  LevelTransformation r = first;
  for (auto& v : r.image) v = then.image[static_cast<size_t>(v)];
  return r;
}

namespace detail {

// The unique state fixed by reading the letter x. Exists and is unique in
// every strongly synchronizing machine: it is the state forced by a long
// enough run of x's.
inline int letter_fixed_state(const Transducer& t, int x, int level) {
  const Word run(static_cast<size_t>(std::max(1, level)), x);
  const int q = forced_state(t, run);
  if (t.next(x, q) != q) throw Error("internal: letter_fixed_state found no fixed point");
  return q;
}

}  // namespace detail

// Witness that some power of the machine fixes a letter: the smallest i >= 1
// such that the i-th iterate of the induced letter map has a fixed letter x,
// together with the state of the normal-form i-th power carrying the x|x
// loop. That state is the unique x-fixed state of every further power.
struct FixedLetterState {
  int iterate = 0;   // i
  int letter = 0;    // x, the least letter fixed by the i-th iterate
  int state = 0;     // index in power.machine of the x|x loop state
  NormalForm power;  // normal form of the i-th power
};

inline FixedLetterState fixed_letter_state(const Transducer& t) {
  auto lvl = sync_level(t);
  if (!lvl) throw NotSynchronizing("fixed_letter_state: machine never synchronizes");
  if (!is_core(t)) throw NotCore("fixed_letter_state: machine has non-core states");
  const int n = t.alphabet_size();
  std::vector<int> f(n);
  for (int x = 0; x < n; ++x) f[x] = t.out(x, detail::letter_fixed_state(t, x, *lvl));
  std::vector<int> iter = f;
  for (int i = 1; i <= n; ++i) {
    int fixed = -1;
    for (int x = 0; x < n && fixed < 0; ++x)
      if (iter[x] == x) fixed = x;
    if (fixed >= 0) {
      NormalForm nf = nf_power(t, i);
      int loop_state = -1;
      for (int q = 0; q < nf.machine.num_states(); ++q)
        if (nf.machine.next(fixed, q) == q && nf.machine.out(fixed, q) == fixed) {
          if (loop_state >= 0) throw Error("internal: two states carry the same letter loop");
          loop_state = q;
        }
      if (loop_state < 0) throw Error("internal: expected letter loop is missing");
      return {i, fixed, loop_state, std::move(nf)};
    }
    for (int x = 0; x < n; ++x) iter[x] = f[iter[x]];
  }
  throw Error("internal: no letter returns within alphabet-size iterates");
}

// Normal form of c^{-1} * a * c. The conjugator and its inverse must both
// synchronize so the triple product does too.
inline NormalForm conjugate(const NormalForm& a, const Transducer& c) {
  if (!is_invertible(c)) throw NotInvertible("conjugate: conjugator is not invertible");
  Transducer ci = invert(c);
  if (!sync_level(c) || !sync_level(ci))
    throw NotSynchronizing("conjugate: conjugator and inverse must both synchronize");
  return min_core(product(product(ci, a.machine), c));
}

// Action on bi-infinite periodic sequences: with k the minimal level, the
// letter at position i maps to the output of w[i] from the state forced by
// the k letters before position i, read cyclically. The result is reduced to
// its primitive period.
inline PeriodicWord act_periodic(const Transducer& t, const PeriodicWord& w) {
  auto lvl = sync_level(t);
  if (!lvl) throw NotSynchronizing("act_periodic: machine never synchronizes");
  const int k = *lvl;
  const int p = w.period();
  for (int x : w.letters())
    if (x >= t.alphabet_size())
      throw LetterOutOfRange("act_periodic: cycle letter " + std::to_string(x) +
                             " outside alphabet of size " + std::to_string(t.alphabet_size()));
  Word result(p);
  Word window(k);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < k; ++j) window[j] = w.letters()[(((i - k + j) % p) + p) % p];
    result[i] = t.out(w.letters()[i], forced_state(t, window));
  }
  return PeriodicWord(std::move(result));
}

}  // namespace synchro
