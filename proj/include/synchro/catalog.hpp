#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "synchro/errors.hpp"
#include "synchro/growth.hpp"
#include "synchro/sync.hpp"
#include "synchro/transducer.hpp"

namespace synchro {

// Smallest class a machine is known to live in: synchronizing with stable
// core ("sync-core"), additionally invertible ("invertible-sync"),
// additionally with synchronizing inverse ("bisync"), or none of these.
enum class MachineClass { sync_core, invertible_sync, bisync, none };

inline std::string to_string(MachineClass c) {
  switch (c) {
    case MachineClass::sync_core: return "sync-core";
    case MachineClass::invertible_sync: return "invertible-sync";
    case MachineClass::bisync: return "bisync";
    default: return "-";
  }
}

struct CatalogFlags {
  bool invertible = false;
  bool core = false;
  std::optional<int> sync_level;    // empty means never synchronizes
  std::optional<int> bisync_level;  // empty means inverse missing or not synchronizing
  std::optional<bool> core_power;   // core-of-power condition, when known
  MachineClass cls = MachineClass::none;
};

struct CatalogEntry {
  std::string name;
  Transducer machine;
  CatalogFlags expected;
};

// One state, every letter looping with itself.
inline Transducer identity_transducer(int n) {
  TransducerBuilder b(n, {"id"});
  for (int x = 0; x < n; ++x) b.add(0, x, x, 0);
  return b.build();
}

// Two states over n >= 4 letters. Letters 0..3 follow the fixed pattern
// below; every further letter loops on a1 and falls from a2 back to a1.
inline Transducer h4_generator(int n) {
  if (n < 4) throw Error("h4_generator: needs at least 4 letters");
  TransducerBuilder b(n, {"a1", "a2"});
  b.add(0, 0, 1, 0);
  b.add(0, 1, 2, 0);
  b.add(0, 2, 0, 1);
  b.add(0, 3, 3, 1);
  b.add(1, 0, 2, 0);
  b.add(1, 1, 1, 0);
  b.add(1, 2, 3, 1);
  b.add(1, 3, 0, 1);
  for (int x = 4; x < n; ++x) {
    b.add(0, x, x, 0);
    b.add(1, x, x, 0);
  }
  return b.build();
}

namespace detail {

inline void verify_entry(const CatalogEntry& e);

inline CatalogEntry make_entry(std::string name, Transducer m, const CatalogFlags& f) {
  CatalogEntry e{std::move(name), std::move(m), f};
  verify_entry(e);
  return e;
}

inline void verify_entry(const CatalogEntry& e) {
  auto fail = [&](const std::string& what) {
    throw Error("catalog: entry '" + e.name + "' failed its " + what + " check");
  };
  const auto& t = e.machine;
  if (is_invertible(t) != e.expected.invertible) fail("invertibility");
  if (is_core(t) != e.expected.core) fail("core");
  if (sync_level(t) != e.expected.sync_level) fail("sync level");
  if (bisync_level(t) != e.expected.bisync_level) fail("bisync level");
  if (e.expected.core_power && check_core_power_condition(t) != *e.expected.core_power)
    fail("core-of-power");
  switch (e.expected.cls) {
    case MachineClass::bisync:
      if (!e.expected.bisync_level) fail("class membership");
      [[fallthrough]];
    case MachineClass::invertible_sync:
      if (!e.expected.invertible) fail("class membership");
      [[fallthrough]];
    case MachineClass::sync_core:
      if (!e.expected.sync_level || !e.expected.core) fail("class membership");
      break;
    case MachineClass::none:
      break;
  }
}

}  // namespace detail

// States a0..a_i over three letters: letter 2 climbs the chain and loops at
// the top (with outputs 0 and 1 swapped there); letters 0 and 1 fall back
// to a0. Synchronizing and bi-synchronizing at level exactly i.
inline CatalogEntry bisync_family(int i) {
  if (i < 1) throw Error("bisync_family: level parameter must be at least 1");
  std::vector<std::string> labels;
  for (int j = 0; j <= i; ++j) labels.push_back("a" + std::to_string(j));
  TransducerBuilder b(3, labels);
  b.add(0, 0, 0, 0);
  b.add(0, 1, 1, 0);
  b.add(0, 2, 2, 1);
  for (int j = 1; j < i; ++j) {
    b.add(j, 0, 0, 0);
    b.add(j, 1, 1, 0);
    b.add(j, 2, 2, j + 1);
  }
  b.add(i, 0, 1, 0);
  b.add(i, 1, 0, 0);
  b.add(i, 2, 2, i);
  return detail::make_entry("family:" + std::to_string(i), b.build(),
                            {true, true, i, i, std::nullopt, MachineClass::bisync});
}

inline std::vector<std::string> builtin_names() {
  return {"shift2", "oneway2", "h4exp", "g_h3", "dummy"};
}

// Named example machines. Every declared flag is recomputed before the
// entry is handed out, so a catalog entry can be trusted blindly.
inline CatalogEntry builtin(const std::string& name) {
  if (name == "shift2") {
    // binary shift: output repeats the previous input letter
    TransducerBuilder b(2, {"a1", "a2"});
    b.add(0, 0, 0, 0);
    b.add(0, 1, 0, 1);
    b.add(1, 0, 1, 0);
    b.add(1, 1, 1, 1);
    return detail::make_entry(name, b.build(),
                              {false, true, 1, std::nullopt, true, MachineClass::sync_core});
  }
  if (name == "oneway2") {
    // invertible, but the inverse never synchronizes
    TransducerBuilder b(2, {"a1", "a2"});
    b.add(0, 0, 1, 0);
    b.add(0, 1, 0, 1);
    b.add(1, 0, 0, 0);
    b.add(1, 1, 1, 1);
    return detail::make_entry(name, b.build(),
                              {true, true, 1, std::nullopt, true, MachineClass::invertible_sync});
  }
  if (name == "h4exp")
    return detail::make_entry(name, h4_generator(4), {true, true, 1, 1, true, MachineClass::bisync});
  if (name == "g_h3") {
    TransducerBuilder b(3, {"b", "a"});
    b.add(0, 0, 0, 0);
    b.add(0, 1, 2, 1);
    b.add(0, 2, 1, 0);
    b.add(1, 0, 1, 0);
    b.add(1, 1, 2, 1);
    b.add(1, 2, 0, 0);
    return detail::make_entry(name, b.build(), {true, true, 1, 1, false, MachineClass::bisync});
  }
  if (name == "dummy")
    return detail::make_entry(
        name, dummy_transducer(),
        {true, false, std::nullopt, std::nullopt, std::nullopt, MachineClass::none});
  std::string known;
  for (const auto& k : builtin_names()) known += (known.empty() ? "" : ", ") + k;
  throw UnknownName("catalog: unknown machine '" + name + "' (known: " + known + ")");
}

struct Require {
  bool invertible = false;
  bool synchronizing = false;
  bool core = false;
  bool bisynchronizing = false;
};

// Uniformly random tables, rejection-sampled until the requested flags
// hold. Deterministic for a fixed seed.
inline Transducer random_transducer(int n, int states, std::uint64_t seed, Require require = {},
                                    int max_tries = 10000) {
  if (n < 2) throw Error("random_transducer: alphabet must have at least 2 letters");
  if (states < 1) throw Error("random_transducer: need at least one state");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> state_dist(0, states - 1);
  std::uniform_int_distribution<int> letter_dist(0, n - 1);
  std::vector<std::string> labels;
  for (int q = 0; q < states; ++q) labels.push_back("q" + std::to_string(q));
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    TransducerBuilder b(n, labels);
    for (int q = 0; q < states; ++q)
      for (int x = 0; x < n; ++x) b.add(q, x, letter_dist(rng), state_dist(rng));
    Transducer t = b.build();
    if (require.invertible && !is_invertible(t)) continue;
    const auto level = sync_level(t);
    if (require.synchronizing && !level) continue;
    if (require.core && !is_core(t)) continue;
    if (require.bisynchronizing && !bisync_level(t)) continue;
    return t;
  }
  throw RequirementUnsatisfiable("random_transducer: no machine met the requirements after " +
                                 std::to_string(max_tries) + " tries");
}

}  // namespace synchro
