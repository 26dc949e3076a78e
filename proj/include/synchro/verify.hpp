#pragma once

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "synchro/algebra.hpp"
#include "synchro/catalog.hpp"
#include "synchro/growth.hpp"
#include "synchro/oracles.hpp"
#include "synchro/periodic_word.hpp"
#include "synchro/sync.hpp"
#include "synchro/transducer.hpp"

namespace synchro {

struct CheckLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  int id = 0;
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;  // label -> digest or parameter
  std::vector<CheckLine> checks;
  bool passed = false;
  double seconds = 0.0;
};

namespace detail {

inline void note_input(ExperimentReport& r, const std::string& label, const Transducer& t) {
  r.inputs.emplace_back(label, digest(t));
}

inline void note_param(ExperimentReport& r, const std::string& label, const std::string& value) {
  r.inputs.emplace_back(label, value);
}

inline void add_check(ExperimentReport& r, const std::string& name, bool ok,
                      const std::string& detail = {}) {
  r.checks.push_back({name, ok, detail});
}

// All synchronizing catalog machines, including the parametric family up to
// level 3. Everything here is a core machine.
inline std::vector<CatalogEntry> sync_pool() {
  std::vector<CatalogEntry> pool;
  for (const auto& name : builtin_names()) {
    auto e = builtin(name);
    if (e.expected.sync_level) pool.push_back(std::move(e));
  }
  for (int i = 1; i <= 3; ++i) pool.push_back(bisync_family(i));
  return pool;
}

inline void criterion_shift_doubling(ExperimentReport& r) {
  const Transducer a = builtin("shift2").machine;
  note_input(r, "shift2", a);
  for (int m = 1; m <= 8; ++m) {
    const auto nf = min_core(power(a, m));
    const std::int64_t want = std::int64_t(1) << m;
    add_check(r, "reduced power " + std::to_string(m) + " has " + std::to_string(want) + " states",
              nf.machine.num_states() == want, "got " + std::to_string(nf.machine.num_states()));
  }
}

inline void criterion_ternary_lower_bounds(ExperimentReport& r) {
  const Transducer g = builtin("g_h3").machine;
  note_input(r, "g_h3", g);
  for (int m = 1; m <= 10; ++m) {
    const auto nf = min_core(power(g, m));
    const std::int64_t size = nf.machine.num_states();
    const std::int64_t bound = std::int64_t(1) << (m / 2);
    add_check(r,
              "reduced power " + std::to_string(m) + " has at least " + std::to_string(bound) +
                  " states and at least " + std::to_string(m),
              size >= bound && size >= m, "got " + std::to_string(size));
  }
}

inline void criterion_levels_add(ExperimentReport& r) {
  const auto pool = sync_pool();
  for (const auto& a : pool) note_input(r, a.name, a.machine);
  for (const auto& a : pool)
    for (const auto& b : pool) {
      if (a.machine.alphabet_size() != b.machine.alphabet_size()) continue;
      const auto lvl = sync_level(product(a.machine, b.machine));
      const int bound = *a.expected.sync_level + *b.expected.sync_level;
      add_check(r, "level(" + a.name + " * " + b.name + ") <= " + std::to_string(bound),
                lvl && *lvl <= bound,
                lvl ? "got " + std::to_string(*lvl) : "product never synchronizes");
    }
}

inline void criterion_collapsing_vs_brute(ExperimentReport& r, std::uint64_t seed) {
  std::vector<Transducer> machines;
  for (const auto& name : builtin_names()) machines.push_back(builtin(name).machine);
  for (int i = 1; i <= 3; ++i) machines.push_back(bisync_family(i).machine);
  const int random_count = 500;
  for (int i = 0; i < random_count; ++i)
    machines.push_back(random_transducer(2, 1 + i % 4, seed + static_cast<std::uint64_t>(i)));
  note_param(r, "random machines", std::to_string(random_count) + " from seed " + std::to_string(seed));
  int bad = 0;
  std::string first;
  for (const auto& t : machines) {
    const auto fast = sync_level(t);
    const auto slow = brute_force_sync_level(t, t.num_states());
    if (fast != slow) {
      ++bad;
      if (first.empty()) first = "machine " + digest(t);
    }
  }
  add_check(r, "collapsing level agrees with word enumeration on " +
                   std::to_string(machines.size()) + " machines",
            bad == 0, bad == 0 ? "" : std::to_string(bad) + " disagreements, first: " + first);
}

inline void criterion_minimization_oracle(ExperimentReport& r, std::uint64_t seed) {
  const int count = 200;
  note_param(r, "random machines", std::to_string(count) + " from seed " + std::to_string(seed));
  int bad_within = 0;
  int bad_across = 0;
  std::vector<std::optional<Transducer>> prev_by_n(4);
  for (int i = 0; i < count; ++i) {
    const int n = 2 + i % 2;
    const int states = 1 + i % 5;
    const Transducer t = random_transducer(n, states, seed + 1000 + static_cast<std::uint64_t>(i));
    const auto part = omega_partition(t);
    const auto eq = bounded_depth_equivalent(t, t, states * states);
    for (int q = 0; q < states; ++q)
      for (int p = 0; p < states; ++p)
        if ((part.cls[q] == part.cls[p]) != static_cast<bool>(eq[q][p])) ++bad_within;
    if (prev_by_n[static_cast<size_t>(n)]) {
      const Transducer& u = *prev_by_n[static_cast<size_t>(n)];
      const auto cross = bounded_depth_equivalent(t, u, t.num_states() * u.num_states());
      for (int q = 0; q < t.num_states(); ++q)
        for (int p = 0; p < u.num_states(); ++p)
          if (omega_equivalent(t, q, u, p) != static_cast<bool>(cross[q][p])) ++bad_across;
    }
    prev_by_n[static_cast<size_t>(n)] = t;
  }
  add_check(r, "refinement classes match bounded-depth comparison within machines", bad_within == 0,
            bad_within == 0 ? "" : std::to_string(bad_within) + " mismatched pairs");
  add_check(r, "cross-machine equivalence matches bounded-depth comparison", bad_across == 0,
            bad_across == 0 ? "" : std::to_string(bad_across) + " mismatched pairs");
}

inline void criterion_gadget_closed_form(ExperimentReport& r) {
  note_input(r, "gadget", dummy_transducer());
  const int k = 12;
  for (int len = 0; len <= 10; ++len) {
    int bad = 0;
    for (std::int64_t mask = 0; mask < (std::int64_t(1) << len); ++mask) {
      Word bits(static_cast<size_t>(len));
      for (int i = 0; i < len; ++i) bits[static_cast<size_t>(i)] = (mask >> i) & 1;
      const auto sim = dummy_active_state(bits, k);
      const auto formula = dummy_active_state_closed_form(bits, k);
      if (!(sim == formula)) ++bad;
    }
    add_check(r, "closed form matches simulation on all length-" + std::to_string(len) + " inputs",
              bad == 0, bad == 0 ? "" : std::to_string(bad) + " mismatches");
  }
}

inline void criterion_sigma_identities(ExperimentReport& r) {
  int bad_rec = 0;
  int bad_binom = 0;
  for (int i = 1; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      const std::int64_t v = sigma(i, j);
      std::int64_t want = 0;
      if (i == 1) {
        want = static_cast<std::int64_t>(j) * (j + 1) / 2;
      } else {
        for (int k = 1; k <= j; ++k) want += sigma(i - 1, k);
      }
      if (v != want) ++bad_rec;
      if (v != binom(j + i, i + 1)) ++bad_binom;
    }
  add_check(r, "nested sums satisfy their recurrence", bad_rec == 0,
            bad_rec == 0 ? "" : std::to_string(bad_rec) + " mismatches");
  add_check(r, "nested sums match the binomial closed form", bad_binom == 0,
            bad_binom == 0 ? "" : std::to_string(bad_binom) + " mismatches");
}

inline void criterion_prefix_solver(ExperimentReport& r) {
  for (int j = 1; j <= 5; ++j) {
    int bad = 0;
    for (int mask = 0; mask < (1 << j); ++mask) {
      Word y(static_cast<size_t>(j));
      for (int i = 0; i < j; ++i) y[static_cast<size_t>(i)] = (mask >> i) & 1;
      const Word x = solve_exponent_prefix(y);
      bool ok = static_cast<int>(x.size()) == 2 * j - 1;
      const auto reached = dummy_active_state(x, j);
      for (int l = 0; l < j && ok; ++l)
        ok = reached[static_cast<size_t>(l)].sub == 0 &&
             reached[static_cast<size_t>(l)].exp == y[static_cast<size_t>(l)];
      if (!ok) ++bad;
    }
    add_check(r, "solver realizes every " + std::to_string(j) + "-bit exponent prefix", bad == 0,
              bad == 0 ? "" : std::to_string(bad) + " failures");
  }
}

inline void criterion_core_distance(ExperimentReport& r) {
  const auto pool = sync_pool();
  int bad_pairs = 0;
  std::string first;
  int pairs = 0;
  for (const auto& a : pool)
    for (const auto& b : pool) {
      if (a.machine.alphabet_size() != b.machine.alphabet_size()) continue;
      ++pairs;
      if (core_dist(product(a.machine, b.machine)) > *b.expected.sync_level) {
        ++bad_pairs;
        if (first.empty()) first = a.name + " * " + b.name;
      }
    }
  add_check(r, "core distance of a product stays within the second factor's level (" +
                   std::to_string(pairs) + " pairs)",
            bad_pairs == 0,
            bad_pairs == 0 ? "" : std::to_string(bad_pairs) + " violations, first: " + first);

  const Transducer g = builtin("g_h3").machine;
  note_input(r, "g_h3", g);
  const auto series = growth_series(g, 8);
  for (const auto& rec : series.records) {
    const int bound = (rec.m + 1) / 2;
    add_check(r, "incremental power " + std::to_string(rec.m) + " has core distance <= " +
                     std::to_string(bound),
              rec.core_dist_m <= bound, "got " + std::to_string(rec.core_dist_m));
  }
}

inline void criterion_level_above_one(ExperimentReport& r) {
  const Transducer s = builtin("shift2").machine;
  note_input(r, "shift2", s);
  const auto a = min_core(power(s, 3));
  add_check(r, "reduced cube has 8 states", a.machine.num_states() == 8,
            "got " + std::to_string(a.machine.num_states()));
  const auto nf = min_core(product(a.machine, s));
  add_check(r, "one more factor keeps the level above 1", nf.level >= 2,
            "got level " + std::to_string(nf.level));
}

inline void criterion_action_laws(ExperimentReport& r) {
  const auto pool = sync_pool();
  int bad_hom = 0;
  int hom_pairs = 0;
  int bad_comp = 0;
  int bad_shift = 0;
  std::int64_t comp_cases = 0;
  std::int64_t shift_cases = 0;
  for (const auto& a : pool)
    for (const auto& b : pool) {
      if (a.machine.alphabet_size() != b.machine.alphabet_size()) continue;
      const int n = a.machine.alphabet_size();
      const Transducer ab = product(a.machine, b.machine);
      const int K = *a.expected.sync_level + *b.expected.sync_level;
      ++hom_pairs;
      const auto lhs = level_transformation(ab, K);
      const auto rhs = compose(level_transformation(a.machine, K),
                               level_transformation(b.machine, K));
      if (lhs.image != rhs.image) ++bad_hom;
      for (int p = 1; p <= 6; ++p) {
        const std::int64_t total = word_count(n, p);
        for (std::int64_t rank = 0; rank < total; ++rank) {
          const PeriodicWord w(word_unrank(rank, p, n));
          ++comp_cases;
          const auto direct = act_periodic(ab, w);
          const auto staged = act_periodic(b.machine, act_periodic(a.machine, w));
          if (direct.letters() != staged.letters()) ++bad_comp;
        }
      }
    }
  for (const auto& a : pool) {
    const int n = a.machine.alphabet_size();
    for (int p = 1; p <= 6; ++p) {
      const std::int64_t total = word_count(n, p);
      for (std::int64_t rank = 0; rank < total; ++rank) {
        const PeriodicWord w(word_unrank(rank, p, n));
        ++shift_cases;
        const auto rotated_first = act_periodic(a.machine, w.rotated());
        const auto rotated_after = act_periodic(a.machine, w).rotated();
        if (rotated_first.letters() != rotated_after.letters()) ++bad_shift;
      }
    }
  }
  add_check(r, "word-level maps compose across " + std::to_string(hom_pairs) + " pairs",
            bad_hom == 0, bad_hom == 0 ? "" : std::to_string(bad_hom) + " violations");
  add_check(r, "periodic action composes across " + std::to_string(comp_cases) + " cases",
            bad_comp == 0, bad_comp == 0 ? "" : std::to_string(bad_comp) + " violations");
  add_check(r, "periodic action commutes with rotation across " + std::to_string(shift_cases) +
                   " cases",
            bad_shift == 0, bad_shift == 0 ? "" : std::to_string(bad_shift) + " violations");
}

inline void criterion_letter_loop_reduction(ExperimentReport& r) {
  for (const auto& e : sync_pool()) {
    note_input(r, e.name, e.machine);
    const auto fls = fixed_letter_state(e.machine);
    add_check(r, "letter-loop reduction succeeds on " + e.name, true,
              "iterate " + std::to_string(fls.iterate) + ", letter " + std::to_string(fls.letter));
    const Transducer& base = fls.power.machine;
    Transducer acc = base;
    int diag = fls.state;
    bool ok = true;
    int failed_k = 0;
    for (int k = 2; k <= 4 && ok; ++k) {
      const Transducer up = product(acc, base);
      const int idx = diag * base.num_states() + fls.state;
      const auto cr = core_with_map(up);
      if (cr.index_map[static_cast<size_t>(idx)] < 0) {
        ok = false;
        failed_k = k;
      } else {
        diag = cr.index_map[static_cast<size_t>(idx)];
        acc = cr.machine;
      }
    }
    add_check(r, "diagonal loop state stays in every power core for " + e.name, ok,
              ok ? "" : "fell out at power multiple " + std::to_string(failed_k));
  }
}

}  // namespace detail

inline ExperimentReport run_criterion(int id, std::uint64_t seed = 1) {
  ExperimentReport r;
  r.id = id;
  const auto start = std::chrono::steady_clock::now();
  switch (id) {
    case 1:
      r.name = "shift reduced powers double";
      detail::criterion_shift_doubling(r);
      break;
    case 2:
      r.name = "ternary reduced powers grow";
      detail::criterion_ternary_lower_bounds(r);
      break;
    case 3:
      r.name = "sync levels add under composition";
      detail::criterion_levels_add(r);
      break;
    case 4:
      r.name = "collapsing level vs word enumeration";
      detail::criterion_collapsing_vs_brute(r, seed);
      break;
    case 5:
      r.name = "minimization vs bounded-depth comparison";
      detail::criterion_minimization_oracle(r, seed);
      break;
    case 6:
      r.name = "counting gadget closed form";
      detail::criterion_gadget_closed_form(r);
      break;
    case 7:
      r.name = "nested-sum identities";
      detail::criterion_sigma_identities(r);
      break;
    case 8:
      r.name = "exponent prefix solver";
      detail::criterion_prefix_solver(r);
      break;
    case 9:
      r.name = "core distance bounds";
      detail::criterion_core_distance(r);
      break;
    case 10:
      r.name = "composition keeps level above one";
      detail::criterion_level_above_one(r);
      break;
    case 11:
      r.name = "word map homomorphism and action laws";
      detail::criterion_action_laws(r);
      break;
    case 12:
      r.name = "letter-loop reduction and diagonal cores";
      detail::criterion_letter_loop_reduction(r);
      break;
    default:
      throw Error("run_criterion: id must be between 1 and 12");
  }
  r.passed = true;
  for (const auto& c : r.checks) r.passed = r.passed && c.passed;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::vector<ExperimentReport> run_all(std::uint64_t seed = 1) {
  std::vector<ExperimentReport> reports;
  for (int id = 1; id <= 12; ++id) reports.push_back(run_criterion(id, seed));
  return reports;
}

inline bool all_passed(const std::vector<ExperimentReport>& reports) {
  for (const auto& r : reports)
    if (!r.passed) return false;
  return true;
}

inline void print_report(std::ostream& os, const std::vector<ExperimentReport>& reports,
                         bool verbose = false) {
  os << std::left << std::setw(4) << "id" << std::setw(44) << "experiment" << std::setw(9)
     << "checks" << std::setw(10) << "seconds" << "result\n";
  for (const auto& r : reports) {
    int ok = 0;
    for (const auto& c : r.checks) ok += c.passed ? 1 : 0;
    os << std::left << std::setw(4) << r.id << std::setw(44) << r.name << std::setw(9)
       << (std::to_string(ok) + "/" + std::to_string(r.checks.size())) << std::setw(10)
       << (std::to_string(r.seconds).substr(0, 7)) << (r.passed ? "pass" : "FAIL") << "\n";
    if (verbose)
      for (const auto& in : r.inputs) os << "      input " << in.first << " = " << in.second << "\n";
    for (const auto& c : r.checks) {
      if (c.passed && !verbose) continue;
      os << "      " << (c.passed ? "ok  " : "FAIL") << " " << c.name;
      if (!c.detail.empty()) os << " (" << c.detail << ")";
      os << "\n";
    }
  }
}

}  // namespace synchro
