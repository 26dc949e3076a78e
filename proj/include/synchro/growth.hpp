#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "synchro/algebra.hpp"
#include "synchro/errors.hpp"
#include "synchro/sync.hpp"
#include "synchro/transducer.hpp"

namespace synchro {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  if (a > INT64_MAX - b) throw CapExceeded("sigma: value exceeds 64-bit range");
  return a + b;
}

}  // namespace detail

// Memoized table of the nested sums S(i, j) = sum_{k=1..j} S(i-1, k) with
// S(1, j) = 1 + 2 + ... + j, and S(i, j) = 0 whenever j <= 0. Values are
// exact integers.
class SigmaTable {
 public:
  std::int64_t value(int i, std::int64_t j) {
    if (i < 1) throw Error("sigma: first argument must be at least 1");
    if (j <= 0) return 0;
    ensure(i, static_cast<int>(j));
    return rows_[static_cast<size_t>(i - 1)][static_cast<size_t>(j)];
  }

 private:
  void ensure(int i, int j) {
    if (rows_.empty()) rows_.emplace_back(1, 0);  // row for i=1, column 0
    // extend row 1 first, then rebuild deeper rows from their predecessor
    auto extend = [&](std::vector<std::int64_t>& row, const std::vector<std::int64_t>* prev) {
      while (static_cast<int>(row.size()) <= j) {
        const std::int64_t col = static_cast<std::int64_t>(row.size());
        const std::int64_t inc = prev ? (*prev)[static_cast<size_t>(col)] : col;
        row.push_back(detail::checked_add(row.back(), inc));
      }
    };
    extend(rows_[0], nullptr);
    for (int level = 2; level <= i; ++level) {
      if (static_cast<int>(rows_.size()) < level) rows_.emplace_back(1, 0);
      extend(rows_[static_cast<size_t>(level - 1)], &rows_[static_cast<size_t>(level - 2)]);
    }
  }

  std::vector<std::vector<std::int64_t>> rows_;
};

inline std::int64_t sigma(int i, std::int64_t j) {
  SigmaTable table;
  return table.value(i, j);
}

// The five-state binary counting gadget: a seed state B plus four states
// s<sub>^<exp> with transitions pi(x, s_sub^exp) = s_{sub+1}^{x + sub*exp}
// and outputs lambda(x, s_sub^exp) = x + exp, everything mod 2.
inline Transducer dummy_transducer() {
  TransducerBuilder b(2, {"B", "s0^1", "s1^1", "s0^0", "s1^0"});
  auto idx = [](int sub, int exp) { return 1 + sub + 2 * (1 - exp); };
  b.add(0, 0, 0, idx(1, 1));
  b.add(0, 1, 1, idx(0, 1));
  for (int sub = 0; sub <= 1; ++sub)
    for (int exp = 0; exp <= 1; ++exp)
      for (int x = 0; x <= 1; ++x)
        b.add(idx(sub, exp), x, (x + exp) % 2, idx((sub + 1) % 2, (x + sub * exp) % 2));
  return b.build();
}

// One component state of a power of the gadget, restricted to the four
// s_sub^exp states.
struct SigmaState {
  int sub = 0;
  int exp = 0;
  friend bool operator==(const SigmaState& a, const SigmaState& b) {
    return a.sub == b.sub && a.exp == b.exp;
  }
};

// Active state of the k-fold product of the gadget, started at (s1^1)^k,
// after reading the given bits: direct componentwise simulation, each
// component feeding its output to the next.
inline std::vector<SigmaState> dummy_active_state(const Word& bits, int k) {
  if (k < 1) throw Error("dummy_active_state: need at least one component");
  std::vector<SigmaState> comps(static_cast<size_t>(k), SigmaState{1, 1});
  for (int bit : bits) {
    if (bit != 0 && bit != 1) throw LetterOutOfRange("dummy_active_state: bits must be 0 or 1");
    int c = bit;
    for (auto& s : comps) {
      const int emitted = (c + s.exp) % 2;
      s = SigmaState{(s.sub + 1) % 2, (c + s.sub * s.exp) % 2};
      c = emitted;
    }
  }
  return comps;
}

namespace detail {

// Coefficient helper extending the nested sums downward: S(0, m) = m.
inline std::int64_t sigma0(SigmaTable& table, int i, std::int64_t j) {
  if (j <= 0) return 0;
  if (i == 0) return j;
  return table.value(i, j);
}

}  // namespace detail

// Closed form for dummy_active_state. With c letters read, the j-th
// component is s_{c mod 2 == 0 ? 1 : 0}^{e(j)} where, writing x_0 = 1 and
// x_1..x_c for the input bits,
//
//   e(j) = x_c + sum_{t=1..c} S(t-1, j - d(t)) * x_{c-t}   (mod 2)
//
// with d(t) = ceil(t/2) when c is even and d(t) = ceil((t-1)/2) when c is
// odd.
inline std::vector<SigmaState> dummy_active_state_closed_form(const Word& bits, int k) {
  if (k < 1) throw Error("dummy_active_state_closed_form: need at least one component");
  for (int bit : bits)
    if (bit != 0 && bit != 1)
      throw LetterOutOfRange("dummy_active_state_closed_form: bits must be 0 or 1");
  const int c = static_cast<int>(bits.size());
  const int sub = (c % 2 == 0) ? 1 : 0;
  SigmaTable table;
  auto x = [&](int i) { return i == 0 ? 1 : bits[static_cast<size_t>(i - 1)]; };
  std::vector<SigmaState> comps(static_cast<size_t>(k));
  for (int j = 1; j <= k; ++j) {
    std::int64_t e = x(c);
    for (int t = 1; t <= c; ++t) {
      const int d = (c % 2 == 0) ? (t + 1) / 2 : t / 2;
      e += detail::sigma0(table, t - 1, j - d) * x(c - t);
    }
    comps[static_cast<size_t>(j - 1)] = SigmaState{sub, static_cast<int>(e % 2)};
  }
  return comps;
}

// Builds bits x_1..x_{2j-1} so that after reading them the first j
// components of the k-fold gadget product (k >= j) are s0^{y_1}..s0^{y_j}.
// Solves the triangular mod-2 system of exponent equations from the top:
// each equation ends in two fresh unknowns with unit coefficients, so one
// can cancel the known prefix and the other carries the target bit. The
// result is checked against the simulation before returning.
inline Word solve_exponent_prefix(const Word& y) {
  const int j = static_cast<int>(y.size());
  if (j < 1) throw Error("solve_exponent_prefix: need at least one target bit");
  for (int bit : y)
    if (bit != 0 && bit != 1)
      throw LetterOutOfRange("solve_exponent_prefix: target bits must be 0 or 1");
  const int c = 2 * j - 1;
  SigmaTable table;
  Word x(static_cast<size_t>(c), 0);
  auto get = [&](int i) { return i == 0 ? 1 : x[static_cast<size_t>(i - 1)]; };
  auto coef = [&](int l, int t) -> std::int64_t {
    if (t == 0) return 1;
    return detail::sigma0(table, t - 1, l - t / 2);  // odd-length convention
  };
  for (int l = 1; l <= j; ++l) {
    const int a = 2 * (j - l) + 1;
    std::int64_t prefix = 0;
    for (int t = 0; t <= 2 * l - 3; ++t) prefix += coef(l, t) * get(c - t);
    if (l < j) {
      x[static_cast<size_t>(a - 1)] = static_cast<int>(prefix % 2);
      x[static_cast<size_t>(a - 2)] = y[static_cast<size_t>(l - 1)];
    } else {
      // the final equation also involves the constant x_0 = 1
      x[0] = static_cast<int>((y[static_cast<size_t>(l - 1)] + prefix + 1) % 2);
    }
  }
  const auto reached = dummy_active_state(x, j);
  for (int l = 1; l <= j; ++l)
    if (reached[static_cast<size_t>(l - 1)].sub != 0 ||
        reached[static_cast<size_t>(l - 1)].exp != y[static_cast<size_t>(l - 1)])
      throw Error("internal: solve_exponent_prefix failed its simulation check");
  return x;
}

enum class GrowthClass { exponential, at_least_polynomial, bounded, inconclusive };

inline std::string to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::exponential: return "exponential";
    case GrowthClass::at_least_polynomial: return "at-least-polynomial";
    case GrowthClass::bounded: return "bounded";
    default: return "inconclusive";
  }
}

struct GrowthRecord {
  int m = 0;
  std::optional<std::int64_t> core_size;  // |core(raw m-th power)|, when affordable
  std::int64_t min_core_size = 0;
  int sync_level_m = 0;   // minimal level of the reduced m-th power
  int core_dist_m = 0;    // core distance of the unreduced incremental product
  bool conjecture_ok = false;  // min_core_size >= m
};

struct ClassifyOptions {
  double slope_threshold = 0.05;    // least-squares slope of log(size) vs m
  double residual_threshold = 0.1;  // RMS residual of that fit
};

struct GrowthFit {
  double slope = 0.0;
  double residual = 0.0;
};

// Classifies a size series. "exponential" needs a strong log-linear fit over
// the last half of the series; "bounded" needs the last three sizes equal;
// "at-least-polynomial" needs strictly increasing sizes. Anything else is
// inconclusive.
inline GrowthClass classify_growth(const std::vector<GrowthRecord>& records,
                                   ClassifyOptions opt = {}, GrowthFit* fit_out = nullptr) {
  if (records.size() < 4)
    throw TooFewRecords("classify_growth: need at least 4 records, got " +
                        std::to_string(records.size()));
  const size_t start = records.size() / 2;
  const size_t len = records.size() - start;
  double mx = 0, my = 0;
  for (size_t i = start; i < records.size(); ++i) {
    mx += records[i].m;
    my += std::log(static_cast<double>(records[i].min_core_size));
  }
  mx /= static_cast<double>(len);
  my /= static_cast<double>(len);
  double sxx = 0, sxy = 0;
  for (size_t i = start; i < records.size(); ++i) {
    const double dx = records[i].m - mx;
    const double dy = std::log(static_cast<double>(records[i].min_core_size)) - my;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  const double slope = sxy / sxx;
  double ss = 0;
  for (size_t i = start; i < records.size(); ++i) {
    const double y = std::log(static_cast<double>(records[i].min_core_size));
    const double pred = my + slope * (records[i].m - mx);
    ss += (y - pred) * (y - pred);
  }
  const double residual = std::sqrt(ss / static_cast<double>(len));
  if (fit_out) *fit_out = {slope, residual};

  if (slope > opt.slope_threshold && residual < opt.residual_threshold)
    return GrowthClass::exponential;
  const size_t last = records.size() - 1;
  if (records[last].min_core_size == records[last - 1].min_core_size &&
      records[last - 1].min_core_size == records[last - 2].min_core_size)
    return GrowthClass::bounded;
  bool increasing = true;
  for (size_t i = 1; i < records.size() && increasing; ++i)
    increasing = records[i].min_core_size > records[i - 1].min_core_size;
  if (increasing) return GrowthClass::at_least_polynomial;
  return GrowthClass::inconclusive;
}

struct GrowthOptions {
  std::int64_t raw_state_limit = 4096;  // raw power core sizes computed up to here
  ClassifyOptions classify;
};

struct GrowthSeries {
  std::string base_digest;
  std::vector<GrowthRecord> records;
  GrowthClass classification = GrowthClass::inconclusive;
  GrowthFit fit;
  bool conjecture_all = false;
};

// Measures reduced power sizes of a synchronizing machine up to max_m,
// keeping intermediate products small by reducing after every step.
inline GrowthSeries growth_series(const Transducer& t, int max_m, GrowthOptions opt = {}) {
  if (max_m < 1) throw Error("growth_series: need at least one power");
  if (!sync_level(t)) throw NotSynchronizing("growth_series: machine never synchronizes");
  GrowthSeries series;
  series.base_digest = digest(t);
  const NormalForm base = min_core(t);
  NormalForm acc = base;
  std::int64_t raw_states = 1;
  bool raw_ok = true;
  for (int m = 1; m <= max_m; ++m) {
    if (raw_ok && raw_states > opt.raw_state_limit / t.num_states())
      raw_ok = false;
    else if (raw_ok)
      raw_states *= t.num_states();
    raw_ok = raw_ok && raw_states <= opt.raw_state_limit;
    GrowthRecord rec;
    rec.m = m;
    if (m > 1) {
      const Transducer up = product(acc.machine, base.machine);
      rec.core_dist_m = core_dist(up);
      acc = min_core(up);
    } else {
      rec.core_dist_m = core_dist(t);
    }
    rec.min_core_size = acc.machine.num_states();
    rec.sync_level_m = acc.level;
    if (raw_ok) rec.core_size = core(power(t, m, opt.raw_state_limit)).num_states();
    rec.conjecture_ok = rec.min_core_size >= m;
    series.records.push_back(rec);
  }
  series.conjecture_all = true;
  for (const auto& r : series.records) series.conjecture_all = series.conjecture_all && r.conjecture_ok;
  if (series.records.size() >= 4)
    series.classification = classify_growth(series.records, opt.classify, &series.fit);
  return series;
}

struct LowerBoundRow {
  int m = 0;
  std::int64_t bound = 0;      // 2^floor(m/2)
  std::int64_t reachable = 0;  // states of the reduced m-th power reachable from q^m
  bool ok = false;
  std::int64_t gap = 0;  // reachable - (m + 1)
};

// Tracks the diagonal powers q^m of a designated state carrying an x|x loop
// through the reduced powers and counts how much of each reduced power they
// reach. The loop keeps q^m inside every core.
inline std::vector<LowerBoundRow> verify_lower_bound(const Transducer& t,
                                                     const std::string& base_label, int max_m) {
  if (max_m < 1) throw Error("verify_lower_bound: need at least one power");
  auto qi = t.state_index(base_label);
  if (!qi) throw UnknownState("verify_lower_bound: no state labeled '" + base_label + "'");
  bool has_loop = false;
  for (int x = 0; x < t.alphabet_size() && !has_loop; ++x)
    has_loop = t.next(x, *qi) == *qi && t.out(x, *qi) == x;
  if (!has_loop)
    throw Error("verify_lower_bound: state '" + base_label + "' carries no letter loop");

  const NormalForm base = min_core(t);
  if (!base.state_map[*qi])
    throw Error("verify_lower_bound: state '" + base_label + "' falls outside the core");
  const int bq = *base.state_map[*qi];

  std::vector<LowerBoundRow> rows;
  NormalForm acc = base;
  int cls = bq;
  for (int m = 1; m <= max_m; ++m) {
    if (m > 1) {
      const Transducer up = product(acc.machine, base.machine);
      const int up_index = cls * base.machine.num_states() + bq;
      acc = min_core(up);
      if (!acc.state_map[up_index])
        throw Error("internal: diagonal power left the core despite its letter loop");
      cls = *acc.state_map[up_index];
    }
    // breadth-first reachability from the tracked class
    std::vector<char> seen(acc.machine.num_states(), 0);
    std::deque<int> queue{cls};
    seen[cls] = 1;
    std::int64_t count = 0;
    while (!queue.empty()) {
      const int q = queue.front();
      queue.pop_front();
      ++count;
      for (int x = 0; x < acc.machine.alphabet_size(); ++x) {
        const int p = acc.machine.next(x, q);
        if (!seen[p]) {
          seen[p] = 1;
          queue.push_back(p);
        }
      }
    }
    LowerBoundRow row;
    row.m = m;
    row.bound = std::int64_t(1) << (m / 2);
    row.reachable = count;
    row.ok = count >= row.bound;
    row.gap = count - (m + 1);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace synchro
