#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "synchro/catalog.hpp"
#include "synchro/growth.hpp"
#include "synchro/oracles.hpp"

using namespace synchro;

TEST_CASE("nested sums have closed forms", "[growth][sigma]") {
  REQUIRE(sigma(1, 0) == 0);
  REQUIRE(sigma(1, 3) == 6);
  REQUIRE(sigma(2, 2) == 4);
  REQUIRE(sigma(5, 0) == 0);
  for (int j = 0; j <= 20; ++j) REQUIRE(sigma(1, j) == j * (j + 1) / 2);
  // depth-i prefix sums of the identity are binomial coefficients
  for (int i = 1; i <= 8; ++i)
    for (int j = 0; j <= 8; ++j) REQUIRE(sigma(i, j) == binom(j + i, i + 1));
  REQUIRE_THROWS_AS(sigma(0, 3), Error);
  REQUIRE_THROWS_AS(sigma(-1, 2), Error);
  REQUIRE_THROWS_AS(sigma(40, 40), CapExceeded);
}

TEST_CASE("the memoized sum table agrees with the direct function", "[growth][sigma]") {
  SigmaTable table;
  for (int i = 1; i <= 6; ++i)
    for (int j = 0; j <= 12; ++j) REQUIRE(table.value(i, j) == sigma(i, j));
  // revisiting cached entries returns the same values
  REQUIRE(table.value(3, 5) == sigma(3, 5));
}

TEST_CASE("the counting gadget is invertible but never synchronizes", "[growth][gadget]") {
  const Transducer d = dummy_transducer();
  REQUIRE(d.num_states() == 5);
  REQUIRE(d.alphabet_size() == 2);
  REQUIRE(is_invertible(d));
  REQUIRE_FALSE(sync_level(d).has_value());
  REQUIRE_FALSE(is_core(d));
  REQUIRE(parse(serialize(d)) == d);
  REQUIRE(d == builtin("dummy").machine);
}

TEST_CASE("gadget runs tracked by simulation", "[growth][gadget]") {
  const auto states = dummy_active_state({0, 0}, 2);
  REQUIRE(states.size() == 2);
  REQUIRE(states[1] == SigmaState{1, 1});
  REQUIRE_THROWS_AS(dummy_active_state({0, 2}, 1), LetterOutOfRange);
  REQUIRE_THROWS_AS(dummy_active_state({0}, 0), Error);
}

TEST_CASE("gadget simulation matches the machine itself", "[growth][gadget]") {
  const Transducer d = dummy_transducer();
  // recover (subscript, exponent) from the builder's labels
  std::map<std::string, SigmaState> decode;
  decode["s0^1"] = {0, 1};
  decode["s1^1"] = {1, 1};
  decode["s0^0"] = {0, 0};
  decode["s1^0"] = {1, 0};
  const int start = d.state_index("s1^1").value();
  for (int len = 0; len <= 8; ++len) {
    const std::int64_t total = word_count(2, len);
    for (std::int64_t r = 0; r < total; ++r) {
      const Word bits = word_unrank(r, len, 2);
      for (int k = 1; k <= 6; ++k) {
        // cascade through the machine's own tables, each component reading
        // the previous component's output letter
        std::vector<int> comps(static_cast<size_t>(k), start);
        for (int bit : bits) {
          int c = bit;
          for (auto& q : comps) {
            const int emitted = d.out(c, q);
            q = d.next(c, q);
            c = emitted;
          }
        }
        const auto by_rules = dummy_active_state(bits, k);
        REQUIRE(by_rules.size() == comps.size());
        for (size_t i = 0; i < comps.size(); ++i)
          REQUIRE(by_rules[i] == decode.at(d.label(comps[i])));
      }
    }
  }
}

TEST_CASE("the closed form for gadget exponents matches stepping", "[growth][gadget]") {
  for (int len = 0; len <= 8; ++len) {
    const std::int64_t total = word_count(2, len);
    for (std::int64_t r = 0; r < total; ++r) {
      const Word bits = word_unrank(r, len, 2);
      for (int k = 1; k <= 8; ++k) {
        const auto stepped = dummy_active_state(bits, k);
        const auto closed = dummy_active_state_closed_form(bits, k);
        REQUIRE(closed.size() == stepped.size());
        for (size_t i = 0; i < closed.size(); ++i) REQUIRE(closed[i] == stepped[i]);
      }
    }
  }
}

TEST_CASE("prescribed exponent patterns are solvable", "[growth][gadget]") {
  REQUIRE(solve_exponent_prefix({0}) == Word{1});
  for (int j = 1; j <= 4; ++j) {
    const std::int64_t total = word_count(2, j);
    for (std::int64_t r = 0; r < total; ++r) {
      const Word target = word_unrank(r, j, 2);
      const Word bits = solve_exponent_prefix(target);
      REQUIRE(static_cast<int>(bits.size()) == 2 * j - 1);
      // read back the exponents of the first j diagonal components
      const auto run = dummy_active_state(bits, j);
      for (int l = 1; l <= j; ++l) REQUIRE(run[static_cast<size_t>(l - 1)].exp == target[static_cast<size_t>(l - 1)]);
    }
  }
  REQUIRE_THROWS_AS(solve_exponent_prefix({}), Error);
  REQUIRE_THROWS_AS(solve_exponent_prefix({0, 2}), LetterOutOfRange);
}

TEST_CASE("reduced powers of the shift double every step", "[growth][series]") {
  const GrowthSeries s = growth_series(builtin("shift2").machine, 6);
  REQUIRE(s.records.size() == 6);
  std::int64_t expect = 2;
  for (const auto& rec : s.records) {
    REQUIRE(rec.min_core_size == expect);
    REQUIRE(rec.core_size == expect);
    REQUIRE(rec.sync_level_m == rec.m);
    REQUIRE(rec.conjecture_ok);
    expect *= 2;
  }
  REQUIRE(s.records[0].core_dist_m == 0);
  REQUIRE(s.conjecture_all);
  REQUIRE(s.classification == GrowthClass::exponential);
}

TEST_CASE("reduced powers of the exchange machine grow slower", "[growth][series]") {
  const GrowthSeries s = growth_series(builtin("g_h3").machine, 6);
  const std::vector<std::int64_t> sizes = {2, 3, 5, 7, 11, 15};
  for (size_t i = 0; i < sizes.size(); ++i) {
    REQUIRE(s.records[i].min_core_size == sizes[i]);
    REQUIRE(s.records[i].min_core_size >= s.records[i].m);
    REQUIRE(s.records[i].sync_level_m <= s.records[i].m);
  }
  REQUIRE(s.conjecture_all);
  REQUIRE_THROWS_AS(growth_series(builtin("dummy").machine, 4), NotSynchronizing);
  REQUIRE_THROWS_AS(growth_series(builtin("shift2").machine, 0), Error);
}

TEST_CASE("raw sizes are only recorded while they fit the budget", "[growth][series]") {
  GrowthOptions opt;
  opt.raw_state_limit = 8;
  const GrowthSeries s = growth_series(builtin("shift2").machine, 5, opt);
  REQUIRE(s.records[2].core_size.has_value());   // 2^3 = 8 still fits
  REQUIRE_FALSE(s.records[3].core_size.has_value());
  REQUIRE(s.records[3].min_core_size == 16);     // the reduced chain continues
}

TEST_CASE("growth classification from size records", "[growth][classify]") {
  auto records = [](const std::vector<std::int64_t>& sizes) {
    std::vector<GrowthRecord> r;
    for (size_t i = 0; i < sizes.size(); ++i) {
      GrowthRecord g;
      g.m = static_cast<int>(i) + 1;
      g.min_core_size = sizes[i];
      r.push_back(g);
    }
    return r;
  };

  REQUIRE_THROWS_AS(classify_growth(records({2, 4, 8})), TooFewRecords);
  REQUIRE(classify_growth(records({5, 8, 9, 9, 9})) == GrowthClass::bounded);
  REQUIRE(classify_growth(records({2, 4, 8, 16, 32, 64, 128, 256})) == GrowthClass::exponential);

  std::vector<std::int64_t> linear;
  for (int m = 1; m <= 40; ++m) linear.push_back(m + 1);
  REQUIRE(classify_growth(records(linear)) == GrowthClass::at_least_polynomial);

  REQUIRE(classify_growth(records({4, 5, 4, 5, 4, 5, 4, 5})) == GrowthClass::inconclusive);

  GrowthFit fit;
  classify_growth(records({2, 4, 8, 16, 32, 64, 128, 256}), ClassifyOptions{}, &fit);
  REQUIRE(fit.slope == Catch::Approx(0.6931).margin(1e-3));
  REQUIRE(fit.residual < 1e-9);

  REQUIRE(to_string(GrowthClass::exponential) == std::string("exponential"));
  REQUIRE(to_string(GrowthClass::at_least_polynomial) == std::string("at-least-polynomial"));
}

TEST_CASE("diagonal states survive into reduced powers", "[growth][lowerbound]") {
  const auto rows = verify_lower_bound(builtin("g_h3").machine, "b", 6);
  REQUIRE(rows.size() == 6);
  const std::vector<std::int64_t> sizes = {2, 3, 5, 7, 11, 15};
  for (const auto& row : rows) {
    REQUIRE(row.ok);
    REQUIRE(row.bound == (std::int64_t(1) << (row.m / 2)));
    REQUIRE(row.reachable >= row.m + 1);
    REQUIRE(row.reachable <= sizes[static_cast<size_t>(row.m - 1)]);
    REQUIRE(row.gap == row.reachable - (row.m + 1));
  }
  // state a has no letter loop, so the diagonal argument does not apply
  REQUIRE_THROWS_AS(verify_lower_bound(builtin("g_h3").machine, "a", 3), Error);
  REQUIRE_THROWS_AS(verify_lower_bound(builtin("g_h3").machine, "nope", 3), UnknownState);
}
