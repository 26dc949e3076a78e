#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "synchro/algebra.hpp"
#include "synchro/catalog.hpp"
#include "synchro/oracles.hpp"
#include "synchro/periodic_word.hpp"

using namespace synchro;

namespace {

Word random_word(std::mt19937_64& rng, int n, int len) {
  std::uniform_int_distribution<int> letter(0, n - 1);
  Word w(static_cast<size_t>(len));
  for (auto& x : w) x = letter(rng);
  return w;
}

}  // namespace

TEST_CASE("product feeds the first machine's output to the second", "[algebra][product]") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Transducer a = random_transducer(2, 1 + trial % 3, 2000 + trial);
    const Transducer b = random_transducer(2, 1 + (trial / 3) % 3, 2100 + trial);
    const Transducer ab = product(a, b);
    REQUIRE(ab.num_states() == a.num_states() * b.num_states());
    const Word w = random_word(rng, 2, 9);
    for (int p = 0; p < a.num_states(); ++p)
      for (int q = 0; q < b.num_states(); ++q) {
        const auto [pa, mid] = read_word(a, p, w);
        const auto [pb, out] = read_word(b, q, mid);
        const auto [pq, direct] = read_word(ab, p * b.num_states() + q, w);
        REQUIRE(direct == out);
        REQUIRE(pq == pa * b.num_states() + pb);
      }
  }
  REQUIRE_THROWS_AS(product(builtin("shift2").machine, builtin("g_h3").machine),
                    AlphabetMismatch);
}

TEST_CASE("product labels join with a comma and stay unique", "[algebra][product]") {
  const Transducer a(1, {"p,q", "p"}, {0, 1}, {0, 0});
  const Transducer b(1, {"q", "q,q"}, {0, 1}, {0, 0});
  const Transducer ab = product(a, b);
  // "p,q"+"q" and "p"+"q,q" both join to p,q,q; a suffix disambiguates
  REQUIRE(ab.labels()[0] == "p,q,q");
  REQUIRE(ab.labels()[3] == "p,q,q~2");
  REQUIRE(parse(serialize(ab)) == ab);
}

TEST_CASE("powers multiply out the square of the shift", "[algebra][power]") {
  const Transducer shift = builtin("shift2").machine;
  const Transducer sq = power(shift, 2);
  REQUIRE(sq.num_states() == 4);
  // from (a1, a1): the output lags the input by two letters
  REQUIRE(read_word(sq, 0, {1, 0, 1}).second == Word{0, 0, 1});
  REQUIRE(same_shape(power(shift, 1), shift));
  REQUIRE(power(shift, 5).num_states() == 32);
  REQUIRE_THROWS_AS(power(shift, 0), Error);
  REQUIRE_THROWS_AS(power(shift, 30, 1 << 10), CapExceeded);
}

TEST_CASE("refinement merges behaviorally equal states", "[algebra][minimize]") {
  // two disjoint copies of the shift glued over the same alphabet
  TransducerBuilder b(2, {"a1", "a2", "b1", "b2"});
  b.add(0, 0, 0, 0);
  b.add(0, 1, 0, 1);
  b.add(1, 0, 1, 0);
  b.add(1, 1, 1, 1);
  b.add(2, 0, 0, 2);
  b.add(2, 1, 0, 3);
  b.add(3, 0, 1, 2);
  b.add(3, 1, 1, 3);
  const Transducer t = b.build();
  const Partition part = omega_partition(t);
  REQUIRE(part.count == 2);
  REQUIRE(part.cls == std::vector<int>{0, 1, 0, 1});
  const Transducer m = minimize(t);
  REQUIRE(m.num_states() == 2);
  REQUIRE(m.labels() == std::vector<std::string>{"a1", "a2"});  // first member names the class
  REQUIRE(same_shape(m, builtin("shift2").machine));
  REQUIRE(omega_equivalent(t, 0, t, 2));
  REQUIRE_FALSE(omega_equivalent(t, 0, t, 1));
  REQUIRE(omega_equivalent(t, 1, builtin("shift2").machine, 1));
}

TEST_CASE("refinement classes match the bounded-depth comparison", "[algebra][minimize]") {
  for (int i = 0; i < 120; ++i) {
    const int states = 1 + i % 5;
    const Transducer t = random_transducer(2 + i % 2, states, 2500 + i);
    const auto part = omega_partition(t);
    const auto eq = bounded_depth_equivalent(t, t, states * states);
    for (int q = 0; q < states; ++q)
      for (int p = 0; p < states; ++p)
        REQUIRE((part.cls[q] == part.cls[p]) == static_cast<bool>(eq[q][p]));
  }
}

TEST_CASE("minimization never changes behavior", "[algebra][minimize]") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    const Transducer t = random_transducer(2, 1 + i % 5, 2700 + i);
    const Transducer m = minimize(t);
    const Partition part = omega_partition(t);
    const Word w = random_word(rng, 2, 12);
    for (int q = 0; q < t.num_states(); ++q)
      REQUIRE(read_word(t, q, w).second == read_word(m, part.cls[q], w).second);
  }
}

TEST_CASE("normal form of the shift", "[algebra][normalform]") {
  const NormalForm nf = min_core(builtin("shift2").machine);
  REQUIRE(nf.level == 1);
  REQUIRE(nf.machine.labels() == std::vector<std::string>{"0", "1"});
  // state "0": both letters emit 0; state "1": both letters emit 1
  REQUIRE(nf.machine.out(0, 0) == 0);
  REQUIRE(nf.machine.out(1, 0) == 0);
  REQUIRE(nf.machine.out(0, 1) == 1);
  REQUIRE(nf.machine.out(1, 1) == 1);
  REQUIRE(nf.machine.next(0, 0) == 0);
  REQUIRE(nf.machine.next(1, 0) == 1);
  REQUIRE(nf.machine.next(0, 1) == 0);
  REQUIRE(nf.machine.next(1, 1) == 1);
  REQUIRE(nf.state_map == std::vector<std::optional<int>>{0, 1});
}

TEST_CASE("normal form is idempotent and drops non-core states", "[algebra][normalform]") {
  TransducerBuilder b(2, {"a1", "a2", "tail"});
  b.add(0, 0, 0, 0);
  b.add(0, 1, 0, 1);
  b.add(1, 0, 1, 0);
  b.add(1, 1, 1, 1);
  b.add(2, 0, 1, 0);
  b.add(2, 1, 0, 1);
  const NormalForm nf = min_core(b.build());
  REQUIRE(nf.machine.num_states() == 2);
  REQUIRE_FALSE(nf.state_map[2].has_value());
  REQUIRE(nf.state_map[0] == 0);
  REQUIRE(min_core(nf.machine) == nf);
  REQUIRE_THROWS_AS(min_core(builtin("dummy").machine), NotSynchronizing);
}

TEST_CASE("incremental powers equal reduced raw powers", "[algebra][normalform]") {
  for (const char* name : {"shift2", "oneway2", "g_h3"}) {
    const Transducer t = builtin(name).machine;
    for (int m = 1; m <= 5; ++m) REQUIRE(nf_power(t, m) == min_core(power(t, m)));
  }
}

TEST_CASE("the normal-form product is associative with identity", "[algebra][monoid]") {
  const NormalForm g = min_core(builtin("g_h3").machine);
  const NormalForm f1 = min_core(bisync_family(1).machine);
  const NormalForm f2 = min_core(bisync_family(2).machine);
  REQUIRE(monoid_product(monoid_product(g, f1), f2) ==
          monoid_product(g, monoid_product(f1, f2)));
  const NormalForm id3 = min_core(identity_transducer(3));
  REQUIRE(id3.machine.num_states() == 1);
  REQUIRE(id3.level == 0);
  REQUIRE(monoid_product(g, id3) == g);
  REQUIRE(monoid_product(id3, g) == g);
}

TEST_CASE("word transformations at a level", "[algebra][levelmap]") {
  const auto lt_g = level_transformation(builtin("g_h3").machine, 1);
  REQUIRE(lt_g.image == std::vector<std::int64_t>{0, 2, 1});
  const auto lt_h = level_transformation(builtin("h4exp").machine, 1);
  REQUIRE(lt_h.image == std::vector<std::int64_t>{1, 2, 3, 0});
  const auto lt_ow = level_transformation(builtin("oneway2").machine, 1);
  REQUIRE(lt_ow.image == std::vector<std::int64_t>{1, 1});

  REQUIRE_THROWS_AS(level_transformation(bisync_family(2).machine, 1), NotSynchronizingAtLevel);
  REQUIRE_THROWS_AS(level_transformation(builtin("dummy").machine, 2), NotSynchronizing);
}

TEST_CASE("word transformations compose like the machines", "[algebra][levelmap]") {
  const Transducer g = builtin("g_h3").machine;
  const Transducer f = bisync_family(1).machine;
  const auto direct = level_transformation(product(g, f), 2);
  const auto staged = compose(level_transformation(g, 2), level_transformation(f, 2));
  REQUIRE(direct.image == staged.image);
  REQUIRE_THROWS_AS(compose(level_transformation(g, 1), level_transformation(g, 2)),
                    AlphabetMismatch);
}

TEST_CASE("letter loops of iterated powers", "[algebra][fixedletter]") {
  const auto shift = fixed_letter_state(builtin("shift2").machine);
  REQUIRE(shift.iterate == 1);
  REQUIRE(shift.letter == 0);
  REQUIRE(shift.power.machine.label(shift.state) == "0");

  const auto ow = fixed_letter_state(builtin("oneway2").machine);
  REQUIRE(ow.iterate == 1);
  REQUIRE(ow.letter == 1);
  REQUIRE(ow.power.machine.next(1, ow.state) == ow.state);
  REQUIRE(ow.power.machine.out(1, ow.state) == 1);

  // the induced letter map of h4exp is a 4-cycle, so four iterations
  const auto h4 = fixed_letter_state(builtin("h4exp").machine);
  REQUIRE(h4.iterate == 4);
  REQUIRE(h4.letter == 0);
  REQUIRE(h4.power == nf_power(builtin("h4exp").machine, 4));

  const auto g = fixed_letter_state(builtin("g_h3").machine);
  REQUIRE(g.iterate == 1);
  REQUIRE(g.letter == 0);

  REQUIRE_THROWS_AS(fixed_letter_state(builtin("dummy").machine), NotSynchronizing);
}

TEST_CASE("conjugation by an invertible machine", "[algebra][conjugate]") {
  const NormalForm a = min_core(builtin("g_h3").machine);
  const Transducer c = bisync_family(1).machine;
  const NormalForm b = conjugate(a, c);
  // |c^-1| * |a| * |c| bounds the conjugate's size
  REQUIRE(b.machine.num_states() <= c.num_states() * a.machine.num_states() * c.num_states());
  REQUIRE(conjugate(b, invert(c)) == a);
  REQUIRE(conjugate(a, identity_transducer(3)) == a);
  REQUIRE_THROWS_AS(conjugate(a, builtin("shift2").machine), NotInvertible);
}

TEST_CASE("periodic words reduce and rotate", "[algebra][periodic]") {
  const PeriodicWord w({0, 1, 0, 1});
  REQUIRE(w.period() == 2);
  REQUIRE(w.letters() == Word{0, 1});
  REQUIRE(w == PeriodicWord({1, 0}));
  REQUIRE(w.rotated().letters() == Word{1, 0});
  REQUIRE_FALSE(w == PeriodicWord({0, 0}));
  REQUIRE(PeriodicWord({0, 1, 1}) == PeriodicWord({1, 1, 0}));
  REQUIRE(PeriodicWord({2, 1}).to_string(3) == "21");
  REQUIRE_THROWS_AS(PeriodicWord({}), Error);
}

TEST_CASE("action on periodic words", "[algebra][periodic]") {
  const Transducer g = builtin("g_h3").machine;
  REQUIRE(act_periodic(g, PeriodicWord({1, 2})).letters() == Word{2, 0});
  // constant input through the shift reproduces itself
  const Transducer shift = builtin("shift2").machine;
  REQUIRE(act_periodic(shift, PeriodicWord({0})).letters() == Word{0});
  REQUIRE(act_periodic(shift, PeriodicWord({0, 1})).letters() == Word{1, 0});
  REQUIRE_THROWS_AS(act_periodic(builtin("dummy").machine, PeriodicWord({0})), NotSynchronizing);
  REQUIRE_THROWS_AS(act_periodic(g, PeriodicWord({0, 5})), LetterOutOfRange);
}

TEST_CASE("action composes and commutes with rotation", "[algebra][periodic]") {
  const Transducer g = builtin("g_h3").machine;
  const Transducer f = bisync_family(2).machine;
  const Transducer gf = product(g, f);
  for (int p = 1; p <= 5; ++p) {
    const std::int64_t total = word_count(3, p);
    for (std::int64_t r = 0; r < total; ++r) {
      const PeriodicWord w(word_unrank(r, p, 3));
      REQUIRE(act_periodic(gf, w).letters() ==
              act_periodic(f, act_periodic(g, w)).letters());
      REQUIRE(act_periodic(g, w.rotated()).letters() ==
              act_periodic(g, w).rotated().letters());
    }
  }
}
