#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "nlstar/structure.hpp"
#include "test_oracles.hpp"

using namespace nlstar;

namespace {

// Reachability closure; q and t share a component iff each reaches the other.
std::vector<std::vector<bool>> closure(const Dfa& dfa) {
  const std::size_t n = dfa.num_states();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (State q = 0; q < n; ++q) {
    r[q][q] = true;
    for (State t : dfa.row(q)) r[q][t] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

// Every cycle of the transition graph lies inside a bottom SCC.
bool circuits_only_in_bottom(const Dfa& dfa) {
  const auto scc = scc_decompose(dfa);
  for (State q = 0; q < dfa.num_states(); ++q) {
    if (scc.in_bottom(q)) continue;
    if (scc.components[scc.component_of[q]].size() > 1) return false;
    for (State t : dfa.row(q))
      if (t == q) return false;
  }
  return true;
}

// Literal search over pairs of equal-length words.
bool eld_literal(const Dfa& dfa, std::size_t max_len) {
  const auto scc = scc_decompose(dfa);
  for (std::size_t n = 0; n <= max_len; ++n) {
    const auto words = reference::words_of_length(dfa.alphabet_size(), n);
    for (const auto& w : words) {
      const State q1 = dfa.run(w);
      if (!dfa.is_final(q1) || !scc.in_bottom(q1)) continue;
      for (const auto& v : words) {
        const State q2 = dfa.run(v);
        if (!dfa.is_final(q2) && scc.in_bottom(q2)) return true;
      }
    }
  }
  return false;
}

Dfa small_eld_case(std::uint64_t i) {
  RandomStream rng(RngKey(77, "eld-cases").child(i));
  const std::size_t states = 1 + rng.below(6);
  const std::size_t letters = 2 + rng.below(2);
  return fixtures::small_random(RngKey(77, "eld-dfa").child(i), states, letters);
}

} // namespace

TEST(Scc, MatchesReachabilityClosure) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Dfa dfa = fixtures::small_random(RngKey(seed, "scc"), 1 + seed % 9, 1 + seed % 3);
    const auto scc = scc_decompose(dfa);
    const auto r = closure(dfa);
    const std::size_t n = dfa.num_states();
    std::size_t members = 0;
    for (const auto& c : scc.components) members += c.size();
    ASSERT_EQ(members, n);
    for (State a = 0; a < n; ++a) {
      for (State b = 0; b < n; ++b)
        ASSERT_EQ(scc.component_of[a] == scc.component_of[b], r[a][b] && r[b][a]);
      bool bottom = true;
      for (State b = 0; b < n; ++b)
        if (r[a][b] && !r[b][a]) bottom = false;
      ASSERT_EQ(scc.in_bottom(a), bottom);
    }
  }
}

TEST(Scc, EveryDfaHasABottomComponent) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto scc = scc_decompose(random_dfa(RngKey(seed, "bottom")));
    EXPECT_NE(std::find(scc.bottom.begin(), scc.bottom.end(), true), scc.bottom.end());
  }
}

TEST(Eld, Fixtures) {
  const auto until = is_equal_length_distinguishing(fixtures::until());
  ASSERT_TRUE(until.has_value());
  EXPECT_TRUE(validate_witness(fixtures::until(), *until));
  EXPECT_EQ(until->q1, 1u);
  EXPECT_EQ(until->q2, 2u);
  EXPECT_FALSE(is_equal_length_distinguishing(fixtures::ends_with_a()).has_value());
  EXPECT_FALSE(is_equal_length_distinguishing(fixtures::odd_length()).has_value());
  EXPECT_FALSE(is_equal_length_distinguishing(fixtures::odd_length(3)).has_value());
  EXPECT_FALSE(is_equal_length_distinguishing(fixtures::all_words(2)).has_value());
}

// Witnesses are shortest: both searches find the first length at which a pair exists.
TEST(Eld, AgreesWithBruteforce) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Dfa dfa = small_eld_case(i);
    const std::size_t n = dfa.num_states();
    const auto fast = is_equal_length_distinguishing(dfa);
    const auto slow = eld_bruteforce(dfa, 2 * n * n);
    ASSERT_EQ(fast.has_value(), slow.has_value()) << "case " << i;
    if (fast) {
      EXPECT_TRUE(validate_witness(dfa, *fast));
      EXPECT_TRUE(validate_witness(dfa, *slow));
      EXPECT_EQ(fast->w.size(), slow->w.size());
    }
  }
}

TEST(Eld, BruteforceMatchesLiteralPairEnumeration) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Dfa dfa = small_eld_case(i);
    for (std::size_t max_len = 0; max_len <= 4; ++max_len)
      ASSERT_EQ(eld_bruteforce(dfa, max_len).has_value(), eld_literal(dfa, max_len)) << i << " " << max_len;
  }
}

TEST(Eld, ComplementSwapsWitness) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Dfa dfa = small_eld_case(i);
    const Dfa flipped = dfa.complemented();
    const auto w = is_equal_length_distinguishing(dfa);
    const auto v = is_equal_length_distinguishing(flipped);
    ASSERT_EQ(w.has_value(), v.has_value());
    if (!w) continue;
    const EldWitness swapped{w->q2, w->q1, w->w_prime, w->w};
    EXPECT_TRUE(validate_witness(flipped, swapped));
  }
}

TEST(Eld, ProductBottomModeImpliesDefinition) {
  std::size_t product_hits = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Dfa dfa = small_eld_case(i);
    const auto strict = is_equal_length_distinguishing(dfa, EldMode::product_bscc);
    if (!strict) continue;
    ++product_hits;
    EXPECT_TRUE(is_equal_length_distinguishing(dfa).has_value());
    EXPECT_TRUE(validate_witness(dfa, *strict));
  }
  EXPECT_GT(product_hits, 0u);
}

// When every circuit sits in a bottom component and the DFA is not ELD, words of
// equal length that are long enough share their membership.
TEST(Eld, NonEldWithBottomCircuitsIsLengthDetermined) {
  std::size_t checked = 0;
  for (std::uint64_t i = 0; i < 3000 && checked < 40; ++i) {
    RandomStream rng(RngKey(91, "prop").child(i));
    const std::size_t states = 2 + rng.below(4);
    const Dfa dfa = fixtures::small_random(RngKey(91, "prop-dfa").child(i), states, 2);
    if (!circuits_only_in_bottom(dfa) || is_equal_length_distinguishing(dfa)) continue;
    ++checked;
    for (std::size_t len = states; len <= std::min<std::size_t>(states * states, 12); ++len) {
      const auto words = reference::words_of_length(2, len);
      const bool first = dfa.accepts(words.front());
      for (const auto& w : words) ASSERT_EQ(dfa.accepts(w), first) << "case " << i << " length " << len;
    }
  }
  EXPECT_GE(checked, 10u);
  // the parity automaton satisfies the premise
  EXPECT_TRUE(circuits_only_in_bottom(fixtures::odd_length()));
}

TEST(Eld, ValidateWitnessRejectsBadWitnesses) {
  const Dfa dfa = fixtures::until();
  EXPECT_FALSE(validate_witness(dfa, EldWitness{1, 2, Word{1}, Word{2, 2}}));  // lengths differ
  EXPECT_FALSE(validate_witness(dfa, EldWitness{2, 1, Word{2}, Word{1}}));     // finality swapped
  EXPECT_FALSE(validate_witness(dfa, EldWitness{0, 2, Word{0}, Word{2}}));     // q0 not bottom, not final
  EXPECT_TRUE(validate_witness(dfa, EldWitness{1, 2, Word{1}, Word{2}}));
}
