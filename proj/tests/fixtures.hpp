#pragma once

#include "nlstar/automaton.hpp"

namespace nlstar::fixtures {

// Letters: a = 0, b = 1, c = 2.

// 'a Until b'; c means neither proposition holds.
inline Dfa until() { return Dfa(3, Alphabet{3}, 0, {1}, {0, 1, 2, 1, 1, 1, 2, 2, 2}); }

// (a+b)*a over {a, b, c}; state 2 is the rejecting sink reached on c.
inline Dfa ends_with_a() { return Dfa(3, Alphabet{3}, 0, {1}, {1, 0, 2, 1, 0, 2, 2, 2, 2}); }

// Odd length over {a, b}.
inline Dfa odd_length(std::size_t letters = 2) {
  std::vector<State> t;
  for (State q = 0; q < 2; ++q)
    for (std::size_t a = 0; a < letters; ++a) t.push_back(1 - q);
  return Dfa(2, Alphabet{letters}, 0, {1}, t);
}

inline Dfa all_words(std::size_t letters) { return Dfa(1, Alphabet{letters}, 0, {0}, std::vector<State>(letters, 0)); }
inline Dfa no_words(std::size_t letters) { return Dfa(1, Alphabet{letters}, 0, {}, std::vector<State>(letters, 0)); }

// Small random DFA with exactly `states` states and `letters` letters.
inline Dfa small_random(RngKey key, std::size_t states, std::size_t letters) {
  RandomStream rng(key);
  std::vector<State> finals;
  for (State q = 0; q < states; ++q)
    if (rng.bernoulli(0.5)) finals.push_back(q);
  std::vector<State> t(states * letters);
  for (auto& x : t) x = static_cast<State>(rng.below(states));
  return Dfa(states, Alphabet{letters}, static_cast<State>(rng.below(states)), finals, t);
}

} // namespace nlstar::fixtures
