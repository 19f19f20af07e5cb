#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlstar/errors.hpp"
#include "nlstar/random.hpp"

namespace nlstar {

using Letter = std::uint16_t;
using Word = std::vector<Letter>;
using WordView = std::span<const Letter>;
using State = std::uint32_t;

// Letters are the indices 0..size-1.
struct Alphabet {
  std::size_t size = 1;

  friend constexpr bool operator==(Alphabet, Alphabet) = default;
};

inline void check_letters(WordView w, std::size_t alphabet_size) {
  for (Letter a : w) {
    if (a >= alphabet_size) {
      throw DomainError("letter " + std::to_string(a) + " outside alphabet of size " +
                        std::to_string(alphabet_size));
    }
  }
}

inline Word concat(WordView a, WordView b) {
  Word out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Complete DFA over a dense alphabet. The transition table is row-major:
// transitions[q * alphabet_size + a] is the successor of q on letter a.
// Immutable after construction.
class Dfa {
public:
  Dfa(std::size_t num_states, Alphabet alphabet, State initial, std::vector<State> finals,
      std::vector<State> transitions)
      : num_states_(num_states),
        alphabet_(alphabet),
        initial_(initial),
        is_final_(num_states, 0),
        transitions_(std::move(transitions)) {
    if (num_states_ == 0) throw DomainError("a DFA needs at least one state");
    if (alphabet_.size == 0) throw DomainError("alphabet must be nonempty");
    if (alphabet_.size > std::size_t{1} << (8 * sizeof(Letter))) {
      throw DomainError("alphabet too large for the letter type");
    }
    if (initial_ >= num_states_) throw DomainError("initial state out of range");
    if (transitions_.size() != num_states_ * alphabet_.size) {
      throw DomainError("transition table is not complete: expected " +
                        std::to_string(num_states_ * alphabet_.size) + " entries, got " +
                        std::to_string(transitions_.size()));
    }
    for (State t : transitions_) {
      if (t >= num_states_) throw DomainError("transition target out of range");
    }
    for (State f : finals) {
      if (f >= num_states_) throw DomainError("final state out of range");
      is_final_[f] = 1;
    }
  }

  std::size_t num_states() const noexcept { return num_states_; }
  Alphabet alphabet() const noexcept { return alphabet_; }
  std::size_t alphabet_size() const noexcept { return alphabet_.size; }
  State initial() const noexcept { return initial_; }
  bool is_final(State q) const noexcept { return is_final_[q] != 0; }

  // Sorted ascending.
  std::vector<State> finals() const {
    std::vector<State> out;
    for (State q = 0; q < num_states_; ++q) {
      if (is_final_[q]) out.push_back(q);
    }
    return out;
  }

  State next(State q, Letter a) const noexcept { return transitions_[q * alphabet_.size + a]; }
  std::span<const State> row(State q) const noexcept {
    return {transitions_.data() + q * alphabet_.size, alphabet_.size};
  }
  std::span<const State> transitions() const noexcept { return transitions_; }

  // Unchecked run; letters must be in range.
  State run_from(State q, WordView w) const noexcept {
    const State* table = transitions_.data();
    const std::size_t k = alphabet_.size;
    for (Letter a : w) q = table[q * k + a];
    return q;
  }

  State run(WordView w) const {
    check_letters(w, alphabet_.size);
    return run_from(initial_, w);
  }

  bool accepts(WordView w) const { return is_final(run(w)); }

  // Same transition structure, finals replaced by their complement.
  Dfa complemented() const {
    std::vector<State> finals;
    for (State q = 0; q < num_states_; ++q) {
      if (!is_final_[q]) finals.push_back(q);
    }
    return Dfa(num_states_, alphabet_, initial_, std::move(finals), transitions_);
  }

  friend bool operator==(const Dfa&, const Dfa&) = default;

private:
  std::size_t num_states_;
  Alphabet alphabet_;
  State initial_;
  std::vector<std::uint8_t> is_final_;
  std::vector<State> transitions_;
};

// Shortest word in the symmetric difference of the two languages, or nullopt when
// the languages are equal. Breadth-first search over the product automaton,
// exploring letters in ascending order.
inline std::optional<Word> dfa_equivalent(const Dfa& lhs, const Dfa& rhs) {
  if (lhs.alphabet_size() != rhs.alphabet_size()) {
    throw DomainError("cannot compare DFAs over different alphabets");
  }
  const std::size_t k = lhs.alphabet_size();
  const std::size_t n2 = rhs.num_states();
  auto index = [n2](State p, State q) { return static_cast<std::size_t>(p) * n2 + q; };

  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(lhs.num_states() * n2, unvisited);
  std::vector<Letter> via(parent.size(), 0);
  std::queue<std::pair<State, State>> frontier;

  const std::size_t start = index(lhs.initial(), rhs.initial());
  parent[start] = start;
  frontier.emplace(lhs.initial(), rhs.initial());
  while (!frontier.empty()) {
    auto [p, q] = frontier.front();
    frontier.pop();
    const std::size_t here = index(p, q);
    if (lhs.is_final(p) != rhs.is_final(q)) {
      Word w;
      for (std::size_t at = here; at != start; at = parent[at]) w.push_back(via[at]);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (std::size_t a = 0; a < k; ++a) {
      const State p2 = lhs.next(p, static_cast<Letter>(a));
      const State q2 = rhs.next(q, static_cast<Letter>(a));
      const std::size_t there = index(p2, q2);
      if (parent[there] != unvisited) continue;
      parent[there] = here;
      via[there] = static_cast<Letter>(a);
      frontier.emplace(p2, q2);
    }
  }
  return std::nullopt;
}

// Random DFA generation:
//   n_q uniform in [10, max_states], n_a uniform in [3, max_alphabet],
//   finals = {0..n_f} with n_f uniform in [0, n_q - 1],
//   initial uniform over states, every transition target uniform over states.
// Unreachable states are kept.
inline Dfa random_dfa(RngKey key, std::size_t max_states = 50, std::size_t max_alphabet = 20) {
  if (max_states < 10) throw DomainError("max_states must be at least 10");
  if (max_alphabet < 3) throw DomainError("max_alphabet must be at least 3");
  RandomStream rng(key);
  const auto n_q = static_cast<std::size_t>(rng.uniform_int(10, static_cast<std::int64_t>(max_states)));
  const auto n_a = static_cast<std::size_t>(rng.uniform_int(3, static_cast<std::int64_t>(max_alphabet)));
  const auto n_f = static_cast<State>(rng.uniform_int(0, static_cast<std::int64_t>(n_q) - 1));
  std::vector<State> finals(n_f + 1);
  for (State q = 0; q <= n_f; ++q) finals[q] = q;
  const auto initial = static_cast<State>(rng.below(n_q));
  std::vector<State> transitions(n_q * n_a);
  for (auto& t : transitions) t = static_cast<State>(rng.below(n_q));
  return Dfa(n_q, Alphabet{n_a}, initial, std::move(finals), std::move(transitions));
}

} // namespace nlstar
