#pragma once

// Noisy devices built from a DFA. The two random devices realize a random
// language by keyed hashing: the fate of every word is decided by
// hash_word(key, w), so it is fixed once and for all, independent of the order
// in which words are asked and safe to query from several threads.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nlstar/automaton.hpp"
#include "nlstar/oracle.hpp"

namespace nlstar {

namespace detail {
// p = 0 is accepted so that tests and harness runs can switch noise off.
inline void check_noise_probability(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw ConfigError("noise probability must lie in [0, 1), got " + std::to_string(p));
}
} // namespace detail

// Flips the base classification of each word with probability p.
class NoisyOutputOracle {
public:
  NoisyOutputOracle(Dfa base, double p, RandomLanguageKey key)
      : base_(std::move(base)), p_(p), key_(key) {
    detail::check_noise_probability(p);
  }

  std::size_t alphabet_size() const noexcept { return base_.alphabet_size(); }
  const Dfa& base() const noexcept { return base_; }
  double p() const noexcept { return p_; }
  RandomLanguageKey key() const noexcept { return key_; }

  bool flipped(WordView w) const noexcept { return bernoulli_from_hash(hash_word(key_, w), p_); }

  bool accepts(WordView w) const { return base_.accepts(w) != flipped(w); }

private:
  Dfa base_;
  double p_;
  RandomLanguageKey key_;
};

// Perturbs each letter with probability p, replacing it by one of the other
// |Σ|-1 letters uniformly, then classifies the perturbed word with the base DFA.
// Exactly one perturbation exists per word.
class NoisyInputOracle {
public:
  NoisyInputOracle(Dfa base, double p, RandomLanguageKey key)
      : base_(std::move(base)), p_(p), key_(key) {
    detail::check_noise_probability(p);
    if (base_.alphabet_size() < 2) throw ConfigError("input noise needs an alphabet of at least two letters");
  }

  std::size_t alphabet_size() const noexcept { return base_.alphabet_size(); }
  const Dfa& base() const noexcept { return base_; }
  double p() const noexcept { return p_; }
  RandomLanguageKey key() const noexcept { return key_; }

  // The frozen perturbation of w. Position i draws from mix64(h_w ^ mix64(i));
  // replaced letters take the hash mix64 of that draw to pick among the others.
  Word perturbed(WordView w) const {
    check_letters(w, alphabet_size());
    Word out(w.begin(), w.end());
    const std::uint64_t h = hash_word(key_, w);
    const std::uint64_t others = alphabet_size() - 1;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const std::uint64_t draw = position_draw(h, i);
      if (bernoulli_from_hash(draw, p_)) out[i] = replacement(out[i], draw, others);
    }
    return out;
  }

  bool accepts(WordView w) const {
    check_letters(w, alphabet_size());
    const std::uint64_t h = hash_word(key_, w);
    const std::uint64_t others = alphabet_size() - 1;
    State q = base_.initial();
    for (std::size_t i = 0; i < w.size(); ++i) {
      Letter a = w[i];
      const std::uint64_t draw = position_draw(h, i);
      if (bernoulli_from_hash(draw, p_)) a = replacement(a, draw, others);
      q = base_.next(q, a);
    }
    return base_.is_final(q);
  }

private:
  static std::uint64_t position_draw(std::uint64_t word_hash, std::size_t i) noexcept {
    return mix64(word_hash ^ mix64(static_cast<std::uint64_t>(i) + 0x2545f4914f6cdd1dULL));
  }
  static Letter replacement(Letter original, std::uint64_t draw, std::uint64_t others) noexcept {
    const auto r = static_cast<Letter>(below_from_hash(mix64(draw), others));
    return r < original ? r : static_cast<Letter>(r + 1);
  }

  Dfa base_;
  double p_;
  RandomLanguageKey key_;
};

// c : Σ ∪ {λ} → ℤ.
struct CounterFunction {
  std::int64_t c_lambda = 0;
  std::vector<std::int64_t> per_letter;

  friend bool operator==(const CounterFunction&, const CounterFunction&) = default;
};

// c̄(λ) = c(λ), c̄(wa) = c̄(w) + c(a).
inline std::int64_t counter_value(const CounterFunction& counter, WordView w) {
  check_letters(w, counter.per_letter.size());
  std::int64_t value = counter.c_lambda;
  for (Letter a : w) value += counter.per_letter[a];
  return value;
}

// c(λ) uniform over the integers 0..|Σ|; each c(a) is -1 with probability 1/4
// and each of 0..6 with probability 3/28, drawn as one uniform index in [0, 28).
inline CounterFunction random_counter_function(RngKey key, Alphabet alphabet) {
  RandomStream rng(key);
  CounterFunction counter;
  counter.c_lambda = rng.uniform_int(0, static_cast<std::int64_t>(alphabet.size));
  counter.per_letter.resize(alphabet.size);
  for (auto& c : counter.per_letter) {
    const auto r = static_cast<std::int64_t>(rng.below(28));
    c = r < 7 ? -1 : (r - 7) / 3;
  }
  return counter;
}

// L(A_c) = L(A) ∪ { w : c̄(w) ≤ 0 }. Deterministic.
class CounterDfaOracle {
public:
  CounterDfaOracle(Dfa base, CounterFunction counter) : base_(std::move(base)), counter_(std::move(counter)) {
    if (counter_.per_letter.size() != base_.alphabet_size()) {
      throw ConfigError("counter function must assign a value to every letter of the alphabet");
    }
  }

  std::size_t alphabet_size() const noexcept { return base_.alphabet_size(); }
  const Dfa& base() const noexcept { return base_; }
  const CounterFunction& counter() const noexcept { return counter_; }

  bool accepts(WordView w) const {
    check_letters(w, alphabet_size());
    State q = base_.initial();
    std::int64_t c = counter_.c_lambda;
    for (Letter a : w) {
      q = base_.next(q, a);
      c += counter_.per_letter[a];
    }
    return base_.is_final(q) || c <= 0;
  }

private:
  Dfa base_;
  CounterFunction counter_;
};

static_assert(LanguageOracle<NoisyOutputOracle>);
static_assert(LanguageOracle<NoisyInputOracle>);
static_assert(LanguageOracle<CounterDfaOracle>);

} // namespace nlstar
