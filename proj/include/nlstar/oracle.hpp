#pragma once

#include <atomic>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>

#include "nlstar/automaton.hpp"

namespace nlstar {

// The membership contract consumed by the learner and the distance estimator.
// accepts() must be stable (same word, same answer, forever) and safe to call
// concurrently. Dfa models it directly.
template <class O>
concept LanguageOracle = requires(const O& oracle, WordView w) {
  { oracle.alphabet_size() } -> std::convertible_to<std::size_t>;
  { oracle.accepts(w) } -> std::same_as<bool>;
};

static_assert(LanguageOracle<Dfa>);

// Answers the negation of the wrapped oracle.
template <LanguageOracle Inner>
class ComplementOracle {
public:
  explicit ComplementOracle(const Inner& inner) : inner_(&inner) {}

  std::size_t alphabet_size() const { return inner_->alphabet_size(); }
  bool accepts(WordView w) const { return !inner_->accepts(w); }

private:
  const Inner* inner_;
};

// Counts every call reaching the wrapped oracle.
template <LanguageOracle Inner>
class CountingOracle {
public:
  explicit CountingOracle(const Inner& inner) : inner_(&inner) {}

  std::size_t alphabet_size() const { return inner_->alphabet_size(); }
  bool accepts(WordView w) const {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_->accepts(w);
  }
  std::size_t calls() const { return calls_.load(std::memory_order_relaxed); }

private:
  const Inner* inner_;
  mutable std::atomic<std::size_t> calls_{0};
};

// Keyed word digest: a pure function of (key, w). Each letter is folded with a
// multiply-xorshift step; the length is folded in last and the result goes
// through mix64, so prefixes and extensions do not share digests.
inline std::uint64_t hash_word(RngKey key, WordView w) noexcept {
  std::uint64_t h = key.value();
  for (Letter a : w) {
    h = (h ^ (static_cast<std::uint64_t>(a) + 1)) * 0x9e3779b97f4a7c15ULL;
    h ^= h >> 32;
  }
  return mix64(h ^ mix64(static_cast<std::uint64_t>(w.size()) + 0x632be59bd9b4e019ULL));
}

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    return static_cast<std::size_t>(hash_word(RngKey::from_value(0), w));
  }
};

} // namespace nlstar
