#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "nlstar/automaton.hpp"
#include "nlstar/oracle.hpp"
#include "nlstar/random.hpp"

namespace nlstar {

// D_μ: geometric length with stop probability μ, letters uniform. Mean length 1/μ - 1.
class MuDistribution {
public:
  MuDistribution(double mu, Alphabet alphabet) : mu_(mu), alphabet_(alphabet) {
    if (!(mu > 0.0 && mu < 1.0)) throw DomainError("mu must lie in (0, 1), got " + std::to_string(mu));
    if (alphabet.size == 0) throw DomainError("alphabet must be nonempty");
  }

  double mu() const noexcept { return mu_; }
  Alphabet alphabet() const noexcept { return alphabet_; }
  double mean_length() const noexcept { return 1.0 / mu_ - 1.0; }

private:
  double mu_;
  Alphabet alphabet_;
};

// Pr(w) = μ ((1-μ)/|Σ|)^|w|.
inline double word_probability(const MuDistribution& dist, WordView w) {
  check_letters(w, dist.alphabet().size);
  const double per_letter = (1.0 - dist.mu()) / static_cast<double>(dist.alphabet().size);
  return dist.mu() * std::pow(per_letter, static_cast<double>(w.size()));
}

// Before each letter, stop with probability μ; otherwise append a uniform letter.
inline void sample_word_into(const MuDistribution& dist, RandomStream& rng, Word& out) {
  out.clear();
  const double mu = dist.mu();
  const std::uint64_t k = dist.alphabet().size;
  while (!rng.bernoulli(mu)) out.push_back(static_cast<Letter>(rng.below(k)));
}

inline Word sample_word(const MuDistribution& dist, RandomStream& rng) {
  Word w;
  sample_word_into(dist, rng, w);
  return w;
}

inline Word sample_word(const MuDistribution& dist, RngKey key) {
  RandomStream rng(key);
  return sample_word(dist, rng);
}

// Chernoff-Hoeffding sample size ⌈ln(2/γ) / (2α²)⌉, natural logarithm, at least 1.
// Any γ in (0, 2) keeps ln(2/γ) positive and is accepted.
inline std::size_t required_sample_size(double alpha, double gamma) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
  if (!(gamma > 0.0 && gamma < 2.0)) throw DomainError("gamma must lie in (0, 2)");
  const double size = std::ceil(std::log(2.0 / gamma) / (2.0 * alpha * alpha));
  return std::max<std::size_t>(1, static_cast<std::size_t>(size));
}

struct DistanceEstimate {
  double value = 0.0;  // disagreements / sample_size
  std::size_t disagreements = 0;
  std::size_t sample_size = 0;
  double alpha = 0.0;
  double gamma = 0.0;
};

struct EstimateOptions {
  // Words per chunk. Chunk c samples from key.child(c), so the partition is part
  // of the seed derivation and the result does not depend on the thread count.
  std::size_t chunk_size = std::size_t{1} << 16;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Counts the sampled words on which the two oracles disagree. Words are streamed,
// never stored; repeated draws are counted each time.
template <LanguageOracle First, LanguageOracle Second>
std::size_t count_disagreements(const First& first, const Second& second, const MuDistribution& dist,
                                std::size_t samples, RngKey key, EstimateOptions options = {}) {
  if (first.alphabet_size() != second.alphabet_size() || first.alphabet_size() != dist.alphabet().size) {
    throw DomainError("oracles and distribution must share one alphabet");
  }
  const std::size_t chunk = std::max<std::size_t>(1, options.chunk_size);
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  std::vector<std::size_t> per_chunk(chunks, 0);

  auto run_chunk = [&](std::size_t c) {
    RandomStream rng(key.child(static_cast<std::uint64_t>(c)));
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(samples, begin + chunk);
    Word w;
    std::size_t count = 0;
    for (std::size_t i = begin; i < end; ++i) {
      sample_word_into(dist, rng, w);
      if (first.accepts(w) != second.accepts(w)) ++count;
    }
    per_chunk[c] = count;
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) run_chunk(c);
      });
    }
  }
  std::size_t total = 0;
  for (auto c : per_chunk) total += c;
  return total;
}

// Statistical distance: with probability at least 1 - γ the estimate lies within α
// of d(L1, L2) = Pr_{D_μ}(L1 Δ L2).
template <LanguageOracle First, LanguageOracle Second>
DistanceEstimate estimate_distance(const First& first, const Second& second, const MuDistribution& dist,
                                   double alpha, double gamma, RngKey key, EstimateOptions options = {}) {
  DistanceEstimate out;
  out.alpha = alpha;
  out.gamma = gamma;
  out.sample_size = required_sample_size(alpha, gamma);
  out.disagreements = count_disagreements(first, second, dist, out.sample_size, key, options);
  out.value = static_cast<double>(out.disagreements) / static_cast<double>(out.sample_size);
  return out;
}

} // namespace nlstar
