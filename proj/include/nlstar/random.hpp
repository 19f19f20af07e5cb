#pragma once

// Keyed, order-independent randomness.
//
// Every random decision in the library is a pure function of a 64-bit key and
// the thing being decided about (a chunk index, a word, a letter position).
// Keys are derived hierarchically from a master seed and short purpose labels,
// so results never depend on query order or thread schedule.
//
// Bit-exact conventions (pinned by digest tests):
//   mix64          SplitMix64 finalizer (Stafford variant 13).
//   label hash     FNV-1a 64 over the label bytes.
//   key derivation child = mix64(parent ^ mix64(label_hash + 0x9e3779b97f4a7c15))
//                  for labels, and mix64(parent ^ mix64(index ^ 0xd1b54a32d192ed03))
//                  for integer indices.
//   unit(h)        (h >> 11) * 2^-53, in [0, 1).
//   bernoulli(h,p) unit(h) < p.
//   below(h,k)     high 64 bits of h * k (multiply-shift), in [0, k).

#include <cstdint>
#include <string_view>

namespace nlstar {

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr double unit_interval(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

constexpr bool bernoulli_from_hash(std::uint64_t h, double p) noexcept {
  return unit_interval(h) < p;
}

constexpr std::uint64_t below_from_hash(std::uint64_t h, std::uint64_t k) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(h) * k) >> 64);
}

// A node in the key hierarchy. Cheap to copy; carries only the 64-bit digest.
class RngKey {
public:
  constexpr RngKey() = default;
  constexpr RngKey(std::uint64_t master_seed, std::string_view purpose)
      : value_(mix64(master_seed ^ mix64(hash_label(purpose) + 0x9e3779b97f4a7c15ULL))) {}

  constexpr RngKey child(std::string_view label) const noexcept {
    return RngKey::from_value(mix64(value_ ^ mix64(hash_label(label) + 0x9e3779b97f4a7c15ULL)));
  }
  constexpr RngKey child(std::uint64_t index) const noexcept {
    return RngKey::from_value(mix64(value_ ^ mix64(index ^ 0xd1b54a32d192ed03ULL)));
  }

  constexpr std::uint64_t value() const noexcept { return value_; }

  static constexpr RngKey from_value(std::uint64_t v) noexcept {
    RngKey k;
    k.value_ = v;
    return k;
  }

  friend constexpr bool operator==(RngKey, RngKey) = default;

private:
  std::uint64_t value_ = 0;
};

// The key of a random language: (master seed, purpose label).
using RandomLanguageKey = RngKey;

// Sequential stream for procedures that consume several draws (DFA generation,
// word sampling). SplitMix64 state advance.
class RandomStream {
public:
  explicit constexpr RandomStream(RngKey key) noexcept : state_(key.value()) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform in [0, k).
  constexpr std::uint64_t below(std::uint64_t k) noexcept { return below_from_hash(next(), k); }

  // Uniform in [lo, hi], both ends inclusive.
  constexpr std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  constexpr double uniform01() noexcept { return unit_interval(next()); }
  constexpr bool bernoulli(double p) noexcept { return bernoulli_from_hash(next(), p); }

private:
  std::uint64_t state_;
};

} // namespace nlstar
