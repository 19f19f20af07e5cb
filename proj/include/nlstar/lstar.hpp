#pragma once

// Angluin-style learning with a discrimination tree (Kearns-Vazirani layout).
// Counterexamples are processed by prefix sifting as in the textbook
// algorithm, or by a Rivest-Schapire binary search. Every processed
// counterexample splits exactly one leaf, so the hypothesis gains exactly one
// state per round.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nlstar/automaton.hpp"
#include "nlstar/distribution.hpp"
#include "nlstar/oracle.hpp"

namespace nlstar {

// How a counterexample is turned into a split. binary_search locates a
// breakpoint with O(log |w|) queries; prefix_sift sifts every prefix of the
// counterexample and splits at the first one the hypothesis routes elsewhere.
enum class CounterexampleAnalysis { binary_search, prefix_sift };

inline const char* to_string(CounterexampleAnalysis a) {
  return a == CounterexampleAnalysis::binary_search ? "binary-search" : "prefix-sift";
}

struct LearnerConfig {
  double epsilon = 0.005;
  double delta = 0.005;
  std::size_t maxround = 250;
  // Word distribution used by the sampled equivalence query.
  double mu = 0.01;
  RngKey key{0, "learner-sampling"};
  bool record_trajectory = false;
  std::size_t snapshot_every = 20;
  CounterexampleAnalysis analysis = CounterexampleAnalysis::prefix_sift;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    if (!(mu > 0.0 && mu < 1.0)) throw ConfigError("mu must lie in (0, 1)");
    if (record_trajectory && snapshot_every == 0) throw ConfigError("snapshot_every must be positive");
  }
};

enum class Termination { equivalence_pass, maxround };

inline const char* to_string(Termination t) {
  return t == Termination::equivalence_pass ? "equivalence" : "maxround";
}

struct HypothesisSnapshot {
  std::size_t round;
  Dfa hypothesis;
};

struct LearnResult {
  Dfa hypothesis;
  std::size_t rounds_used = 0;
  Termination terminated_by = Termination::maxround;
  std::size_t membership_query_count = 0;
  std::size_t equivalence_sample_count = 0;
  std::vector<HypothesisSnapshot> trajectory;
};

// Number of sampled words in the equivalence query of round r:
// ⌈(ln(1/δ) + (r+1) ln 2) / ε⌉.
inline std::size_t pac_sample_count(double epsilon, double delta, std::size_t round) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  const double q = (std::log(1.0 / delta) + static_cast<double>(round + 1) * std::log(2.0)) / epsilon;
  return static_cast<std::size_t>(std::ceil(q));
}

struct EquivalenceAnswer {
  std::optional<Word> counterexample;
  std::size_t samples = 0;  // target membership queries spent
};

// Sampled equivalence query: draws pac_sample_count(ε, δ, round) words from D_μ
// with a stream seeded by `key` and returns the first on which hypothesis and
// target disagree.
template <LanguageOracle Target>
EquivalenceAnswer pac_equivalence(const Dfa& hypothesis, const Target& target, const MuDistribution& dist,
                                  double epsilon, double delta, std::size_t round, RngKey key) {
  const std::size_t budget = pac_sample_count(epsilon, delta, round);
  RandomStream rng(key);
  EquivalenceAnswer answer;
  Word w;
  for (std::size_t i = 0; i < budget; ++i) {
    sample_word_into(dist, rng, w);
    ++answer.samples;
    if (hypothesis.accepts(w) != target.accepts(w)) {
      answer.counterexample = w;
      break;
    }
  }
  return answer;
}

// Exact equivalence against a known DFA (test backend): shortest counterexample.
class ExactEquivalence {
public:
  explicit ExactEquivalence(const Dfa& target) : target_(&target) {}

  EquivalenceAnswer operator()(const Dfa& hypothesis, std::size_t /*round*/) const {
    return {dfa_equivalent(hypothesis, *target_), 0};
  }

private:
  const Dfa* target_;
};

template <LanguageOracle Target>
class DiscriminationTreeLearner {
public:
  static constexpr int no_node = -1;

  // Inner nodes carry a distinguishing suffix; leaves carry the access word of one
  // hypothesis state. child[b] holds the words x with member(x · suffix) == b.
  struct Node {
    Word word;
    int parent = no_node;
    std::array<int, 2> child{no_node, no_node};
    std::optional<State> state;

    bool is_leaf() const noexcept { return state.has_value(); }
  };

  // Single leaf with access word λ; one query classifies λ.
  explicit DiscriminationTreeLearner(const Target& target,
                                     CounterexampleAnalysis analysis = CounterexampleAnalysis::prefix_sift,
                                     std::size_t memo_capacity = std::size_t{1} << 21)
      : target_(&target), alphabet_size_(target.alphabet_size()), memo_capacity_(memo_capacity),
        analysis_(analysis) {
    if (alphabet_size_ == 0) throw DomainError("target alphabet must be nonempty");
    nodes_.push_back(Node{Word{}, no_node, {no_node, no_node}, State{0}});
    leaf_of_.push_back(0);
    finals_.push_back(member(Word{}));
    transitions_.assign(alphabet_size_, State{0});
  }

  std::size_t state_count() const noexcept { return leaf_of_.size(); }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Word& access_word(State q) const { return nodes_[leaf_of_.at(q)].word; }
  std::size_t membership_queries() const noexcept { return queries_; }

  // The current hypothesis: one state per leaf, transitions from sifting
  // access · a, state final iff the target accepts its access word.
  Dfa hypothesis() const {
    std::vector<State> finals;
    for (State q = 0; q < state_count(); ++q) {
      if (finals_[q]) finals.push_back(q);
    }
    return Dfa(state_count(), Alphabet{alphabet_size_}, State{0}, std::move(finals), transitions_);
  }

  // Memoized membership query.
  bool member(WordView w) {
    Word key(w.begin(), w.end());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool answer = target_->accepts(w);
    ++queries_;
    remember(std::move(key), answer);
    return answer;
  }

  // Seeds the memo with an answer obtained elsewhere from the same target.
  void remember(Word w, bool answer) {
    if (memo_.size() >= memo_capacity_) memo_.clear();
    memo_.emplace(std::move(w), answer);
  }

  // Counts target queries issued outside the learner (equivalence samples).
  void add_external_queries(std::size_t n) noexcept { queries_ += n; }

  // Leaf reached by w from the root.
  State sift(WordView w) { return sift_from(0, w); }

  // Splits one leaf using a word the hypothesis misclassifies. With
  // binary_search the breakpoint is found by comparing member(access(s_i) · w[i:])
  // where s_i is the hypothesis state after the prefix w[:i].
  void update(WordView counterexample) {
    check_letters(counterexample, alphabet_size_);
    const std::size_t m = counterexample.size();
    std::vector<State> run(m + 1);
    run[0] = 0;
    for (std::size_t i = 0; i < m; ++i) run[i + 1] = transitions_[run[i] * alphabet_size_ + counterexample[i]];

    const bool target_label = member(counterexample);
    if (target_label == static_cast<bool>(finals_[run[m]])) {
      throw ContractError("update() needs a counterexample; the hypothesis already classifies this word correctly");
    }

    if (analysis_ == CounterexampleAnalysis::prefix_sift) {
      split_at_first_divergent_prefix(counterexample, run);
      return;
    }

    auto alpha = [&](std::size_t i) {
      Word probe = concat(access_word(run[i]), counterexample.subspan(i));
      return member(probe);
    };
    std::size_t lo = 0;
    std::size_t hi = m;
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (alpha(mid) == target_label) {
        lo = mid;
      } else {
        hi = mid;
      }
    }

    const State source = run[lo];
    const Letter letter = counterexample[lo];
    const State old_state = run[lo + 1];
    Word suffix(counterexample.begin() + static_cast<std::ptrdiff_t>(lo + 1), counterexample.end());
    Word new_access = access_word(source);
    new_access.push_back(letter);

    const bool old_side = member(concat(access_word(old_state), suffix));
    const bool new_side = member(concat(new_access, suffix));
    if (old_side == new_side) {
      // Only reachable if the target answered inconsistently.
      throw ContractError("breakpoint suffix does not separate the new access word; target is not stable");
    }
    split_leaf(old_state, std::move(new_access), std::move(suffix), old_side);
  }

private:
  // Sifts u_i = w[:i] for i = 1..m and splits run[i-1] at the first i whose
  // leaf differs from run[i]; the new discriminator is w[i-1] followed by the
  // suffix at the lowest common ancestor. If every prefix agrees, w itself
  // separates from access(run[m]) on λ.
  void split_at_first_divergent_prefix(WordView w, const std::vector<State>& run) {
    const std::size_t m = w.size();
    for (std::size_t i = 1; i <= m; ++i) {
      const State reached = sift(w.first(i));
      if (reached == run[i]) continue;
      Word suffix{w[i - 1]};
      const Word& d = nodes_[lowest_common_ancestor(leaf_of_[reached], leaf_of_[run[i]])].word;
      suffix.insert(suffix.end(), d.begin(), d.end());
      Word new_access(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i - 1));
      const bool old_side = member(concat(access_word(run[i - 1]), suffix));
      if (member(concat(new_access, suffix)) == old_side) {
        throw ContractError("prefix suffix does not separate the new access word; target is not stable");
      }
      split_leaf(run[i - 1], std::move(new_access), std::move(suffix), old_side);
      return;
    }
    split_leaf(run[m], Word(w.begin(), w.end()), Word{}, static_cast<bool>(finals_[run[m]]));
  }

  int lowest_common_ancestor(int a, int b) const {
    std::vector<int> ancestors;
    for (int n = a; n != no_node; n = nodes_[n].parent) ancestors.push_back(n);
    for (int n = b; n != no_node; n = nodes_[n].parent) {
      if (std::find(ancestors.begin(), ancestors.end(), n) != ancestors.end()) return n;
    }
    return 0;
  }

  // Replaces the leaf of old_state by an inner node labelled suffix whose
  // children are old_state (on old_side) and a new state with new_access.
  void split_leaf(State old_state, Word new_access, Word suffix, bool old_side) {
    const bool new_side = !old_side;
    const State new_state = static_cast<State>(state_count());
    const int split = leaf_of_[old_state];
    const int old_leaf = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{access_word(old_state), split, {no_node, no_node}, old_state});
    const int new_leaf = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{new_access, split, {no_node, no_node}, new_state});
    Node& inner = nodes_[split];
    inner.word = suffix;
    inner.state.reset();
    inner.child[old_side] = old_leaf;
    inner.child[new_side] = new_leaf;
    leaf_of_[old_state] = old_leaf;
    leaf_of_.push_back(new_leaf);
    finals_.push_back(member(new_access));

    // Transitions that rested on the split leaf continue one level down.
    for (State q = 0; q < new_state; ++q) {
      for (std::size_t a = 0; a < alphabet_size_; ++a) {
        State& target = transitions_[q * alphabet_size_ + a];
        if (target != old_state) continue;
        Word probe = access_word(q);
        probe.push_back(static_cast<Letter>(a));
        target = sift_from(split, probe);
      }
    }
    transitions_.resize(transitions_.size() + alphabet_size_);
    for (std::size_t a = 0; a < alphabet_size_; ++a) {
      Word probe = new_access;
      probe.push_back(static_cast<Letter>(a));
      transitions_[new_state * alphabet_size_ + a] = sift(probe);
    }
  }

  State sift_from(int node, WordView w) {
    while (!nodes_[node].is_leaf()) {
      const Node& n = nodes_[node];
      const bool side = member(concat(w, n.word));
      node = n.child[side];
    }
    return *nodes_[node].state;
  }

  const Target* target_;
  std::size_t alphabet_size_;
  std::size_t memo_capacity_;
  std::vector<Node> nodes_;
  std::vector<int> leaf_of_;
  std::vector<std::uint8_t> finals_;
  std::vector<State> transitions_;
  std::unordered_map<Word, bool, WordHash> memo_;
  std::size_t queries_ = 0;
  CounterexampleAnalysis analysis_;
};

// The learning loop with a pluggable equivalence backend:
//   while r < maxround: synthesize, ask equivalence, return on pass, else update.
// Snapshots are taken at r = k · snapshot_every (k ≥ 1) when enabled.
template <LanguageOracle Target, class Equivalence>
LearnResult learn_with(const Target& target, Equivalence&& equivalence, std::size_t maxround,
                       std::size_t snapshot_every = 0,
                       CounterexampleAnalysis analysis = CounterexampleAnalysis::prefix_sift) {
  DiscriminationTreeLearner<Target> learner(target, analysis);
  LearnResult result{learner.hypothesis(), 0, Termination::maxround, 0, 0, {}};
  auto snapshot = [&](std::size_t round, const Dfa& hypothesis) {
    if (snapshot_every != 0 && round != 0 && round % snapshot_every == 0) {
      result.trajectory.push_back({round, hypothesis});
    }
  };

  std::size_t round = 0;
  while (round < maxround) {
    Dfa hypothesis = learner.hypothesis();
    snapshot(round, hypothesis);
    EquivalenceAnswer answer = equivalence(hypothesis, round);
    result.equivalence_sample_count += answer.samples;
    learner.add_external_queries(answer.samples);
    if (!answer.counterexample) {
      result.hypothesis = std::move(hypothesis);
      result.rounds_used = round;
      result.terminated_by = Termination::equivalence_pass;
      result.membership_query_count = learner.membership_queries();
      return result;
    }
    if (answer.samples != 0) {
      // The sampled query already knows the target's answer on its witness.
      learner.remember(*answer.counterexample, !hypothesis.accepts(*answer.counterexample));
    }
    learner.update(*answer.counterexample);
    ++round;
  }
  result.hypothesis = learner.hypothesis();
  snapshot(round, result.hypothesis);
  result.rounds_used = round;
  result.terminated_by = Termination::maxround;
  result.membership_query_count = learner.membership_queries();
  return result;
}

// PAC learning: the equivalence query of round r samples with key.child("equivalence").child(r).
template <LanguageOracle Target>
LearnResult learn(const Target& target, const LearnerConfig& cfg) {
  cfg.validate();
  const MuDistribution dist(cfg.mu, Alphabet{target.alphabet_size()});
  const RngKey equivalence_key = cfg.key.child("equivalence");
  auto backend = [&](const Dfa& hypothesis, std::size_t round) {
    return pac_equivalence(hypothesis, target, dist, cfg.epsilon, cfg.delta, round,
                           equivalence_key.child(static_cast<std::uint64_t>(round)));
  };
  return learn_with(target, backend, cfg.maxround, cfg.record_trajectory ? cfg.snapshot_every : 0,
                    cfg.analysis);
}

} // namespace nlstar
