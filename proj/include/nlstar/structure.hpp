#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "nlstar/automaton.hpp"

namespace nlstar {

struct SccDecomposition {
  std::vector<std::uint32_t> component_of;     // per vertex
  std::vector<std::vector<State>> components;  // each sorted ascending
  std::vector<bool> bottom;                    // per component: no edge leaves it

  bool in_bottom(State q) const { return bottom[component_of[q]]; }
};

// Tarjan's algorithm, iterative. `successors` is an adjacency list.
inline SccDecomposition scc_decompose_graph(const std::vector<std::vector<State>>& successors) {
  const std::size_t n = successors.size();
  constexpr std::uint32_t unset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> index(n, unset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<State> stack;
  std::vector<std::pair<State, std::size_t>> call;  // (vertex, next successor position)
  SccDecomposition out;
  out.component_of.assign(n, unset);
  std::uint32_t counter = 0;

  for (State root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < successors[v].size()) {
        const State w = successors[v][pos++];
        if (index[w] == unset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const State done = v;
      call.pop_back();
      if (!call.empty()) {
        const State parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        const auto id = static_cast<std::uint32_t>(out.components.size());
        std::vector<State> component;
        State w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.component_of[w] = id;
          component.push_back(w);
        } while (w != done);
        std::sort(component.begin(), component.end());
        out.components.push_back(std::move(component));
      }
    }
  }

  out.bottom.assign(out.components.size(), true);
  for (State v = 0; v < n; ++v) {
    for (State w : successors[v]) {
      if (out.component_of[v] != out.component_of[w]) out.bottom[out.component_of[v]] = false;
    }
  }
  return out;
}

// SCCs of the transition graph (edge q -> σ(q, a) for every letter a).
inline SccDecomposition scc_decompose(const Dfa& dfa) {
  std::vector<std::vector<State>> successors(dfa.num_states());
  for (State q = 0; q < dfa.num_states(); ++q) {
    auto row = dfa.row(q);
    successors[q].assign(row.begin(), row.end());
  }
  return scc_decompose_graph(successors);
}

// q1 = σ(q0, w) is final, q2 = σ(q0, w') is not, both lie in bottom SCCs, |w| = |w'|.
struct EldWitness {
  State q1 = 0;
  State q2 = 0;
  Word w;
  Word w_prime;
};

// Checks a witness against the definition from scratch.
inline bool validate_witness(const Dfa& dfa, const EldWitness& witness) {
  if (witness.w.size() != witness.w_prime.size()) return false;
  if (witness.q1 >= dfa.num_states() || witness.q2 >= dfa.num_states()) return false;
  if (dfa.run(witness.w) != witness.q1 || dfa.run(witness.w_prime) != witness.q2) return false;
  if (!dfa.is_final(witness.q1) || dfa.is_final(witness.q2)) return false;
  const auto scc = scc_decompose(dfa);
  return scc.in_bottom(witness.q1) && scc.in_bottom(witness.q2);
}

enum class EldMode {
  // Some pair reachable by equal-length words has its first state final, its second
  // non-final, and each state inside a bottom SCC of the DFA.
  definition,
  // The pair itself must lie in a bottom SCC of the pair graph.
  product_bscc,
};

namespace detail {

// Distinct successors of each state, ordered by the smallest letter reaching them,
// together with that letter.
inline std::vector<std::vector<std::pair<State, Letter>>> distinct_successors(const Dfa& dfa) {
  std::vector<std::vector<std::pair<State, Letter>>> out(dfa.num_states());
  std::vector<std::uint32_t> seen(dfa.num_states(), static_cast<std::uint32_t>(-1));
  for (State q = 0; q < dfa.num_states(); ++q) {
    for (std::size_t a = 0; a < dfa.alphabet_size(); ++a) {
      const State t = dfa.next(q, static_cast<Letter>(a));
      if (seen[t] == q) continue;
      seen[t] = q;
      out[q].emplace_back(t, static_cast<Letter>(a));
    }
  }
  return out;
}

} // namespace detail

// Equal-length-distinguishing check in O(|Q|² · |Σ|²): breadth-first search from
// (q0, q0) over the pair graph with an edge (q1, q2) -> (σ(q1, a1), σ(q2, a2)) for
// all letters a1, a2. The reachable pairs are exactly those reachable by two words
// of equal length. Returns a shortest witness; among equally short ones, the first
// in BFS order with letters explored ascending.
inline std::optional<EldWitness> is_equal_length_distinguishing(const Dfa& dfa, EldMode mode = EldMode::definition) {
  const std::size_t n = dfa.num_states();
  const auto succ = detail::distinct_successors(dfa);
  const auto scc = scc_decompose(dfa);
  auto pair_index = [n](State a, State b) { return static_cast<std::size_t>(a) * n + b; };

  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(n * n, unvisited);
  std::vector<std::pair<Letter, Letter>> via(n * n);
  std::vector<std::size_t> order;  // BFS order
  const std::size_t start = pair_index(dfa.initial(), dfa.initial());
  parent[start] = start;
  order.push_back(start);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::size_t here = order[head];
    const auto p = static_cast<State>(here / n);
    const auto q = static_cast<State>(here % n);
    for (auto [p2, a1] : succ[p]) {
      for (auto [q2, a2] : succ[q]) {
        const std::size_t there = pair_index(p2, q2);
        if (parent[there] != unvisited) continue;
        parent[there] = here;
        via[there] = {a1, a2};
        order.push_back(there);
      }
    }
  }

  std::vector<bool> qualifies(n * n, false);
  if (mode == EldMode::definition) {
    for (std::size_t v : order) {
      const auto p = static_cast<State>(v / n);
      const auto q = static_cast<State>(v % n);
      qualifies[v] = dfa.is_final(p) && !dfa.is_final(q) && scc.in_bottom(p) && scc.in_bottom(q);
    }
  } else {
    // SCCs of the reachable part of the pair graph, vertices renumbered by BFS order.
    std::vector<std::uint32_t> local(n * n, static_cast<std::uint32_t>(-1));
    for (std::size_t i = 0; i < order.size(); ++i) local[order[i]] = static_cast<std::uint32_t>(i);
    std::vector<std::vector<State>> graph(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto p = static_cast<State>(order[i] / n);
      const auto q = static_cast<State>(order[i] % n);
      for (auto [p2, a1] : succ[p]) {
        for (auto [q2, a2] : succ[q]) graph[i].push_back(local[pair_index(p2, q2)]);
      }
    }
    const auto pair_scc = scc_decompose_graph(graph);
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto p = static_cast<State>(order[i] / n);
      const auto q = static_cast<State>(order[i] % n);
      qualifies[order[i]] = dfa.is_final(p) && !dfa.is_final(q) && pair_scc.in_bottom(static_cast<State>(i));
    }
  }

  for (std::size_t v : order) {
    if (!qualifies[v]) continue;
    EldWitness witness;
    witness.q1 = static_cast<State>(v / n);
    witness.q2 = static_cast<State>(v % n);
    for (std::size_t at = v; at != start; at = parent[at]) {
      witness.w.push_back(via[at].first);
      witness.w_prime.push_back(via[at].second);
    }
    std::reverse(witness.w.begin(), witness.w.end());
    std::reverse(witness.w_prime.begin(), witness.w_prime.end());
    return witness;
  }
  return std::nullopt;
}

// Reference check by enumeration over word lengths 0..max_len. For each length
// it carries the set of states reachable by some word of exactly that length
// (with the lexicographically smallest such word), so every pair of equal-length
// words of that length is covered; bottom SCCs come from a transitive closure.
// Independent of the pair-graph search above. For max_len ≥ |Q|² absence is
// conclusive.
inline std::optional<EldWitness> eld_bruteforce(const Dfa& dfa, std::size_t max_len) {
  const std::size_t n = dfa.num_states();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (State q = 0; q < n; ++q) {
    reach[q][q] = true;
    for (State t : dfa.row(q)) reach[q][t] = true;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  std::vector<bool> bottom(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (reach[i][j] && !reach[j][i]) bottom[i] = false;
    }
  }

  std::vector<std::optional<Word>> layer(n);
  layer[dfa.initial()] = Word{};
  for (std::size_t length = 0; length <= max_len; ++length) {
    std::optional<State> final_state, other_state;
    for (State q = 0; q < n; ++q) {
      if (!layer[q] || !bottom[q]) continue;
      if (dfa.is_final(q) && !final_state) final_state = q;
      if (!dfa.is_final(q) && !other_state) other_state = q;
    }
    if (final_state && other_state) {
      return EldWitness{*final_state, *other_state, *layer[*final_state], *layer[*other_state]};
    }
    if (length == max_len) break;
    std::vector<std::optional<Word>> next(n);
    for (State q = 0; q < n; ++q) {
      if (!layer[q]) continue;
      for (std::size_t a = 0; a < dfa.alphabet_size(); ++a) {
        Word candidate = *layer[q];
        candidate.push_back(static_cast<Letter>(a));
        auto& slot = next[dfa.next(q, static_cast<Letter>(a))];
        if (!slot || candidate < *slot) slot = std::move(candidate);
      }
    }
    layer = std::move(next);
  }
  return std::nullopt;
}

} // namespace nlstar
