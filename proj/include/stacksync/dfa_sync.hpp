#ifndef STACKSYNC_DFA_SYNC_HPP
#define STACKSYNC_DFA_SYNC_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "stacksync/machine.hpp"

namespace stacksync {

/// Cap on the number of distinct subsets a subset-lattice search may store
/// before it gives up with a budget fault.
inline constexpr std::size_t kDefaultSubsetCap = 1u << 22;

namespace detail {

using SubsetMask = std::uint64_t;

inline SubsetMask full_mask(std::size_t n) {
  return n >= 64 ? ~SubsetMask(0) : ((SubsetMask(1) << n) - 1);
}

inline SubsetMask mask_of(const std::vector<StateId>& set) {
  SubsetMask m = 0;
  for (StateId q : set) m |= SubsetMask(1) << q;
  return m;
}

/// BFS over the subset lattice. `image` maps (mask, letter) to the successor
/// mask, or 0 when the letter is not applicable to the subset. Expansion in
/// declared letter order makes the first word reaching a goal the
/// lexicographically least among the shortest. Predecessor records rebuild
/// the word without storing one per node.
template <typename ImageFn, typename GoalFn>
std::optional<Word> subset_bfs(std::size_t n_letters, SubsetMask start, ImageFn image,
                               GoalFn goal, std::size_t max_subsets) {
  if (goal(start)) return Word{};
  struct Node {
    SubsetMask mask;
    std::uint32_t parent;
    SymbolId via;
  };
  std::vector<Node> nodes;
  std::unordered_map<SubsetMask, std::uint32_t> seen;
  nodes.push_back(Node{start, 0, 0});
  seen.emplace(start, 0);
  for (std::uint32_t head = 0; head < nodes.size(); ++head) {
    for (SymbolId a = 0; a < n_letters; ++a) {
      SubsetMask next = image(nodes[head].mask, a);
      if (next == 0) continue;  // letter not applicable
      if (seen.count(next)) continue;
      if (nodes.size() >= max_subsets)
        throw budget_error("subset search exceeded the configured subset cap");
      std::uint32_t id = std::uint32_t(nodes.size());
      nodes.push_back(Node{next, head, a});
      seen.emplace(next, id);
      if (goal(next)) {
        Word w;
        for (std::uint32_t at = id; at != 0; at = nodes[at].parent) w.push_back(nodes[at].via);
        std::reverse(w.begin(), w.end());
        return w;
      }
    }
  }
  return std::nullopt;
}

inline SubsetMask dfa_image(const Dfa& m, SubsetMask mask, SymbolId a) {
  SubsetMask out = 0;
  for (std::size_t q = 0; q < m.states.size(); ++q)
    if (mask & (SubsetMask(1) << q)) out |= SubsetMask(1) << m.next(StateId(q), a);
  return out;
}

/// Image under a partial DFA; 0 when the letter is undefined on some member.
inline SubsetMask careful_image(const PartialDfa& m, SubsetMask mask, SymbolId a) {
  SubsetMask out = 0;
  for (std::size_t q = 0; q < m.states.size(); ++q)
    if (mask & (SubsetMask(1) << q)) {
      StateId p = m.next(StateId(q), a);
      if (p == kNoState) return 0;
      out |= SubsetMask(1) << p;
    }
  return out;
}

inline void require_subset_searchable(std::size_t n_states) {
  if (n_states > 63)
    throw budget_error("subset search supports at most 63 states");
}

}  // namespace detail

/// Shortest word merging the state pair {p, q}, lexicographically least among
/// the shortest; nullopt when the pair cannot be merged.
inline std::optional<Word> shortest_merging_word(const Dfa& m, StateId p, StateId q) {
  const std::size_t n = m.states.size();
  auto key = [n](StateId x, StateId y) {
    if (x > y) std::swap(x, y);
    return std::size_t(x) * n + y;
  };
  if (p == q) return Word{};
  struct Node {
    StateId x, y;
    std::uint32_t parent;
    SymbolId via;
  };
  std::vector<Node> nodes{{p, q, 0, 0}};
  std::vector<bool> seen(n * n, false);
  seen[key(p, q)] = true;
  for (std::uint32_t head = 0; head < nodes.size(); ++head) {
    for (SymbolId a = 0; a < m.inputs.size(); ++a) {
      StateId x = m.next(nodes[head].x, a), y = m.next(nodes[head].y, a);
      std::size_t k = key(x, y);
      if (x != y && seen[k]) continue;
      std::uint32_t id = std::uint32_t(nodes.size());
      nodes.push_back(Node{x, y, head, a});
      if (x == y) {
        Word w;
        for (std::uint32_t at = id; at != 0; at = nodes[at].parent) w.push_back(nodes[at].via);
        std::reverse(w.begin(), w.end());
        return w;
      }
      seen[k] = true;
    }
  }
  return std::nullopt;
}

/// Polynomial synchronizability test: every pair of states must admit a
/// merging word, which is equivalent to the existence of a synchronizing word.
inline bool is_synchronizable_dfa(const Dfa& m) {
  const std::size_t n = m.states.size();
  const std::size_t n_inputs = m.inputs.size();
  // Backward reachability from the diagonal in the pair automaton.
  auto key = [n](StateId x, StateId y) {
    if (x > y) std::swap(x, y);
    return std::size_t(x) * n + y;
  };
  std::vector<std::vector<std::size_t>> preds(n * n);
  for (StateId x = 0; x < n; ++x)
    for (StateId y = x; y < n; ++y)
      for (SymbolId a = 0; a < n_inputs; ++a)
        preds[key(m.next(x, a), m.next(y, a))].push_back(key(x, y));
  std::vector<bool> mergeable(n * n, false);
  std::deque<std::size_t> queue;
  for (StateId x = 0; x < n; ++x) {
    mergeable[key(x, x)] = true;
    queue.push_back(key(x, x));
  }
  while (!queue.empty()) {
    std::size_t k = queue.front();
    queue.pop_front();
    for (std::size_t pk : preds[k])
      if (!mergeable[pk]) {
        mergeable[pk] = true;
        queue.push_back(pk);
      }
  }
  for (StateId x = 0; x < n; ++x)
    for (StateId y = x + 1; y < n; ++y)
      if (!mergeable[key(x, y)]) return false;
  return true;
}

/// Pair-merging synchronizing word of length at most |Q|^3. Each round merges
/// the unmerged pair with the shortest merging word; ties are broken by
/// state-index order, the word itself by letter order.
inline std::optional<Word> find_sync_word_greedy(const Dfa& m) {
  detail::require_subset_searchable(m.states.size());
  detail::SubsetMask current = detail::full_mask(m.states.size());
  Word result;
  while (std::popcount(current) > 1) {
    std::optional<Word> best;
    for (StateId x = 0; x < m.states.size(); ++x) {
      if (!(current & (detail::SubsetMask(1) << x))) continue;
      for (StateId y = x + 1; y < m.states.size(); ++y) {
        if (!(current & (detail::SubsetMask(1) << y))) continue;
        auto w = shortest_merging_word(m, x, y);
        if (!w) return std::nullopt;
        if (!best || w->size() < best->size()) best = std::move(w);
      }
    }
    for (SymbolId a : *best) current = detail::dfa_image(m, current, a);
    result.insert(result.end(), best->begin(), best->end());
  }
  return result;
}

/// Exact shortest synchronizing word via BFS over the subset lattice
/// (lexicographically least among the shortest), or nullopt.
inline std::optional<Word> shortest_sync_word(const Dfa& m,
                                              std::size_t max_subsets = kDefaultSubsetCap) {
  detail::require_subset_searchable(m.states.size());
  return detail::subset_bfs(
      m.inputs.size(), detail::full_mask(m.states.size()),
      [&](detail::SubsetMask s, SymbolId a) { return detail::dfa_image(m, s, a); },
      [](detail::SubsetMask s) { return std::popcount(s) == 1; }, max_subsets);
}

/// Shortest word w with delta(S0, w) contained in S1, or nullopt when the
/// reachable subset family never enters the downward closure of S1.
inline std::optional<Word> sync_from_into_subset(const Dfa& m, const std::vector<StateId>& s0,
                                                 const std::vector<StateId>& s1,
                                                 std::size_t max_subsets = kDefaultSubsetCap) {
  detail::require_subset_searchable(m.states.size());
  if (s0.empty() || s1.empty()) throw std::invalid_argument("subsets must be nonempty");
  detail::SubsetMask target = detail::mask_of(s1);
  return detail::subset_bfs(
      m.inputs.size(), detail::mask_of(s0),
      [&](detail::SubsetMask s, SymbolId a) { return detail::dfa_image(m, s, a); },
      [target](detail::SubsetMask s) { return (s & ~target) == 0; }, max_subsets);
}

inline std::optional<Word> sync_into_subset(const Dfa& m, const std::vector<StateId>& s,
                                            std::size_t max_subsets = kDefaultSubsetCap) {
  std::vector<StateId> all(m.states.size());
  for (std::size_t q = 0; q < all.size(); ++q) all[q] = StateId(q);
  return sync_from_into_subset(m, all, s, max_subsets);
}

/// Careful synchronization of a partial DFA: the word must be defined on every
/// state along the whole subset trajectory and merge all states into one.
inline std::optional<Word> careful_sync(const PartialDfa& m,
                                        std::size_t max_subsets = kDefaultSubsetCap) {
  detail::require_subset_searchable(m.states.size());
  return detail::subset_bfs(
      m.inputs.size(), detail::full_mask(m.states.size()),
      [&](detail::SubsetMask s, SymbolId a) { return detail::careful_image(m, s, a); },
      [](detail::SubsetMask s) { return std::popcount(s) == 1; }, max_subsets);
}

/// From-into variant on a partial DFA with a caller-supplied goal predicate
/// over subset masks; used by the 0-turn decision procedures.
inline std::optional<Word> careful_search(const PartialDfa& m, const std::vector<StateId>& s0,
                                          const std::function<bool(std::uint64_t)>& goal,
                                          std::size_t max_subsets = kDefaultSubsetCap) {
  detail::require_subset_searchable(m.states.size());
  if (s0.empty()) throw std::invalid_argument("start subset must be nonempty");
  return detail::subset_bfs(
      m.inputs.size(), detail::mask_of(s0),
      [&](detail::SubsetMask s, SymbolId a) { return detail::careful_image(m, s, a); }, goal,
      max_subsets);
}

inline std::optional<Word> careful_sync_from_into_subset(
    const PartialDfa& m, const std::vector<StateId>& s0, const std::vector<StateId>& s1,
    std::size_t max_subsets = kDefaultSubsetCap) {
  if (s1.empty()) throw std::invalid_argument("target subset must be nonempty");
  detail::SubsetMask target = detail::mask_of(s1);
  return careful_search(
      m, s0, [target](std::uint64_t s) { return (s & ~target) == 0; }, max_subsets);
}

}  // namespace stacksync

#endif  // STACKSYNC_DFA_SYNC_HPP
