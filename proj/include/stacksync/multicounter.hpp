#ifndef STACKSYNC_MULTICOUNTER_HPP
#define STACKSYNC_MULTICOUNTER_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "stacksync/machine.hpp"
#include "stacksync/witness.hpp"

namespace stacksync {

/// Product machine with k counters. Counters block below zero unless the
/// machine is flagged blind (then they range over all integers and are only
/// inspected at acceptance). Transitions may carry per-counter guards, which
/// is how zero-tests of non-blind counters are expressed. Acceptance is a
/// final state, plus all counters zero when `accept_requires_zero` is set.
struct MultiCounterMachine {
  enum class Guard : std::uint8_t { Any, Zero, Positive };

  struct Rule {
    StateId from = kNoState;
    SymbolId input = 0;
    StateId to = kNoState;
    std::vector<std::int64_t> delta;  // per counter; positive entries may exceed 1
    std::vector<Guard> guards;        // per counter
  };

  std::vector<std::string> states;
  std::vector<std::string> inputs;
  std::size_t num_counters = 0;
  std::vector<Rule> rules;
  StateId initial = 0;
  std::vector<bool> finals;
  bool accept_requires_zero = true;
  bool deterministic = true;
  bool blind = false;
  std::vector<bool> one_turn;       // per counter: never increment after first decrement
  std::vector<SymbolId> pad_symbols;  // count-down letters, stripped from witnesses
  std::vector<bool> tail_state;       // states of the post-synchronization count-down phase

  std::vector<std::vector<std::uint32_t>> buckets;  // (from * |inputs| + input) -> rule ids

  void add_rule(Rule r) {
    if (buckets.empty()) buckets.assign(states.size() * inputs.size(), {});
    buckets[r.from * inputs.size() + r.input].push_back(std::uint32_t(rules.size()));
    rules.push_back(std::move(r));
  }
  const std::vector<std::uint32_t>& rules_for(StateId q, SymbolId a) const {
    static const std::vector<std::uint32_t> none;
    if (buckets.empty()) return none;
    return buckets[q * inputs.size() + a];
  }
  bool is_pad(SymbolId a) const {
    for (SymbolId p : pad_symbols)
      if (p == a) return true;
    return false;
  }
};

struct McmAccepted {
  Word word;
  std::vector<StateId> state_path;  // |word|+1 states of the accepting run
};

using McmOutcome = std::variant<McmAccepted, Exhausted, ProvedNo>;

inline bool mcm_found(const McmOutcome& o) { return std::holds_alternative<McmAccepted>(o); }

namespace detail {

struct McmConfig {
  StateId state;
  std::vector<std::int64_t> counters;
  std::uint32_t turned;  // bit per counter: has decremented at least once

  std::string key() const {
    std::string k;
    k.reserve(8 + counters.size() * 8);
    k.append(reinterpret_cast<const char*>(&state), 4);
    k.append(reinterpret_cast<const char*>(&turned), 4);
    k.append(reinterpret_cast<const char*>(counters.data()), counters.size() * 8);
    return k;
  }
};

inline bool mcm_accepting(const MultiCounterMachine& m, const McmConfig& c) {
  if (!m.finals[c.state]) return false;
  if (m.accept_requires_zero)
    for (auto v : c.counters)
      if (v != 0) return false;
  return true;
}

/// Apply one rule if its guards, blocking semantics and 1-turn flags allow it.
inline std::optional<McmConfig> mcm_fire(const MultiCounterMachine& m, const McmConfig& c,
                                         const MultiCounterMachine::Rule& r) {
  McmConfig next{r.to, c.counters, c.turned};
  for (std::size_t i = 0; i < m.num_counters; ++i) {
    switch (r.guards[i]) {
      case MultiCounterMachine::Guard::Zero:
        if (c.counters[i] != 0) return std::nullopt;
        break;
      case MultiCounterMachine::Guard::Positive:
        if (c.counters[i] <= 0) return std::nullopt;
        break;
      case MultiCounterMachine::Guard::Any:
        break;
    }
    std::int64_t v = c.counters[i] + r.delta[i];
    if (!m.blind && v < 0) return std::nullopt;
    if (!m.one_turn.empty() && m.one_turn[i]) {
      if ((c.turned >> i & 1) && r.delta[i] > 0) return std::nullopt;
      if (r.delta[i] < 0) next.turned |= std::uint32_t(1) << i;
    }
    next.counters[i] = v;
  }
  return next;
}

}  // namespace detail

/// Bounded forward search for a shortest accepted word (lexicographically
/// least by declared letter order). Exact reachability is out of reach for
/// these machines, so the verdict is FOUND or EXHAUSTED, never PROVED_NO.
inline McmOutcome mcm_bounded_emptiness(const MultiCounterMachine& m, const SearchLimits& limits) {
  if (limits.max_nodes == 0) throw std::invalid_argument("max_nodes must be positive");
  struct Node {
    detail::McmConfig cfg;
    std::uint32_t parent;
    SymbolId via;
    std::uint32_t depth;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::uint32_t> seen;
  SearchStats stats;

  auto finish = [&nodes](std::uint32_t id) {
    McmAccepted acc;
    std::vector<std::uint32_t> chain;
    for (std::uint32_t at = id;; at = nodes[at].parent) {
      chain.push_back(at);
      if (at == 0) break;
    }
    std::reverse(chain.begin(), chain.end());
    for (std::size_t i = 0; i < chain.size(); ++i) {
      acc.state_path.push_back(nodes[chain[i]].cfg.state);
      if (i > 0) acc.word.push_back(nodes[chain[i]].via);
    }
    return acc;
  };

  detail::McmConfig start{m.initial, std::vector<std::int64_t>(m.num_counters, 0), 0};
  nodes.push_back(Node{start, 0, 0, 0});
  seen.emplace(start.key(), 0);
  stats.nodes_stored = 1;
  if (detail::mcm_accepting(m, start)) return finish(0);

  // Horizon bound for zero-counter acceptance: when no rule drops a counter
  // by more than one, a counter value above the remaining budget is fatal.
  bool unit_decrements = m.accept_requires_zero;
  for (const auto& r : m.rules)
    for (auto d : r.delta)
      if (d < -1) unit_decrements = false;

  bool depth_truncated = false;
  for (std::uint32_t head = 0; head < nodes.size(); ++head) {
    const std::uint32_t depth = nodes[head].depth;
    stats.depth_reached = std::max<std::size_t>(stats.depth_reached, depth);
    if (depth >= limits.max_word_len) {
      depth_truncated = true;
      continue;
    }
    ++stats.nodes_expanded;
    for (SymbolId a = 0; a < m.inputs.size(); ++a) {
      for (std::uint32_t rid : m.rules_for(nodes[head].cfg.state, a)) {
        auto next = detail::mcm_fire(m, nodes[head].cfg, m.rules[rid]);
        if (!next) continue;
        if (unit_decrements) {
          std::int64_t max_c = 0;
          for (auto v : next->counters) max_c = std::max(max_c, v);
          if (depth + 1 + std::uint64_t(max_c) > limits.max_word_len) {
            ++stats.pruned_horizon;
            continue;
          }
        }
        std::string key = next->key();
        if (seen.count(key)) continue;
        if (nodes.size() >= limits.max_nodes) {
          stats.node_cap_hit = true;
          return Exhausted{stats};
        }
        std::uint32_t id = std::uint32_t(nodes.size());
        bool goal = detail::mcm_accepting(m, *next);
        nodes.push_back(Node{std::move(*next), head, a, depth + 1});
        seen.emplace(std::move(key), id);
        ++stats.nodes_stored;
        if (goal) return finish(id);
      }
    }
  }
  stats.frontier_exhausted = !depth_truncated;
  return Exhausted{stats};
}

}  // namespace stacksync

#endif  // STACKSYNC_MULTICOUNTER_HPP
