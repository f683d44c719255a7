#ifndef STACKSYNC_PDA_SYNC_HPP
#define STACKSYNC_PDA_SYNC_HPP

#include <algorithm>
#include <cstring>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stacksync/machine.hpp"
#include "stacksync/witness.hpp"

namespace stacksync {

/// Simulate `word` from every state (each on the bottom-only stack) and test
/// the synchronization predicate of the requested stack model: no run may be
/// stuck, all final states must coincide, and the stacks must be bottom-only
/// (Empty), pairwise equal (Same) or unconstrained (Arbitrary).
inline CheckResult check_sync_word(const Dpda& m, const Word& word, StackModel model) {
  std::vector<RunTrace> traces;
  traces.reserve(m.states.size());
  for (StateId q = 0; q < m.states.size(); ++q) {
    traces.push_back(run(m, q, word));
    if (traces.back().stuck()) {
      SyncCounterexample cex;
      cex.kind = SyncCounterexample::Kind::StuckRun;
      cex.first = q;
      cex.position = *traces.back().stuck_at;
      return cex;
    }
  }
  for (StateId q = 1; q < m.states.size(); ++q)
    if (traces[q].last().state != traces[0].last().state) {
      SyncCounterexample cex;
      cex.kind = SyncCounterexample::Kind::FinalStateMismatch;
      cex.first = 0;
      cex.second = q;
      return cex;
    }
  if (model == StackModel::Empty) {
    for (StateId q = 0; q < m.states.size(); ++q)
      if (traces[q].last().stack != bottom_only_stack()) {
        SyncCounterexample cex;
        cex.kind = SyncCounterexample::Kind::StackMismatch;
        cex.first = q;
        cex.second = q;
        return cex;
      }
  } else if (model == StackModel::Same) {
    for (StateId q = 1; q < m.states.size(); ++q)
      if (traces[q].last().stack != traces[0].last().stack) {
        SyncCounterexample cex;
        cex.kind = SyncCounterexample::Kind::StackMismatch;
        cex.first = 0;
        cex.second = q;
        return cex;
      }
  }
  SyncWitness w;
  w.word = word;
  w.model = model;
  w.verified = true;
  for (const auto& t : traces) {
    w.final_configs.push_back(t.last());
    w.turn_counts.push_back(stroke_decomposition(t).turns);
  }
  return w;
}

struct NTurnCheckResult {
  bool ok = false;
  std::optional<SyncWitness> witness;          // set when ok
  std::optional<SyncCounterexample> cex;       // set when the model predicate failed
  std::vector<int> turn_counts;                // per start state, when no run is stuck
  std::optional<StateId> turn_bound_violator;  // start state exceeding the bound
};

/// check_sync_word plus the n-turn condition: every per-start-state trace may
/// consist of at most n+1 strokes.
inline NTurnCheckResult check_n_turn_sync_word(const Dpda& m, const Word& word, int n,
                                               StackModel model) {
  NTurnCheckResult res;
  CheckResult base = check_sync_word(m, word, model);
  if (!check_passed(base)) {
    res.cex = std::get<SyncCounterexample>(base);
    if (res.cex->kind != SyncCounterexample::Kind::StuckRun)
      for (StateId q = 0; q < m.states.size(); ++q)
        res.turn_counts.push_back(stroke_decomposition(run(m, q, word)).turns);
    return res;
  }
  SyncWitness w = std::get<SyncWitness>(base);
  res.turn_counts = w.turn_counts;
  for (StateId q = 0; q < m.states.size(); ++q)
    if (w.turn_counts[q] > n) {
      res.turn_bound_violator = q;
      return res;
    }
  w.turn_bound = n;
  res.ok = true;
  res.witness = std::move(w);
  return res;
}

namespace detail {

/// One run of a macro-configuration, with stroke phase when a turn bound is
/// tracked. Runs that have become identical stay identical forever, so the
/// macro-configuration is stored as the canonical sorted set of distinct
/// entries; per-start-state evidence is recovered by re-simulation.
struct MacroEntry {
  Configuration cfg;
  StrokeTracker phase;

  bool operator==(const MacroEntry& o) const {
    return cfg.state == o.cfg.state && cfg.stack == o.cfg.stack &&
           phase.direction == o.phase.direction && phase.strokes == o.phase.strokes;
  }
  bool operator<(const MacroEntry& o) const {
    if (cfg.state != o.cfg.state) return cfg.state < o.cfg.state;
    if (cfg.stack != o.cfg.stack) return cfg.stack < o.cfg.stack;
    if (phase.direction != o.phase.direction) return phase.direction < o.phase.direction;
    return phase.strokes < o.phase.strokes;
  }
};

inline std::string encode_macro(const std::vector<MacroEntry>& entries, bool with_phase) {
  std::string key;
  key.reserve(entries.size() * 10);
  for (const auto& e : entries) {
    if (e.cfg.state > 0xffff || e.cfg.stack.size() > 0xffff)
      throw budget_error("macro-configuration exceeds the compact encoding range");
    std::uint16_t st = std::uint16_t(e.cfg.state);
    std::uint16_t len = std::uint16_t(e.cfg.stack.size());
    key.append(reinterpret_cast<const char*>(&st), 2);
    key.append(reinterpret_cast<const char*>(&len), 2);
    key += e.cfg.stack;
    if (with_phase) key += char(e.phase.phase_byte());
  }
  return key;
}

inline std::vector<MacroEntry> decode_macro(const std::string& key, bool with_phase) {
  std::vector<MacroEntry> entries;
  std::size_t at = 0;
  while (at < key.size()) {
    MacroEntry e;
    std::uint16_t st, len;
    std::memcpy(&st, key.data() + at, 2);
    std::memcpy(&len, key.data() + at + 2, 2);
    at += 4;
    e.cfg.state = st;
    e.cfg.stack.assign(key, at, len);
    at += len;
    if (with_phase) {
      std::uint8_t phase = std::uint8_t(key[at++]);
      e.phase.direction = int(phase & 3) - 1;
      e.phase.strokes = int(phase >> 2);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

inline bool macro_is_goal(const std::vector<MacroEntry>& entries, StackModel model) {
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].cfg.state != entries[0].cfg.state) return false;
  switch (model) {
    case StackModel::Empty:
      for (const auto& e : entries)
        if (e.cfg.stack != bottom_only_stack()) return false;
      return true;
    case StackModel::Same:
      for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i].cfg.stack != entries[0].cfg.stack) return false;
      return true;
    case StackModel::Arbitrary:
      return true;
  }
  return false;
}

}  // namespace detail

/// Breadth-first search over macro-configurations for a synchronizing word,
/// exact up to the limits. Stuck tuples are pruned; with a turn bound, tuples
/// where any run already exceeded n+1 strokes are pruned as well. The first
/// witness found is the shortest and lexicographically least; it is
/// re-verified before being returned. Never returns PROVED_NO.
inline SearchOutcome sync_search_bounded(const Dpda& m, StackModel model,
                                         const SearchLimits& limits,
                                         std::optional<int> turn_bound = std::nullopt) {
  if (limits.max_nodes == 0) throw std::invalid_argument("max_nodes must be positive");
  const bool with_phase = turn_bound.has_value();
  const int max_strokes = turn_bound ? *turn_bound + 1 : 0;

  // Nodes hold only the BFS bookkeeping; the macro-configuration lives in the
  // dedup map's key and is decoded again on expansion.
  struct Node {
    const std::string* key;
    std::uint32_t parent;
    SymbolId via;
    std::uint32_t depth;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::uint32_t> seen;
  seen.reserve(std::min<std::size_t>(limits.max_nodes * 2, std::size_t(1) << 22));
  SearchStats stats;

  auto reconstruct = [&nodes](std::uint32_t id) {
    Word w;
    for (std::uint32_t at = id; at != 0; at = nodes[at].parent) w.push_back(nodes[at].via);
    std::reverse(w.begin(), w.end());
    return w;
  };
  auto finish_found = [&](std::uint32_t id) -> SearchOutcome {
    Word w = reconstruct(id);
    if (turn_bound) {
      auto check = check_n_turn_sync_word(m, w, *turn_bound, model);
      if (!check.ok) throw std::logic_error("bounded search produced an unsound witness");
      return *check.witness;
    }
    CheckResult check = check_sync_word(m, w, model);
    if (!check_passed(check)) throw std::logic_error("bounded search produced an unsound witness");
    return std::get<SyncWitness>(check);
  };

  std::vector<detail::MacroEntry> start;
  for (StateId q = 0; q < m.states.size(); ++q)
    start.push_back(detail::MacroEntry{Configuration{q, bottom_only_stack()}, StrokeTracker{}});
  std::sort(start.begin(), start.end());
  start.erase(std::unique(start.begin(), start.end()), start.end());
  {
    auto [it, fresh] = seen.emplace(detail::encode_macro(start, with_phase), 0);
    nodes.push_back(Node{&it->first, 0, 0, 0});
  }
  stats.nodes_stored = 1;
  if (detail::macro_is_goal(start, model)) return finish_found(0);

  bool depth_truncated = false;
  std::vector<detail::MacroEntry> entries, next;
  for (std::uint32_t head = 0; head < nodes.size(); ++head) {
    const std::uint32_t depth = nodes[head].depth;
    stats.depth_reached = std::max<std::size_t>(stats.depth_reached, depth);
    if (depth >= limits.max_word_len) {
      depth_truncated = true;
      continue;
    }
    ++stats.nodes_expanded;
    entries = detail::decode_macro(*nodes[head].key, with_phase);
    for (SymbolId a = 0; a < m.inputs.size(); ++a) {
      next.clear();
      bool viable = true;
      for (const auto& e : entries) {
        auto stepped = step(m, e.cfg, a);
        if (!stepped) {
          ++stats.pruned_stuck;
          viable = false;
          break;
        }
        detail::MacroEntry ne{std::move(*stepped), e.phase};
        if (with_phase) {
          ne.phase.feed(long(ne.cfg.stack.size()) - long(e.cfg.stack.size()));
          if (ne.phase.strokes > max_strokes) {
            ++stats.pruned_turns;
            viable = false;
            break;
          }
        }
        next.push_back(std::move(ne));
      }
      if (!viable) continue;
      // Horizon bound: a step lowers a stack height by at most one, so the
      // empty-stack goal is out of reach when some stack is taller than the
      // remaining budget. Prunes only branches that cannot finish in time.
      if (model == StackModel::Empty) {
        std::size_t max_height = 1;
        for (const auto& e : next) max_height = std::max(max_height, e.cfg.stack.size());
        if (depth + 1 + (max_height - 1) > limits.max_word_len) {
          ++stats.pruned_horizon;
          continue;
        }
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      std::string key = detail::encode_macro(next, with_phase);
      auto it = seen.find(key);
      if (it != seen.end()) continue;
      if (nodes.size() >= limits.max_nodes) {
        stats.node_cap_hit = true;
        return Exhausted{stats};
      }
      std::uint32_t id = std::uint32_t(nodes.size());
      bool goal = detail::macro_is_goal(next, model);
      auto [slot, fresh] = seen.emplace(std::move(key), id);
      nodes.push_back(Node{&slot->first, head, a, depth + 1});
      ++stats.nodes_stored;
      if (goal) return finish_found(id);
    }
  }
  stats.frontier_exhausted = !depth_truncated;
  return Exhausted{stats};
}

}  // namespace stacksync

#endif  // STACKSYNC_PDA_SYNC_HPP
