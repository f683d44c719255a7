#ifndef STACKSYNC_TRANSDUCER_HPP
#define STACKSYNC_TRANSDUCER_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "stacksync/machine.hpp"
#include "stacksync/witness.hpp"

namespace stacksync {

struct TransducerRun {
  StateId state = kNoState;
  std::string output;  // byte string of output-symbol ids
};

/// Final state and concatenated output of the run on `word` from `state`.
inline TransducerRun run_transducer(const SequentialTransducer& t, StateId state,
                                    const Word& word) {
  TransducerRun r{state, {}};
  for (SymbolId a : word) {
    const auto& mv = t.move(r.state, a);
    r.output += mv.out;
    r.state = mv.to;
  }
  return r;
}

struct TraceCounterexample {
  enum class Kind { FinalStateDiffers, OutputDiffers } kind = Kind::FinalStateDiffers;
  StateId first = kNoState;
  StateId second = kNoState;
  std::size_t position = 0;  // first differing output position (0-based)

  std::string describe(const std::vector<std::string>& state_names) const {
    if (kind == Kind::FinalStateDiffers)
      return "runs from " + state_names[first] + " and " + state_names[second] +
             " end in different states";
    return "outputs of runs from " + state_names[first] + " and " + state_names[second] +
           " differ at position " + std::to_string(position + 1);
  }
};

struct TraceCheckResult {
  bool ok = false;
  std::optional<TraceCounterexample> cex;
  StateId final_state = kNoState;  // when ok
  std::string output;              // when ok
};

/// True iff all runs on `word` end in one state and emit identical outputs.
inline TraceCheckResult check_trace_sync(const SequentialTransducer& t, const Word& word) {
  TraceCheckResult res;
  std::vector<TransducerRun> runs;
  runs.reserve(t.states.size());
  for (StateId q = 0; q < t.states.size(); ++q) runs.push_back(run_transducer(t, q, word));
  for (StateId q = 1; q < t.states.size(); ++q) {
    if (runs[q].output != runs[0].output) {
      std::size_t pos = 0;
      std::size_t common = std::min(runs[q].output.size(), runs[0].output.size());
      while (pos < common && runs[q].output[pos] == runs[0].output[pos]) ++pos;
      res.cex = TraceCounterexample{TraceCounterexample::Kind::OutputDiffers, 0, q, pos};
      return res;
    }
    if (runs[q].state != runs[0].state) {
      res.cex = TraceCounterexample{TraceCounterexample::Kind::FinalStateDiffers, 0, q, 0};
      return res;
    }
  }
  res.ok = true;
  res.final_state = runs[0].state;
  res.output = runs[0].output;
  return res;
}

struct TraceWitness {
  Word word;
  StateId final_state = kNoState;
  std::string output;  // common output, as output-symbol ids
  bool verified = false;
};

using TraceSearchOutcome = std::variant<TraceWitness, Exhausted, ProvedNo>;

inline bool trace_found(const TraceSearchOutcome& o) {
  return std::holds_alternative<TraceWitness>(o);
}

struct TraceSyncLimits {
  std::size_t max_word_len = 12;
  std::size_t max_nodes = 100000;
  std::size_t max_residual = 64;
};

namespace detail {

/// One run of the trace search: current state plus the residual output, i.e.
/// the emitted output minus the longest common prefix over all runs. Runs
/// that coincide stay merged, so nodes keep the canonical set of entries.
struct TraceEntry {
  StateId state;
  std::string residual;

  bool operator==(const TraceEntry&) const = default;
  bool operator<(const TraceEntry& o) const {
    if (state != o.state) return state < o.state;
    return residual < o.residual;
  }
};

inline std::string encode_trace_node(const std::vector<TraceEntry>& entries) {
  std::string key;
  for (const auto& e : entries) {
    std::uint32_t st = e.state, len = std::uint32_t(e.residual.size());
    key.append(reinterpret_cast<const char*>(&st), 4);
    key.append(reinterpret_cast<const char*>(&len), 4);
    key += e.residual;
  }
  return key;
}

}  // namespace detail

/// Bounded search for a trace-synchronizing word. Residuals are append-only,
/// so two residuals where neither is a prefix of the other can never agree
/// again and the node is pruned; residuals beyond the cap are pruned as a
/// completeness trade-off reported in the statistics.
inline TraceSearchOutcome trace_sync_search_bounded(const SequentialTransducer& t,
                                                    const TraceSyncLimits& limits) {
  if (limits.max_nodes == 0) throw std::invalid_argument("max_nodes must be positive");
  struct Node {
    std::vector<detail::TraceEntry> entries;
    std::uint32_t parent;
    SymbolId via;
    std::uint32_t depth;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::uint32_t> seen;
  SearchStats stats;

  auto is_goal = [](const std::vector<detail::TraceEntry>& entries) {
    return entries.size() == 1 && entries[0].residual.empty();
  };
  auto finish = [&](std::uint32_t id) -> TraceSearchOutcome {
    Word w;
    for (std::uint32_t at = id; at != 0; at = nodes[at].parent) w.push_back(nodes[at].via);
    std::reverse(w.begin(), w.end());
    TraceCheckResult check = check_trace_sync(t, w);
    if (!check.ok) throw std::logic_error("trace search produced an unsound witness");
    return TraceWitness{std::move(w), check.final_state, check.output, true};
  };

  std::vector<detail::TraceEntry> start;
  for (StateId q = 0; q < t.states.size(); ++q) start.push_back(detail::TraceEntry{q, {}});
  std::sort(start.begin(), start.end());
  start.erase(std::unique(start.begin(), start.end()), start.end());
  nodes.push_back(Node{start, 0, 0, 0});
  seen.emplace(detail::encode_trace_node(start), 0);
  stats.nodes_stored = 1;
  if (is_goal(start)) return finish(0);

  bool depth_truncated = false;
  for (std::uint32_t head = 0; head < nodes.size(); ++head) {
    const std::uint32_t depth = nodes[head].depth;
    stats.depth_reached = std::max<std::size_t>(stats.depth_reached, depth);
    if (depth >= limits.max_word_len) {
      depth_truncated = true;
      continue;
    }
    ++stats.nodes_expanded;
    for (SymbolId a = 0; a < t.inputs.size(); ++a) {
      std::vector<detail::TraceEntry> next;
      next.reserve(nodes[head].entries.size());
      for (const auto& e : nodes[head].entries) {
        const auto& mv = t.move(e.state, a);
        next.push_back(detail::TraceEntry{mv.to, e.residual + mv.out});
      }
      // Residuals must form a prefix chain; strip their common prefix, which
      // is exactly the shortest residual of a chain.
      const std::string* longest = &next[0].residual;
      std::size_t shortest = next[0].residual.size();
      for (const auto& e : next) {
        if (e.residual.size() > longest->size()) longest = &e.residual;
        shortest = std::min(shortest, e.residual.size());
      }
      bool conflict = false;
      for (const auto& e : next)
        if (longest->compare(0, e.residual.size(), e.residual) != 0) {
          conflict = true;
          break;
        }
      if (conflict) continue;
      bool too_long = false;
      for (auto& e : next) {
        e.residual.erase(0, shortest);
        if (e.residual.size() > limits.max_residual) too_long = true;
      }
      if (too_long) {
        ++stats.pruned_residual_cap;
        continue;
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      std::string key = detail::encode_trace_node(next);
      if (seen.count(key)) continue;
      if (nodes.size() >= limits.max_nodes) {
        stats.node_cap_hit = true;
        return Exhausted{stats};
      }
      std::uint32_t id = std::uint32_t(nodes.size());
      bool goal = is_goal(next);
      nodes.push_back(Node{std::move(next), head, a, depth + 1});
      seen.emplace(std::move(key), id);
      ++stats.nodes_stored;
      if (goal) return finish(id);
    }
  }
  stats.frontier_exhausted = !depth_truncated && stats.pruned_residual_cap == 0;
  return Exhausted{stats};
}

}  // namespace stacksync

#endif  // STACKSYNC_TRANSDUCER_HPP
