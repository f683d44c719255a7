#ifndef STACKSYNC_WITNESS_HPP
#define STACKSYNC_WITNESS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stacksync/machine.hpp"

namespace stacksync {

/// A claimed synchronizing word together with the evidence of every run:
/// re-simulating the word from each start state must reproduce the recorded
/// final configurations, and the stack-model predicate must hold.
struct SyncWitness {
  Word word;
  StackModel model = StackModel::Empty;
  std::vector<Configuration> final_configs;  // indexed by start state
  std::vector<int> turn_counts;              // indexed by start state
  std::optional<int> turn_bound;             // set when an n-turn constraint was requested
  bool verified = false;
};

struct SearchLimits {
  std::size_t max_word_len = 12;
  std::size_t max_nodes = 100000;
};

struct SearchStats {
  std::size_t nodes_stored = 0;
  std::size_t nodes_expanded = 0;
  std::size_t depth_reached = 0;
  std::size_t pruned_stuck = 0;
  std::size_t pruned_turns = 0;
  std::size_t pruned_residual_cap = 0;
  std::size_t pruned_horizon = 0;  // could not reach the goal within the length budget
  bool node_cap_hit = false;
  bool frontier_exhausted = false;  // search space fully explored below the caps
};

struct Exhausted {
  SearchStats stats;
};

struct ProvedNo {
  std::string reason;
};

/// FOUND(witness) | EXHAUSTED(statistics) | PROVED_NO(reason).
using SearchOutcome = std::variant<SyncWitness, Exhausted, ProvedNo>;

inline bool found(const SearchOutcome& o) { return std::holds_alternative<SyncWitness>(o); }
inline const SyncWitness& witness_of(const SearchOutcome& o) { return std::get<SyncWitness>(o); }

/// Why a word fails to synchronize: a run died, two runs ended in different
/// states, or the stacks violate the requested model.
struct SyncCounterexample {
  enum class Kind { StuckRun, FinalStateMismatch, StackMismatch } kind = Kind::StuckRun;
  StateId first = kNoState;   // offending start state
  StateId second = kNoState;  // partner start state for mismatches
  std::size_t position = 0;   // letter index for stuck runs

  std::string describe(const std::vector<std::string>& state_names) const {
    switch (kind) {
      case Kind::StuckRun:
        return "run from " + state_names[first] + " gets stuck at letter " +
               std::to_string(position + 1);
      case Kind::FinalStateMismatch:
        return "runs from " + state_names[first] + " and " + state_names[second] +
               " end in different states";
      case Kind::StackMismatch:
        return "runs from " + state_names[first] + " and " + state_names[second] +
               " end with different stacks";
    }
    return "?";
  }
};

using CheckResult = std::variant<SyncWitness, SyncCounterexample>;

inline bool check_passed(const CheckResult& r) { return std::holds_alternative<SyncWitness>(r); }

}  // namespace stacksync

#endif  // STACKSYNC_WITNESS_HPP
