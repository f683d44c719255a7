#ifndef STACKSYNC_BLIND_COUNTER_HPP
#define STACKSYNC_BLIND_COUNTER_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stacksync/dfa_sync.hpp"
#include "stacksync/machine.hpp"
#include "stacksync/multicounter.hpp"
#include "stacksync/pda_sync.hpp"

namespace stacksync {

inline constexpr const char* kPadPrefix = "pad:";

/// |Q|-fold product of a partially blind counter automaton with one counter
/// per start state. Acceptance is a diagonal state with all counters zero.
/// The arbitrary and same-stack models append fresh count-down pad letters:
/// one per counter index (decrementing that counter) for the arbitrary model,
/// a single letter decrementing all counters in parallel for the same model.
/// Pad letters only count down; witnesses strip them.
inline MultiCounterMachine build_blind_product(const Dpbca& m, StackModel model,
                                               std::size_t max_product_states = 200000) {
  if (!detail::is_partially_blind(m))
    throw std::invalid_argument("build_blind_product: machine is not partially blind");
  const std::size_t n = m.states.size();

  // Per-state effect of a letter: target plus counter delta (-1 pops, k >= 0
  // keeps the read symbol and pushes k more). Identical for both stack
  // symbols by blindness.
  struct Effect {
    StateId to;
    std::int64_t delta;
  };
  std::vector<Effect> effects(n * m.inputs.size());
  for (StateId q = 0; q < n; ++q)
    for (SymbolId a = 0; a < m.inputs.size(); ++a) {
      const PdaRule& r = m.rule(q, a, kBottom);
      effects[q * m.inputs.size() + a] =
          Effect{r.to, r.push.empty() ? -1 : std::int64_t(r.push.size()) - 1};
    }

  MultiCounterMachine mcm;
  mcm.inputs = m.inputs;
  mcm.num_counters = n;
  mcm.deterministic = true;
  mcm.blind = false;  // partially blind: block below zero
  mcm.accept_requires_zero = true;

  std::map<std::vector<StateId>, StateId> ids;
  std::vector<std::vector<StateId>> tuples;
  auto intern = [&](const std::vector<StateId>& t) {
    auto it = ids.find(t);
    if (it != ids.end()) return it->second;
    if (tuples.size() >= max_product_states)
      throw budget_error("blind product exceeded the state cap");
    StateId id = StateId(tuples.size());
    ids.emplace(t, id);
    tuples.push_back(t);
    return id;
  };
  std::vector<StateId> start(n);
  for (StateId q = 0; q < n; ++q) start[q] = q;
  intern(start);

  struct PendingRule {
    StateId from;
    SymbolId input;
    std::vector<StateId> target;
    std::vector<std::int64_t> delta;
  };
  std::vector<PendingRule> pending;
  for (StateId id = 0; id < tuples.size(); ++id) {
    const std::vector<StateId> tuple = tuples[id];
    for (SymbolId a = 0; a < m.inputs.size(); ++a) {
      PendingRule r;
      r.from = id;
      r.input = a;
      r.target.resize(n);
      r.delta.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const Effect& e = effects[tuple[i] * m.inputs.size() + a];
        r.target[i] = e.to;
        r.delta[i] = e.delta;
      }
      intern(r.target);
      pending.push_back(std::move(r));
    }
  }

  auto is_diagonal = [](const std::vector<StateId>& t) {
    for (StateId s : t)
      if (s != t[0]) return false;
    return true;
  };

  for (const auto& t : tuples) {
    std::string label = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) label += ",";
      label += m.states[t[i]];
    }
    label += ")";
    mcm.states.push_back(std::move(label));
  }

  // Count-down copies of the diagonal states for the padded models.
  std::vector<StateId> countdown_of(tuples.size(), kNoState);
  if (model != StackModel::Empty) {
    for (StateId id = 0; id < tuples.size(); ++id)
      if (is_diagonal(tuples[id])) {
        countdown_of[id] = StateId(mcm.states.size());
        mcm.states.push_back(mcm.states[id] + "/countdown");
      }
  }

  mcm.finals.assign(mcm.states.size(), false);
  mcm.tail_state.assign(mcm.states.size(), false);
  mcm.initial = 0;
  for (StateId id = 0; id < tuples.size(); ++id)
    if (is_diagonal(tuples[id])) {
      mcm.finals[id] = true;
      if (countdown_of[id] != kNoState) {
        mcm.finals[countdown_of[id]] = true;
        mcm.tail_state[countdown_of[id]] = true;
      }
    }

  if (model == StackModel::Arbitrary) {
    for (std::size_t i = 0; i < n; ++i) {
      mcm.pad_symbols.push_back(SymbolId(mcm.inputs.size()));
      mcm.inputs.push_back(kPadPrefix + std::to_string(i + 1));
    }
  } else if (model == StackModel::Same) {
    mcm.pad_symbols.push_back(SymbolId(mcm.inputs.size()));
    mcm.inputs.push_back(std::string(kPadPrefix) + "all");
  }

  const auto any_guards =
      std::vector<MultiCounterMachine::Guard>(n, MultiCounterMachine::Guard::Any);
  for (const auto& r : pending)
    mcm.add_rule(MultiCounterMachine::Rule{r.from, r.input, ids.at(r.target), r.delta, any_guards});

  auto add_pad_rules = [&](StateId from, StateId to) {
    if (model == StackModel::Arbitrary) {
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::int64_t> delta(n, 0);
        delta[i] = -1;
        mcm.add_rule(MultiCounterMachine::Rule{from, mcm.pad_symbols[i], to, delta, any_guards});
      }
    } else if (model == StackModel::Same) {
      mcm.add_rule(MultiCounterMachine::Rule{from, mcm.pad_symbols[0], to,
                                             std::vector<std::int64_t>(n, -1), any_guards});
    }
  };
  if (model != StackModel::Empty)
    for (StateId id = 0; id < tuples.size(); ++id)
      if (countdown_of[id] != kNoState) {
        add_pad_rules(id, countdown_of[id]);
        add_pad_rules(countdown_of[id], countdown_of[id]);
      }
  return mcm;
}

/// Bounded synchronizability of a partially blind counter automaton: build
/// the product for the model, search it, strip pad letters from the accepted
/// word and re-verify the result as a synchronizing word.
inline SearchOutcome dpbca_sync_bounded(const Dpbca& m, StackModel model,
                                        const SearchLimits& budget,
                                        std::size_t max_product_states = 200000) {
  MultiCounterMachine product = build_blind_product(m, model, max_product_states);
  McmOutcome out = mcm_bounded_emptiness(product, budget);
  if (!mcm_found(out)) return Exhausted{std::get<Exhausted>(out).stats};
  const McmAccepted& acc = std::get<McmAccepted>(out);
  Word w;
  for (SymbolId a : acc.word)
    if (!product.is_pad(a)) w.push_back(a);
  CheckResult check = check_sync_word(m, w, model);
  if (!check_passed(check)) throw std::logic_error("dpbca_sync_bounded produced an unsound witness");
  return std::get<SyncWitness>(check);
}

struct DbcaDecision {
  bool yes = false;
  std::optional<Word> witness;
};

inline Dfa dbca_state_projection(const Dbca& m) {
  Dfa d;
  d.states = m.states;
  d.inputs = m.inputs;
  d.table.reserve(m.table.size());
  for (const auto& mv : m.table) d.table.push_back(mv.to);
  d.initial = m.initial;
  d.finals = m.finals;
  return d;
}

/// Blind counters never influence the run, so synchronization with arbitrary
/// counter values is synchronization of the underlying DFA: exact and
/// polynomial.
inline DbcaDecision decide_dbca_arbitrary(const Dbca& m) {
  Dfa d = dbca_state_projection(m);
  if (!is_synchronizable_dfa(d)) return DbcaDecision{};
  auto w = find_sync_word_greedy(d);
  if (!w) throw std::logic_error("decide_dbca_arbitrary: greedy failed on a synchronizable DFA");
  return DbcaDecision{true, std::move(w)};
}

}  // namespace stacksync

#endif  // STACKSYNC_BLIND_COUNTER_HPP
