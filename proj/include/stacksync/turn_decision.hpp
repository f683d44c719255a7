#ifndef STACKSYNC_TURN_DECISION_HPP
#define STACKSYNC_TURN_DECISION_HPP

#include <boost/multiprecision/cpp_int.hpp>

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

using BigInt = boost::multiprecision::cpp_int;

/// Keep exactly the bottom-preserving transitions delta(q, a, bot) = (q', bot)
/// as a partial DFA over Q. A 0-turn run that must end on the bottom-only
/// stack can never leave it, so these are the only usable moves.
inline PartialDfa restrict_to_bottom(const Dpda& m) {
  PartialDfa pd;
  pd.states = m.states;
  pd.inputs = m.inputs;
  pd.table.assign(m.states.size() * m.inputs.size(), kNoState);
  for (StateId q = 0; q < m.states.size(); ++q)
    for (SymbolId a = 0; a < m.inputs.size(); ++a) {
      const PdaRule& r = m.rule(q, a, kBottom);
      if (r.push == bottom_only_stack()) pd.table[q * m.inputs.size() + a] = r.to;
    }
  return pd;
}

/// Partial DFA over Q x Gamma tracking only the top of the stack: pushes keep
/// the last pushed symbol, pops are undefined. Faithful for 0-turn runs, which
/// never pop (the popped symbols could never be exposed again).
inline PartialDfa top_symbol_projection(const Dpda& m) {
  const std::size_t n_stack = m.stack_syms.size();
  PartialDfa pd;
  for (StateId q = 0; q < m.states.size(); ++q)
    for (std::size_t g = 0; g < n_stack; ++g)
      pd.states.push_back(m.states[q] + "/" + m.stack_syms[g]);
  pd.inputs = m.inputs;
  pd.table.assign(pd.states.size() * pd.inputs.size(), kNoState);
  for (StateId q = 0; q < m.states.size(); ++q)
    for (SymbolId a = 0; a < m.inputs.size(); ++a)
      for (std::size_t g = 0; g < n_stack; ++g) {
        const PdaRule& r = m.rule(q, a, StackSymId(g));
        if (r.push.empty()) continue;
        StackSymId top = StackSymId(static_cast<unsigned char>(r.push.back()));
        pd.table[(q * n_stack + g) * pd.inputs.size() + a] = StateId(r.to * n_stack + top);
      }
  return pd;
}

struct ZeroTurnDecision {
  bool yes = false;
  std::optional<SyncWitness> witness;
};

/// Exact decision for 0-turn synchronizability in the empty or arbitrary
/// stack model. The same-stack model has no exact procedure here and faults.
inline ZeroTurnDecision decide_0turn(const Dpda& m, StackModel model,
                                     std::size_t max_subsets = kDefaultSubsetCap) {
  if (model == StackModel::Same)
    throw std::invalid_argument(
        "decide_0turn: no exact procedure for the same-stack model; use bounded search");
  std::optional<Word> w;
  if (model == StackModel::Empty) {
    w = careful_sync(restrict_to_bottom(m), max_subsets);
  } else {
    PartialDfa pd = top_symbol_projection(m);
    const std::size_t n_stack = m.stack_syms.size();
    std::vector<StateId> start;
    for (StateId q = 0; q < m.states.size(); ++q)
      start.push_back(StateId(q * n_stack + kBottom));
    auto same_base = [n_stack](std::uint64_t mask) {
      std::size_t base = std::size_t(-1);
      for (std::size_t i = 0; mask; ++i, mask >>= 1) {
        if (!(mask & 1)) continue;
        if (base == std::size_t(-1))
          base = i / n_stack;
        else if (base != i / n_stack)
          return false;
      }
      return true;
    };
    w = careful_search(pd, start, same_base, max_subsets);
  }
  if (!w) return ZeroTurnDecision{};
  auto check = check_n_turn_sync_word(m, *w, 0, model);
  if (!check.ok) throw std::logic_error("decide_0turn produced an unsound witness");
  return ZeroTurnDecision{true, std::move(check.witness)};
}

// ---------------------------------------------------------------------------
// Staged 1-turn simulation of a counter automaton
// ---------------------------------------------------------------------------

struct StagedState {
  StateId base = 0;
  int stage = 1;   // 1 zero so far, 2 strictly positive, 3 after first pop, 4 zero again
  int parity = 0;  // alternates every letter; checks run at parity 1
};

/// Deterministic 1-turn counter automaton accepting exactly the spread-out
/// variants of words that drive the underlying counter automaton from one
/// fixed start state through a run of at most one turn ending with an empty
/// counter (final acceptance additionally filters on the stage). Letters at
/// odd positions replay the original transitions; the letter after each of
/// them only inspects the counter so the stage can advance deterministically.
struct StagedDca {
  struct Move {
    StateId to = kNoState;  // staged id; kNoState = undefined
    std::int64_t delta = 0;
  };

  std::size_t n_base = 0;
  std::size_t n_inputs = 0;
  StateId initial = 0;
  std::vector<Move> table;   // staged-state * inputs * {bottom, positive}
  std::vector<bool> finals;  // stage 1 or 4, parity 0

  static StateId staged_id(StateId base, int stage, int parity) {
    return base * 8 + StateId(stage - 1) * 2 + StateId(parity);
  }
  static StateId base_of(StateId s) { return s / 8; }
  static int stage_of(StateId s) { return int(s % 8) / 2 + 1; }
  static int parity_of(StateId s) { return int(s % 2); }

  std::size_t n_staged() const { return n_base * 8; }

  const Move& move(StateId staged, SymbolId a, bool counter_positive) const {
    return table[(staged * n_inputs + a) * 2 + (counter_positive ? 1 : 0)];
  }

  struct SimState {
    StateId staged = kNoState;
    std::int64_t counter = 0;
    bool dead = false;
  };

  SimState simulate(const Word& w) const {
    SimState s{initial, 0, false};
    for (SymbolId a : w) {
      const Move& mv = move(s.staged, a, s.counter > 0);
      if (mv.to == kNoState) {
        s.dead = true;
        return s;
      }
      s.staged = mv.to;
      s.counter += mv.delta;
    }
    return s;
  }

  bool accepts(const Word& w) const {
    SimState s = simulate(w);
    return !s.dead && finals[s.staged];
  }

  std::string label(StateId staged, const Dpda& source) const {
    return "(" + source.states[base_of(staged)] + "," + std::to_string(stage_of(staged)) + "," +
           std::to_string(parity_of(staged)) + ")";
  }
};

/// Build the staged machine for start state `q` of a counter automaton.
inline StagedDca build_mq(const Dca& dca, StateId q) {
  if (dca.stack_syms.size() != 2)
    throw std::invalid_argument("build_mq: machine is not counter-shaped");
  const StackSymId one = 1;
  StagedDca s;
  s.n_base = dca.states.size();
  s.n_inputs = dca.inputs.size();
  s.initial = StagedDca::staged_id(q, 1, 0);
  s.table.assign(s.n_staged() * s.n_inputs * 2, StagedDca::Move{});
  s.finals.assign(s.n_staged(), false);
  for (StateId p = 0; p < s.n_base; ++p) {
    s.finals[StagedDca::staged_id(p, 1, 0)] = true;
    s.finals[StagedDca::staged_id(p, 4, 0)] = true;
  }
  auto set = [&](StateId from, SymbolId a, bool positive, StateId to, std::int64_t delta) {
    s.table[(from * s.n_inputs + a) * 2 + (positive ? 1 : 0)] = StagedDca::Move{to, delta};
  };
  for (StateId p = 0; p < s.n_base; ++p) {
    for (SymbolId a = 0; a < s.n_inputs; ++a) {
      const PdaRule& on_bot = dca.rule(p, a, kBottom);
      const PdaRule& on_one = dca.rule(p, a, one);
      // Simulation steps at parity 0.
      if (!on_bot.push.empty()) {  // a bottom pop would strand the run: no rule
        std::int64_t pushed = std::int64_t(on_bot.push.size()) - 1;
        if (pushed == 0) {
          set(StagedDca::staged_id(p, 1, 0), a, false, StagedDca::staged_id(on_bot.to, 1, 1), 0);
          set(StagedDca::staged_id(p, 4, 0), a, false, StagedDca::staged_id(on_bot.to, 4, 1), 0);
        } else {
          set(StagedDca::staged_id(p, 1, 0), a, false, StagedDca::staged_id(on_bot.to, 2, 1),
              pushed);
        }
      }
      {
        std::int64_t growth = std::int64_t(on_one.push.size()) - 1;
        if (growth >= 0) {
          set(StagedDca::staged_id(p, 2, 0), a, true, StagedDca::staged_id(on_one.to, 2, 1),
              growth);
          if (growth == 0)  // downstrokes allow exchanges but no growth
            set(StagedDca::staged_id(p, 3, 0), a, true, StagedDca::staged_id(on_one.to, 3, 1), 0);
        } else {
          set(StagedDca::staged_id(p, 2, 0), a, true, StagedDca::staged_id(on_one.to, 3, 1), -1);
          set(StagedDca::staged_id(p, 3, 0), a, true, StagedDca::staged_id(on_one.to, 3, 1), -1);
        }
      }
      // Counter checks at parity 1, any letter.
      for (StateId r = 0; r < s.n_base; ++r) {
        set(StagedDca::staged_id(r, 1, 1), a, false, StagedDca::staged_id(r, 1, 0), 0);
        set(StagedDca::staged_id(r, 2, 1), a, true, StagedDca::staged_id(r, 2, 0), 0);
        set(StagedDca::staged_id(r, 3, 1), a, true, StagedDca::staged_id(r, 3, 0), 0);
        set(StagedDca::staged_id(r, 3, 1), a, false, StagedDca::staged_id(r, 4, 0), 0);
        set(StagedDca::staged_id(r, 4, 1), a, false, StagedDca::staged_id(r, 4, 0), 0);
      }
    }
  }
  return s;
}

/// Canonical spread-out variant: the first declared alphabet symbol is
/// inserted after every letter, doubling the length.
inline Word spread_out(const Word& w) {
  Word out;
  out.reserve(w.size() * 2);
  for (SymbolId a : w) {
    out.push_back(a);
    out.push_back(0);
  }
  return out;
}

/// Odd positions (1st, 3rd, ...) of a spread-out word.
inline Word spread_out_inverse(const Word& w) {
  Word out;
  for (std::size_t i = 0; i < w.size(); i += 2) out.push_back(w[i]);
  return out;
}

inline constexpr std::size_t kDefaultProductCap = 200000;

/// |Q|-fold product of the staged machines, one counter per start state, all
/// flagged 1-turn. Finals depend on the model; the same-stack variant appends
/// a nondeterministic count-down tail on the first declared letter.
inline MultiCounterMachine build_1turn_product(const Dca& dca, StackModel model,
                                               std::size_t max_product_states = kDefaultProductCap) {
  const std::size_t n = dca.states.size();
  std::vector<StagedDca> components;
  components.reserve(n);
  for (StateId q = 0; q < n; ++q) components.push_back(build_mq(dca, q));

  MultiCounterMachine mcm;
  mcm.inputs = dca.inputs;
  mcm.num_counters = n;
  mcm.one_turn.assign(n, true);
  mcm.deterministic = model != StackModel::Same;
  mcm.blind = false;
  mcm.accept_requires_zero = model != StackModel::Arbitrary;

  std::map<std::vector<StateId>, StateId> ids;
  std::vector<std::vector<StateId>> tuples;
  auto intern = [&](const std::vector<StateId>& t) {
    auto it = ids.find(t);
    if (it != ids.end()) return it->second;
    if (tuples.size() >= max_product_states)
      throw budget_error("1-turn product exceeded the state cap");
    StateId id = StateId(tuples.size());
    ids.emplace(t, id);
    tuples.push_back(t);
    return id;
  };

  std::vector<StateId> start(n);
  for (StateId q = 0; q < n; ++q) start[q] = components[q].initial;
  intern(start);

  struct Option {
    MultiCounterMachine::Guard guard;
    StateId to;
    std::int64_t delta;
  };
  struct PendingRule {
    StateId from;
    SymbolId input;
    std::vector<StateId> target;
    std::vector<std::int64_t> delta;
    std::vector<MultiCounterMachine::Guard> guards;
  };
  std::vector<PendingRule> pending;

  for (StateId id = 0; id < tuples.size(); ++id) {
    const std::vector<StateId> tuple = tuples[id];
    for (SymbolId a = 0; a < dca.inputs.size(); ++a) {
      std::vector<std::vector<Option>> options(n);
      bool viable = true;
      for (std::size_t i = 0; i < n && viable; ++i) {
        const auto& zero_case = components[i].move(tuple[i], a, false);
        const auto& pos_case = components[i].move(tuple[i], a, true);
        if (zero_case.to != kNoState)
          options[i].push_back(
              Option{MultiCounterMachine::Guard::Zero, zero_case.to, zero_case.delta});
        if (pos_case.to != kNoState)
          options[i].push_back(
              Option{MultiCounterMachine::Guard::Positive, pos_case.to, pos_case.delta});
        viable = !options[i].empty();
      }
      if (!viable) continue;
      std::vector<std::size_t> pick(n, 0);
      while (true) {
        PendingRule r;
        r.from = id;
        r.input = a;
        r.target.resize(n);
        r.delta.resize(n);
        r.guards.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          const Option& o = options[i][pick[i]];
          r.target[i] = o.to;
          r.delta[i] = o.delta;
          r.guards[i] = o.guard;
        }
        pending.push_back(std::move(r));
        std::size_t i = 0;
        while (i < n && ++pick[i] == options[i].size()) pick[i++] = 0;
        if (i == n) break;
      }
    }
    // Intern the targets discovered at this tuple so the loop visits them.
    for (std::size_t k = pending.size(); k-- > 0;) {
      if (pending[k].from != id) break;
      intern(pending[k].target);
    }
  }

  auto is_diagonal_parity0 = [&](const std::vector<StateId>& t, bool restrict_outer_stage) {
    StateId base0 = StagedDca::base_of(t[0]);
    for (StateId s : t) {
      if (StagedDca::parity_of(s) != 0) return false;
      if (StagedDca::base_of(s) != base0) return false;
      int stage = StagedDca::stage_of(s);
      if (restrict_outer_stage && stage != 1 && stage != 4) return false;
    }
    return true;
  };

  for (const auto& t : tuples) {
    std::string label = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) label += ",";
      label += components[i].label(t[i], dca);
    }
    label += ")";
    mcm.states.push_back(std::move(label));
  }
  mcm.finals.assign(mcm.states.size(), false);
  mcm.tail_state.assign(mcm.states.size(), false);
  mcm.initial = 0;

  if (model == StackModel::Empty) {
    for (StateId id = 0; id < tuples.size(); ++id)
      mcm.finals[id] = is_diagonal_parity0(tuples[id], true);
  } else if (model == StackModel::Arbitrary) {
    for (StateId id = 0; id < tuples.size(); ++id)
      mcm.finals[id] = is_diagonal_parity0(tuples[id], false);
  }

  StateId q_dec = kNoState, q_f = kNoState;
  if (model == StackModel::Same) {
    q_dec = StateId(mcm.states.size());
    mcm.states.push_back("q_dec");
    q_f = StateId(mcm.states.size());
    mcm.states.push_back("q_f");
    mcm.finals.assign(mcm.states.size(), false);
    mcm.finals[q_f] = true;
    mcm.tail_state.assign(mcm.states.size(), false);
    mcm.tail_state[q_dec] = true;
    mcm.tail_state[q_f] = true;
  }

  for (const auto& r : pending) {
    MultiCounterMachine::Rule rule;
    rule.from = r.from;
    rule.input = r.input;
    rule.to = ids.at(r.target);
    rule.delta = r.delta;
    rule.guards = r.guards;
    mcm.add_rule(std::move(rule));
  }

  if (model == StackModel::Same) {
    const SymbolId sync_letter = 0;
    auto any_guards = std::vector<MultiCounterMachine::Guard>(n, MultiCounterMachine::Guard::Any);
    auto zero_guards = std::vector<MultiCounterMachine::Guard>(n, MultiCounterMachine::Guard::Zero);
    for (StateId id = 0; id < tuples.size(); ++id)
      if (is_diagonal_parity0(tuples[id], false))
        mcm.add_rule(MultiCounterMachine::Rule{id, sync_letter, q_dec,
                                               std::vector<std::int64_t>(n, 0), any_guards});
    mcm.add_rule(MultiCounterMachine::Rule{q_dec, sync_letter, q_dec,
                                           std::vector<std::int64_t>(n, -1), any_guards});
    mcm.add_rule(MultiCounterMachine::Rule{q_dec, sync_letter, q_f, std::vector<std::int64_t>(n, 0),
                                           zero_guards});
  }
  return mcm;
}

struct BoundReport {
  BigInt bound;           // (m*s)^(c*m)
  std::uint64_t counters = 0;  // m
  BigInt transitions;          // s, from the nominal product size
  int exponent_constant = 1;   // c
  std::uint64_t practical_budget = 0;
};

struct OneTurnDecision {
  SearchOutcome outcome;
  BoundReport report;
};

/// Bounded realization of the exact decision procedure: search the product
/// machine for an accepted word, map it back through the odd positions, and
/// report the theoretical word-length bound honestly. PROVED_NO only when the
/// practical budget covers the bound.
inline OneTurnDecision decide_1turn_dca(const Dca& dca, StackModel model,
                                        const SearchLimits& budget, int gi_exponent = 1,
                                        std::size_t max_product_states = kDefaultProductCap) {
  MultiCounterMachine product = build_1turn_product(dca, model, max_product_states);

  OneTurnDecision result;
  const std::uint64_t m = dca.states.size();
  BigInt nominal_states = boost::multiprecision::pow(BigInt(8 * m), unsigned(m));
  if (model == StackModel::Same) nominal_states += 2;
  result.report.counters = m;
  result.report.transitions = nominal_states * BigInt(dca.inputs.size());
  result.report.exponent_constant = gi_exponent;
  result.report.bound = boost::multiprecision::pow(BigInt(m) * result.report.transitions,
                                                   unsigned(gi_exponent * m));
  result.report.practical_budget = budget.max_word_len;

  McmOutcome out = mcm_bounded_emptiness(product, budget);
  if (mcm_found(out)) {
    const McmAccepted& acc = std::get<McmAccepted>(out);
    std::size_t core_len = acc.word.size();
    if (!product.tail_state.empty())
      for (std::size_t i = 0; i < acc.state_path.size(); ++i)
        if (product.tail_state[acc.state_path[i]]) {
          core_len = i - 1;
          break;
        }
    Word spread(acc.word.begin(), acc.word.begin() + core_len);
    Word w = spread_out_inverse(spread);
    auto check = check_n_turn_sync_word(dca, w, 1, model);
    if (!check.ok) throw std::logic_error("decide_1turn_dca produced an unsound witness");
    result.outcome = *check.witness;
    return result;
  }
  const SearchStats& stats = std::get<Exhausted>(out).stats;
  if (!stats.node_cap_hit && BigInt(budget.max_word_len) >= result.report.bound) {
    result.outcome =
        ProvedNo{"no accepted word up to the theoretical length bound; the product language "
                 "is empty"};
    return result;
  }
  result.outcome = Exhausted{stats};
  return result;
}

}  // namespace stacksync

#endif  // STACKSYNC_TURN_DECISION_HPP
