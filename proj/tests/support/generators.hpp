#ifndef STACKSYNC_TESTS_GENERATORS_HPP
#define STACKSYNC_TESTS_GENERATORS_HPP

#include <random>
#include <string>
#include <vector>

#include "stacksync/machine.hpp"

namespace stacksync::testing {

inline std::vector<std::string> state_names_for(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
  return names;
}

inline std::vector<std::string> letter_names_for(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::string(1, char('a' + i)));
  return names;
}

inline Dfa random_dfa(std::mt19937& rng, int n_states, int n_inputs) {
  Dfa m;
  m.states = state_names_for(n_states);
  m.inputs = letter_names_for(n_inputs);
  std::uniform_int_distribution<int> st(0, n_states - 1);
  m.table.resize(std::size_t(n_states) * n_inputs);
  for (auto& t : m.table) t = StateId(st(rng));
  return m;
}

inline PartialDfa random_partial_dfa(std::mt19937& rng, int n_states, int n_inputs,
                                     int undefined_percent = 25) {
  PartialDfa m;
  m.states = state_names_for(n_states);
  m.inputs = letter_names_for(n_inputs);
  std::uniform_int_distribution<int> st(0, n_states - 1);
  std::uniform_int_distribution<int> pct(0, 99);
  m.table.resize(std::size_t(n_states) * n_inputs);
  for (auto& t : m.table) t = pct(rng) < undefined_percent ? kNoState : StateId(st(rng));
  return m;
}

/// Random total DPDA. Push strings obey the bottom discipline; pops of the
/// bottom symbol (which strand the run) appear with low probability.
inline Dpda random_dpda(std::mt19937& rng, int n_states, int n_inputs, int n_stack) {
  Dpda m;
  m.states = state_names_for(n_states);
  m.inputs = letter_names_for(n_inputs);
  m.stack_syms = {kBottomName};
  for (int g = 1; g < n_stack; ++g) m.stack_syms.push_back("g" + std::to_string(g));
  m.table.resize(std::size_t(n_states) * n_inputs * n_stack);
  std::uniform_int_distribution<int> st(0, n_states - 1);
  std::uniform_int_distribution<int> kind(0, 9);
  std::uniform_int_distribution<int> sym(1, std::max(1, n_stack - 1));
  for (StateId q = 0; q < StateId(n_states); ++q)
    for (SymbolId a = 0; a < SymbolId(n_inputs); ++a)
      for (int g = 0; g < n_stack; ++g) {
        PdaRule r;
        r.to = StateId(st(rng));
        int k = kind(rng);
        if (g == 0) {
          if (k == 0) {
            r.push = "";  // pop the bottom symbol
          } else if (k <= 5 || n_stack == 1) {
            r.push = StackString(1, char(kBottom));
          } else {
            r.push = StackString(1, char(kBottom));
            r.push += char(sym(rng));
            if (k == 9) r.push += char(sym(rng));
          }
        } else {
          if (k <= 2) {
            r.push = "";  // pop
          } else if (k <= 6) {
            r.push = StackString(1, char(sym(rng)));  // exchange (or keep)
          } else {
            r.push = StackString(1, char(g));
            r.push += char(sym(rng));
          }
        }
        m.rule_mut(q, a, StackSymId(g)) = r;
      }
  return m;
}

inline Dca random_dca(std::mt19937& rng, int n_states, int n_inputs) {
  return Dca{random_dpda(rng, n_states, n_inputs, 2)};
}

/// Random partially blind counter automaton: per (state, letter) either both
/// stack cases pop or both keep the read symbol and push the same suffix.
inline Dpbca random_dpbca(std::mt19937& rng, int n_states, int n_inputs, bool counter_free = false) {
  Dpda m;
  m.states = state_names_for(n_states);
  m.inputs = letter_names_for(n_inputs);
  m.stack_syms = {kBottomName, "1"};
  m.table.resize(std::size_t(n_states) * n_inputs * 2);
  std::uniform_int_distribution<int> st(0, n_states - 1);
  std::uniform_int_distribution<int> kind(0, 5);
  for (StateId q = 0; q < StateId(n_states); ++q)
    for (SymbolId a = 0; a < SymbolId(n_inputs); ++a) {
      StateId to = StateId(st(rng));
      int k = counter_free ? 2 : kind(rng);
      if (k <= 1) {  // pop on both symbols
        m.rule_mut(q, a, 0) = PdaRule{to, ""};
        m.rule_mut(q, a, 1) = PdaRule{to, ""};
      } else {
        StackString suffix;
        if (k >= 4) suffix += char(1);
        if (k == 5) suffix += char(1);
        StackString on_bot(1, char(kBottom)), on_one(1, char(1));
        m.rule_mut(q, a, 0) = PdaRule{to, on_bot + suffix};
        m.rule_mut(q, a, 1) = PdaRule{to, on_one + suffix};
      }
    }
  return Dpbca{{std::move(m)}};
}

inline SequentialTransducer random_transducer(std::mt19937& rng, int n_states, int n_inputs,
                                              int n_outputs, int max_out_len = 2) {
  SequentialTransducer t;
  t.states = state_names_for(n_states);
  t.inputs = letter_names_for(n_inputs);
  for (int i = 0; i < n_outputs; ++i) t.outputs.push_back(std::string(1, char('x' + i)));
  std::uniform_int_distribution<int> st(0, n_states - 1);
  std::uniform_int_distribution<int> len(0, max_out_len);
  std::uniform_int_distribution<int> out(0, n_outputs - 1);
  t.table.resize(std::size_t(n_states) * n_inputs);
  for (auto& mv : t.table) {
    mv.to = StateId(st(rng));
    int l = len(rng);
    for (int i = 0; i < l; ++i) mv.out += char(out(rng));
  }
  return t;
}

/// The n-state cyclic-shift/one-merge automaton: letter a shifts i -> i+1
/// mod n, letter b maps 0 -> 1 and fixes everything else. Its shortest
/// synchronizing word has length (n-1)^2.
inline Dfa cerny(int n) {
  Dfa m;
  m.states = state_names_for(n);
  m.inputs = {"a", "b"};
  m.table.resize(std::size_t(n) * 2);
  for (int i = 0; i < n; ++i) {
    m.table[i * 2 + 0] = StateId((i + 1) % n);
    m.table[i * 2 + 1] = StateId(i == 0 ? 1 : i);
  }
  return m;
}

/// Lift a DFA to a stack-preserving DPDA over the given stack alphabet.
inline Dpda lift_to_dpda(const Dfa& d, std::vector<std::string> stack_syms = {kBottomName, "1"}) {
  Dpda m;
  m.states = d.states;
  m.inputs = d.inputs;
  m.stack_syms = std::move(stack_syms);
  m.table.resize(d.states.size() * d.inputs.size() * m.stack_syms.size());
  for (StateId q = 0; q < d.states.size(); ++q)
    for (SymbolId a = 0; a < d.inputs.size(); ++a)
      for (std::size_t g = 0; g < m.stack_syms.size(); ++g)
        m.rule_mut(q, a, StackSymId(g)) = PdaRule{d.next(q, a), StackString(1, char(g))};
  m.initial = d.initial;
  m.finals = d.finals;
  return m;
}

/// One-state acceptor accepting every word over {x}, never touching its
/// counter.
inline Dpda one_state_acceptor() {
  return Dpda::make({"s"}, {"x"}, {kBottomName, "1"},
                    {{"s", "x", kBottomName, "s", {kBottomName}}, {"s", "x", "1", "s", {"1"}}},
                    {"s"}, "s");
}

}  // namespace stacksync::testing

#endif  // STACKSYNC_TESTS_GENERATORS_HPP
