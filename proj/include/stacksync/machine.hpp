#ifndef STACKSYNC_MACHINE_HPP
#define STACKSYNC_MACHINE_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace stacksync {

using StateId = std::uint32_t;
using SymbolId = std::uint32_t;
using StackSymId = std::uint8_t;

inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();
inline constexpr StackSymId kBottom = 0;
inline constexpr const char* kBottomName = "bot";

/// Input word as a sequence of symbol ids.
using Word = std::vector<SymbolId>;

/// Stack content as a byte string of stack-symbol ids. Index 0 is the
/// deepest symbol, the last byte is the top of the stack. A well-formed
/// stack starts with the bottom symbol; it becomes empty once the bottom
/// symbol has been popped, after which any further step is stuck.
using StackString = std::string;

inline StackString bottom_only_stack() { return StackString(1, char(kBottom)); }

/// Which condition the stacks must satisfy after a synchronizing word:
/// all equal to the bottom-only stack, all pairwise equal, or unconstrained.
enum class StackModel { Empty, Same, Arbitrary };

inline const char* to_string(StackModel m) {
  switch (m) {
    case StackModel::Empty: return "empty";
    case StackModel::Same: return "same";
    case StackModel::Arbitrary: return "arbitrary";
  }
  return "?";
}

inline std::optional<StackModel> stack_model_from_string(std::string_view s) {
  if (s == "empty") return StackModel::Empty;
  if (s == "same") return StackModel::Same;
  if (s == "arbitrary") return StackModel::Arbitrary;
  return std::nullopt;
}

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::optional<std::uint32_t> index_of(const std::vector<std::string>& names,
                                             std::string_view name) {
  for (std::uint32_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Machine types
// ---------------------------------------------------------------------------

struct Dfa {
  std::vector<std::string> states;
  std::vector<std::string> inputs;
  std::vector<StateId> table;  // states.size() * inputs.size(), row-major by state
  std::optional<StateId> initial;
  std::vector<StateId> finals;  // sorted, unique
  std::string provenance;       // opaque JSON text, empty if none

  StateId next(StateId q, SymbolId a) const { return table[q * inputs.size() + a]; }

  StateId run_word(StateId q, const Word& w) const {
    for (SymbolId a : w) q = next(q, a);
    return q;
  }

  bool is_final(StateId q) const {
    for (StateId f : finals)
      if (f == q) return true;
    return false;
  }

  std::optional<StateId> find_state(std::string_view n) const { return detail::index_of(states, n); }
  std::optional<SymbolId> find_input(std::string_view n) const { return detail::index_of(inputs, n); }

  static Dfa make(std::vector<std::string> states, std::vector<std::string> inputs,
                  const std::vector<std::array<std::string, 3>>& triples,
                  std::vector<std::string> finals = {},
                  std::optional<std::string> initial = std::nullopt);
};

/// As Dfa, but entries may be kNoState (undefined transition).
struct PartialDfa {
  std::vector<std::string> states;
  std::vector<std::string> inputs;
  std::vector<StateId> table;
  std::optional<StateId> initial;
  std::vector<StateId> finals;
  std::string provenance;

  StateId next(StateId q, SymbolId a) const { return table[q * inputs.size() + a]; }
  bool defined(StateId q, SymbolId a) const { return next(q, a) != kNoState; }
  bool total() const {
    for (StateId t : table)
      if (t == kNoState) return false;
    return true;
  }
  std::optional<StateId> find_state(std::string_view n) const { return detail::index_of(states, n); }
  std::optional<SymbolId> find_input(std::string_view n) const { return detail::index_of(inputs, n); }

  Dfa to_total_dfa() const {
    if (!total()) throw std::logic_error("to_total_dfa: table has undefined entries");
    return Dfa{states, inputs, table, initial, finals, provenance};
  }
};

struct PdaRule {
  StateId to = kNoState;
  StackString push;  // replaces the consumed top symbol
};

/// Real-time deterministic push-down automaton. The transition table is
/// total over (state, input, stack symbol); there are no epsilon moves.
struct Dpda {
  std::vector<std::string> states;
  std::vector<std::string> inputs;
  std::vector<std::string> stack_syms;  // stack_syms[0] is the bottom symbol
  std::vector<PdaRule> table;           // states * inputs * stack_syms
  std::optional<StateId> initial;
  std::vector<StateId> finals;
  std::string provenance;

  const PdaRule& rule(StateId q, SymbolId a, StackSymId g) const {
    return table[(q * inputs.size() + a) * stack_syms.size() + g];
  }
  PdaRule& rule_mut(StateId q, SymbolId a, StackSymId g) {
    return table[(q * inputs.size() + a) * stack_syms.size() + g];
  }
  bool is_final(StateId q) const {
    for (StateId f : finals)
      if (f == q) return true;
    return false;
  }
  std::optional<StateId> find_state(std::string_view n) const { return detail::index_of(states, n); }
  std::optional<SymbolId> find_input(std::string_view n) const { return detail::index_of(inputs, n); }
  std::optional<StackSymId> find_stack_sym(std::string_view n) const {
    auto i = detail::index_of(stack_syms, n);
    if (!i) return std::nullopt;
    return StackSymId(*i);
  }

  struct RuleSpec {
    std::string from, input, stack, to;
    std::vector<std::string> push;
  };
  static Dpda make(std::vector<std::string> states, std::vector<std::string> inputs,
                   std::vector<std::string> stack_syms, const std::vector<RuleSpec>& rules,
                   std::vector<std::string> finals = {},
                   std::optional<std::string> initial = std::nullopt);
};

/// Counter automaton: a Dpda whose non-bottom stack alphabet is one symbol.
struct Dca : Dpda {};

/// Partially blind counter automaton: a Dca whose transitions perform the
/// same action on both stack symbols (pop both, or keep the read symbol and
/// push the same suffix), so the counter is never explicitly tested; a pop
/// on the empty counter blocks the run.
struct Dpbca : Dca {};

/// Blind counter automaton over an integer counter: deltas in {-1,0,+1},
/// the counter may go negative and never influences the run.
struct Dbca {
  struct Move {
    StateId to = kNoState;
    int delta = 0;
  };
  std::vector<std::string> states;
  std::vector<std::string> inputs;
  std::vector<Move> table;  // states * inputs
  std::optional<StateId> initial;
  std::vector<StateId> finals;
  std::string provenance;

  const Move& move(StateId q, SymbolId a) const { return table[q * inputs.size() + a]; }
  std::optional<StateId> find_state(std::string_view n) const { return detail::index_of(states, n); }
  std::optional<SymbolId> find_input(std::string_view n) const { return detail::index_of(inputs, n); }
};

/// Total sequential transducer: every input letter yields one target state
/// and an output word (possibly empty) over the output alphabet.
struct SequentialTransducer {
  struct Move {
    StateId to = kNoState;
    std::string out;  // byte string of output-symbol ids
  };
  std::vector<std::string> states;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Move> table;  // states * inputs
  std::optional<StateId> initial;
  std::vector<StateId> finals;
  std::string provenance;

  const Move& move(StateId q, SymbolId a) const { return table[q * inputs.size() + a]; }
  std::optional<StateId> find_state(std::string_view n) const { return detail::index_of(states, n); }
  std::optional<SymbolId> find_input(std::string_view n) const { return detail::index_of(inputs, n); }
  std::optional<SymbolId> find_output(std::string_view n) const { return detail::index_of(outputs, n); }

  struct MoveSpec {
    std::string from, input, to;
    std::vector<std::string> out;
  };
  static SequentialTransducer make(std::vector<std::string> states, std::vector<std::string> inputs,
                                   std::vector<std::string> outputs,
                                   const std::vector<MoveSpec>& moves,
                                   std::vector<std::string> finals = {},
                                   std::optional<std::string> initial = std::nullopt);
};

// ---------------------------------------------------------------------------
// Configurations, steps, runs
// ---------------------------------------------------------------------------

struct Configuration {
  StateId state = kNoState;
  StackString stack;

  bool operator==(const Configuration&) const = default;
};

/// One application of the step rule: the top symbol is consumed and replaced
/// by the push string of the matching rule. Returns nullopt (STUCK) when the
/// stack is already empty, i.e. the bottom symbol was popped earlier.
inline std::optional<Configuration> step(const Dpda& m, const Configuration& c, SymbolId a) {
  if (c.stack.empty()) return std::nullopt;
  const PdaRule& r = m.rule(c.state, a, StackSymId(static_cast<unsigned char>(c.stack.back())));
  Configuration next;
  next.state = r.to;
  next.stack.reserve(c.stack.size() - 1 + r.push.size());
  next.stack.assign(c.stack, 0, c.stack.size() - 1);
  next.stack += r.push;
  return next;
}

struct RunTrace {
  StateId start = kNoState;
  Word word;
  std::vector<Configuration> configs;    // length |word|+1 unless stuck earlier
  std::optional<std::size_t> stuck_at;   // index into word of the letter that could not fire

  bool stuck() const { return stuck_at.has_value(); }
  const Configuration& last() const { return configs.back(); }
};

/// The run induced by `word` from `start`, beginning on the bottom-only stack.
inline RunTrace run(const Dpda& m, StateId start, const Word& word) {
  RunTrace t;
  t.start = start;
  t.word = word;
  t.configs.reserve(word.size() + 1);
  t.configs.push_back(Configuration{start, bottom_only_stack()});
  for (std::size_t i = 0; i < word.size(); ++i) {
    auto next = step(m, t.configs.back(), word[i]);
    if (!next) {
      t.stuck_at = i;
      break;
    }
    t.configs.push_back(std::move(*next));
  }
  return t;
}

/// Incremental stroke accounting over stack-height deltas. Height-preserving
/// steps extend the current stroke; a stroke begins exactly when the delta
/// sign contradicts the current direction. A trace without steps is one
/// (trivially flat) stroke.
struct StrokeTracker {
  int direction = 0;  // 0 undetermined, +1 upstroke, -1 downstroke
  int strokes = 1;

  void feed(long delta) {
    if (delta > 0) {
      if (direction < 0) ++strokes;
      direction = +1;
    } else if (delta < 0) {
      if (direction > 0) ++strokes;
      direction = -1;
    }
  }
  int turns() const { return strokes - 1; }
  std::uint8_t phase_byte() const {
    return std::uint8_t((direction + 1) | (strokes << 2));
  }
};

struct StrokeDecomposition {
  int strokes = 1;
  int turns = 0;
};

/// Minimal stroke count of a non-stuck trace, and its turn count.
inline StrokeDecomposition stroke_decomposition(const RunTrace& t) {
  if (t.stuck()) throw std::invalid_argument("stroke_decomposition: trace is stuck");
  StrokeTracker s;
  for (std::size_t i = 1; i < t.configs.size(); ++i)
    s.feed(long(t.configs[i].stack.size()) - long(t.configs[i - 1].stack.size()));
  return StrokeDecomposition{s.strokes, s.turns()};
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class MachineKind { Dfa, PartialDfa, Dpda, Dca, Dpbca, Dbca, Transducer };

inline const char* to_string(MachineKind k) {
  switch (k) {
    case MachineKind::Dfa: return "dfa";
    case MachineKind::PartialDfa: return "partial-dfa";
    case MachineKind::Dpda: return "dpda";
    case MachineKind::Dca: return "dca";
    case MachineKind::Dpbca: return "dpbca";
    case MachineKind::Dbca: return "dbca";
    case MachineKind::Transducer: return "transducer";
  }
  return "?";
}

inline std::optional<MachineKind> machine_kind_from_string(std::string_view s) {
  if (s == "dfa") return MachineKind::Dfa;
  if (s == "partial-dfa") return MachineKind::PartialDfa;
  if (s == "dpda") return MachineKind::Dpda;
  if (s == "dca") return MachineKind::Dca;
  if (s == "dpbca") return MachineKind::Dpbca;
  if (s == "dbca") return MachineKind::Dbca;
  if (s == "transducer") return MachineKind::Transducer;
  return std::nullopt;
}

/// True when a machine certified as `have` also satisfies the invariants of
/// the claimed kind. Comparable only within one shape family.
inline bool kind_satisfies(MachineKind have, MachineKind claimed) {
  if (have == claimed) return true;
  if (claimed == MachineKind::PartialDfa) return have == MachineKind::Dfa;
  if (claimed == MachineKind::Dpda) return have == MachineKind::Dca || have == MachineKind::Dpbca;
  if (claimed == MachineKind::Dca) return have == MachineKind::Dpbca;
  return false;
}

/// Parsed but not yet certified machine description, one transition record
/// per row; which optional fields apply depends on the claimed kind.
struct RawMachine {
  MachineKind claimed = MachineKind::Dfa;
  std::vector<std::string> states;
  std::vector<std::string> input_alphabet;
  std::vector<std::string> stack_alphabet;   // stack kinds only
  std::vector<std::string> output_alphabet;  // transducer only
  std::optional<std::string> initial;
  std::vector<std::string> finals;

  struct Transition {
    std::string from;
    std::string input;
    std::string stack;              // stack kinds
    std::string to;
    std::vector<std::string> push;  // stack kinds
    std::optional<int> delta;       // dbca
    std::vector<std::string> output;  // transducer
  };
  std::vector<Transition> transitions;
  std::string provenance;
};

using AnyMachine =
    std::variant<Dfa, PartialDfa, Dpda, Dca, Dpbca, Dbca, SequentialTransducer>;

struct CertifiedMachine {
  MachineKind kind = MachineKind::Dfa;
  AnyMachine value;

  const Dpda& as_dpda() const {
    switch (kind) {
      case MachineKind::Dpda: return std::get<Dpda>(value);
      case MachineKind::Dca: return std::get<Dca>(value);
      case MachineKind::Dpbca: return std::get<Dpbca>(value);
      default: throw std::logic_error("as_dpda: not a push-down machine");
    }
  }
};

struct ValidationResult {
  std::optional<CertifiedMachine> machine;  // strongest kind that holds, if runnable
  MachineKind certified = MachineKind::Dfa; // meaningful when machine is set
  std::vector<std::string> violations;

  bool ok_for_claim(MachineKind claimed) const {
    return machine.has_value() && kind_satisfies(certified, claimed);
  }
};

namespace detail {

inline bool counter_shaped(const Dpda& m) { return m.stack_syms.size() == 2; }

inline bool rule_is_blind_pair(const Dpda& m, StateId q, SymbolId a, std::string* why) {
  const PdaRule& on_bot = m.rule(q, a, kBottom);
  const PdaRule& on_one = m.rule(q, a, StackSymId(1));
  if (on_bot.to != on_one.to) {
    if (why) *why = "targets differ between stack symbols";
    return false;
  }
  if (on_bot.push.empty() && on_one.push.empty()) return true;  // both pop
  // Both keep the read symbol and push the same suffix.
  if (on_bot.push.empty() || on_one.push.empty()) {
    if (why) *why = "one stack case pops while the other does not";
    return false;
  }
  if (StackSymId(static_cast<unsigned char>(on_bot.push[0])) != kBottom ||
      StackSymId(static_cast<unsigned char>(on_one.push[0])) != StackSymId(1)) {
    if (why) *why = "push does not keep the read stack symbol as prefix";
    return false;
  }
  if (on_bot.push.substr(1) != on_one.push.substr(1)) {
    if (why) *why = "pushed suffixes differ between stack symbols";
    return false;
  }
  return true;
}

inline bool is_partially_blind(const Dpda& m, std::vector<std::string>* violations = nullptr) {
  if (!counter_shaped(m)) {
    if (violations) violations->push_back("blindness requires a single non-bottom stack symbol");
    return false;
  }
  bool ok = true;
  for (StateId q = 0; q < m.states.size(); ++q)
    for (SymbolId a = 0; a < m.inputs.size(); ++a) {
      std::string why;
      if (!rule_is_blind_pair(m, q, a, &why)) {
        ok = false;
        if (violations)
          violations->push_back("blindness violated at (" + m.states[q] + ", " + m.inputs[a] +
                                "): " + why);
        else
          return false;
      }
    }
  return ok;
}

}  // namespace detail

/// Certify a machine description: checks declaredness, determinism, totality
/// and the stack-discipline invariants, and reports the strongest kind the
/// description satisfies together with every violation found.
ValidationResult validate(const RawMachine& raw);

// ---------------------------------------------------------------------------
// Formatting helpers
// ---------------------------------------------------------------------------

inline std::string symbol_display(const std::string& name) {
  return name == kBottomName ? std::string("⊥") : name;
}

inline std::string stack_to_string(const Dpda& m, const StackString& s) {
  std::string out;
  for (char c : s) {
    if (!out.empty()) out += ' ';
    out += symbol_display(m.stack_syms[StackSymId(static_cast<unsigned char>(c))]);
  }
  if (out.empty()) out = "(empty)";
  return out;
}

inline std::string word_to_string(const std::vector<std::string>& names, const Word& w) {
  std::string out;
  for (SymbolId a : w) {
    if (!out.empty()) out += ' ';
    out += names[a];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inline implementations
// ---------------------------------------------------------------------------

inline Dfa Dfa::make(std::vector<std::string> states, std::vector<std::string> inputs,
                     const std::vector<std::array<std::string, 3>>& triples,
                     std::vector<std::string> finals, std::optional<std::string> initial) {
  Dfa m;
  m.states = std::move(states);
  m.inputs = std::move(inputs);
  m.table.assign(m.states.size() * m.inputs.size(), kNoState);
  for (const auto& t : triples) {
    auto q = m.find_state(t[0]);
    auto a = m.find_input(t[1]);
    auto p = m.find_state(t[2]);
    if (!q || !a || !p) throw std::invalid_argument("Dfa::make: undeclared name in transition");
    m.table[*q * m.inputs.size() + *a] = *p;
  }
  for (StateId t : m.table)
    if (t == kNoState) throw std::invalid_argument("Dfa::make: transition table not total");
  for (const auto& f : finals) {
    auto q = m.find_state(f);
    if (!q) throw std::invalid_argument("Dfa::make: undeclared final state");
    m.finals.push_back(*q);
  }
  if (initial) {
    auto q = m.find_state(*initial);
    if (!q) throw std::invalid_argument("Dfa::make: undeclared initial state");
    m.initial = *q;
  }
  return m;
}

inline Dpda Dpda::make(std::vector<std::string> states, std::vector<std::string> inputs,
                       std::vector<std::string> stack_syms, const std::vector<RuleSpec>& rules,
                       std::vector<std::string> finals, std::optional<std::string> initial) {
  Dpda m;
  m.states = std::move(states);
  m.inputs = std::move(inputs);
  m.stack_syms = std::move(stack_syms);
  if (m.stack_syms.empty() || m.stack_syms[0] != kBottomName)
    throw std::invalid_argument("Dpda::make: stack alphabet must start with the bottom symbol");
  m.table.assign(m.states.size() * m.inputs.size() * m.stack_syms.size(), PdaRule{});
  for (const auto& r : rules) {
    auto q = m.find_state(r.from);
    auto a = m.find_input(r.input);
    auto g = m.find_stack_sym(r.stack);
    auto p = m.find_state(r.to);
    if (!q || !a || !g || !p) throw std::invalid_argument("Dpda::make: undeclared name in rule");
    StackString push;
    for (const auto& s : r.push) {
      auto ps = m.find_stack_sym(s);
      if (!ps) throw std::invalid_argument("Dpda::make: undeclared push symbol");
      push += char(*ps);
    }
    m.rule_mut(*q, *a, *g) = PdaRule{*p, std::move(push)};
  }
  for (const auto& r : m.table)
    if (r.to == kNoState) throw std::invalid_argument("Dpda::make: transition table not total");
  for (const auto& f : finals) {
    auto q = m.find_state(f);
    if (!q) throw std::invalid_argument("Dpda::make: undeclared final state");
    m.finals.push_back(*q);
  }
  if (initial) {
    auto q = m.find_state(*initial);
    if (!q) throw std::invalid_argument("Dpda::make: undeclared initial state");
    m.initial = *q;
  }
  return m;
}

inline SequentialTransducer SequentialTransducer::make(
    std::vector<std::string> states, std::vector<std::string> inputs,
    std::vector<std::string> outputs, const std::vector<MoveSpec>& moves,
    std::vector<std::string> finals, std::optional<std::string> initial) {
  SequentialTransducer t;
  t.states = std::move(states);
  t.inputs = std::move(inputs);
  t.outputs = std::move(outputs);
  t.table.assign(t.states.size() * t.inputs.size(), Move{});
  for (const auto& mv : moves) {
    auto q = t.find_state(mv.from);
    auto a = t.find_input(mv.input);
    auto p = t.find_state(mv.to);
    if (!q || !a || !p)
      throw std::invalid_argument("SequentialTransducer::make: undeclared name in move");
    std::string out;
    for (const auto& s : mv.out) {
      auto o = t.find_output(s);
      if (!o) throw std::invalid_argument("SequentialTransducer::make: undeclared output symbol");
      out += char(*o);
    }
    t.table[*q * t.inputs.size() + *a] = Move{*p, std::move(out)};
  }
  for (const auto& mv : t.table)
    if (mv.to == kNoState)
      throw std::invalid_argument("SequentialTransducer::make: transition table not total");
  for (const auto& f : finals) {
    auto q = t.find_state(f);
    if (!q) throw std::invalid_argument("SequentialTransducer::make: undeclared final state");
    t.finals.push_back(*q);
  }
  if (initial) {
    auto q = t.find_state(*initial);
    if (!q) throw std::invalid_argument("SequentialTransducer::make: undeclared initial state");
    t.initial = *q;
  }
  return t;
}

inline ValidationResult validate(const RawMachine& raw) {
  ValidationResult res;
  auto complain = [&res](std::string msg) { res.violations.push_back(std::move(msg)); };

  if (raw.states.empty()) complain("machine declares no states");
  if (raw.input_alphabet.empty()) complain("machine declares no input symbols");
  for (std::size_t i = 0; i < raw.states.size(); ++i)
    for (std::size_t j = i + 1; j < raw.states.size(); ++j)
      if (raw.states[i] == raw.states[j]) complain("duplicate state name: " + raw.states[i]);
  auto check_symbols = [&](const std::vector<std::string>& syms, const char* what) {
    for (std::size_t i = 0; i < syms.size(); ++i) {
      if (syms[i].empty()) complain(std::string(what) + " contains an empty name");
      for (char c : syms[i])
        if (c == ' ' || c == '\t' || c == '\n')
          complain(std::string(what) + " name contains whitespace: '" + syms[i] + "'");
      for (std::size_t j = i + 1; j < syms.size(); ++j)
        if (syms[i] == syms[j]) complain("duplicate " + std::string(what) + " name: " + syms[i]);
    }
  };
  check_symbols(raw.input_alphabet, "input symbol");
  check_symbols(raw.stack_alphabet, "stack symbol");
  check_symbols(raw.output_alphabet, "output symbol");

  const bool stack_family = raw.claimed == MachineKind::Dpda || raw.claimed == MachineKind::Dca ||
                            raw.claimed == MachineKind::Dpbca;
  const bool finite_family =
      raw.claimed == MachineKind::Dfa || raw.claimed == MachineKind::PartialDfa;

  auto state_ix = [&](const std::string& n) { return detail::index_of(raw.states, n); };
  auto input_ix = [&](const std::string& n) { return detail::index_of(raw.input_alphabet, n); };

  std::optional<StateId> initial_ix;
  if (raw.initial) {
    auto i = state_ix(*raw.initial);
    if (!i) complain("initial state not declared: " + *raw.initial);
    initial_ix = i;
  }
  std::vector<StateId> finals_ix;
  for (const auto& f : raw.finals) {
    auto i = state_ix(f);
    if (!i)
      complain("final state not declared: " + f);
    else
      finals_ix.push_back(*i);
  }

  if (!res.violations.empty() && (raw.states.empty() || raw.input_alphabet.empty())) return res;

  const std::size_t n_states = raw.states.size();
  const std::size_t n_inputs = raw.input_alphabet.size();

  if (finite_family) {
    std::vector<StateId> table(n_states * n_inputs, kNoState);
    std::vector<bool> seen(table.size(), false);
    for (std::size_t k = 0; k < raw.transitions.size(); ++k) {
      const auto& t = raw.transitions[k];
      auto q = state_ix(t.from), p = state_ix(t.to);
      auto a = input_ix(t.input);
      std::string where = "transition #" + std::to_string(k + 1);
      if (!q) complain(where + ": undeclared state '" + t.from + "'");
      if (!p) complain(where + ": undeclared state '" + t.to + "'");
      if (!a) complain(where + ": undeclared input '" + t.input + "'");
      if (!q || !p || !a) continue;
      std::size_t ix = *q * n_inputs + *a;
      if (seen[ix])
        complain(where + ": duplicate transition for (" + t.from + ", " + t.input + ")");
      seen[ix] = true;
      table[ix] = *p;
    }
    bool total = true;
    for (std::size_t q = 0; q < n_states; ++q)
      for (std::size_t a = 0; a < n_inputs; ++a)
        if (table[q * n_inputs + a] == kNoState) {
          total = false;
          if (raw.claimed == MachineKind::Dfa)
            complain("transition undefined for (" + raw.states[q] + ", " + raw.input_alphabet[a] +
                     ")");
        }
    if (!res.violations.empty() && total == false && raw.claimed == MachineKind::PartialDfa)
      return res;
    if (total) {
      Dfa m{raw.states, raw.input_alphabet, table, initial_ix, finals_ix, raw.provenance};
      res.certified = MachineKind::Dfa;
      res.machine = CertifiedMachine{MachineKind::Dfa, std::move(m)};
    } else {
      PartialDfa m{raw.states, raw.input_alphabet, table, initial_ix, finals_ix, raw.provenance};
      res.certified = MachineKind::PartialDfa;
      res.machine = CertifiedMachine{MachineKind::PartialDfa, std::move(m)};
    }
    // Undeclared-name or duplicate diagnostics invalidate the build.
    for (const auto& v : res.violations)
      if (v.find("undeclared") != std::string::npos || v.find("duplicate") != std::string::npos) {
        res.machine.reset();
        break;
      }
    return res;
  }

  if (stack_family) {
    if (raw.stack_alphabet.empty() || raw.stack_alphabet[0] != kBottomName)
      complain(std::string("stack alphabet must declare '") + kBottomName +
               "' as its first symbol");
    if (raw.stack_alphabet.size() > 255) complain("stack alphabet too large (max 255 symbols)");
    if (!res.violations.empty() &&
        (raw.stack_alphabet.empty() || raw.stack_alphabet[0] != kBottomName))
      return res;
    const std::size_t n_stack = raw.stack_alphabet.size();
    auto stack_ix = [&](const std::string& n) { return detail::index_of(raw.stack_alphabet, n); };

    std::vector<PdaRule> table(n_states * n_inputs * n_stack, PdaRule{});
    std::vector<bool> seen(table.size(), false);
    bool hard_error = false;
    for (std::size_t k = 0; k < raw.transitions.size(); ++k) {
      const auto& t = raw.transitions[k];
      std::string where = "transition #" + std::to_string(k + 1);
      auto q = state_ix(t.from), p = state_ix(t.to);
      auto a = input_ix(t.input);
      auto g = stack_ix(t.stack);
      if (!q) complain(where + ": undeclared state '" + t.from + "'");
      if (!p) complain(where + ": undeclared state '" + t.to + "'");
      if (!a) complain(where + ": undeclared input '" + t.input + "'");
      if (!g) complain(where + ": undeclared stack symbol '" + t.stack + "'");
      if (!q || !p || !a || !g) {
        hard_error = true;
        continue;
      }
      StackString push;
      bool push_ok = true;
      for (const auto& s : t.push) {
        auto ps = stack_ix(s);
        if (!ps) {
          complain(where + ": undeclared push symbol '" + s + "'");
          push_ok = false;
          break;
        }
        push += char(StackSymId(*ps));
      }
      if (!push_ok) {
        hard_error = true;
        continue;
      }
      // Bottom discipline: the bottom symbol may appear in a push string only
      // as its first symbol, and only when the read symbol was the bottom.
      for (std::size_t i = 0; i < push.size(); ++i) {
        if (StackSymId(static_cast<unsigned char>(push[i])) == kBottom &&
            (i != 0 || StackSymId(*g) != kBottom)) {
          complain(where + ": bottom symbol in push string is not the prefix of a bottom-reading "
                           "rule (bottom not prefix / read symbol not bottom)");
          hard_error = true;
          break;
        }
      }
      std::size_t ix = (*q * n_inputs + *a) * n_stack + StackSymId(*g);
      if (seen[ix]) {
        complain(where + ": duplicate transition for (" + t.from + ", " + t.input + ", " +
                 t.stack + ")");
        hard_error = true;
      }
      seen[ix] = true;
      table[ix] = PdaRule{*p, std::move(push)};
    }
    for (std::size_t ix = 0; ix < table.size(); ++ix)
      if (!seen[ix]) {
        std::size_t g = ix % n_stack;
        std::size_t qa = ix / n_stack;
        complain("transition undefined for (" + raw.states[qa / n_inputs] + ", " +
                 raw.input_alphabet[qa % n_inputs] + ", " + raw.stack_alphabet[g] + ")");
        hard_error = true;
      }
    if (hard_error) return res;

    Dpda base{raw.states,  raw.input_alphabet, raw.stack_alphabet, std::move(table),
              initial_ix, finals_ix,          raw.provenance};
    MachineKind strongest = MachineKind::Dpda;
    if (detail::counter_shaped(base)) {
      strongest = MachineKind::Dca;
      std::vector<std::string> blind_violations;
      if (detail::is_partially_blind(base, &blind_violations)) {
        strongest = MachineKind::Dpbca;
      } else if (raw.claimed == MachineKind::Dpbca) {
        for (auto& v : blind_violations) res.violations.push_back(std::move(v));
      }
    } else if (raw.claimed == MachineKind::Dca || raw.claimed == MachineKind::Dpbca) {
      complain("counter automaton requires exactly one non-bottom stack symbol, found " +
               std::to_string(raw.stack_alphabet.size() - 1));
    }
    res.certified = strongest;
    if (strongest == MachineKind::Dpbca)
      res.machine = CertifiedMachine{strongest, Dpbca{{std::move(base)}}};
    else if (strongest == MachineKind::Dca)
      res.machine = CertifiedMachine{strongest, Dca{std::move(base)}};
    else
      res.machine = CertifiedMachine{strongest, std::move(base)};
    return res;
  }

  if (raw.claimed == MachineKind::Dbca) {
    std::vector<Dbca::Move> table(n_states * n_inputs, Dbca::Move{});
    std::vector<bool> seen(table.size(), false);
    bool hard_error = false;
    for (std::size_t k = 0; k < raw.transitions.size(); ++k) {
      const auto& t = raw.transitions[k];
      std::string where = "transition #" + std::to_string(k + 1);
      auto q = state_ix(t.from), p = state_ix(t.to);
      auto a = input_ix(t.input);
      if (!q) complain(where + ": undeclared state '" + t.from + "'");
      if (!p) complain(where + ": undeclared state '" + t.to + "'");
      if (!a) complain(where + ": undeclared input '" + t.input + "'");
      if (!t.delta || *t.delta < -1 || *t.delta > 1)
        complain(where + ": counter delta must be -1, 0 or +1");
      if (!q || !p || !a || !t.delta || *t.delta < -1 || *t.delta > 1) {
        hard_error = true;
        continue;
      }
      std::size_t ix = *q * n_inputs + *a;
      if (seen[ix]) {
        complain(where + ": duplicate transition for (" + t.from + ", " + t.input + ")");
        hard_error = true;
      }
      seen[ix] = true;
      table[ix] = Dbca::Move{*p, *t.delta};
    }
    for (std::size_t ix = 0; ix < table.size(); ++ix)
      if (!seen[ix]) {
        complain("transition undefined for (" + raw.states[ix / n_inputs] + ", " +
                 raw.input_alphabet[ix % n_inputs] + ")");
        hard_error = true;
      }
    if (hard_error) return res;
    Dbca m{raw.states, raw.input_alphabet, std::move(table), initial_ix, finals_ix,
           raw.provenance};
    res.certified = MachineKind::Dbca;
    res.machine = CertifiedMachine{MachineKind::Dbca, std::move(m)};
    return res;
  }

  // Transducer
  if (raw.output_alphabet.empty()) complain("transducer declares no output symbols");
  if (raw.output_alphabet.size() > 255) complain("output alphabet too large (max 255 symbols)");
  auto output_ix = [&](const std::string& n) { return detail::index_of(raw.output_alphabet, n); };
  std::vector<SequentialTransducer::Move> table(n_states * n_inputs);
  std::vector<bool> seen(table.size(), false);
  bool hard_error = raw.output_alphabet.empty();
  for (std::size_t k = 0; k < raw.transitions.size(); ++k) {
    const auto& t = raw.transitions[k];
    std::string where = "transition #" + std::to_string(k + 1);
    auto q = state_ix(t.from), p = state_ix(t.to);
    auto a = input_ix(t.input);
    if (!q) complain(where + ": undeclared state '" + t.from + "'");
    if (!p) complain(where + ": undeclared state '" + t.to + "'");
    if (!a) complain(where + ": undeclared input '" + t.input + "'");
    if (!q || !p || !a) {
      hard_error = true;
      continue;
    }
    std::string out;
    bool out_ok = true;
    for (const auto& s : t.output) {
      auto o = output_ix(s);
      if (!o) {
        complain(where + ": undeclared output symbol '" + s + "'");
        out_ok = false;
        break;
      }
      out += char(*o);
    }
    if (!out_ok) {
      hard_error = true;
      continue;
    }
    std::size_t ix = *q * n_inputs + *a;
    if (seen[ix]) {
      complain(where + ": duplicate transition for (" + t.from + ", " + t.input + ")");
      hard_error = true;
    }
    seen[ix] = true;
    table[ix] = SequentialTransducer::Move{*p, std::move(out)};
  }
  for (std::size_t ix = 0; ix < table.size(); ++ix)
    if (!seen[ix]) {
      complain("transition undefined for (" + raw.states[ix / n_inputs] + ", " +
               raw.input_alphabet[ix % n_inputs] + ")");
      hard_error = true;
    }
  if (hard_error) return res;
  SequentialTransducer m{raw.states,  raw.input_alphabet, raw.output_alphabet,
                         std::move(table), initial_ix,    finals_ix,
                         raw.provenance};
  res.certified = MachineKind::Transducer;
  res.machine = CertifiedMachine{MachineKind::Transducer, std::move(m)};
  return res;
}

}  // namespace stacksync

#endif  // STACKSYNC_MACHINE_HPP
