#ifndef STACKSYNC_JSON_IO_HPP
#define STACKSYNC_JSON_IO_HPP

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "stacksync/machine.hpp"
#include "stacksync/multicounter.hpp"
#include "stacksync/transducer.hpp"
#include "stacksync/turn_decision.hpp"
#include "stacksync/witness.hpp"

namespace stacksync {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kMachineFormat = "stacksync-machine";
inline constexpr const char* kWitnessFormat = "stacksync-witness";
inline constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------------------
// Machine files
// ---------------------------------------------------------------------------

struct ParseResult {
  std::optional<CertifiedMachine> machine;
  std::optional<MachineKind> claimed;
  MachineKind certified = MachineKind::Dfa;
  std::vector<std::string> diagnostics;

  bool ok() const { return machine.has_value(); }
};

namespace detail {

inline bool read_string_array(const ordered_json& j, const char* field,
                              std::vector<std::string>& out, std::vector<std::string>& diags,
                              bool required) {
  if (!j.contains(field)) {
    if (required) diags.push_back(std::string("$.") + field + ": required array missing");
    return !required;
  }
  if (!j[field].is_array()) {
    diags.push_back(std::string("$.") + field + ": expected an array of strings");
    return false;
  }
  for (const auto& e : j[field]) {
    if (!e.is_string()) {
      diags.push_back(std::string("$.") + field + ": expected an array of strings");
      return false;
    }
    out.push_back(e.get<std::string>());
  }
  return true;
}

}  // namespace detail

/// Parse and certify a machine document. Diagnostics carry the JSON path of
/// the offending field or the validator's violation text.
inline ParseResult parse_machine(const std::string& text) {
  ParseResult res;
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    res.diagnostics.push_back("$: not valid JSON");
    return res;
  }
  if (!j.is_object()) {
    res.diagnostics.push_back("$: expected a JSON object");
    return res;
  }
  if (j.contains("format") && j["format"] != kMachineFormat)
    res.diagnostics.push_back("$.format: expected \"" + std::string(kMachineFormat) + "\"");
  if (j.contains("version") && j["version"] != kFormatVersion)
    res.diagnostics.push_back("$.version: unsupported version");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    res.diagnostics.push_back("$.kind: required string missing");
    return res;
  }
  auto kind = machine_kind_from_string(j["kind"].get<std::string>());
  if (!kind) {
    res.diagnostics.push_back("$.kind: unknown machine kind '" +
                              j["kind"].get<std::string>() + "'");
    return res;
  }
  res.claimed = *kind;

  RawMachine raw;
  raw.claimed = *kind;
  bool shape_ok = true;
  shape_ok &= detail::read_string_array(j, "states", raw.states, res.diagnostics, true);
  shape_ok &=
      detail::read_string_array(j, "input_alphabet", raw.input_alphabet, res.diagnostics, true);
  const bool stack_family = *kind == MachineKind::Dpda || *kind == MachineKind::Dca ||
                            *kind == MachineKind::Dpbca;
  shape_ok &= detail::read_string_array(j, "stack_alphabet", raw.stack_alphabet, res.diagnostics,
                                        stack_family);
  shape_ok &= detail::read_string_array(j, "output_alphabet", raw.output_alphabet,
                                        res.diagnostics, *kind == MachineKind::Transducer);
  if (j.contains("initial")) {
    if (j["initial"].is_string())
      raw.initial = j["initial"].get<std::string>();
    else if (!j["initial"].is_null()) {
      res.diagnostics.push_back("$.initial: expected a string");
      shape_ok = false;
    }
  }
  shape_ok &= detail::read_string_array(j, "finals", raw.finals, res.diagnostics, false);
  if (!j.contains("transitions") || !j["transitions"].is_array()) {
    res.diagnostics.push_back("$.transitions: required array missing");
    return res;
  }
  std::size_t tix = 0;
  for (const auto& tj : j["transitions"]) {
    std::string where = "$.transitions[" + std::to_string(tix++) + "]";
    if (!tj.is_object()) {
      res.diagnostics.push_back(where + ": expected an object");
      shape_ok = false;
      continue;
    }
    RawMachine::Transition t;
    auto need_string = [&](const char* field, std::string& into, bool required) {
      if (!tj.contains(field)) {
        if (required) {
          res.diagnostics.push_back(where + "." + field + ": required string missing");
          shape_ok = false;
        }
        return;
      }
      if (!tj[field].is_string()) {
        res.diagnostics.push_back(where + "." + field + ": expected a string");
        shape_ok = false;
        return;
      }
      into = tj[field].get<std::string>();
    };
    need_string("from", t.from, true);
    need_string("input", t.input, true);
    need_string("to", t.to, true);
    need_string("stack", t.stack, stack_family);
    if (stack_family) {
      if (!tj.contains("push") || !tj["push"].is_array()) {
        res.diagnostics.push_back(where + ".push: required array missing");
        shape_ok = false;
      } else {
        for (const auto& p : tj["push"]) {
          if (!p.is_string()) {
            res.diagnostics.push_back(where + ".push: expected an array of strings");
            shape_ok = false;
            break;
          }
          t.push.push_back(p.get<std::string>());
        }
      }
    }
    if (*kind == MachineKind::Dbca) {
      if (!tj.contains("delta") || !tj["delta"].is_number_integer()) {
        res.diagnostics.push_back(where + ".delta: required integer missing");
        shape_ok = false;
      } else {
        t.delta = tj["delta"].get<int>();
      }
    }
    if (*kind == MachineKind::Transducer) {
      if (!tj.contains("output") || !tj["output"].is_array()) {
        res.diagnostics.push_back(where + ".output: required array missing");
        shape_ok = false;
      } else {
        for (const auto& o : tj["output"]) {
          if (!o.is_string()) {
            res.diagnostics.push_back(where + ".output: expected an array of strings");
            shape_ok = false;
            break;
          }
          t.output.push_back(o.get<std::string>());
        }
      }
    }
    raw.transitions.push_back(std::move(t));
  }
  if (j.contains("provenance")) raw.provenance = j["provenance"].dump();
  if (!shape_ok) return res;

  ValidationResult v = validate(raw);
  for (const auto& viol : v.violations) res.diagnostics.push_back(viol);
  res.certified = v.certified;
  if (!v.machine) return res;
  if (!kind_satisfies(v.certified, *kind)) {
    res.diagnostics.push_back("machine certifies only as '" +
                              std::string(to_string(v.certified)) +
                              "', which does not satisfy the claimed kind '" +
                              std::string(to_string(*kind)) + "'");
    return res;
  }
  res.machine = std::move(v.machine);
  return res;
}

namespace detail {

inline void emit_common_header(ordered_json& j, MachineKind kind) {
  j["format"] = kMachineFormat;
  j["version"] = kFormatVersion;
  j["kind"] = to_string(kind);
}

inline void emit_optional_parts(ordered_json& j, const std::vector<std::string>& states,
                                const std::optional<StateId>& initial,
                                const std::vector<StateId>& finals,
                                const std::string& provenance) {
  if (initial) j["initial"] = states[*initial];
  if (!finals.empty()) {
    ordered_json f = ordered_json::array();
    for (StateId q : finals) f.push_back(states[q]);
    j["finals"] = f;
  }
  if (!provenance.empty()) j["provenance"] = ordered_json::parse(provenance);
}

}  // namespace detail

inline ordered_json machine_to_json(const CertifiedMachine& cm) {
  ordered_json j;
  detail::emit_common_header(j, cm.kind);
  switch (cm.kind) {
    case MachineKind::Dfa:
    case MachineKind::PartialDfa: {
      const auto emit_finite = [&](const auto& m, bool partial) {
        j["states"] = m.states;
        j["input_alphabet"] = m.inputs;
        ordered_json ts = ordered_json::array();
        for (StateId q = 0; q < m.states.size(); ++q)
          for (SymbolId a = 0; a < m.inputs.size(); ++a) {
            StateId to = m.next(q, a);
            if (partial && to == kNoState) continue;
            ts.push_back(ordered_json{
                {"from", m.states[q]}, {"input", m.inputs[a]}, {"to", m.states[to]}});
          }
        j["transitions"] = ts;
        detail::emit_optional_parts(j, m.states, m.initial, m.finals, m.provenance);
      };
      if (cm.kind == MachineKind::Dfa)
        emit_finite(std::get<Dfa>(cm.value), false);
      else
        emit_finite(std::get<PartialDfa>(cm.value), true);
      break;
    }
    case MachineKind::Dpda:
    case MachineKind::Dca:
    case MachineKind::Dpbca: {
      const Dpda& m = cm.as_dpda();
      j["states"] = m.states;
      j["input_alphabet"] = m.inputs;
      j["stack_alphabet"] = m.stack_syms;
      ordered_json ts = ordered_json::array();
      for (StateId q = 0; q < m.states.size(); ++q)
        for (SymbolId a = 0; a < m.inputs.size(); ++a)
          for (std::size_t g = 0; g < m.stack_syms.size(); ++g) {
            const PdaRule& r = m.rule(q, a, StackSymId(g));
            ordered_json push = ordered_json::array();
            for (char c : r.push)
              push.push_back(m.stack_syms[StackSymId(static_cast<unsigned char>(c))]);
            ts.push_back(ordered_json{{"from", m.states[q]},
                                      {"input", m.inputs[a]},
                                      {"stack", m.stack_syms[g]},
                                      {"to", m.states[r.to]},
                                      {"push", push}});
          }
      j["transitions"] = ts;
      detail::emit_optional_parts(j, m.states, m.initial, m.finals, m.provenance);
      break;
    }
    case MachineKind::Dbca: {
      const Dbca& m = std::get<Dbca>(cm.value);
      j["states"] = m.states;
      j["input_alphabet"] = m.inputs;
      ordered_json ts = ordered_json::array();
      for (StateId q = 0; q < m.states.size(); ++q)
        for (SymbolId a = 0; a < m.inputs.size(); ++a) {
          const auto& mv = m.move(q, a);
          ts.push_back(ordered_json{{"from", m.states[q]},
                                    {"input", m.inputs[a]},
                                    {"to", m.states[mv.to]},
                                    {"delta", mv.delta}});
        }
      j["transitions"] = ts;
      detail::emit_optional_parts(j, m.states, m.initial, m.finals, m.provenance);
      break;
    }
    case MachineKind::Transducer: {
      const SequentialTransducer& m = std::get<SequentialTransducer>(cm.value);
      j["states"] = m.states;
      j["input_alphabet"] = m.inputs;
      j["output_alphabet"] = m.outputs;
      ordered_json ts = ordered_json::array();
      for (StateId q = 0; q < m.states.size(); ++q)
        for (SymbolId a = 0; a < m.inputs.size(); ++a) {
          const auto& mv = m.move(q, a);
          ordered_json out = ordered_json::array();
          for (char c : mv.out) out.push_back(m.outputs[SymbolId(static_cast<unsigned char>(c))]);
          ts.push_back(ordered_json{{"from", m.states[q]},
                                    {"input", m.inputs[a]},
                                    {"to", m.states[mv.to]},
                                    {"output", out}});
        }
      j["transitions"] = ts;
      detail::emit_optional_parts(j, m.states, m.initial, m.finals, m.provenance);
      break;
    }
  }
  return j;
}

/// Canonical serialization: declared order everywhere, stable field order,
/// two-space indentation, trailing newline.
inline std::string serialize_machine(const CertifiedMachine& cm) {
  return machine_to_json(cm).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Witness files
// ---------------------------------------------------------------------------

inline ordered_json stats_to_json(const SearchStats& s) {
  ordered_json j;
  j["nodes_stored"] = s.nodes_stored;
  j["nodes_expanded"] = s.nodes_expanded;
  j["depth_reached"] = s.depth_reached;
  j["pruned_stuck"] = s.pruned_stuck;
  j["pruned_turns"] = s.pruned_turns;
  j["pruned_residual_cap"] = s.pruned_residual_cap;
  j["node_cap_hit"] = s.node_cap_hit;
  j["frontier_exhausted"] = s.frontier_exhausted;
  return j;
}

inline ordered_json bound_report_to_json(const BoundReport& r) {
  ordered_json j;
  j["counters"] = r.counters;
  j["transitions"] = r.transitions.str();
  j["exponent_constant"] = r.exponent_constant;
  j["bound"] = r.bound.str();
  j["practical_budget"] = r.practical_budget;
  return j;
}

inline ordered_json witness_to_json(const Dpda& m, const SyncWitness& w) {
  ordered_json j;
  j["format"] = kWitnessFormat;
  j["version"] = kFormatVersion;
  j["verdict"] = "found";
  j["model"] = to_string(w.model);
  ordered_json word = ordered_json::array();
  for (SymbolId a : w.word) word.push_back(m.inputs[a]);
  j["word"] = word;
  if (w.turn_bound) j["turn_bound"] = *w.turn_bound;
  ordered_json runs = ordered_json::array();
  for (StateId q = 0; q < m.states.size(); ++q) {
    ordered_json r;
    r["start"] = m.states[q];
    r["final_state"] = m.states[w.final_configs[q].state];
    ordered_json stack = ordered_json::array();
    for (char c : w.final_configs[q].stack)
      stack.push_back(m.stack_syms[StackSymId(static_cast<unsigned char>(c))]);
    r["final_stack"] = stack;
    r["turns"] = w.turn_counts[q];
    runs.push_back(r);
  }
  j["runs"] = runs;
  j["verified"] = w.verified;
  return j;
}

inline ordered_json trace_witness_to_json(const SequentialTransducer& t, const TraceWitness& w) {
  ordered_json j;
  j["format"] = kWitnessFormat;
  j["version"] = kFormatVersion;
  j["verdict"] = "found";
  ordered_json word = ordered_json::array();
  for (SymbolId a : w.word) word.push_back(t.inputs[a]);
  j["word"] = word;
  j["final_state"] = t.states[w.final_state];
  ordered_json out = ordered_json::array();
  for (char c : w.output) out.push_back(t.outputs[SymbolId(static_cast<unsigned char>(c))]);
  j["output"] = out;
  j["verified"] = w.verified;
  return j;
}

// ---------------------------------------------------------------------------
// Word arguments
// ---------------------------------------------------------------------------

/// Parse a word given as whitespace-separated symbol names; a single token
/// that is not itself a symbol name is split into one-character symbols.
inline std::optional<Word> parse_word_text(const std::vector<std::string>& names,
                                           const std::string& text, std::string* error) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));

  auto lookup = [&names](const std::string& n) { return detail::index_of(names, n); };
  if (tokens.size() == 1 && !lookup(tokens[0])) {
    std::vector<std::string> split;
    for (char c : tokens[0]) split.push_back(std::string(1, c));
    tokens = std::move(split);
  }
  Word w;
  for (const auto& tok : tokens) {
    auto id = lookup(tok);
    if (!id) {
      if (error) *error = "unknown input symbol '" + tok + "'";
      return std::nullopt;
    }
    w.push_back(*id);
  }
  return w;
}

}  // namespace stacksync

#endif  // STACKSYNC_JSON_IO_HPP
