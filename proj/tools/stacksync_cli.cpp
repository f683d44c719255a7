// Command-line front end: validating, simulating, checking and searching
// synchronizing words for the machine kinds of the library, plus the
// reduction generators and brute-force oracles.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stacksync/stacksync.hpp"

namespace {

constexpr int kExitFound = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNo = 3;
constexpr int kExitExhausted = 4;
constexpr int kExitRefused = 5;

using namespace stacksync;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return bool(out);
}

struct Loaded {
  CertifiedMachine machine;
  MachineKind claimed;
};

int load_machine(const std::string& path, std::optional<Loaded>& out) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitInputError;
  }
  ParseResult res = parse_machine(*text);
  if (!res.ok()) {
    std::cerr << "error: " << path << " is not a valid machine file\n";
    for (const auto& d : res.diagnostics) std::cerr << "  " << d << "\n";
    return kExitInputError;
  }
  out = Loaded{std::move(*res.machine), *res.claimed};
  return 0;
}

const std::vector<std::string>& input_names(const CertifiedMachine& cm) {
  switch (cm.kind) {
    case MachineKind::Dfa: return std::get<Dfa>(cm.value).inputs;
    case MachineKind::PartialDfa: return std::get<PartialDfa>(cm.value).inputs;
    case MachineKind::Dbca: return std::get<Dbca>(cm.value).inputs;
    case MachineKind::Transducer: return std::get<SequentialTransducer>(cm.value).inputs;
    default: return cm.as_dpda().inputs;
  }
}

const std::vector<std::string>& state_names(const CertifiedMachine& cm) {
  switch (cm.kind) {
    case MachineKind::Dfa: return std::get<Dfa>(cm.value).states;
    case MachineKind::PartialDfa: return std::get<PartialDfa>(cm.value).states;
    case MachineKind::Dbca: return std::get<Dbca>(cm.value).states;
    case MachineKind::Transducer: return std::get<SequentialTransducer>(cm.value).states;
    default: return cm.as_dpda().states;
  }
}

bool is_stack_kind(MachineKind k) {
  return k == MachineKind::Dpda || k == MachineKind::Dca || k == MachineKind::Dpbca;
}

int parse_word_or_fail(const CertifiedMachine& cm, const std::string& text, Word& out) {
  std::string err;
  auto w = parse_word_text(input_names(cm), text, &err);
  if (!w) {
    std::cerr << "error: " << err << "\n";
    return kExitInputError;
  }
  out = std::move(*w);
  return 0;
}

std::optional<StackModel> parse_model(const std::string& text) {
  return stack_model_from_string(text);
}

std::size_t default_max_nodes() {
  if (const char* env = std::getenv("STACKSYNC_MAX_NODES")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return std::size_t(v);
  }
  return 100000;
}

void print_word(const char* label, const std::vector<std::string>& names, const Word& w) {
  std::cout << label << (w.empty() ? "(empty word)" : word_to_string(names, w)) << "\n";
}

int emit_witness(const Dpda& m, const SyncWitness& w, const std::string& out_path) {
  print_word("witness: ", m.inputs, w.word);
  std::cout << "synchronizing state: " << m.states[w.final_configs[0].state] << "\n";
  if (!out_path.empty() &&
      !write_file(out_path, witness_to_json(m, w).dump(2) + "\n")) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitInputError;
  }
  return kExitFound;
}

void print_stats(const SearchStats& s) {
  std::cout << "exhausted: nodes_stored=" << s.nodes_stored << " depth_reached="
            << s.depth_reached << (s.node_cap_hit ? " (node cap hit)" : "") << "\n";
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitInputError;
  }
  ParseResult res = parse_machine(*text);
  if (!res.diagnostics.empty())
    for (const auto& d : res.diagnostics) std::cout << "violation: " << d << "\n";
  if (!res.ok()) {
    std::cout << "invalid\n";
    return kExitInputError;
  }
  std::cout << "certified kind: " << to_string(res.certified) << "\n";
  return 0;
}

int cmd_simulate(const std::string& path, const std::string& from, const std::string& word_text) {
  std::optional<Loaded> loaded;
  if (int rc = load_machine(path, loaded)) return rc;
  const CertifiedMachine& cm = loaded->machine;
  Word w;
  if (int rc = parse_word_or_fail(cm, word_text, w)) return rc;
  auto q0 = detail::index_of(state_names(cm), from);
  if (!q0) {
    std::cerr << "error: unknown state '" << from << "'\n";
    return kExitInputError;
  }
  if (is_stack_kind(cm.kind)) {
    const Dpda& m = cm.as_dpda();
    RunTrace t = run(m, *q0, w);
    for (std::size_t i = 0; i < t.configs.size(); ++i) {
      std::cout << (i ? m.inputs[w[i - 1]] + " -> " : "start: ") << m.states[t.configs[i].state]
                << "  [" << stack_to_string(m, t.configs[i].stack) << "]\n";
    }
    if (t.stuck()) {
      std::cout << "stuck: letter " << (*t.stuck_at + 1) << " ("
                << m.inputs[w[*t.stuck_at]] << ") read past the popped bottom symbol\n";
    } else {
      auto sd = stroke_decomposition(t);
      std::cout << "strokes: " << sd.strokes << ", turns: " << sd.turns << "\n";
    }
    return 0;
  }
  if (cm.kind == MachineKind::Dfa) {
    const Dfa& m = std::get<Dfa>(cm.value);
    StateId q = *q0;
    std::cout << "start: " << m.states[q] << "\n";
    for (SymbolId a : w) {
      q = m.next(q, a);
      std::cout << m.inputs[a] << " -> " << m.states[q] << "\n";
    }
    return 0;
  }
  if (cm.kind == MachineKind::PartialDfa) {
    const PartialDfa& m = std::get<PartialDfa>(cm.value);
    StateId q = *q0;
    std::cout << "start: " << m.states[q] << "\n";
    for (SymbolId a : w) {
      if (!m.defined(q, a)) {
        std::cout << m.inputs[a] << " -> undefined\n";
        return 0;
      }
      q = m.next(q, a);
      std::cout << m.inputs[a] << " -> " << m.states[q] << "\n";
    }
    return 0;
  }
  if (cm.kind == MachineKind::Dbca) {
    const Dbca& m = std::get<Dbca>(cm.value);
    StateId q = *q0;
    long long c = 0;
    std::cout << "start: " << m.states[q] << "  counter=0\n";
    for (SymbolId a : w) {
      const auto& mv = m.move(q, a);
      q = mv.to;
      c += mv.delta;
      std::cout << m.inputs[a] << " -> " << m.states[q] << "  counter=" << c << "\n";
    }
    return 0;
  }
  const SequentialTransducer& t = std::get<SequentialTransducer>(cm.value);
  TransducerRun r = run_transducer(t, *q0, w);
  std::cout << "final state: " << t.states[r.state] << "\n";
  std::string out;
  for (char c : r.output) {
    if (!out.empty()) out += ' ';
    out += t.outputs[SymbolId(static_cast<unsigned char>(c))];
  }
  std::cout << "output: " << (out.empty() ? "(empty)" : out) << "\n";
  return 0;
}

int cmd_check_word(const std::string& path, const std::string& word_text,
                   const std::string& model_text, std::optional<int> turns,
                   const std::string& out_path) {
  std::optional<Loaded> loaded;
  if (int rc = load_machine(path, loaded)) return rc;
  const CertifiedMachine& cm = loaded->machine;
  Word w;
  if (int rc = parse_word_or_fail(cm, word_text, w)) return rc;

  if (is_stack_kind(cm.kind)) {
    auto model = parse_model(model_text);
    if (!model) {
      std::cerr << "error: --model must be one of empty|same|arbitrary\n";
      return kExitInputError;
    }
    const Dpda& m = cm.as_dpda();
    if (turns) {
      auto res = check_n_turn_sync_word(m, w, *turns, *model);
      if (res.ok) return emit_witness(m, *res.witness, out_path);
      if (res.cex)
        std::cout << "not synchronizing: " << res.cex->describe(m.states) << "\n";
      else if (res.turn_bound_violator)
        std::cout << "not synchronizing within " << *turns << " turns: run from "
                  << m.states[*res.turn_bound_violator] << " exceeds the bound\n";
      return kExitNo;
    }
    CheckResult res = check_sync_word(m, w, *model);
    if (check_passed(res)) return emit_witness(m, std::get<SyncWitness>(res), out_path);
    std::cout << "not synchronizing: "
              << std::get<SyncCounterexample>(res).describe(m.states) << "\n";
    return kExitNo;
  }
  if (cm.kind == MachineKind::Dfa) {
    const Dfa& m = std::get<Dfa>(cm.value);
    StateId first = m.run_word(0, w);
    for (StateId q = 1; q < m.states.size(); ++q)
      if (m.run_word(q, w) != first) {
        std::cout << "not synchronizing: runs from " << m.states[0] << " and " << m.states[q]
                  << " end in different states\n";
        return kExitNo;
      }
    std::cout << "synchronizing state: " << m.states[first] << "\n";
    return kExitFound;
  }
  if (cm.kind == MachineKind::Transducer) {
    const SequentialTransducer& t = std::get<SequentialTransducer>(cm.value);
    TraceCheckResult res = check_trace_sync(t, w);
    if (!res.ok) {
      std::cout << "not trace-synchronizing: " << res.cex->describe(t.states) << "\n";
      return kExitNo;
    }
    std::cout << "trace-synchronizing; final state: " << t.states[res.final_state] << "\n";
    if (!out_path.empty()) {
      TraceWitness tw{w, res.final_state, res.output, true};
      if (!write_file(out_path, trace_witness_to_json(t, tw).dump(2) + "\n")) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitInputError;
      }
    }
    return kExitFound;
  }
  std::cerr << "error: check-word does not support machines of kind "
            << to_string(cm.kind) << "\n";
  return kExitInputError;
}

int cmd_find_word(const std::string& path, const std::string& model_text,
                  std::optional<int> turns, std::size_t max_len, std::size_t max_nodes,
                  std::size_t max_residual, const std::string& out_path) {
  std::optional<Loaded> loaded;
  if (int rc = load_machine(path, loaded)) return rc;
  const CertifiedMachine& cm = loaded->machine;

  try {
    if (is_stack_kind(cm.kind)) {
      auto model = parse_model(model_text);
      if (!model) {
        std::cerr << "error: --model must be one of empty|same|arbitrary\n";
        return kExitInputError;
      }
      const Dpda& m = cm.as_dpda();
      SearchOutcome out = sync_search_bounded(m, *model, SearchLimits{max_len, max_nodes}, turns);
      if (found(out)) return emit_witness(m, witness_of(out), out_path);
      print_stats(std::get<Exhausted>(out).stats);
      return kExitExhausted;
    }
    if (cm.kind == MachineKind::Dfa) {
      const Dfa& m = std::get<Dfa>(cm.value);
      auto w = shortest_sync_word(m);
      if (!w) {
        std::cout << "no synchronizing word exists\n";
        return kExitNo;
      }
      print_word("witness: ", m.inputs, *w);
      return kExitFound;
    }
    if (cm.kind == MachineKind::PartialDfa) {
      const PartialDfa& m = std::get<PartialDfa>(cm.value);
      auto w = careful_sync(m);
      if (!w) {
        std::cout << "no careful synchronizing word exists\n";
        return kExitNo;
      }
      print_word("witness: ", m.inputs, *w);
      return kExitFound;
    }
    if (cm.kind == MachineKind::Transducer) {
      const SequentialTransducer& t = std::get<SequentialTransducer>(cm.value);
      TraceSearchOutcome out =
          trace_sync_search_bounded(t, TraceSyncLimits{max_len, max_nodes, max_residual});
      if (trace_found(out)) {
        const TraceWitness& w = std::get<TraceWitness>(out);
        print_word("witness: ", t.inputs, w.word);
        if (!out_path.empty() &&
            !write_file(out_path, trace_witness_to_json(t, w).dump(2) + "\n")) {
          std::cerr << "error: cannot write " << out_path << "\n";
          return kExitInputError;
        }
        return kExitFound;
      }
      print_stats(std::get<Exhausted>(out).stats);
      return kExitExhausted;
    }
  } catch (const budget_error& e) {
    std::cout << "exhausted: " << e.what() << "\n";
    return kExitExhausted;
  }
  std::cerr << "error: find-word does not support machines of kind " << to_string(cm.kind)
            << "\n";
  return kExitInputError;
}

int cmd_decide(const std::string& path, const std::string& model_text, std::optional<int> turns,
               std::size_t max_len, std::size_t max_nodes, int gi_exponent,
               const std::string& out_path) {
  std::optional<Loaded> loaded;
  if (int rc = load_machine(path, loaded)) return rc;
  const CertifiedMachine& cm = loaded->machine;

  auto refuse = [](const std::string& why) {
    std::cout << "refused: " << why << "\n";
    return kExitRefused;
  };

  try {
    if (cm.kind == MachineKind::Dfa) {
      const Dfa& m = std::get<Dfa>(cm.value);
      if (!is_synchronizable_dfa(m)) {
        std::cout << "no: the automaton has a non-mergeable state pair\n";
        return kExitNo;
      }
      auto w = shortest_sync_word(m);
      print_word("witness: ", m.inputs, *w);
      return kExitFound;
    }
    if (cm.kind == MachineKind::PartialDfa) {
      const PartialDfa& m = std::get<PartialDfa>(cm.value);
      auto w = careful_sync(m);
      if (!w) {
        std::cout << "no: careful synchronization is impossible\n";
        return kExitNo;
      }
      print_word("witness: ", m.inputs, *w);
      return kExitFound;
    }
    if (cm.kind == MachineKind::Dbca) {
      auto model = parse_model(model_text);
      if (!model) {
        std::cerr << "error: --model must be one of empty|same|arbitrary\n";
        return kExitInputError;
      }
      if (*model != StackModel::Arbitrary)
        return refuse(
            "no exact procedure is implemented for blind counter automata in this stack model; "
            "the decision reduces to multi-counter machine emptiness, which this tool only "
            "explores boundedly");
      const Dbca& m = std::get<Dbca>(cm.value);
      DbcaDecision d = decide_dbca_arbitrary(m);
      if (!d.yes) {
        std::cout << "no: the underlying automaton is not synchronizable\n";
        return kExitNo;
      }
      print_word("witness: ", m.inputs, *d.witness);
      return kExitFound;
    }
    if (cm.kind == MachineKind::Transducer)
      return refuse(
          "trace-synchronizability of sequential transducers is undecidable; use find-word for "
          "a bounded search");

    // Stack machines.
    auto model = parse_model(model_text);
    if (!model) {
      std::cerr << "error: --model must be one of empty|same|arbitrary\n";
      return kExitInputError;
    }
    const Dpda& m = cm.as_dpda();
    const bool counter = cm.kind == MachineKind::Dca || cm.kind == MachineKind::Dpbca;

    if (!turns) {
      if (cm.kind == MachineKind::Dpbca) {
        const Dpbca& pb = std::get<Dpbca>(cm.value);
        SearchOutcome out = dpbca_sync_bounded(pb, *model, SearchLimits{max_len, max_nodes});
        if (found(out)) return emit_witness(m, witness_of(out), out_path);
        print_stats(std::get<Exhausted>(out).stats);
        std::cout << "note: synchronizability of partially blind counter automata is decidable, "
                     "but the exact procedure needs unbounded multi-counter reachability; this "
                     "run searched the product machine up to the given budget only\n";
        return kExitExhausted;
      }
      return refuse(counter
                        ? "synchronizability of deterministic counter automata with zero tests "
                          "is undecidable; use find-word for a bounded search"
                        : "synchronizability of deterministic push-down automata is undecidable; "
                          "use find-word for a bounded search");
    }

    if (*turns == 0) {
      if (*model == StackModel::Same)
        return refuse(counter
                          ? "no exact procedure is implemented for 0-turn same-stack "
                            "synchronization of counter automata; use find-word --turns 0"
                          : "0-turn same-stack synchronizability of push-down automata is "
                            "undecidable; use find-word --turns 0");
      ZeroTurnDecision d = decide_0turn(m, *model);
      if (!d.yes) {
        std::cout << "no: not 0-turn synchronizable in the " << to_string(*model)
                  << " stack model\n";
        return kExitNo;
      }
      return emit_witness(m, *d.witness, out_path);
    }
    if (*turns == 1) {
      if (!counter)
        return refuse(
            "1-turn synchronizability of general push-down automata is undecidable; use "
            "find-word --turns 1 for a bounded search");
      Dca dca{m};
      OneTurnDecision d =
          decide_1turn_dca(dca, *model, SearchLimits{max_len, max_nodes}, gi_exponent);
      std::cout << "length bound: m=" << d.report.counters
                << " s=" << d.report.transitions.str() << " bound=(m*s)^(" << gi_exponent
                << "*m)=" << d.report.bound.str() << "\n";
      if (found(d.outcome)) return emit_witness(m, witness_of(d.outcome), out_path);
      if (std::holds_alternative<ProvedNo>(d.outcome)) {
        std::cout << "no: " << std::get<ProvedNo>(d.outcome).reason << "\n";
        return kExitNo;
      }
      print_stats(std::get<Exhausted>(d.outcome).stats);
      std::cout << "note: the procedure is exact only when the budget reaches the length "
                   "bound\n";
      return kExitExhausted;
    }
    return refuse("no decision procedure is implemented for turn bound " +
                  std::to_string(*turns));
  } catch (const budget_error& e) {
    std::cout << "exhausted: " << e.what() << "\n";
    return kExitExhausted;
  }
}

std::optional<std::vector<std::string>> split_tiles(const std::string& list) {
  std::vector<std::string> tiles;
  std::string cur;
  for (char c : list) {
    if (c == ',') {
      tiles.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  tiles.push_back(cur);
  return tiles;
}

int save_machine(const CertifiedMachine& cm, const std::string& path) {
  if (!write_file(path, serialize_machine(cm))) {
    std::cerr << "error: cannot write " << path << "\n";
    return kExitInputError;
  }
  std::cout << "wrote " << path << "\n";
  return 0;
}

CertifiedMachine certify_or_die(Dpda m) {
  // Re-certify so the emitted file carries the strongest kind tag.
  RawMachine raw;
  raw.claimed = MachineKind::Dpda;
  raw.states = m.states;
  raw.input_alphabet = m.inputs;
  raw.stack_alphabet = m.stack_syms;
  if (m.initial) raw.initial = m.states[*m.initial];
  for (StateId f : m.finals) raw.finals.push_back(m.states[f]);
  for (StateId q = 0; q < m.states.size(); ++q)
    for (SymbolId a = 0; a < m.inputs.size(); ++a)
      for (std::size_t g = 0; g < m.stack_syms.size(); ++g) {
        const PdaRule& r = m.rule(q, a, StackSymId(g));
        RawMachine::Transition t;
        t.from = m.states[q];
        t.input = m.inputs[a];
        t.stack = m.stack_syms[g];
        t.to = m.states[r.to];
        for (char c : r.push) t.push.push_back(m.stack_syms[StackSymId(static_cast<unsigned char>(c))]);
        raw.transitions.push_back(std::move(t));
      }
  raw.provenance = m.provenance;
  ValidationResult v = validate(raw);
  if (!v.machine) throw std::logic_error("constructed machine failed validation");
  return std::move(*v.machine);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synchronizing words for deterministic stack and counter machines"};
  app.require_subcommand(1);

  std::string file, from, word_text, model_text, out_path, out_a, out_b;
  std::string tiles_a, tiles_b, subset_text;
  std::optional<int> turns;
  std::size_t max_len = 12;
  std::size_t max_nodes = default_max_nodes();
  std::size_t max_residual = 64;
  std::size_t max_indices = 8;
  int gi_exponent = 1;

  auto* validate_cmd = app.add_subcommand("validate", "certify a machine file");
  validate_cmd->add_option("file", file)->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "run a word from one state");
  simulate_cmd->add_option("file", file)->required();
  simulate_cmd->add_option("--from", from, "start state")->required();
  simulate_cmd->add_option("--word", word_text, "input word")->required();

  auto* check_cmd = app.add_subcommand("check-word", "verify a synchronizing word");
  check_cmd->add_option("file", file)->required();
  check_cmd->add_option("--word", word_text)->required();
  check_cmd->add_option("--model", model_text, "empty|same|arbitrary");
  check_cmd->add_option("--turns", turns, "turn bound");
  check_cmd->add_option("--out", out_path, "write the witness file here");

  auto* find_cmd = app.add_subcommand("find-word", "bounded search for a synchronizing word");
  find_cmd->add_option("file", file)->required();
  find_cmd->add_option("--model", model_text, "empty|same|arbitrary");
  find_cmd->add_option("--turns", turns, "restrict to n-turn synchronizing words");
  find_cmd->add_option("--max-len", max_len, "maximum word length");
  find_cmd->add_option("--max-nodes", max_nodes, "node budget");
  find_cmd->add_option("--max-residual", max_residual, "residual cap (transducers)");
  find_cmd->add_option("--out", out_path);

  auto* decide_cmd = app.add_subcommand("decide", "exact decision where one exists");
  decide_cmd->add_option("file", file)->required();
  decide_cmd->add_option("--model", model_text, "empty|same|arbitrary");
  decide_cmd->add_option("--turns", turns, "turn bound (0 or 1)");
  decide_cmd->add_option("--max-len", max_len);
  decide_cmd->add_option("--max-nodes", max_nodes);
  decide_cmd->add_option("--gi-exponent", gi_exponent,
                         "exponent constant of the length bound");
  decide_cmd->add_option("--out", out_path);

  auto* reduce_cmd = app.add_subcommand("reduce", "emit a reduction construction");
  reduce_cmd->require_subcommand(1);
  auto* red_acc = reduce_cmd->add_subcommand("pcp-acceptors", "pair of one-turn acceptors");
  red_acc->add_option("--tiles-a", tiles_a)->required();
  red_acc->add_option("--tiles-b", tiles_b)->required();
  red_acc->add_option("--out-a", out_a)->required();
  red_acc->add_option("--out-b", out_b)->required();
  auto* red_gadget = reduce_cmd->add_subcommand("sync-gadget", "combine two acceptors");
  red_gadget->add_option("machine1", out_a)->required();
  red_gadget->add_option("machine2", out_b)->required();
  red_gadget->add_option("--out", out_path)->required();
  auto* red_same = reduce_cmd->add_subcommand("pcp-0turn-same", "0-turn same-stack machine");
  red_same->add_option("--tiles-a", tiles_a)->required();
  red_same->add_option("--tiles-b", tiles_b)->required();
  red_same->add_option("--out", out_path)->required();
  auto* red_subset = reduce_cmd->add_subcommand("dfa-subset-0turn", "counter machine from a DFA subset instance");
  red_subset->add_option("file", file)->required();
  red_subset->add_option("--subset", subset_text)->required();
  red_subset->add_option("--out", out_path)->required();
  auto* red_trans = reduce_cmd->add_subcommand("pcp-transducer", "trace-synchronization transducer");
  red_trans->add_option("--tiles-a", tiles_a)->required();
  red_trans->add_option("--tiles-b", tiles_b)->required();
  red_trans->add_option("--out", out_path)->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force oracles");
  oracle_cmd->require_subcommand(1);
  auto* oracle_pcp = oracle_cmd->add_subcommand("pcp", "shortest PCP solution");
  oracle_pcp->add_option("--tiles-a", tiles_a)->required();
  oracle_pcp->add_option("--tiles-b", tiles_b)->required();
  oracle_pcp->add_option("--max-indices", max_indices);
  auto* oracle_sync = oracle_cmd->add_subcommand("shortest-sync", "subset-BFS shortest word");
  oracle_sync->add_option("file", file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) return cmd_validate(file);
    if (*simulate_cmd) return cmd_simulate(file, from, word_text);
    if (*check_cmd) return cmd_check_word(file, word_text, model_text, turns, out_path);
    if (*find_cmd)
      return cmd_find_word(file, model_text, turns, max_len, max_nodes, max_residual, out_path);
    if (*decide_cmd)
      return cmd_decide(file, model_text, turns, max_len, max_nodes, gi_exponent, out_path);

    if (*oracle_pcp) {
      auto a = split_tiles(tiles_a), b = split_tiles(tiles_b);
      PcpInstance pcp = PcpInstance::make(*a, *b);
      auto sol = pcp_brute_solve(pcp, max_indices);
      if (!sol) {
        std::cout << "no solution with at most " << max_indices << " indices\n";
        return kExitExhausted;
      }
      std::cout << "solution:";
      for (auto i : *sol) std::cout << " " << i;
      std::cout << "\n";
      return kExitFound;
    }
    if (*oracle_sync) {
      std::optional<Loaded> loaded;
      if (int rc = load_machine(file, loaded)) return rc;
      if (loaded->machine.kind != MachineKind::Dfa) {
        std::cerr << "error: shortest-sync expects a total DFA\n";
        return kExitInputError;
      }
      const Dfa& m = std::get<Dfa>(loaded->machine.value);
      auto w = shortest_sync_word(m);
      if (!w) {
        std::cout << "no synchronizing word exists\n";
        return kExitNo;
      }
      print_word("witness: ", m.inputs, *w);
      return kExitFound;
    }

    if (*red_acc) {
      PcpInstance pcp = PcpInstance::make(*split_tiles(tiles_a), *split_tiles(tiles_b));
      auto [ma, mb] = pcp_to_1turn_acceptors(pcp);
      if (int rc = save_machine(certify_or_die(std::move(ma)), out_a)) return rc;
      return save_machine(certify_or_die(std::move(mb)), out_b);
    }
    if (*red_gadget) {
      std::optional<Loaded> m1, m2;
      if (int rc = load_machine(out_a, m1)) return rc;
      if (int rc = load_machine(out_b, m2)) return rc;
      if (!is_stack_kind(m1->machine.kind) || !is_stack_kind(m2->machine.kind)) {
        std::cerr << "error: sync-gadget expects push-down machine files\n";
        return kExitInputError;
      }
      Dpda g = combine_sync_gadget(m1->machine.as_dpda(), m2->machine.as_dpda());
      return save_machine(certify_or_die(std::move(g)), out_path);
    }
    if (*red_same) {
      PcpInstance pcp = PcpInstance::make(*split_tiles(tiles_a), *split_tiles(tiles_b));
      return save_machine(certify_or_die(pcp_to_0turn_same(pcp)), out_path);
    }
    if (*red_subset) {
      std::optional<Loaded> loaded;
      if (int rc = load_machine(file, loaded)) return rc;
      if (loaded->machine.kind != MachineKind::Dfa) {
        std::cerr << "error: dfa-subset-0turn expects a total DFA\n";
        return kExitInputError;
      }
      const Dfa& dfa = std::get<Dfa>(loaded->machine.value);
      std::vector<StateId> subset;
      auto subset_names = split_tiles(subset_text);
      for (const auto& name : *subset_names) {
        auto q = dfa.find_state(name);
        if (!q) {
          std::cerr << "error: unknown state '" << name << "' in subset\n";
          return kExitInputError;
        }
        subset.push_back(*q);
      }
      Dca m = dfa_subset_to_0turn_dca(dfa, subset);
      return save_machine(certify_or_die(std::move(m)), out_path);
    }
    if (*red_trans) {
      PcpInstance pcp = PcpInstance::make(*split_tiles(tiles_a), *split_tiles(tiles_b));
      SequentialTransducer t = pcp_to_transducer(pcp);
      RawMachine raw;
      raw.claimed = MachineKind::Transducer;
      raw.states = t.states;
      raw.input_alphabet = t.inputs;
      raw.output_alphabet = t.outputs;
      for (StateId q = 0; q < t.states.size(); ++q)
        for (SymbolId a = 0; a < t.inputs.size(); ++a) {
          const auto& mv = t.move(q, a);
          RawMachine::Transition tr;
          tr.from = t.states[q];
          tr.input = t.inputs[a];
          tr.to = t.states[mv.to];
          for (char c : mv.out)
            tr.output.push_back(t.outputs[SymbolId(static_cast<unsigned char>(c))]);
          raw.transitions.push_back(std::move(tr));
        }
      raw.provenance = t.provenance;
      ValidationResult v = validate(raw);
      if (!v.machine) throw std::logic_error("constructed transducer failed validation");
      return save_machine(*v.machine, out_path);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
