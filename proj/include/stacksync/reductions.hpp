#ifndef STACKSYNC_REDUCTIONS_HPP
#define STACKSYNC_REDUCTIONS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stacksync/machine.hpp"
#include "stacksync/transducer.hpp"

namespace stacksync {

inline constexpr const char* kIdxPrefix = "idx:";
inline constexpr const char* kSyncA = "sync:a";
inline constexpr const char* kSyncB = "sync:b";

/// Post correspondence instance: two equally long lists of nonempty words
/// over {0,1}. Empty tiles are rejected, the chain automata read them one
/// symbol per step.
struct PcpInstance {
  std::vector<std::string> a;
  std::vector<std::string> b;

  std::size_t size() const { return a.size(); }

  static PcpInstance make(std::vector<std::string> a, std::vector<std::string> b) {
    if (a.size() != b.size() || a.empty())
      throw std::invalid_argument("PCP lists must be nonempty and of equal length");
    for (const auto* list : {&a, &b})
      for (const auto& tile : *list) {
        if (tile.empty()) throw std::invalid_argument("PCP tiles must be nonempty");
        for (char c : tile)
          if (c != '0' && c != '1')
            throw std::invalid_argument("PCP tiles must be words over {0,1}");
      }
    return PcpInstance{std::move(a), std::move(b)};
  }
};

/// Shortest solution (lexicographically least among the shortest, 1-based
/// indices) with at most `max_indices` tiles, or nullopt. BFS over the
/// overhang of whichever concatenation is ahead.
inline std::optional<std::vector<std::size_t>> pcp_brute_solve(const PcpInstance& pcp,
                                                               std::size_t max_indices) {
  if (max_indices == 0) throw std::invalid_argument("max_indices must be positive");
  struct Node {
    bool a_ahead;
    std::string over;
    std::uint32_t parent;
    std::uint8_t tile;
    std::uint32_t depth;
  };
  std::vector<Node> nodes{{true, {}, 0, 0, 0}};
  std::map<std::pair<bool, std::string>, bool> seen;
  seen[{true, {}}] = true;

  auto reconstruct = [&nodes](std::uint32_t id) {
    std::vector<std::size_t> seq;
    for (std::uint32_t at = id; at != 0; at = nodes[at].parent)
      seq.push_back(std::size_t(nodes[at].tile) + 1);
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  for (std::uint32_t head = 0; head < nodes.size(); ++head) {
    if (nodes[head].depth >= max_indices) continue;
    for (std::size_t i = 0; i < pcp.size(); ++i) {
      // The ahead side's surplus grows by its tile; the behind side's tile
      // must consume a prefix of it (or overtake).
      std::string ahead = nodes[head].over + (nodes[head].a_ahead ? pcp.a[i] : pcp.b[i]);
      const std::string& behind = nodes[head].a_ahead ? pcp.b[i] : pcp.a[i];
      bool a_ahead;
      std::string over;
      if (ahead.size() >= behind.size()) {
        if (ahead.compare(0, behind.size(), behind) != 0) continue;
        a_ahead = nodes[head].a_ahead;
        over = ahead.substr(behind.size());
      } else {
        if (behind.compare(0, ahead.size(), ahead) != 0) continue;
        a_ahead = !nodes[head].a_ahead;
        over = behind.substr(ahead.size());
      }
      if (over.empty()) {
        nodes.push_back(Node{true, {}, head, std::uint8_t(i), nodes[head].depth + 1});
        return reconstruct(std::uint32_t(nodes.size() - 1));
      }
      if (seen.count({a_ahead, over})) continue;
      seen[{a_ahead, over}] = true;
      nodes.push_back(Node{a_ahead, std::move(over), head, std::uint8_t(i), nodes[head].depth + 1});
    }
  }
  return std::nullopt;
}

namespace detail {

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string pcp_provenance(const char* construction, const PcpInstance& pcp,
                                  const char* note = nullptr) {
  std::string p = "{\"construction\":\"" + std::string(construction) + "\",\"tiles_a\":[";
  for (std::size_t i = 0; i < pcp.a.size(); ++i)
    p += (i ? ",\"" : "\"") + pcp.a[i] + "\"";
  p += "],\"tiles_b\":[";
  for (std::size_t i = 0; i < pcp.b.size(); ++i)
    p += (i ? ",\"" : "\"") + pcp.b[i] + "\"";
  p += "]";
  if (note) p += ",\"note\":\"" + std::string(note) + "\"";
  p += "}";
  return p;
}

/// Two-phase builder: declare all states, then add rules; finish() completes
/// every remaining (state, input, stack) triple with a caller-supplied rule.
class DpdaAssembler {
 public:
  DpdaAssembler(std::vector<std::string> inputs, std::vector<std::string> stack_syms)
      : inputs_(std::move(inputs)), stack_syms_(std::move(stack_syms)) {}

  StateId add_state(const std::string& name) {
    states_.push_back(name);
    return StateId(states_.size() - 1);
  }
  SymbolId input(std::string_view name) const {
    auto i = index_of(inputs_, name);
    if (!i) throw std::logic_error("assembler: unknown input");
    return *i;
  }
  StackSymId stack(std::string_view name) const {
    auto i = index_of(stack_syms_, name);
    if (!i) throw std::logic_error("assembler: unknown stack symbol");
    return StackSymId(*i);
  }
  std::size_t n_inputs() const { return inputs_.size(); }
  std::size_t n_stack() const { return stack_syms_.size(); }
  std::size_t n_states() const { return states_.size(); }

  void set(StateId q, SymbolId a, StackSymId g, StateId to, StackString push) {
    rules_[key(q, a, g)] = PdaRule{to, std::move(push)};
  }
  /// Rule keeping the read stack symbol.
  void set_flat(StateId q, SymbolId a, StackSymId g, StateId to) {
    set(q, a, g, to, StackString(1, char(g)));
  }
  void set_flat_all(StateId q, SymbolId a, StateId to) {
    for (std::size_t g = 0; g < stack_syms_.size(); ++g) set_flat(q, a, StackSymId(g), to);
  }
  /// Rule keeping the read symbol and pushing one more on top of it.
  void set_grow(StateId q, SymbolId a, StackSymId g, StateId to, StackSymId pushed) {
    StackString s(1, char(g));
    s += char(pushed);
    set(q, a, g, to, std::move(s));
  }
  bool defined(StateId q, SymbolId a, StackSymId g) const { return rules_.count(key(q, a, g)); }

  template <typename DefaultRule>
  Dpda finish(DefaultRule fallback) const {
    Dpda m;
    m.states = states_;
    m.inputs = inputs_;
    m.stack_syms = stack_syms_;
    m.table.assign(states_.size() * inputs_.size() * stack_syms_.size(), PdaRule{});
    for (StateId q = 0; q < states_.size(); ++q)
      for (SymbolId a = 0; a < inputs_.size(); ++a)
        for (std::size_t g = 0; g < stack_syms_.size(); ++g) {
          auto it = rules_.find(key(q, a, StackSymId(g)));
          m.rule_mut(q, a, StackSymId(g)) =
              it != rules_.end() ? it->second : fallback(q, a, StackSymId(g));
        }
    return m;
  }

 private:
  static std::optional<SymbolId> index_of(const std::vector<std::string>& v,
                                          std::string_view name) {
    for (SymbolId i = 0; i < v.size(); ++i)
      if (v[i] == name) return i;
    return std::nullopt;
  }
  std::uint64_t key(StateId q, SymbolId a, StackSymId g) const {
    return (std::uint64_t(q) * inputs_.size() + a) * stack_syms_.size() + g;
  }
  std::vector<std::string> inputs_;
  std::vector<std::string> stack_syms_;
  std::vector<std::string> states_;
  std::map<std::uint64_t, PdaRule> rules_;
};

inline std::vector<std::string> pcp_input_alphabet(const PcpInstance& pcp, bool with_dollar,
                                                   bool with_reset) {
  std::vector<std::string> in{"0", "1", "#"};
  if (with_dollar) in.push_back("$");
  if (with_reset) in.push_back(kSyncA);
  for (std::size_t i = 1; i <= pcp.size(); ++i) in.push_back(kIdxPrefix + std::to_string(i));
  return in;
}

inline std::string tile_word(const PcpInstance& pcp, std::size_t i) {
  return pcp.a[i] + "#" + pcp.b[i];
}

/// Add the tile-reading chain for tile i: reads a_i '#' b_i one symbol per
/// step, pushing the symbols of the designated part, then exits on '#'.
/// Returns the chain states in order.
inline std::vector<StateId> add_tile_chain(DpdaAssembler& asmb, const PcpInstance& pcp,
                                           std::size_t i, bool push_a_part,
                                           const std::string& name_prefix, StateId entry_from1,
                                           StateId entry_from2, StateId exit_to) {
  const std::string u = tile_word(pcp, i);
  const SymbolId hash = asmb.input("#");
  std::vector<StateId> chain;
  StateId prev = kNoState;
  for (std::size_t p = 0; p <= u.size(); ++p) {
    StateId s = asmb.add_state(name_prefix + "t" + std::to_string(i + 1) + ":" +
                               std::to_string(p));
    chain.push_back(s);
    if (p == 0) {
      SymbolId idx = asmb.input(kIdxPrefix + std::to_string(i + 1));
      asmb.set_flat_all(entry_from1, idx, s);
      asmb.set_flat_all(entry_from2, idx, s);
    } else {
      char c = u[p - 1];
      SymbolId sym = asmb.input(std::string(1, c));
      bool pushing = push_a_part ? (p - 1 < pcp.a[i].size()) : (p - 1 > pcp.a[i].size());
      for (std::size_t g = 0; g < asmb.n_stack(); ++g) {
        if (pushing)
          asmb.set_grow(prev, sym, StackSymId(g), s, asmb.stack(std::string(1, c)));
        else
          asmb.set_flat(prev, sym, StackSymId(g), s);
      }
    }
    prev = s;
  }
  asmb.set_flat_all(prev, hash, exit_to);
  return chain;
}

}  // namespace detail

/// One-turn acceptors for a PCP instance. The first machine pushes the a-tiles
/// and checks their reversal after the first '$'; the second does the same for
/// the b-tiles. Their languages intersect exactly in the encodings of
/// solutions. Every triple left open by the construction falls into the fail
/// state with the stack unchanged.
inline std::pair<Dpda, Dpda> pcp_to_1turn_acceptors(const PcpInstance& pcp) {
  auto build = [&pcp](bool push_a_side) {
    detail::DpdaAssembler asmb(detail::pcp_input_alphabet(pcp, true, false),
                               {kBottomName, "0", "1"});
    StateId q0 = asmb.add_state("q0");
    StateId q0r = asmb.add_state("q0'");
    StateId q_check = asmb.add_state("q_check");
    StateId q_fail = asmb.add_state("q_fail");
    StateId q_f = asmb.add_state("q_f");
    const SymbolId dollar = asmb.input("$");

    for (std::size_t i = 0; i < pcp.size(); ++i)
      detail::add_tile_chain(asmb, pcp, i, push_a_side, "", q0, q0r, q0r);
    asmb.set_flat_all(q0r, dollar, q_check);
    // Pop while the input matches the top of the stack; the closing '$' is
    // only accepted on the bottom symbol.
    for (const char* c : {"0", "1"})
      asmb.set(q_check, asmb.input(c), asmb.stack(c), q_check, {});
    asmb.set_flat(q_check, dollar, kBottom, q_f);

    Dpda m = asmb.finish([q_fail](StateId, SymbolId, StackSymId g) {
      return PdaRule{q_fail, StackString(1, char(g))};
    });
    m.initial = q0;
    m.finals = {q_f};
    m.provenance = detail::pcp_provenance(push_a_side ? "pcp-acceptor-a" : "pcp-acceptor-b", pcp,
                                          "undefined triples fall to the fail state");
    return m;
  };
  return {build(true), build(false)};
}

/// Does the machine accept the word from its initial state, i.e. is the run
/// alive and its final state accepting?
inline bool dpda_accepts(const Dpda& m, const Word& w) {
  if (!m.initial) throw std::invalid_argument("machine has no initial state");
  RunTrace t = run(m, *m.initial, w);
  return !t.stuck() && m.is_final(t.last().state);
}

/// Combine two acceptors over the same input alphabet into one machine that
/// is synchronizable iff the acceptors share a word: a fresh reset letter
/// re-starts both machines on the empty stack (and traps otherwise), a fresh
/// commit letter moves final states into the sink and poisons everything
/// else, and the sink drains its stack.
inline Dpda combine_sync_gadget(const Dpda& m1, const Dpda& m2) {
  if (m1.inputs != m2.inputs)
    throw std::invalid_argument("combine_sync_gadget: input alphabets differ");
  if (!m1.initial || !m2.initial)
    throw std::invalid_argument("combine_sync_gadget: machines need initial states");
  if (m1.finals.empty() || m2.finals.empty())
    throw std::invalid_argument("combine_sync_gadget: machines need final states");

  // Merged stack alphabet; machine 2's symbols are remapped into it.
  std::vector<std::string> stack_syms = m1.stack_syms;
  std::vector<StackSymId> remap2(m2.stack_syms.size());
  for (std::size_t g = 0; g < m2.stack_syms.size(); ++g) {
    auto at = detail::index_of(stack_syms, m2.stack_syms[g]);
    if (!at) {
      stack_syms.push_back(m2.stack_syms[g]);
      at = std::uint32_t(stack_syms.size() - 1);
    }
    remap2[g] = StackSymId(*at);
  }
  if (stack_syms.size() == 1) stack_syms.push_back("1");
  const StackSymId poison = 1;

  std::vector<std::string> inputs = m1.inputs;
  inputs.push_back(kSyncA);
  inputs.push_back(kSyncB);

  detail::DpdaAssembler asmb(inputs, stack_syms);
  std::vector<StateId> map1(m1.states.size()), map2(m2.states.size());
  for (StateId q = 0; q < m1.states.size(); ++q) map1[q] = asmb.add_state("1:" + m1.states[q]);
  for (StateId q = 0; q < m2.states.size(); ++q) map2[q] = asmb.add_state("2:" + m2.states[q]);
  StateId fail1 = asmb.add_state("q_fail:1");
  StateId fail2 = asmb.add_state("q_fail:2");
  StateId sink = asmb.add_state("q_sync");
  const SymbolId a = asmb.input(kSyncA);
  const SymbolId b = asmb.input(kSyncB);

  for (SymbolId s = 0; s < m1.inputs.size(); ++s) {
    for (StateId q = 0; q < m1.states.size(); ++q)
      for (std::size_t g = 0; g < m1.stack_syms.size(); ++g) {
        const PdaRule& r = m1.rule(q, s, StackSymId(g));
        asmb.set(map1[q], s, StackSymId(g), map1[r.to], r.push);
      }
    for (StateId q = 0; q < m2.states.size(); ++q)
      for (std::size_t g = 0; g < m2.stack_syms.size(); ++g) {
        const PdaRule& r = m2.rule(q, s, StackSymId(g));
        StackString push;
        for (char c : r.push) push += char(remap2[StackSymId(static_cast<unsigned char>(c))]);
        asmb.set(map2[q], s, remap2[g], map2[r.to], std::move(push));
      }
  }

  std::vector<int> owner(asmb.n_states(), 0);  // 1, 2, or 0 for the fresh states
  for (StateId q : map1) owner[q] = 1;
  for (StateId q : map2) owner[q] = 2;

  for (int i : {1, 2}) {
    const std::vector<StateId>& map = i == 1 ? map1 : map2;
    const Dpda& m = i == 1 ? m1 : m2;
    const StateId fail = i == 1 ? fail1 : fail2;
    const StateId start = map[*m.initial];
    for (StateId q = 0; q < m.states.size(); ++q) {
      asmb.set_flat(map[q], a, kBottom, start);
      for (std::size_t g = 1; g < stack_syms.size(); ++g)
        asmb.set_flat(map[q], a, StackSymId(g), fail);
      if (m.is_final(q)) {
        for (std::size_t g = 0; g < stack_syms.size(); ++g)
          asmb.set_flat(map[q], b, StackSymId(g), sink);
      } else {
        asmb.set_grow(map[q], b, kBottom, fail, poison);
        for (std::size_t g = 1; g < stack_syms.size(); ++g)
          asmb.set_flat(map[q], b, StackSymId(g), fail);
      }
    }
    // The trap leaves only through the reset letter on an empty stack; any
    // other letter grows the stack, locking the trap shut.
    asmb.set_flat(fail, a, kBottom, start);
    for (SymbolId s = 0; s < inputs.size(); ++s)
      for (std::size_t g = 0; g < stack_syms.size(); ++g)
        if (!asmb.defined(fail, s, StackSymId(g)))
          asmb.set_grow(fail, s, StackSymId(g), fail, poison);
  }
  for (SymbolId s = 0; s < inputs.size(); ++s) {
    asmb.set_flat(sink, s, kBottom, sink);
    for (std::size_t g = 1; g < stack_syms.size(); ++g)
      asmb.set(sink, s, StackSymId(g), sink, {});
  }
  // Cross-machine stack symbols can never surface on the other side's states;
  // completing them as flat trap moves keeps the table total.
  Dpda out = asmb.finish([&](StateId q, SymbolId, StackSymId g) {
    return PdaRule{owner[q] == 2 ? fail2 : fail1, StackString(1, char(g))};
  });
  out.provenance = "{\"construction\":\"sync-gadget\"}";
  return out;
}

/// Zero-turn machine that is synchronizable in the same-stack model iff the
/// PCP instance is solvable: two tile-reading sides push their respective
/// tile words, a double '#' commits both sides into the sink, and the stacks
/// agree there exactly when the pushed words coincide. Nothing ever pops.
inline Dpda pcp_to_0turn_same(const PcpInstance& pcp) {
  detail::DpdaAssembler asmb(detail::pcp_input_alphabet(pcp, false, true),
                             {kBottomName, "0", "1"});
  const SymbolId hash = asmb.input("#");
  const SymbolId reset = asmb.input(kSyncA);
  const StackSymId one = asmb.stack("1");

  struct Side {
    StateId q0 = kNoState, q0u = kNoState, fail = kNoState;
    std::vector<StateId> members;
  };
  Side sides[2];
  for (int j = 0; j < 2; ++j) {
    const std::string tag = j == 0 ? "A:" : "B:";
    sides[j].q0 = asmb.add_state(tag + "q0");
    sides[j].q0u = asmb.add_state(tag + "q0_");
    sides[j].members = {sides[j].q0, sides[j].q0u};
    for (std::size_t i = 0; i < pcp.size(); ++i) {
      auto chain = detail::add_tile_chain(asmb, pcp, i, j == 0, tag, sides[j].q0, sides[j].q0u,
                                          sides[j].q0u);
      sides[j].members.insert(sides[j].members.end(), chain.begin(), chain.end());
    }
  }
  sides[0].fail = asmb.add_state("q_fail:A");
  sides[1].fail = asmb.add_state("q_fail:B");
  StateId sink = asmb.add_state("q_sync");

  std::vector<int> side_of(asmb.n_states(), -1);
  for (int j = 0; j < 2; ++j)
    for (StateId q : sides[j].members) side_of[q] = j;

  for (int j = 0; j < 2; ++j) {
    Side& side = sides[j];
    // The second '#' commits to the sink, but only over a nonempty stack.
    for (const char* c : {"0", "1"})
      asmb.set_flat(side.q0u, hash, asmb.stack(c), sink);
    for (StateId q : side.members) {
      asmb.set_flat(q, reset, kBottom, side.q0);
      for (std::size_t g = 1; g < asmb.n_stack(); ++g)
        asmb.set_flat(q, reset, StackSymId(g), side.fail);
    }
    asmb.set_flat(side.fail, reset, kBottom, side.q0);
    for (SymbolId s = 0; s < asmb.n_inputs(); ++s)
      for (std::size_t g = 0; g < asmb.n_stack(); ++g)
        if (!asmb.defined(side.fail, s, StackSymId(g)))
          asmb.set_grow(side.fail, s, StackSymId(g), side.fail, one);
  }
  asmb.set_flat(sink, reset, kBottom, sides[0].q0);
  for (SymbolId s = 0; s < asmb.n_inputs(); ++s)
    for (std::size_t g = 0; g < asmb.n_stack(); ++g)
      if (!asmb.defined(sink, s, StackSymId(g))) asmb.set_flat(sink, s, StackSymId(g), sink);

  Dpda out = asmb.finish([&](StateId q, SymbolId, StackSymId g) {
    const StateId fail = sides[side_of[q] == 1 ? 1 : 0].fail;
    StackString grow(1, char(g));
    grow += char(one);
    return PdaRule{fail, std::move(grow)};
  });
  out.provenance = detail::pcp_provenance(
      "pcp-0turn-same", pcp, "undefined tile-side triples fall to the fail state and push 1");
  return out;
}

/// Counter machine that is 0-turn synchronizable (all models) iff some word
/// drives all DFA states into the subset: the fresh letter routes subset
/// members cleanly through the stall state while everything else is marked on
/// the stack and can never pass on to the sink. The mark is pushed on top of
/// the bottom symbol, which keeps configurations bottom-based and changes
/// nothing about which runs may pass.
inline Dca dfa_subset_to_0turn_dca(const Dfa& dfa, const std::vector<StateId>& subset) {
  if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
  std::vector<bool> in_subset(dfa.states.size(), false);
  for (StateId q : subset) {
    if (q >= dfa.states.size()) throw std::invalid_argument("subset member out of range");
    in_subset[q] = true;
  }
  std::vector<std::string> inputs = dfa.inputs;
  inputs.push_back(kSyncA);
  detail::DpdaAssembler asmb(inputs, {kBottomName, "N"});
  std::vector<StateId> map(dfa.states.size());
  for (StateId q = 0; q < dfa.states.size(); ++q) map[q] = asmb.add_state(dfa.states[q]);
  StateId stall = asmb.add_state("q_stall");
  StateId sink = asmb.add_state("q_sync");
  const SymbolId a = asmb.input(kSyncA);
  const StackSymId mark = asmb.stack("N");

  for (StateId q = 0; q < dfa.states.size(); ++q) {
    for (SymbolId s = 0; s < dfa.inputs.size(); ++s)
      asmb.set_flat_all(map[q], s, map[dfa.next(q, s)]);
    if (in_subset[q])
      asmb.set_flat(map[q], a, kBottom, stall);
    else
      asmb.set_grow(map[q], a, kBottom, stall, mark);
  }
  asmb.set_flat(stall, a, kBottom, sink);
  asmb.set_flat(stall, a, mark, stall);
  Dpda m = asmb.finish([](StateId q, SymbolId, StackSymId g) {
    return PdaRule{q, StackString(1, char(g))};  // everything else is the identity
  });
  std::string prov = "{\"construction\":\"dfa-subset-0turn\",\"subset\":[";
  for (std::size_t i = 0; i < subset.size(); ++i)
    prov += (i ? ",\"" : "\"") + detail::json_escape(dfa.states[subset[i]]) + "\"";
  prov += "]}";
  m.provenance = std::move(prov);
  return Dca{std::move(m)};
}

/// Transducer that is trace-synchronizable iff the PCP instance is solvable.
/// The stack of the same-stack construction becomes the output trace: tile
/// pushes turn into emissions, the reset letter emits a marker from every
/// state, and the two fail states emit distinct letters so that divergent
/// runs can never agree again.
inline SequentialTransducer pcp_to_transducer(const PcpInstance& pcp) {
  SequentialTransducer t;
  t.inputs = detail::pcp_input_alphabet(pcp, false, true);
  t.outputs = {"0", "1", "r", "A", "B"};
  const char out_0 = 0, out_1 = 1, out_r = 2, out_A = 3, out_B = 4;

  auto add_state = [&t](std::string n) {
    t.states.push_back(std::move(n));
    return StateId(t.states.size() - 1);
  };
  auto input_ix = [&t](std::string_view n) {
    auto i = t.find_input(n);
    if (!i) throw std::logic_error("pcp_to_transducer: unknown input");
    return *i;
  };
  const SymbolId hash = input_ix("#");
  const SymbolId reset = input_ix(kSyncA);

  struct Side {
    StateId q0 = kNoState, q0u = kNoState, fail = kNoState;
    std::vector<StateId> members;
  };
  Side sides[2];
  struct PendingMove {
    StateId from;
    SymbolId in;
    StateId to;
    std::string out;
  };
  std::vector<PendingMove> moves;
  auto emit = [&moves](StateId from, SymbolId in, StateId to, std::string out) {
    moves.push_back(PendingMove{from, in, to, std::move(out)});
  };

  for (int j = 0; j < 2; ++j) {
    const std::string tag = j == 0 ? "A:" : "B:";
    Side& side = sides[j];
    side.q0 = add_state(tag + "q0");
    side.q0u = add_state(tag + "q0_");
    side.members = {side.q0, side.q0u};
    for (std::size_t i = 0; i < pcp.size(); ++i) {
      const std::string u = detail::tile_word(pcp, i);
      StateId prev = kNoState;
      for (std::size_t p = 0; p <= u.size(); ++p) {
        StateId s = add_state(tag + "t" + std::to_string(i + 1) + ":" + std::to_string(p));
        side.members.push_back(s);
        if (p == 0) {
          SymbolId idx = input_ix(kIdxPrefix + std::to_string(i + 1));
          emit(side.q0, idx, s, {});
          emit(side.q0u, idx, s, {});
        } else {
          char c = u[p - 1];
          bool emitting = j == 0 ? (p - 1 < pcp.a[i].size()) : (p - 1 > pcp.a[i].size());
          emit(prev, input_ix(std::string(1, c)), s,
               emitting ? std::string(1, c == '0' ? out_0 : out_1) : std::string());
        }
        prev = s;
      }
      emit(prev, hash, side.q0u, {});
    }
  }
  sides[0].fail = add_state("q_fail:A");
  sides[1].fail = add_state("q_fail:B");
  StateId sink = add_state("q_sync");

  t.table.assign(t.states.size() * t.inputs.size(), SequentialTransducer::Move{});
  std::vector<bool> has_move(t.table.size(), false);
  auto set = [&](StateId from, SymbolId in, StateId to, std::string out) {
    t.table[from * t.inputs.size() + in] = SequentialTransducer::Move{to, std::move(out)};
    has_move[from * t.inputs.size() + in] = true;
  };
  for (auto& mv : moves) set(mv.from, mv.in, mv.to, std::move(mv.out));

  for (int j = 0; j < 2; ++j) {
    Side& side = sides[j];
    set(side.q0u, hash, sink, {});
    for (StateId q : side.members) set(q, reset, side.q0, std::string(1, out_r));
    for (SymbolId s = 0; s < t.inputs.size(); ++s) {
      if (s == reset)
        set(side.fail, s, side.q0, std::string(1, out_r));
      else
        set(side.fail, s, side.fail, std::string(1, j == 0 ? out_A : out_B));
      // Undefined tile-side moves mirror the fail entries of the stack
      // construction, which push one marker symbol.
      for (StateId q : side.members)
        if (!has_move[q * t.inputs.size() + s]) set(q, s, side.fail, std::string(1, out_1));
    }
  }
  for (SymbolId s = 0; s < t.inputs.size(); ++s) {
    if (s == reset)
      set(sink, s, sides[0].q0, std::string(1, out_r));
    else
      set(sink, s, sink, {});
  }
  t.provenance = detail::pcp_provenance("pcp-transducer", pcp);
  return t;
}

}  // namespace stacksync

#endif  // STACKSYNC_REDUCTIONS_HPP
