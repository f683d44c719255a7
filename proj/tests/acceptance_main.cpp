// Acceptance suite: one check per release criterion, one PASS/FAIL line each.
// Budgets and tolerances are fixed here; every check is exact.

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "stacksync/stacksync.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace stacksync;
using namespace stacksync::testing;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail = "") {
  std::printf("%s  criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

/// Witnesses found anywhere in this suite, re-checked at the end against the
/// model-inclusion chain.
struct FoundRecord {
  Dpda machine;
  Word word;
  StackModel model;
};
std::vector<FoundRecord> g_found;

void record(const Dpda& m, const Word& w, StackModel model) {
  g_found.push_back(FoundRecord{m, w, model});
}

// --- 1 -----------------------------------------------------------------

void criterion_1() {
  bool ok = true;
  std::string detail;
  const int expected[] = {4, 9, 16};
  for (int n = 3; n <= 5; ++n) {
    auto w = shortest_sync_word(cerny(n));
    bool here = w.has_value() && int(w->size()) == expected[n - 3] &&
                dfa_word_syncs(cerny(n), *w);
    if (!here) ok = false;
    detail += (n > 3 ? ", " : "") + std::to_string(n) + "-state: " +
              (w ? std::to_string(w->size()) : std::string("none"));
    // Cross-check through the greedy construction: its word also synchronizes
    // and can not be shorter than the exact optimum.
    auto g = find_sync_word_greedy(cerny(n));
    if (!g || !dfa_word_syncs(cerny(n), *g) || g->size() < w->size()) ok = false;
  }
  report(1, "shortest reset words of the cyclic benchmark family", ok, detail);
}

// --- 2 -----------------------------------------------------------------

void criterion_2() {
  std::mt19937 rng(1002);
  bool ok = true;
  int yes_cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Dfa m = random_dfa(rng, 2 + trial % 4, 1 + trial % 2);
    std::uniform_int_distribution<int> bit(0, 1);
    std::vector<StateId> s0, s1;
    for (StateId q = 0; q < m.states.size(); ++q) {
      if (bit(rng)) s0.push_back(q);
      if (bit(rng)) s1.push_back(q);
    }
    if (s0.empty()) s0.push_back(0);
    if (s1.empty()) s1.push_back(StateId(m.states.size() - 1));
    auto naive = naive_from_into(m, s0, s1, 6);
    auto fast = sync_from_into_subset(m, s0, s1);
    if (naive) {
      ++yes_cases;
      if (!fast || fast->size() != naive->size()) ok = false;
    } else if (fast && fast->size() <= 6) {
      ok = false;
    }
  }
  report(2, "subset-to-subset search agrees with naive enumeration", ok,
         std::to_string(yes_cases) + "/200 solvable");
}

// --- 3 -----------------------------------------------------------------

void criterion_3() {
  const std::vector<std::string> tiles{"0", "1", "00", "01", "10", "11"};
  std::vector<PcpInstance> instances;
  for (const auto& a : tiles)
    for (const auto& b : tiles) instances.push_back(PcpInstance::make({a}, {b}));
  for (const auto& a1 : tiles)
    for (const auto& a2 : tiles)
      for (const auto& b1 : tiles)
        for (const auto& b2 : tiles)
          instances.push_back(PcpInstance::make({a1, a2}, {b1, b2}));

  bool ok = true;
  int solvable = 0;
  for (const auto& pcp : instances) {
    auto sol = pcp_brute_solve(pcp, 4);
    if (!sol) continue;
    ++solvable;
    std::size_t budget = 2 + 2;  // reset, commit, two '$'
    for (std::size_t i : *sol)
      budget += 1 + 2 * pcp.a[i - 1].size() + pcp.b[i - 1].size() + 2;
    auto [ma, mb] = pcp_to_1turn_acceptors(pcp);
    Dpda g = combine_sync_gadget(ma, mb);
    SearchOutcome out = sync_search_bounded(g, StackModel::Empty,
                                            SearchLimits{budget, 700000}, 1);
    if (!found(out)) {
      ok = false;
      continue;
    }
    const SyncWitness& w = witness_of(out);
    record(g, w.word, StackModel::Empty);
    // Shape: reset, then a joint word of both acceptors, then commits.
    if (g.inputs[w.word.front()] != kSyncA) ok = false;
    std::size_t commit_at = w.word.size();
    while (commit_at > 0 && g.inputs[w.word[commit_at - 1]] == kSyncB) --commit_at;
    if (commit_at == w.word.size() || commit_at < 2) {
      ok = false;
      continue;
    }
    Word middle(w.word.begin() + 1, w.word.begin() + commit_at);
    Word ma_word;  // identical alphabets, ids transfer directly
    for (SymbolId s : middle) ma_word.push_back(s);
    if (!dpda_accepts(ma, ma_word) || !dpda_accepts(mb, ma_word)) ok = false;
    for (int t : w.turn_counts)
      if (t > 1) ok = false;
  }

  // Unsolvable direction: first letters differ everywhere, so no solution
  // exists; the bounded search must come back inconclusive.
  int unsolvable_done = 0;
  for (const auto& pcp : instances) {
    if (unsolvable_done >= 20) break;
    bool mismatch_everywhere = true;
    for (std::size_t i = 0; i < pcp.size(); ++i)
      if (pcp.a[i][0] == pcp.b[i][0]) mismatch_everywhere = false;
    if (!mismatch_everywhere) continue;
    ++unsolvable_done;
    auto [ma, mb] = pcp_to_1turn_acceptors(pcp);
    Dpda g = combine_sync_gadget(ma, mb);
    SearchOutcome out =
        sync_search_bounded(g, StackModel::Empty, SearchLimits{12, 100000}, 1);
    if (found(out)) ok = false;
  }
  report(3, "acceptor gadgets synchronize exactly on solvable tile instances", ok,
         std::to_string(solvable) + " solvable, " + std::to_string(unsolvable_done) +
             " unsolvable checked");
}

// --- 4 -----------------------------------------------------------------

// Incremental matcher for the displayed acceptor language: index-tagged tile
// blocks, a separator, the reversal of the pushed parts, a final separator.
// Written against the language definition only; one token advances one step.
struct LanguagePattern {
  const PcpInstance& pcp;
  bool a_side;

  enum class Phase : std::uint8_t { Blocks, InBlock, Check, Done, Dead };
  struct State {
    Phase phase = Phase::Blocks;
    std::uint8_t tile = 0;
    std::uint8_t pos = 0;
    std::uint8_t blocks = 0;
    std::string pushed;

    bool accepts() const { return phase == Phase::Done; }
  };

  State advance(const State& s, const std::string& token) const {
    State n = s;
    switch (s.phase) {
      case Phase::Blocks: {
        for (std::size_t i = 1; i <= pcp.size(); ++i)
          if (token == std::string(kIdxPrefix) + std::to_string(i)) {
            n.phase = Phase::InBlock;
            n.tile = std::uint8_t(i - 1);
            n.pos = 0;
            return n;
          }
        if (token == "$" && s.blocks > 0) {
          n.phase = s.pushed.empty() ? Phase::Dead : Phase::Check;
          n.pos = 0;
          return n;
        }
        n.phase = Phase::Dead;
        return n;
      }
      case Phase::InBlock: {
        const std::string block = pcp.a[s.tile] + "#" + pcp.b[s.tile] + "#";
        std::string expected = std::string(1, block[s.pos]);
        if (token != expected) {
          n.phase = Phase::Dead;
          return n;
        }
        if (++n.pos == block.size()) {
          n.phase = Phase::Blocks;
          n.pushed += a_side ? pcp.a[s.tile] : pcp.b[s.tile];
          ++n.blocks;
        }
        return n;
      }
      case Phase::Check: {
        if (s.pos < s.pushed.size()) {
          char expected = s.pushed[s.pushed.size() - 1 - s.pos];
          if (token.size() == 1 && token[0] == expected) {
            ++n.pos;
            return n;
          }
          n.phase = Phase::Dead;
          return n;
        }
        n.phase = token == "$" ? Phase::Done : Phase::Dead;
        return n;
      }
      case Phase::Done:
      case Phase::Dead:
        n.phase = Phase::Dead;
        return n;
    }
    return n;
  }
};

void criterion_4() {
  bool ok = true;
  long words_checked = 0;
  const std::vector<PcpInstance> instances{
      PcpInstance::make({"0"}, {"0"}), PcpInstance::make({"10"}, {"10"}),
      PcpInstance::make({"0"}, {"1"}), PcpInstance::make({"01"}, {"0"})};
  for (const auto& pcp : instances) {
    auto [ma, mb] = pcp_to_1turn_acceptors(pcp);
    for (int side = 0; side < 2; ++side) {
      const Dpda& m = side == 0 ? ma : mb;
      LanguagePattern pattern{pcp, side == 0};
      // Depth-first sweep over all words of length at most 10, carrying both
      // the machine configuration and the pattern state incrementally.
      struct Frame {
        Configuration cfg;
        LanguagePattern::State lang;
        SymbolId next = 0;
      };
      std::vector<Frame> stack;
      stack.push_back(
          Frame{Configuration{*m.initial, bottom_only_stack()}, LanguagePattern::State{}, 0});
      std::size_t depth = 0;
      while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.next == 0) {
          ++words_checked;
          bool accepted = !top.cfg.stack.empty() && m.is_final(top.cfg.state);
          if (accepted != top.lang.accepts()) ok = false;
        }
        if (depth == 10 || top.next >= m.inputs.size()) {
          stack.pop_back();
          if (depth > 0) --depth;
          continue;
        }
        SymbolId a = top.next++;
        auto next = step(m, top.cfg, a);
        if (!next) continue;  // the acceptors never pop the bottom symbol
        Frame child{std::move(*next), pattern.advance(top.lang, m.inputs[a]), 0};
        ++depth;
        stack.push_back(std::move(child));
      }
    }
  }
  report(4, "acceptor membership matches the language definition up to length 10", ok,
         std::to_string(words_checked) + " words");
}

// --- 5 -----------------------------------------------------------------

void criterion_5() {
  std::mt19937 rng(1005);
  bool ok = true;
  int yes_cases = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Dpda m = random_dpda(rng, 1 + trial % 3, 1 + trial % 2, 1 + trial % 3);
    for (StackModel model : {StackModel::Empty, StackModel::Arbitrary}) {
      ZeroTurnDecision d = decide_0turn(m, model);
      if (d.yes) {
        ++yes_cases;
        if (!d.witness->verified) ok = false;
        if (d.witness->word.size() <= 12) {
          SearchOutcome out = sync_search_bounded(
              m, model, SearchLimits{d.witness->word.size() + 1, 60000}, 0);
          if (!found(out) || witness_of(out).word.size() != d.witness->word.size()) ok = false;
          if (found(out)) record(m, witness_of(out).word, model);
        }
      } else {
        // A hit in the bounded search against an exact NO is a hard failure.
        SearchOutcome out = sync_search_bounded(m, model, SearchLimits{7, 30000}, 0);
        if (found(out)) ok = false;
      }
    }
  }
  report(5, "exact 0-turn decisions agree with the bounded search", ok,
         std::to_string(yes_cases) + "/600 yes");
}

// --- 6 -----------------------------------------------------------------

void criterion_6() {
  std::mt19937 rng(1006);
  bool ok = true;
  int mapped_witnesses = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Dca dca = random_dca(rng, 1 + trial % 3, 2);
    // Staged-machine soundness, exhaustively over words up to length 5.
    for (StateId q = 0; q < dca.states.size(); ++q) {
      StagedDca mq = build_mq(dca, q);
      for (const Word& w : all_words(2, 5)) {
        RunTrace t = run(dca, q, w);
        bool plain_ok = !t.stuck() && t.last().stack == bottom_only_stack() &&
                        stroke_decomposition(t).strokes <= 2;
        Word spread = spread_out(w);
        StagedDca::SimState s{mq.initial, 0, false};
        bool zero_sound = true;
        for (SymbolId a : spread) {
          const auto& mv = mq.move(s.staged, a, s.counter > 0);
          if (mv.to == kNoState) {
            s.dead = true;
            break;
          }
          s.staged = mv.to;
          s.counter += mv.delta;
          int stage = StagedDca::stage_of(s.staged);
          if (StagedDca::parity_of(s.staged) == 0 && (stage == 1 || stage == 4) &&
              s.counter != 0)
            zero_sound = false;
        }
        bool staged_ok = !s.dead && mq.finals[s.staged];
        if (!zero_sound || staged_ok != plain_ok) ok = false;
        if (staged_ok && plain_ok && StagedDca::base_of(s.staged) != t.last().state) ok = false;
      }
    }
    // Product witnesses map back through the odd positions and re-verify.
    for (StackModel model : {StackModel::Empty, StackModel::Same, StackModel::Arbitrary}) {
      OneTurnDecision d = decide_1turn_dca(dca, model, SearchLimits{12, 40000});
      if (found(d.outcome)) {
        ++mapped_witnesses;
        const SyncWitness& w = witness_of(d.outcome);
        auto check = check_n_turn_sync_word(dca, w.word, 1, model);
        if (!check.ok) ok = false;
        record(dca, w.word, model);
      }
    }
  }
  report(6, "staged one-turn simulation is sound and witnesses map back", ok,
         std::to_string(mapped_witnesses) + " product witnesses");
}

// --- 7 -----------------------------------------------------------------

void criterion_7() {
  std::mt19937 rng(1007);
  bool ok = true;
  int synchronizable = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Dpbca m = random_dpbca(rng, 2 + trial % 3, 2, /*counter_free=*/true);
    Dfa skeleton;
    skeleton.states = m.states;
    skeleton.inputs = m.inputs;
    for (StateId q = 0; q < m.states.size(); ++q)
      for (SymbolId a = 0; a < m.inputs.size(); ++a)
        skeleton.table.push_back(m.rule(q, a, kBottom).to);
    auto oracle = shortest_sync_word(skeleton);
    for (StackModel model : {StackModel::Empty, StackModel::Same, StackModel::Arbitrary}) {
      SearchOutcome out = dpbca_sync_bounded(m, model, SearchLimits{12, 60000});
      if (oracle && oracle->size() <= 12) {
        if (!found(out) || witness_of(out).word != *oracle) ok = false;
        if (found(out)) record(m, witness_of(out).word, model);
      } else if (!oracle && found(out)) {
        ok = false;
      }
    }
    if (oracle) ++synchronizable;
  }
  report(7, "counter-free blind products match the skeleton oracle in all models", ok,
         std::to_string(synchronizable) + "/100 synchronizable");
}

// --- 8 -----------------------------------------------------------------

void criterion_8() {
  std::mt19937 rng(1008);
  bool ok = true;
  int solvable_found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    SequentialTransducer t = random_transducer(rng, 1 + trial % 3, 2, 2);
    auto naive = naive_trace_sync(t, 6);
    TraceSearchOutcome out = trace_sync_search_bounded(t, TraceSyncLimits{6, 50000, 16});
    if (naive) {
      if (!trace_found(out) || std::get<TraceWitness>(out).word != *naive) ok = false;
    } else if (trace_found(out)) {
      ok = false;
    }
  }
  for (const auto& tiles : std::vector<std::pair<std::string, std::string>>{
           {"0", "0"}, {"11", "11"}, {"10", "10"}}) {
    auto pcp = PcpInstance::make({tiles.first}, {tiles.second});
    SequentialTransducer t = pcp_to_transducer(pcp);
    TraceSearchOutcome out = trace_sync_search_bounded(t, TraceSyncLimits{12, 300000, 32});
    if (!trace_found(out)) {
      ok = false;
      continue;
    }
    ++solvable_found;
    const TraceWitness& w = std::get<TraceWitness>(out);
    if (t.inputs[w.word.front()] != kSyncA) ok = false;
    bool double_hash = false;
    for (std::size_t i = 1; i < w.word.size(); ++i)
      if (t.inputs[w.word[i - 1]] == "#" && t.inputs[w.word[i]] == "#") double_hash = true;
    if (!double_hash) ok = false;
  }
  report(8, "trace search is oracle-equivalent and transducer gadgets behave", ok,
         std::to_string(solvable_found) + "/3 gadget witnesses");
}

// --- 9 -----------------------------------------------------------------

void criterion_9() {
  bool ok = true;

  // Same-stack tile construction, both directions.
  {
    auto solvable = PcpInstance::make({"0"}, {"0"});
    Dpda m = pcp_to_0turn_same(solvable);
    SearchOutcome out = sync_search_bounded(m, StackModel::Same, SearchLimits{9, 200000}, 0);
    if (!found(out))
      ok = false;
    else {
      const Word& w = witness_of(out).word;
      record(m, w, StackModel::Same);
      if (m.inputs[w.front()] != kSyncA) ok = false;
      bool double_hash = false;
      for (std::size_t i = 1; i < w.size(); ++i)
        if (m.inputs[w[i - 1]] == "#" && m.inputs[w[i]] == "#") double_hash = true;
      if (!double_hash) ok = false;
    }
    auto unsolvable = PcpInstance::make({"0"}, {"1"});
    Dpda bad = pcp_to_0turn_same(unsolvable);
    if (found(sync_search_bounded(bad, StackModel::Same, SearchLimits{10, 150000}, 0)))
      ok = false;
  }

  // Subset-instance counter gadget, both directions.
  {
    Dfa c4 = cerny(4);
    Dca m = dfa_subset_to_0turn_dca(c4, {1});
    ZeroTurnDecision d = decide_0turn(m, StackModel::Arbitrary);
    if (!d.yes || !d.witness->verified) ok = false;
    if (d.yes) record(m, d.witness->word, StackModel::Arbitrary);

    Dfa perm = Dfa::make({"p", "q"}, {"a", "b"},
                         {{"p", "a", "q"}, {"q", "a", "p"}, {"p", "b", "p"}, {"q", "b", "q"}});
    Dca bad = dfa_subset_to_0turn_dca(perm, {0});
    if (decide_0turn(bad, StackModel::Arbitrary).yes) ok = false;
  }

  // Model-inclusion chain over every witness this suite found.
  std::size_t chain_checked = 0;
  for (const auto& rec : g_found) {
    if (rec.model == StackModel::Empty) {
      if (!check_passed(check_sync_word(rec.machine, rec.word, StackModel::Same))) ok = false;
      if (!check_passed(check_sync_word(rec.machine, rec.word, StackModel::Arbitrary)))
        ok = false;
      chain_checked += 2;
    } else if (rec.model == StackModel::Same) {
      if (!check_passed(check_sync_word(rec.machine, rec.word, StackModel::Arbitrary)))
        ok = false;
      ++chain_checked;
    }
  }
  report(9, "reduction directions certified small-scale; model chain holds", ok,
         std::to_string(g_found.size()) + " witnesses, " + std::to_string(chain_checked) +
             " chain checks");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
