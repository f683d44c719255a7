#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "stacksync/dfa_sync.hpp"
#include "stacksync/pda_sync.hpp"
#include "stacksync/reductions.hpp"
#include "stacksync/turn_decision.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace stacksync;
using namespace stacksync::testing;

namespace {

// Simulate a staged machine step by step, recording stages and checking the
// zero-counter claim of the accepting stages.
struct StagedProbe {
  const StagedDca& mq;
  bool stages_monotone = true;
  bool zero_sound = true;

  StagedDca::SimState feed(const Word& w) {
    StagedDca::SimState s{mq.initial, 0, false};
    int last_stage = StagedDca::stage_of(s.staged);
    for (SymbolId a : w) {
      const auto& mv = mq.move(s.staged, a, s.counter > 0);
      if (mv.to == kNoState) {
        s.dead = true;
        return s;
      }
      s.staged = mv.to;
      s.counter += mv.delta;
      int stage = StagedDca::stage_of(s.staged);
      if (stage < last_stage) stages_monotone = false;
      last_stage = stage;
      if (StagedDca::parity_of(s.staged) == 0 && (stage == 1 || stage == 4) && s.counter != 0)
        zero_sound = false;
    }
    return s;
  }
};

}  // namespace

TEST_CASE("restriction to bottom-preserving transitions") {
  SECTION("stack-preserving machines restrict to their full skeleton") {
    Dfa d = cerny(3);
    Dpda lifted = lift_to_dpda(d);
    PartialDfa pd = restrict_to_bottom(lifted);
    REQUIRE(pd.total());
    for (StateId q = 0; q < d.states.size(); ++q)
      for (SymbolId a = 0; a < d.inputs.size(); ++a) CHECK(pd.next(q, a) == d.next(q, a));
  }

  SECTION("letters that always push are undefined everywhere") {
    Dpda m = Dpda::make({"p"}, {"a", "b"}, {"bot", "1"},
                        {{"p", "a", "bot", "p", {"bot", "1"}},
                         {"p", "a", "1", "p", {"1", "1"}},
                         {"p", "b", "bot", "p", {"bot"}},
                         {"p", "b", "1", "p", {"1"}}});
    PartialDfa pd = restrict_to_bottom(m);
    CHECK_FALSE(pd.defined(0, 0));
    CHECK(pd.defined(0, 1));
  }

  SECTION("the gadget sink keeps all its letters") {
    Dpda acc = one_state_acceptor();
    Dpda g = combine_sync_gadget(acc, acc);
    PartialDfa pd = restrict_to_bottom(g);
    StateId sink = *g.find_state("q_sync");
    for (SymbolId a = 0; a < g.inputs.size(); ++a) {
      REQUIRE(pd.defined(sink, a));
      CHECK(pd.next(sink, a) == sink);
    }
  }
}

TEST_CASE("exact 0-turn decision") {
  SECTION("empty model: a synchronizable bottom skeleton gives a verified witness") {
    Dpda lifted = lift_to_dpda(cerny(4));
    ZeroTurnDecision d = decide_0turn(lifted, StackModel::Empty);
    REQUIRE(d.yes);
    CHECK(d.witness->word.size() == 9);
    CHECK(d.witness->verified);
  }

  SECTION("empty model: machines that must push answer no") {
    Dpda m = Dpda::make({"p", "q"}, {"a"}, {"bot", "1"},
                        {{"p", "a", "bot", "q", {"bot", "1"}},
                         {"p", "a", "1", "q", {"1", "1"}},
                         {"q", "a", "bot", "p", {"bot", "1"}},
                         {"q", "a", "1", "p", {"1", "1"}}});
    CHECK_FALSE(decide_0turn(m, StackModel::Empty).yes);
  }

  SECTION("arbitrary model: the subset gadget on a yes-instance") {
    Dfa c4 = cerny(4);
    std::vector<StateId> subset{2};
    Dca gadget = dfa_subset_to_0turn_dca(c4, subset);
    ZeroTurnDecision d = decide_0turn(gadget, StackModel::Arbitrary);
    REQUIRE(d.yes);
    auto w_into = sync_into_subset(c4, subset);
    REQUIRE(w_into.has_value());
    CHECK(d.witness->word.size() <= w_into->size() + 2);
    auto check = check_n_turn_sync_word(gadget, d.witness->word, 0, StackModel::Arbitrary);
    CHECK(check.ok);
  }

  SECTION("the same-stack model is refused") {
    Dpda lifted = lift_to_dpda(cerny(3));
    CHECK_THROWS_AS(decide_0turn(lifted, StackModel::Same), std::invalid_argument);
  }

  SECTION("agreement with the bounded search on random machines") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 80; ++trial) {
      Dpda m = random_dpda(rng, 1 + trial % 3, 1 + trial % 2, 1 + trial % 3);
      for (StackModel model : {StackModel::Empty, StackModel::Arbitrary}) {
        ZeroTurnDecision d = decide_0turn(m, model);
        if (d.yes) {
          CHECK(d.witness->verified);
          if (d.witness->word.size() > 12) continue;  // keep the cross-search bounded
          SearchOutcome out = sync_search_bounded(
              m, model, SearchLimits{d.witness->word.size() + 1, 60000}, 0);
          REQUIRE(found(out));
          CHECK(witness_of(out).word.size() == d.witness->word.size());
        } else {
          SearchOutcome out = sync_search_bounded(m, model, SearchLimits{7, 30000}, 0);
          CHECK_FALSE(found(out));
        }
      }
    }
  }
}

TEST_CASE("the staged one-turn simulation") {
  SECTION("counter-free machines stay in stage one and accept even spread-outs") {
    Dpda flat = lift_to_dpda(cerny(3));
    StagedDca mq = build_mq(Dca{flat}, 0);
    for (const Word& w : all_words(2, 3)) {
      Word spread = spread_out(w);
      auto sim = mq.simulate(spread);
      REQUIRE_FALSE(sim.dead);
      CHECK(StagedDca::stage_of(sim.staged) == 1);
      CHECK(mq.finals[sim.staged]);
      if (!spread.empty()) {
        Word odd(spread.begin(), spread.end() - 1);
        auto sim_odd = mq.simulate(odd);
        CHECK((sim_odd.dead || !mq.finals[sim_odd.staged]));
      }
    }
  }

  SECTION("a push from the bottom enters stage two with the pushed amount") {
    Dpda m = Dpda::make({"p", "q"}, {"a"}, {"bot", "1"},
                        {{"p", "a", "bot", "q", {"bot", "1"}},
                         {"p", "a", "1", "q", {"1"}},
                         {"q", "a", "bot", "q", {"bot"}},
                         {"q", "a", "1", "q", {"1"}}});
    StagedDca mq = build_mq(Dca{m}, 0);
    const auto& mv = mq.move(StagedDca::staged_id(0, 1, 0), 0, false);
    REQUIRE(mv.to != kNoState);
    CHECK(StagedDca::base_of(mv.to) == 1);
    CHECK(StagedDca::stage_of(mv.to) == 2);
    CHECK(StagedDca::parity_of(mv.to) == 1);
    CHECK(mv.delta == 1);
  }

  SECTION("accepts a spread-out word exactly when the plain run is a one-turn "
          "empty-counter run, with matching end state") {
    std::mt19937 rng(32);
    for (int trial = 0; trial < 40; ++trial) {
      Dca dca = random_dca(rng, 1 + trial % 3, 2);
      for (StateId q = 0; q < dca.states.size(); ++q) {
        StagedDca mq = build_mq(dca, q);
        StagedProbe probe{mq};
        for (const Word& w : all_words(2, 5)) {
          RunTrace t = run(dca, q, w);
          bool plain_ok = !t.stuck() && t.last().stack == bottom_only_stack() &&
                          stroke_decomposition(t).strokes <= 2;
          auto sim = probe.feed(spread_out(w));
          bool staged_ok = !sim.dead && mq.finals[sim.staged];
          CHECK(plain_ok == staged_ok);
          if (plain_ok && staged_ok)
            CHECK(StagedDca::base_of(sim.staged) == t.last().state);
        }
        CHECK(probe.stages_monotone);
        CHECK(probe.zero_sound);
      }
    }
  }
}

TEST_CASE("spread-out words") {
  CHECK(spread_out({}).empty());
  CHECK(spread_out({0, 1}) == Word{0, 0, 1, 0});
  CHECK(spread_out_inverse(Word{0, 0, 1, 0}) == Word{0, 1});

  std::mt19937 rng(33);
  std::uniform_int_distribution<int> len(0, 9), letter(0, 2);
  for (int trial = 0; trial < 50; ++trial) {
    Word w;
    int l = len(rng);
    for (int i = 0; i < l; ++i) w.push_back(SymbolId(letter(rng)));
    CHECK(spread_out(w).size() == 2 * w.size());
    CHECK(spread_out_inverse(spread_out(w)) == w);
  }
}

TEST_CASE("the one-turn product machine") {
  SECTION("a single-state machine reproduces its staged component") {
    Dpda m = Dpda::make({"p"}, {"a", "b"}, {"bot", "1"},
                        {{"p", "a", "bot", "p", {"bot", "1"}},
                         {"p", "a", "1", "p", {"1", "1"}},
                         {"p", "b", "bot", "p", {"bot"}},
                         {"p", "b", "1", "p", {}}});
    Dca dca{m};
    StagedDca mq = build_mq(dca, 0);
    MultiCounterMachine product = build_1turn_product(dca, StackModel::Empty);
    for (const Word& w : all_words(2, 6))
      CHECK(mq.accepts(w) == mcm_accepts_naive(product, w));
  }

  SECTION("nominal product size drives the length bound report") {
    std::mt19937 rng(34);
    Dca dca = random_dca(rng, 2, 2);
    OneTurnDecision d = decide_1turn_dca(dca, StackModel::Empty, SearchLimits{4, 2000});
    CHECK(d.report.counters == 2);
    // (8*2)^2 staged product states, times the alphabet size.
    CHECK(d.report.transitions == BigInt(16 * 16 * 2));
    CHECK(d.report.bound == boost::multiprecision::pow(BigInt(2) * d.report.transitions, 2));
  }

  SECTION("counter-free empty-model products accept exactly the spread-out "
          "synchronizing words of the skeleton") {
    Dfa c3 = cerny(3);
    Dca dca{lift_to_dpda(c3)};
    MultiCounterMachine product = build_1turn_product(dca, StackModel::Empty);
    for (const Word& w : all_words(2, 4))
      CHECK(mcm_accepts_naive(product, spread_out(w)) == dfa_word_syncs(c3, w));
  }
}

TEST_CASE("bounded one-turn decision with a length-bound report") {
  SECTION("counter-free skeleton: the recovered witness equals the DFA oracle") {
    Dfa c3 = cerny(3);
    Dca dca{lift_to_dpda(c3)};
    OneTurnDecision d = decide_1turn_dca(dca, StackModel::Empty, SearchLimits{12, 300000});
    REQUIRE(found(d.outcome));
    const SyncWitness& w = witness_of(d.outcome);
    CHECK(w.word == *shortest_sync_word(c3));
    for (StateId q = 0; q < 3; ++q) {
      CHECK(w.final_configs[q].stack == bottom_only_stack());
      CHECK(w.turn_counts[q] <= 1);
    }
    CHECK(w.turn_bound == 1);
  }

  SECTION("strictly incrementing machines exhaust the budget") {
    Dpda m = Dpda::make({"p", "q"}, {"a"}, {"bot", "1"},
                        {{"p", "a", "bot", "q", {"bot", "1"}},
                         {"p", "a", "1", "q", {"1", "1"}},
                         {"q", "a", "bot", "p", {"bot", "1"}},
                         {"q", "a", "1", "p", {"1", "1"}}});
    OneTurnDecision d = decide_1turn_dca(Dca{m}, StackModel::Empty, SearchLimits{10, 5000});
    REQUIRE_FALSE(found(d.outcome));
    CHECK(std::holds_alternative<Exhausted>(d.outcome));
    CHECK(BigInt(10) < d.report.bound);
  }

  SECTION("a tiny frozen machine is proved unsynchronizable once the budget "
          "covers the bound") {
    // One letter, two states that never move or touch the counter.
    Dpda m = Dpda::make({"p", "q"}, {"a"}, {"bot", "1"},
                        {{"p", "a", "bot", "p", {"bot"}},
                         {"p", "a", "1", "p", {"1"}},
                         {"q", "a", "bot", "q", {"bot"}},
                         {"q", "a", "1", "q", {"1"}}});
    // bound = (m*s)^m with m=2, s=(8*2)^2*1: comfortably explorable because
    // the reachable product space is tiny.
    OneTurnDecision d = decide_1turn_dca(Dca{m}, StackModel::Same,
                                         SearchLimits{1 << 20, 100000});
    CHECK(std::holds_alternative<ProvedNo>(d.outcome));
  }

  SECTION("all three models agree with the skeleton oracle on counter-free machines") {
    std::mt19937 rng(35);
    for (int trial = 0; trial < 25; ++trial) {
      Dfa d = random_dfa(rng, 2 + trial % 2, 2);
      Dca dca{lift_to_dpda(d)};
      auto oracle = shortest_sync_word(d);
      for (StackModel model : {StackModel::Empty, StackModel::Same, StackModel::Arbitrary}) {
        OneTurnDecision res = decide_1turn_dca(dca, model, SearchLimits{14, 200000});
        if (oracle && oracle->size() <= 6) {
          REQUIRE(found(res.outcome));
          CHECK(witness_of(res.outcome).word.size() == oracle->size());
        } else if (!oracle) {
          CHECK_FALSE(found(res.outcome));
        }
      }
    }
  }
}
