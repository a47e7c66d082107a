#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "gemlab/attacks.hpp"
#include "gemlab/bounds.hpp"
#include "gemlab/em_games.hpp"
#include "gemlab/errors.hpp"
#include "gemlab/even_mansour.hpp"
#include "gemlab/sampler.hpp"
#include "gemlab/transcript.hpp"
#include "test_support.hpp"

using namespace gemlab;

namespace {

QueryBudget st(std::uint64_t s, std::uint64_t t) {
  QueryBudget b;
  b.s = s;
  b.t = t;
  return b;
}

// Bad-key count written straight from the definition.
std::uint64_t brute_bad_keys(const GroupHandle& G, const EmTranscript& tr) {
  std::uint64_t n = 0;
  for (const auto& k : G.enumerate()) {
    bool bad = false;
    for (const auto& [m, c] : tr.s) {
      for (const auto& [x, y] : tr.t) {
        bad = bad || G.op(m, k) == x || G.op(c, G.inv(k)) == y;
      }
    }
    n += bad ? 1 : 0;
  }
  return n;
}

std::vector<ScriptStep> step(EmOracleKind k, const Element& v) { return {{k, v}}; }

}  // namespace

TEST(Efp, ReplayedPairIsNotAForgery) {
  auto g = parse_group_spec("zmod:64");
  Rng rng(1);
  EfpAdversary replay = [&](EmOracles& o) {
    const Element m = g.from_integer(5);
    return std::make_pair(m, o.encrypt(m));
  };
  EXPECT_FALSE(run_efp(replay, g, st(1, 0), rng));
  EfpAdversary replay_d = [&](EmOracles& o) {
    const Element c = g.from_integer(9);
    return std::make_pair(o.decrypt(c), c);
  };
  EXPECT_FALSE(run_efp(replay_d, g, st(1, 0), rng));
}

TEST(Efp, OmniscientAdversaryForges) {
  auto g = parse_group_spec("dihedral:9");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    Rng copy = rng;
    const Element k = em_keygen(g, copy);
    EfpAdversary omniscient = [&](EmOracles& o) {
      const Element m = g.from_rotation(3, true);
      return std::make_pair(m, g.op(o.permute(g.op(m, k)), k));
    };
    EXPECT_TRUE(run_efp(omniscient, g, st(0, 1), rng));
  }
}

TEST(Efp, RandomGuessSucceedsOneInG) {
  auto g = parse_group_spec("zmod:256");
  Rng rng(2);
  std::uint64_t wins = 0;
  const std::uint64_t n = 128000;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng coins(derive_seed(99, i));
    EfpAdversary guess = [&](EmOracles&) {
      return std::make_pair(g.sample(coins), g.sample(coins));
    };
    wins += run_efp(guess, g, st(0, 0), rng) ? 1 : 0;
  }
  EXPECT_TRUE(gemlab::testing::within_sigmas(wins, n, 1.0 / 256, 4)) << wins;
}

TEST(Efp, BudgetIsEnforced) {
  auto g = parse_group_spec("zmod:16");
  Rng rng(3);
  EfpAdversary greedy = [&](EmOracles& o) {
    o.permute(g.from_integer(1));
    o.permute(g.from_integer(2));
    return std::make_pair(g.identity(), g.identity());
  };
  EXPECT_THROW(run_efp(greedy, g, st(5, 1), rng), BudgetError);
}

TEST(Cp, ChallengeDecryptionIsRefused) {
  auto g = parse_group_spec("zmod:32");
  Rng rng(4);
  CpAdversary probe = [&](CpOracles& o) {
    EXPECT_FALSE(o.decrypt(o.challenge()).has_value());
    const Element other = g.op(o.challenge(), g.from_integer(1));
    EXPECT_TRUE(o.decrypt(other).has_value());
    return g.identity();
  };
  run_cp(probe, g, st(2, 0), rng);
}

TEST(Cp, OmniscientAdversaryCracks) {
  auto g = parse_group_spec("sym:4");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    Rng copy = rng;
    const Element k = em_keygen(g, copy);
    CpAdversary adv = [&](CpOracles& o) {
      return g.op(o.unpermute(g.op(o.challenge(), g.inv(k))), g.inv(k));
    };
    EXPECT_TRUE(run_cp(adv, g, st(0, 1), rng));
  }
}

TEST(Cp, RandomGuessSucceedsOneInG) {
  auto g = parse_group_spec("zmod:16");
  Rng rng(5);
  std::uint64_t wins = 0;
  const std::uint64_t n = 64000;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng coins(derive_seed(7, i));
    CpAdversary guess = [&](CpOracles&) { return g.sample(coins); };
    wins += run_cp(guess, g, st(0, 0), rng) ? 1 : 0;
  }
  EXPECT_TRUE(gemlab::testing::within_sigmas(wins, n, 1.0 / 16, 4)) << wins;
}

TEST(Cp, SlideThenDecryptTracksSlideRate) {
  auto g = parse_group_spec("zmod:4096");
  Rng rng(6);
  const std::uint64_t n = 300;
  std::uint64_t wins = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng coins(derive_seed(8, i));
    CpAdversary slide = [&](CpOracles& o) {
      CachedAttackView<CpOracles> view(o);
      const auto res = slide_attack(view, SlideConfig{64, 2}, coins);
      if (!res.key) return g.sample(coins);
      const Element ki = g.inv(*res.key);
      return g.op(o.unpermute(g.op(o.challenge(), ki)), ki);
    };
    wins += run_cp(slide, g, st(200, 200), rng) ? 1 : 0;
  }
  // Verified slide success 1 - (1 - 1/|G|)^(d^2); a wrong key passing both
  // checks or a lucky random guess moves this by well under a sigma.
  const double p = 1 - std::pow(1 - 1.0 / 4096, 64.0 * 64.0);
  EXPECT_TRUE(gemlab::testing::within_sigmas(wins, n, p, 4)) << wins;
}

TEST(EmGames, ZeroQueriesNeverBad) {
  auto g = parse_group_spec("zmod:7");
  for (EmGame v : {EmGame::R, EmGame::X, EmGame::X_prime, EmGame::R_prime}) {
    Rng rng(9);
    const auto out = run_em_game(v, [](EmOracles&) { return true; }, g, st(0, 0), rng);
    EXPECT_FALSE(out.bad) << to_string(v);
    EXPECT_TRUE(out.output);
  }
}

TEST(EmGames, BudgetAndProtocol) {
  auto g = parse_group_spec("zmod:9");
  EmGameOracles o(EmGame::X, g, st(2, 1), Rng(1));
  const Element c = o.encrypt(g.from_integer(1));
  EXPECT_THROW(o.encrypt(g.from_integer(1)), ProtocolError);
  EXPECT_THROW(o.decrypt(c), ProtocolError);
  const Element y = o.permute(g.from_integer(4));
  EXPECT_THROW(o.unpermute(y), BudgetError);
  o.decrypt(g.op(c, g.from_integer(1)));
  EXPECT_THROW(o.encrypt(g.from_integer(8)), BudgetError);

  EmGameOptions lax;
  lax.enforce_protocol = false;
  EmGameOracles p(EmGame::X_prime, g, st(3, 0), Rng(1), lax);
  const Element c1 = p.encrypt(g.from_integer(1));
  EXPECT_EQ(p.encrypt(g.from_integer(1)), c1);
  EXPECT_EQ(p.decrypt(c1), g.from_integer(1));
  EXPECT_THROW(p.encrypt(Element{"\x0a"}), DomainError);
}

TEST(EmGames, XPrimeIsDirectEvenMansour) {
  for (const char* spec : {"zmod:31", "sym:4", "dihedral:5"}) {
    auto g = parse_group_spec(spec);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      EmGameOracles game(EmGame::X_prime, g, st(20, 20), Rng(seed));
      RngSampler s(Rng{seed});
      const Element k = s.uniform(g);
      EmInstance em(g, k, LazyPermutation(g, s));
      Rng script(seed + 500);
      std::set<std::pair<int, Element>> asked;
      for (int i = 0; i < 20; ++i) {
        const int kind = static_cast<int>(script.below(4));
        const Element v = g.sample(script);
        // Stay within the protocol by skipping anything already derivable.
        if (asked.count({kind, v})) continue;
        Element a, b;
        switch (kind) {
          case 0:
            a = game.encrypt(v), b = em.encrypt(v);
            asked.insert({0, v}), asked.insert({1, a});
            break;
          case 1:
            a = game.decrypt(v), b = em.decrypt(v);
            asked.insert({1, v}), asked.insert({0, a});
            break;
          case 2:
            a = game.permute(v), b = em.perm().forward(v);
            asked.insert({2, v}), asked.insert({3, a});
            break;
          default:
            a = game.unpermute(v), b = em.perm().backward(v);
            asked.insert({3, v}), asked.insert({2, a});
            break;
        }
        ASSERT_EQ(a, b) << spec;
      }
      EXPECT_EQ(*game.key(), k);
    }
  }
}

TEST(EmGames, FlagIsMonotone) {
  auto g = parse_group_spec("zmod:5");
  for (EmGame v : {EmGame::R, EmGame::X}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      EmGameOracles o(v, g, st(3, 3), Rng(seed));
      Rng script(seed);
      EmAdversary adv = script_adversary({{EmOracleKind::encrypt, g.sample(script)},
                                          {EmOracleKind::permute, g.sample(script)},
                                          {EmOracleKind::unpermute, g.sample(script)},
                                          {EmOracleKind::decrypt, g.sample(script)},
                                          {EmOracleKind::permute, g.sample(script)}});
      adv(o);
      const auto& trace = o.flag_trace();
      for (std::size_t i = 1; i < trace.size(); ++i) ASSERT_TRUE(!trace[i - 1] || trace[i]);
      if (!trace.empty()) EXPECT_EQ(trace.back(), o.flag().bad());
    }
  }
}

TEST(EmGames, GameRFlagMatchesBadKeyDefinition) {
  // In R the flag ends up set iff the final transcripts make k bad.
  auto g = parse_group_spec("zmod:6");
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng script(seed);
    std::vector<ScriptStep> steps;
    for (int i = 0; i < 4; ++i) {
      steps.push_back({static_cast<EmOracleKind>(script.below(4)), g.sample(script)});
    }
    Rng rng(seed);
    const auto out = run_em_game(EmGame::R, script_adversary(steps), g, st(4, 4), rng);
    EXPECT_EQ(out.bad, is_bad_key(g, out.transcript, *out.key)) << seed;
  }
}

TEST(EmGames, RPrimeFlagIsBadKeyFraction) {
  // Per final transcript, the post-hoc key draw makes the flag bad with
  // probability exactly (bad keys) / |G|.
  auto g = parse_group_spec("zmod:8");
  const std::vector<ScriptStep> script = {{EmOracleKind::encrypt, g.from_integer(1)},
                                          {EmOracleKind::permute, g.from_integer(2)},
                                          {EmOracleKind::decrypt, g.from_integer(5)}};
  std::map<std::string, std::pair<Rational, Rational>> by_transcript;  // (total, bad)
  std::map<std::string, std::uint64_t> bad_keys;
  ChoiceTree tree;
  tree.for_each_path([&] {
    const auto out = run_em_game(EmGame::R_prime, script_adversary(script), g, st(2, 1), tree);
    std::string key;
    for (const auto& r : out.log) key += g.format(r.query) + ">" + g.format(r.answer) + ";";
    auto& cell = by_transcript[key];
    cell.first += tree.weight();
    if (out.bad) cell.second += tree.weight();
    bad_keys[key] = count_bad_keys(g, out.transcript);
  });
  ASSERT_FALSE(by_transcript.empty());
  for (const auto& [k, cell] : by_transcript) {
    EXPECT_EQ(cell.second / cell.first, ratio(bad_keys.at(k), 8)) << k;
  }
}

TEST(EmGames, RPrimePointwiseOnZmod64) {
  auto g = parse_group_spec("zmod:64");
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng script(seed);
    std::vector<ScriptStep> steps;
    for (int i = 0; i < 8; ++i) {
      steps.push_back({static_cast<EmOracleKind>(script.below(4)), g.sample(script)});
    }
    Rng rng(seed);
    const auto out = run_em_game(EmGame::R_prime, script_adversary(steps), g, st(8, 8), rng);
    ASSERT_TRUE(out.key);
    EXPECT_EQ(out.bad, is_bad_key(g, out.transcript, *out.key));
  }
}

TEST(GameEquivalence, SmallScripts) {
  auto z3 = parse_group_spec("zmod:3");
  const std::vector<ScriptStep> ep = {{EmOracleKind::encrypt, z3.from_integer(1)},
                                      {EmOracleKind::permute, z3.from_integer(2)}};
  EXPECT_TRUE(exhaustive_game_equivalence(EquivalencePairing::x_vs_x_prime, z3, ep));
  EXPECT_TRUE(exhaustive_game_equivalence(EquivalencePairing::r_flag_vs_r_prime_flag, z3, ep));
  auto z2 = parse_group_spec("zmod:2");
  const auto e = step(EmOracleKind::encrypt, z2.identity());
  EXPECT_TRUE(exhaustive_game_equivalence(EquivalencePairing::x_vs_x_prime, z2, e));
  EXPECT_TRUE(exhaustive_game_equivalence(EquivalencePairing::r_flag_vs_r_prime_flag, z2, e));
}

TEST(GameEquivalence, AllTwoStepScriptsOnZmod2And3) {
  for (const char* spec : {"zmod:2", "zmod:3"}) {
    auto g = parse_group_spec(spec);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (const auto& u : g.enumerate()) {
          for (const auto& v : g.enumerate()) {
            const std::vector<ScriptStep> s = {{static_cast<EmOracleKind>(a), u},
                                               {static_cast<EmOracleKind>(b), v}};
            ASSERT_TRUE(exhaustive_game_equivalence(EquivalencePairing::x_vs_x_prime, g, s));
            ASSERT_TRUE(
                exhaustive_game_equivalence(EquivalencePairing::r_flag_vs_r_prime_flag, g, s));
          }
        }
      }
    }
  }
}

TEST(GameEquivalence, ThreeStepScriptsOnZmod4And5) {
  for (const char* spec : {"zmod:5", "zmod:4"}) {
    auto g = parse_group_spec(spec);
    Rng rng(10);
    for (int t = 0; t < 6; ++t) {
      std::vector<ScriptStep> s;
      for (int i = 0; i < 3; ++i) s.push_back({static_cast<EmOracleKind>(rng.below(4)), g.sample(rng)});
      EXPECT_TRUE(exhaustive_game_equivalence(EquivalencePairing::x_vs_x_prime, g, s));
      EXPECT_TRUE(exhaustive_game_equivalence(EquivalencePairing::r_flag_vs_r_prime_flag, g, s));
    }
  }
}

TEST(GameEquivalence, CorruptedGameXIsDetected) {
  auto g = parse_group_spec("zmod:3");
  const std::vector<ScriptStep> s = {{EmOracleKind::encrypt, g.identity()},
                                     {EmOracleKind::permute, g.identity()}};
  EXPECT_FALSE(exhaustive_game_equivalence(EquivalencePairing::x_vs_x_prime, g, s, true));
  auto z2 = parse_group_spec("zmod:2");
  const std::vector<ScriptStep> s2 = {{EmOracleKind::permute, z2.identity()},
                                      {EmOracleKind::decrypt, z2.identity()}};
  EXPECT_FALSE(exhaustive_game_equivalence(EquivalencePairing::x_vs_x_prime, z2, s2, true));
}

TEST(GameEquivalence, ExactDistributionsSumToOne) {
  auto g = parse_group_spec("zmod:3");
  const std::vector<ScriptStep> s = {{EmOracleKind::decrypt, g.from_integer(2)},
                                     {EmOracleKind::unpermute, g.from_integer(1)}};
  for (EmGame v : {EmGame::R, EmGame::X, EmGame::X_prime}) {
    Rational total{0};
    for (const auto& [k, p] : exact_answer_distribution(v, s, g)) total += p;
    EXPECT_EQ(total, 1);
  }
  // R answers uniformly regardless of the key: 3 * 3 outcomes at 1/9 each.
  const auto r = exact_answer_distribution(EmGame::R, s, g);
  EXPECT_EQ(r.size(), 9u);
  for (const auto& [k, p] : r) EXPECT_EQ(p, ratio(1, 9));
}

TEST(GameEquivalence, CapacityLimits) {
  auto z6 = parse_group_spec("zmod:6");
  EXPECT_THROW(exhaustive_game_equivalence(EquivalencePairing::x_vs_x_prime, z6,
                                           step(EmOracleKind::encrypt, z6.identity())),
               CapacityError);
  auto z2 = parse_group_spec("zmod:2");
  std::vector<ScriptStep> four(4, {EmOracleKind::encrypt, z2.identity()});
  EXPECT_THROW(exhaustive_game_equivalence(EquivalencePairing::x_vs_x_prime, z2, four),
               CapacityError);
}

TEST(BadKeys, CountWithinTwoStOnZmod64) {
  auto g = parse_group_spec("zmod:64");
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const EmTranscript tr = random_em_transcript(g, 4, 4, rng);
    ASSERT_EQ(tr.s.size(), 4u);
    ASSERT_EQ(tr.t.size(), 4u);
    const std::uint64_t n = count_bad_keys(g, tr);
    EXPECT_EQ(n, brute_bad_keys(g, tr));
    EXPECT_LE(n, 32u);
    EXPECT_LE(ratio(n, 64), em_bad_key_bound(4, 4, 64));
  }
}

TEST(BadKeys, NonAbelianCountMatchesDefinition) {
  auto g = parse_group_spec("sym:4");
  Rng rng(12);
  for (int i = 0; i < 20; ++i) {
    const EmTranscript tr = random_em_transcript(g, 3, 2, rng);
    EXPECT_EQ(count_bad_keys(g, tr), brute_bad_keys(g, tr));
    EXPECT_LE(count_bad_keys(g, tr), 12u);
  }
}
