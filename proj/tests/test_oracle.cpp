#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "gemlab/errors.hpp"
#include "gemlab/oracle.hpp"
#include "gemlab/rational.hpp"
#include "gemlab/sampler.hpp"
#include "test_support.hpp"

using namespace gemlab;

namespace {

// The realized permutation as the sequence of image indices.
std::vector<std::uint64_t> realized(const GroupHandle& g, LazyPermutation& p) {
  std::vector<std::uint64_t> out;
  for (const auto& x : g.enumerate()) out.push_back(g.index_of(p.forward(x)));
  return out;
}

std::uint64_t rank_of(std::vector<std::uint64_t> perm) {
  // Lehmer code.
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    std::uint64_t smaller = 0;
    for (std::size_t j = i + 1; j < perm.size(); ++j) smaller += perm[j] < perm[i] ? 1 : 0;
    r = r * (perm.size() - i) + smaller;
  }
  return r;
}

}  // namespace

TEST(LazyPermutation, RepeatedQueriesAgree) {
  auto g = parse_group_spec("zmod:257");
  LazyPermutation p(g, Rng(1));
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const Element x = g.sample(rng);
    const Element y = p.forward(x);
    EXPECT_EQ(p.forward(x), y);
    EXPECT_EQ(p.backward(y), x);
  }
  EXPECT_TRUE(p.is_partial_bijection());
}

TEST(LazyPermutation, PartialBijectionAfterEveryMutation) {
  for (const char* spec : {"zmod:6", "sym:3", "dihedral:5", "xor:5"}) {
    auto g = parse_group_spec(spec);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      LazyPermutation p(g, Rng(seed));
      Rng rng(seed + 1000);
      for (int i = 0; i < 3 * static_cast<int>(g.order()); ++i) {
        const Element v = g.sample(rng);
        const Element w = rng.coin() ? p.forward(v) : p.backward(v);
        ASSERT_TRUE(g.contains(w));
        ASSERT_TRUE(p.is_partial_bijection()) << spec;
      }
      for (const auto& v : g.enumerate()) p.forward(v);
      EXPECT_TRUE(p.is_total());
      EXPECT_TRUE(p.is_partial_bijection());
    }
  }
}

TEST(LazyPermutation, DefineNeverRedefines) {
  auto g = parse_group_spec("zmod:5");
  LazyPermutation p(g, Rng(1));
  p.define(g.from_integer(1), g.from_integer(4));
  EXPECT_EQ(p.forward(g.from_integer(1)), g.from_integer(4));
  EXPECT_NO_THROW(p.define(g.from_integer(1), g.from_integer(4)));
  EXPECT_THROW(p.define(g.from_integer(1), g.from_integer(3)), DomainError);
  EXPECT_THROW(p.define(g.from_integer(2), g.from_integer(4)), DomainError);
  EXPECT_THROW(p.forward(Element{"\x09"}), DomainError);
}

TEST(LazyPermutation, ZmodFourUniformOverAllPermutations) {
  auto g = parse_group_spec("zmod:4");
  std::vector<std::uint64_t> counts(24);
  for (std::uint64_t seed = 0; seed < 24000; ++seed) {
    LazyPermutation p(g, Rng(seed));
    ++counts[rank_of(realized(g, p))];
  }
  for (auto c : counts) EXPECT_GT(c, 0u);
  for (auto c : counts) EXPECT_TRUE(gemlab::testing::within_sigmas(c, 24000, 1.0 / 24, 4.5)) << c;
  EXPECT_GT(gemlab::testing::chi_square_uniform_p(counts), 0.001);
}

TEST(LazyPermutation, ExactlyUniformUnderAnyQueryOrder) {
  // Every interleaving of forward/backward queries that covers the group
  // yields each of the n! permutations with probability exactly 1/n!.
  for (const char* spec : {"zmod:3", "zmod:4", "zmod:5", "sym:2"}) {
    auto g = parse_group_spec(spec);
    const auto all = g.enumerate();
    std::uint64_t fact = 1;
    for (std::uint64_t i = 2; i <= g.order(); ++i) fact *= i;
    for (int pattern = 0; pattern < 4; ++pattern) {
      std::map<std::uint64_t, Rational> dist;
      ChoiceTree tree;
      tree.for_each_path([&] {
        LazyPermutation p(g, tree);
        for (std::size_t i = 0; i < all.size(); ++i) {
          const bool back = (pattern % 2 == 1) == (i % 2 == 0);
          const Element& v = pattern < 2 ? all[i] : all[all.size() - 1 - i];
          if (back) {
            if (!p.find_backward(v)) p.backward(v);
          } else if (!p.find_forward(v)) {
            p.forward(v);
          }
        }
        for (const auto& x : all) {
          if (!p.find_forward(x)) p.forward(x);
        }
        dist[rank_of(realized(g, p))] += tree.weight();
      });
      ASSERT_EQ(dist.size(), fact) << spec;
      for (const auto& [rank, w] : dist) EXPECT_EQ(w, ratio(1, fact)) << spec;
    }
  }
}

TEST(FullySampled, EveryPointDefinedBothWays) {
  auto g = parse_group_spec("dihedral:6");
  auto p = fully_sampled_permutation(g, Rng(5));
  EXPECT_TRUE(p.is_total());
  for (const auto& x : g.enumerate()) {
    ASSERT_NE(p.find_forward(x), nullptr);
    ASSERT_NE(p.find_backward(x), nullptr);
  }
  EXPECT_TRUE(p.is_partial_bijection());
  EXPECT_THROW(fully_sampled_permutation(parse_group_spec("sym:10"), Rng(1)), CapacityError);
}

TEST(FullySampled, ZmodThreeUniformAndMatchesLazy) {
  auto g = parse_group_spec("zmod:3");
  std::vector<std::uint64_t> eager(6), lazy(6);
  for (std::uint64_t seed = 0; seed < 6000; ++seed) {
    auto p = fully_sampled_permutation(g, Rng(seed));
    ++eager[rank_of(realized(g, p))];
    LazyPermutation q(g, Rng(seed + 1'000'000));
    ++lazy[rank_of(realized(g, q))];
  }
  for (auto c : eager) EXPECT_TRUE(gemlab::testing::within_sigmas(c, 6000, 1.0 / 6, 4)) << c;
  EXPECT_GT(gemlab::testing::chi_square_uniform_p(eager), 0.001);
  EXPECT_GT(gemlab::testing::chi_square_two_sample_p(eager, lazy), 0.001);
}

TEST(LazyFunction, RepeatsAgree) {
  auto g = parse_group_spec("sym:4");
  LazyFunction f(g, Rng(3));
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const Element x = g.sample(rng);
    EXPECT_EQ(f(x), f(x));
  }
  EXPECT_THROW(f(Element{"zz"}), DomainError);
}

TEST(LazyFunction, FreshOutputsUniformOnZmodTwo) {
  auto g = parse_group_spec("zmod:2");
  std::uint64_t ones = 0;
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    LazyFunction f(g, Rng(seed));
    ones += g.to_integer(f(g.identity()));
  }
  EXPECT_TRUE(gemlab::testing::within_sigmas(ones, 20000, 0.5, 4)) << ones;
}

TEST(LazyFunction, CollisionProbabilityExactlyHalfOnZmodTwo) {
  auto g = parse_group_spec("zmod:2");
  Rational collide{0};
  ChoiceTree tree;
  tree.for_each_path([&] {
    LazyFunction f(g, tree);
    if (f(g.from_integer(0)) == f(g.from_integer(1))) collide += tree.weight();
  });
  EXPECT_EQ(tree.paths(), 4u);
  EXPECT_EQ(collide, ratio(1, 2));

  std::uint64_t hits = 0;
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    LazyFunction f(g, Rng(seed));
    hits += f(g.from_integer(0)) == f(g.from_integer(1)) ? 1 : 0;
  }
  EXPECT_TRUE(gemlab::testing::within_sigmas(hits, 20000, 0.5, 4)) << hits;
}

TEST(Sampler, UntilReportsRejectionWithExactWeights) {
  // Excluding 0 and rejecting 1 on zmod:4: accepted {2, 3}; the clean path
  // has probability 2/3, the path through a rejection 1/3.
  auto g = parse_group_spec("zmod:4");
  std::map<std::pair<std::uint64_t, bool>, Rational> dist;
  ChoiceTree tree;
  tree.for_each_path([&] {
    auto r = tree.uniform_until(
        g, [&](const Element& e) { return g.to_integer(e) == 0; },
        [&](const Element& e) { return g.to_integer(e) == 1; });
    dist[{g.to_integer(r.value), r.rejected_any}] += tree.weight();
  });
  EXPECT_EQ(dist.at({2, false}), ratio(1, 3));
  EXPECT_EQ(dist.at({3, false}), ratio(1, 3));
  EXPECT_EQ(dist.at({2, true}), ratio(1, 6));
  EXPECT_EQ(dist.at({3, true}), ratio(1, 6));

  std::uint64_t rejected = 0;
  RngSampler s(7);
  for (int i = 0; i < 30000; ++i) {
    auto r = s.uniform_until(
        g, [&](const Element& e) { return g.to_integer(e) == 0; },
        [&](const Element& e) { return g.to_integer(e) == 1; });
    ASSERT_GE(g.to_integer(r.value), 2u);
    rejected += r.rejected_any ? 1 : 0;
  }
  EXPECT_TRUE(gemlab::testing::within_sigmas(rejected, 30000, 1.0 / 3, 4)) << rejected;
}

TEST(Sampler, EmptyChoicesAreErrors) {
  auto g = parse_group_spec("zmod:2");
  RngSampler s(1);
  EXPECT_THROW(s.uniform_excluding(g, [](const Element&) { return true; }), DomainError);
  EXPECT_THROW(
      s.uniform_until(g, [](const Element&) { return false; }, [](const Element&) { return true; }),
      DomainError);
}
