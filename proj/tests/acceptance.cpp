// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gemlab/attacks.hpp"
#include "gemlab/bounds.hpp"
#include "gemlab/em_games.hpp"
#include "gemlab/even_mansour.hpp"
#include "gemlab/feistel.hpp"
#include "gemlab/psi_games.hpp"
#include "gemlab/sampler.hpp"
#include "gemlab/stats.hpp"
#include "gemlab/transcript.hpp"

using namespace gemlab;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = secs < limit_s;
  const bool pass = out.ok && in_time;
  if (!pass) ++failures;
  std::printf("criterion %2d %-28s %s  %.3fs/%.0fs  %s%s\n", id, name, pass ? "PASS" : "FAIL", secs,
              limit_s, out.note.c_str(), in_time ? "" : " (over time)");
  std::fflush(stdout);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

QueryBudget qc_only(std::uint64_t qc) {
  QueryBudget b;
  b.qc = qc;
  return b;
}

// Exact probability that `trial` says cipher against a uniform permutation
// of G^2, by walking every lazy draw.
Rational exact_ideal_rate(const GroupHandle& g,
                          const std::function<bool(PairPermutationOracle&, Rng&)>& trial) {
  Rational p{0};
  ChoiceTree tree;
  tree.for_each_path([&] {
    RandomPairPermutation pi(g, tree);
    Rng coins(77);
    if (trial(pi, coins)) p += tree.weight();
  });
  return p;
}

Outcome em_correctness() {
  auto g = parse_group_spec("zmod:257");
  Rng rng(1);
  std::uint64_t bad = 0;
  for (int k = 0; k < 20; ++k) {
    EmInstance inst = make_em_instance(g, rng);
    for (const auto& m : g.enumerate()) {
      if (inst.decrypt(inst.encrypt(m)) != m) ++bad;
    }
  }
  return {bad == 0, "20 keys x 257 messages, " + std::to_string(bad) + " mismatches"};
}

Outcome feistel_invertibility() {
  auto g = parse_group_spec("zmod:3");
  // None of these round functions is injective.
  std::vector<RoundFunction> pool = {
      [&](const Element&) { return g.from_integer(2); },
      [&](const Element& x) { return g.from_integer(g.to_integer(x) == 0 ? 1 : 0); },
      [&](const Element& x) { return g.to_integer(x) == 2 ? g.from_integer(1) : x; },
      [&](const Element&) { return g.identity(); },
  };
  std::uint64_t checked = 0, bad = 0;
  for (std::size_t r = 1; r <= 4; ++r) {
    std::vector<RoundFunction> rounds(pool.begin(), pool.begin() + static_cast<long>(r));
    RoundFunctionChain chain(g, rounds);
    for (const auto& l : g.enumerate()) {
      for (const auto& rr : g.enumerate()) {
        for (const auto& rr2 : g.enumerate()) {
          for (const auto& l2 : g.enumerate()) {
            // All 81 ordered pairs of the 9 plaintexts: round trip and injectivity.
            const FeistelPair a{l, rr}, b{l2, rr2};
            const auto ca = feistel_apply(chain, a, CipherDirection::encrypt);
            const auto cb = feistel_apply(chain, b, CipherDirection::encrypt);
            ++checked;
            if (feistel_apply(chain, ca, CipherDirection::decrypt) != a ||
                feistel_apply(chain, cb, CipherDirection::decrypt) != b || ((a == b) != (ca == cb))) {
              ++bad;
            }
          }
        }
      }
    }
  }
  return {bad == 0, std::to_string(checked) + " checks, " + std::to_string(bad) + " failures"};
}

Outcome f3_break() {
  auto g = parse_group_spec("zmod:1024");
  Rng rng(3);
  int real = 0, ideal = 0;
  for (int i = 0; i < 500; ++i) {
    FeistelOracle f3 = make_random_feistel(g, 3, rng);
    real += distinguish_f3_sprp(f3, 1, rng).guess == Guess::cipher;
    RandomPairPermutation pi(g, rng.split());
    ideal += distinguish_f3_sprp(pi, 1, rng).guess == Guess::cipher;
  }
  const double ideal_rate = ideal / 500.0;
  return {real == 500 && ideal_rate <= 0.05,
          "real " + fmt(real / 500.0) + ", random " + fmt(ideal_rate)};
}

Outcome f1_f2_breaks() {
  std::string note;
  bool ok = true;
  // Closed forms checked against the exhaustive value at |G| = 8.
  auto g8 = parse_group_spec("zmod:8");
  const Rational f1_exact = exact_ideal_rate(g8, [](PairPermutationOracle& o, Rng& r) {
    return distinguish_f1(o, 1, r).guess == Guess::cipher;
  });
  const Element p8 = g8.from_integer(3);
  const Rational f2_exact = exact_ideal_rate(g8, [&](PairPermutationOracle& o, Rng& r) {
    return distinguish_f2(o, p8, 1, r).guess == Guess::cipher;
  });
  auto f1_form = [](std::uint64_t n) { return ratio(1, n); };
  auto f2_form = [](std::uint64_t n) { return ratio(n, n * n - 1); };
  if (f1_exact != f1_form(8) || f2_exact != f2_form(8)) {
    ok = false;
    note += "closed form disagrees with enumeration at 8; ";
  }

  auto g = parse_group_spec("zmod:128");
  Rng rng(4);
  const Element probe = g.from_integer(5);
  const int runs = 20000;
  int real1 = 0, real2 = 0, ideal1 = 0, ideal2 = 0;
  for (int i = 0; i < 200; ++i) {
    FeistelOracle f1 = make_random_feistel(g, 1, rng);
    real1 += distinguish_f1(f1, 4, rng).guess == Guess::cipher;
    FeistelOracle f2 = make_random_feistel(g, 2, rng);
    real2 += distinguish_f2(f2, probe, 4, rng).guess == Guess::cipher;
  }
  for (int i = 0; i < runs; ++i) {
    RandomPairPermutation a(g, rng.split());
    ideal1 += distinguish_f1(a, 1, rng).guess == Guess::cipher;
    RandomPairPermutation b(g, rng.split());
    ideal2 += distinguish_f2(b, probe, 1, rng).guess == Guess::cipher;
  }
  auto within = [&](int hits, const Rational& p, const char* tag) {
    const double pp = to_double(p);
    const double sigma = std::sqrt(pp * (1 - pp) / runs);
    const double rate = static_cast<double>(hits) / runs;
    const bool in = std::abs(rate - pp) <= 3 * sigma;
    note += std::string(tag) + " random " + fmt(rate) + " vs " + fmt(pp) + "; ";
    return in;
  };
  ok = ok && real1 == 200 && real2 == 200;
  ok = within(ideal1, f1_form(128), "F1") && ok;
  ok = within(ideal2, f2_form(128), "F2") && ok;
  note += "real " + fmt(real1 / 200.0) + "/" + fmt(real2 / 200.0);
  return {ok, note};
}

Outcome slide() {
  auto g = parse_group_spec("zmod:4096");
  Rng rng(5);
  SlideConfig cfg;
  cfg.d = 64;
  int hits = 0;
  bool queries_ok = true, verified = true;
  for (int i = 0; i < 200; ++i) {
    EmInstance inst = make_em_instance(g, rng);
    EmInstanceOracles o(inst);
    const SlideResult res = slide_attack(o, cfg, rng);
    queries_ok = queries_ok && res.encrypt_queries == 64 && res.permute_queries == 64;
    if (res.key) {
      EmInstanceOracles check(inst);
      verified = verified && verify_key(check, *res.key, 16, rng);
      hits += *res.key == inst.key();
    }
  }
  const double rate = hits / 200.0;
  const double expected = 1 - std::pow(1 - 1.0 / 4096, 64.0 * 64.0);
  return {rate >= 0.35 && rate <= 0.75 && queries_ok && verified,
          "success " + fmt(rate) + " (exact " + fmt(expected) + "), d queries each " +
              (queries_ok ? "yes" : "no") + ", keys verified " + (verified ? "yes" : "no")};
}

Outcome psi() {
  auto g5 = parse_group_spec("zmod:5");
  Rng rng(6);
  std::uint64_t bad = 0;
  for (int k = 0; k < 10; ++k) {
    PsiInstance inst = make_psi_instance(g5, rng);
    for (const auto& l : g5.enumerate()) {
      for (const auto& r : g5.enumerate()) {
        const FeistelPair x{l, r};
        if (inst.apply(inst.apply(x, CipherDirection::encrypt), CipherDirection::decrypt) != x) ++bad;
      }
    }
  }
  auto g = parse_group_spec("zmod:16");
  const auto est = estimate_advantage(f3_sprp_adversary(1), psi_world(PsiGame::psi, g, qc_only(3)),
                                      psi_world(PsiGame::random, g, qc_only(3)), 100000, 6);
  const double bound = to_double(psi_bound(3, 0, 0, 16));
  return {bad == 0 && est.measured <= bound + est.ci_halfwidth,
          "round-trip mismatches " + std::to_string(bad) + ", advantage " + fmt(est.measured) +
              " +- " + fmt(est.ci_halfwidth) + " vs bound " + fmt(bound)};
}

Outcome bad_event_rates() {
  auto g = parse_group_spec("zmod:64");
  const std::uint64_t qc = 3, qf = 2, qg = 2, n = 10000;
  Rng rng(7);
  std::uint64_t badg = 0, bad = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Transcript tr = random_transcript(g, qc, qf, qg, rng);
    Element kl = g.sample(rng);
    Element kr = g.sample(rng);
    const PsiKey k{kl, kr};
    LazyFunction gf(g, rng.split());
    badg += detect_badg(g, tr, k);
    bad += detect_bad(g, tr, k, gf);
  }
  const double bg = to_double(badg_bound(qc, qg, 64));
  const double bb = to_double(bad_bound(qc, qf, 64));
  const double rg = static_cast<double>(badg) / n, rb = static_cast<double>(bad) / n;
  const double hg = clopper_pearson_halfwidth(badg, n), hb = clopper_pearson_halfwidth(bad, n);
  return {rg <= bg + hg && rb <= bb + hb, "BadG " + fmt(rg) + " vs " + fmt(bg) + ", Bad " +
                                              fmt(rb) + " vs " + fmt(bb)};
}

Outcome bad_keys() {
  auto g = parse_group_spec("zmod:64");
  Rng rng(8);
  std::uint64_t worst = 0;
  for (int i = 0; i < 50; ++i) {
    const EmTranscript tr = random_em_transcript(g, 4, 4, rng);
    worst = std::max(worst, count_bad_keys(g, tr));
  }
  return {worst <= 32, "max bad keys " + std::to_string(worst) + " of bound 32"};
}

Outcome equivalences() {
  std::uint64_t scripts = 0;
  bool ok = true;
  for (const char* spec : {"zmod:2", "zmod:3"}) {
    auto g = parse_group_spec(spec);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (const auto& u : g.enumerate()) {
          for (const auto& v : g.enumerate()) {
            const std::vector<ScriptStep> s = {{static_cast<EmOracleKind>(a), u},
                                               {static_cast<EmOracleKind>(b), v}};
            ok = ok && exhaustive_game_equivalence(EquivalencePairing::x_vs_x_prime, g, s);
            ok = ok && exhaustive_game_equivalence(EquivalencePairing::r_flag_vs_r_prime_flag, g, s);
            ++scripts;
          }
        }
      }
    }
  }
  auto z3 = parse_group_spec("zmod:3");
  const std::vector<ScriptStep> s = {{EmOracleKind::encrypt, z3.identity()},
                                     {EmOracleKind::permute, z3.identity()}};
  const bool mutant_caught =
      !exhaustive_game_equivalence(EquivalencePairing::x_vs_x_prime, z3, s, true);
  return {ok && mutant_caught, std::to_string(scripts) + " scripts equal " + (ok ? "yes" : "no") +
                                   ", mutant detected " + (mutant_caught ? "yes" : "no")};
}

Outcome bound_formulas() {
  bool ok = psi_bound(1, 0, 0, 256) == ratio(2, 256) && psi_bound(0, 0, 0, 256) == 0 &&
            psi_bound(2, 1, 1, 64) == ratio(28, 64) + ratio(4, 64) + ratio(2, 4096) &&
            psi_bound_total_q(1, 256) == ratio(2, 256) &&
            psi_bound_total_q(2, 256) == ratio(16, 256) + ratio(2, 65536);
  std::mt19937_64 gen(10);
  int dominated = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t qc = gen() % 50, qf = gen() % 50, qg = gen() % 50;
    const std::uint64_t order = 2 + gen() % 100000;
    dominated += psi_bound(qc, qf, qg, order) <= psi_bound_total_q(qc + qf + qg, order);
  }
  return {ok && dominated == 1000,
          std::string("examples ") + (ok ? "match" : "differ") + ", dominance " +
              std::to_string(dominated) + "/1000"};
}

}  // namespace

int main() {
  criterion(1, "em-correctness", 1, em_correctness);
  criterion(2, "feistel-invertibility", 1, feistel_invertibility);
  criterion(3, "f3-sprp-break", 10, f3_break);
  criterion(4, "f1-f2-breaks", 10, f1_f2_breaks);
  criterion(5, "slide-attack", 30, slide);
  criterion(6, "psi-correctness-and-bound", 60, psi);
  criterion(7, "bad-event-rates", 30, bad_event_rates);
  criterion(8, "bad-key-count", 5, bad_keys);
  criterion(9, "game-equivalences", 60, equivalences);
  criterion(10, "bound-formulas", 1, bound_formulas);
  return failures == 0 ? 0 : 1;
}
