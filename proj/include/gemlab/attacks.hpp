#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gemlab/even_mansour.hpp"
#include "gemlab/feistel.hpp"
#include "gemlab/group.hpp"
#include "gemlab/random.hpp"

namespace gemlab {

enum class Guess { cipher, random };

const char* to_string(Guess g);

struct Verdict {
  Guess guess = Guess::random;
  std::size_t trials = 0;
  /// Fraction of trials in which the distinguishing relation held.
  double success_rate = 0.0;
};

/// F(1) leaks its input: output.left == input.right. Guesses cipher iff the
/// relation holds on every one of `trials` random queries.
Verdict distinguish_f1(PairPermutationOracle& oracle, std::size_t trials, Rng& rng);

/// F(2) distinguisher. Each probe picks a fresh right half R and queries
/// (1, R) and (probe, R); under F(2) the left outputs satisfy
/// L2' * L2^-1 = probe. Guesses cipher iff this holds for every probe.
/// Throws PreconditionError if `probe` is the identity and ConfigError if
/// `probes` is 0 or exceeds |G|.
Verdict distinguish_f2(PairPermutationOracle& oracle, const Element& probe, std::size_t probes,
                       Rng& rng);

/// Outcome of one run of the 3-round SPRP test, exposed for exact analysis.
bool f3_sprp_trial(PairPermutationOracle& oracle, Rng& rng);

/// The 4-step SPRP distinguisher against 3-round Feistel:
///   1. pick (L0, R0) and (L0', R0) with L0 != L0'
///   2. encrypt both, getting (L3, R3) and (L3', R3')
///   3. decrypt (L3', L0 * L0'^-1 * R3'), getting (L0'', R0'')
///   4. the relation is R0'' == L3' * L3^-1 * R0
/// Guesses cipher iff the relation holds on all trials. Needs |G| >= 2.
Verdict distinguish_f3_sprp(PairPermutationOracle& oracle, std::size_t trials, Rng& rng);

/// Forward access to an encryption oracle E and a public permutation P over
/// one group, with query counts. The slide attack and verify_key use only
/// this interface, so they run against real Even-Mansour instances or any
/// other pair of maps.
class EmAttackOracles {
 public:
  virtual ~EmAttackOracles() = default;

  virtual const GroupHandle& group() const = 0;

  Element encrypt(const Element& m) {
    ++encrypt_queries_;
    return do_encrypt(m);
  }
  Element permute(const Element& x) {
    ++permute_queries_;
    return do_permute(x);
  }

  std::size_t encrypt_queries() const { return encrypt_queries_; }
  std::size_t permute_queries() const { return permute_queries_; }

 protected:
  virtual Element do_encrypt(const Element& m) = 0;
  virtual Element do_permute(const Element& x) = 0;

 private:
  std::size_t encrypt_queries_ = 0;
  std::size_t permute_queries_ = 0;
};

class EmInstanceOracles final : public EmAttackOracles {
 public:
  explicit EmInstanceOracles(EmInstance& inst) : inst_(inst) {}
  const GroupHandle& group() const override { return inst_.group(); }

 protected:
  Element do_encrypt(const Element& m) override { return inst_.encrypt(m); }
  Element do_permute(const Element& x) override { return inst_.perm().forward(x); }

 private:
  EmInstance& inst_;
};

/// `count` distinct uniform elements of `g`, in draw order.
std::vector<Element> sample_distinct(const GroupHandle& g, std::uint64_t count, Rng& rng);

struct SlideConfig {
  /// Number of E queries and of P queries; ceil_sqrt(|G|) is the usual choice.
  std::uint64_t d = 0;
  std::size_t verify_checks = 8;
};

struct SlideResult {
  std::optional<Element> key;
  std::uint64_t d = 0;
  /// Queries made while collecting the table (d each when |G| allows).
  std::size_t encrypt_queries = 0;
  std::size_t permute_queries = 0;
  /// Queries spent checking candidate keys.
  std::size_t verify_encrypt_queries = 0;
  std::size_t verify_permute_queries = 0;
  std::size_t candidates = 0;
};

/// ceil(sqrt(n)).
std::uint64_t ceil_sqrt(std::uint64_t n);

/// Collection phase of the slide attack: d distinct random E queries and d
/// distinct random P queries, then every candidate key x_i^-1 * y_j from a
/// pair with E(x_i) * y_j^-1 == P(y_j) * x_i^-1, deduplicated, in (i, j)
/// order. Abelian groups use a hash join on E(x_i) * x_i = P(y_j) * y_j;
/// otherwise all d^2 pairs are scanned.
/// Throws ConfigError if d is 0 or exceeds |G|.
std::vector<Element> slide_candidates(EmAttackOracles& oracles, std::uint64_t d, Rng& rng);

/// Slide attack on one-key Even-Mansour.
///
/// Queries E on d distinct random x_i and P on d distinct random y_j, then
/// looks for every pair with E(x_i) * y_j^-1 == P(y_j) * x_i^-1. A slid pair
/// (y_j = x_i * k) always satisfies it. Each candidate k = x_i^-1 * y_j is
/// checked with verify_key; the first verified one is returned.
///
/// Throws ConfigError if cfg.d is zero or exceeds |G|, PreconditionError if
/// cfg.verify_checks is zero.
SlideResult slide_attack(EmAttackOracles& oracles, const SlideConfig& cfg, Rng& rng);

/// True iff E(x) == P(x * k) * k for `n_checks` random x.
/// Throws PreconditionError if n_checks is 0.
bool verify_key(EmAttackOracles& oracles, const Element& k, std::size_t n_checks, Rng& rng);

}  // namespace gemlab
