#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gemlab/attacks.hpp"
#include "gemlab/group.hpp"
#include "gemlab/random.hpp"
#include "gemlab/rational.hpp"
#include "gemlab/sampler.hpp"
#include "gemlab/transcript.hpp"

namespace gemlab {

/// Query limits. s counts E and D queries together, t counts P and P^-1;
/// qc counts Psi and Psi^-1 together, qf and qg the function oracles.
struct QueryBudget {
  std::uint64_t s = 0;
  std::uint64_t t = 0;
  std::uint64_t qc = 0;
  std::uint64_t qf = 0;
  std::uint64_t qg = 0;
};

/// The BAD flag of a game run. Can be set, never cleared.
class GameFlag {
 public:
  void set_bad() { bad_ = true; }
  bool bad() const { return bad_; }

 private:
  bool bad_ = false;
};

enum class EmOracleKind { encrypt, decrypt, permute, unpermute };

const char* to_string(EmOracleKind k);

struct EmQueryRecord {
  EmOracleKind kind;
  Element query;
  Element answer;

  friend bool operator==(const EmQueryRecord&, const EmQueryRecord&) = default;
};

/// E/D and P/P^-1 oracle access as seen by an Even-Mansour adversary.
class EmOracles {
 public:
  virtual ~EmOracles() = default;
  virtual const GroupHandle& group() const = 0;
  virtual Element encrypt(const Element& m) = 0;
  virtual Element decrypt(const Element& c) = 0;
  virtual Element permute(const Element& x) = 0;
  virtual Element unpermute(const Element& y) = 0;
};

/// Deterministic given its oracle answers; returns its output bit.
using EmAdversary = std::function<bool(EmOracles&)>;

/// R: E/D is an independent lazy random permutation, with the bad-key flag.
/// X: real Even-Mansour, answered so as to stay consistent with P via k,
///    resampling while the key is bad.
/// X': real Even-Mansour with P defined as it goes.
/// R': R with no key during the run; the key is drawn afterwards and the
///     flag set iff it is bad for the final transcripts.
enum class EmGame { R, X, X_prime, R_prime };

const char* to_string(EmGame g);

struct EmGameOptions {
  /// Mutation used to show the equivalence checks are sensitive: Game X
  /// keeps its fresh draw instead of redefining the answer from known values.
  bool corrupt_redefine = false;
  /// Enforce the no-repeated-derivable-query rule (ProtocolError).
  bool enforce_protocol = true;
};

/// One run of an Even-Mansour game, exposed as an oracle bundle.
///
/// Every query is checked against the budget (BudgetError) and, unless
/// disabled, against the rule that an adversary never asks a query whose
/// answer it already holds (ProtocolError).
class EmGameOracles final : public EmOracles {
 public:
  /// Draws all randomness from `sampler`, which must outlive this object.
  EmGameOracles(EmGame variant, GroupHandle group, QueryBudget budget, Sampler& sampler,
                EmGameOptions opts = {});
  /// Owns its randomness.
  EmGameOracles(EmGame variant, GroupHandle group, QueryBudget budget, Rng rng,
                EmGameOptions opts = {});
  ~EmGameOracles() override;

  const GroupHandle& group() const override;
  Element encrypt(const Element& m) override;
  Element decrypt(const Element& c) override;
  Element permute(const Element& x) override;
  Element unpermute(const Element& y) override;

  /// Ends the run (R' draws its key here). Idempotent.
  void finish();

  EmGame variant() const;
  const GameFlag& flag() const;
  /// Flag value after each query, in order (R' only sets it in finish()).
  const std::vector<bool>& flag_trace() const;
  /// The key; for R' only after finish().
  const std::optional<Element>& key() const;
  /// Pairs the adversary has seen: S from E/D, T from P/P^-1.
  const EmTranscript& transcript() const;
  const std::vector<EmQueryRecord>& log() const;

  struct Engine;

 private:
  std::unique_ptr<Sampler> owned_;
  std::unique_ptr<Engine> engine_;
};

struct EmGameOutcome {
  bool output = false;
  bool bad = false;
  std::vector<bool> flag_trace;
  std::optional<Element> key;
  EmTranscript transcript;
  std::vector<EmQueryRecord> log;
};

EmGameOutcome run_em_game(EmGame variant, const EmAdversary& adversary, const GroupHandle& g,
                          const QueryBudget& budget, Sampler& sampler, EmGameOptions opts = {});
EmGameOutcome run_em_game(EmGame variant, const EmAdversary& adversary, const GroupHandle& g,
                          const QueryBudget& budget, Rng& rng, EmGameOptions opts = {});

/// Existential forgery: the adversary returns (m, c) after querying E, D,
/// P, P^-1 of a real instance. It succeeds iff E_k(m) = c and (m, c) was
/// not already obtained from the E/D oracles.
///
/// The key is drawn first, as em_keygen(g, rng), so a test harness holding a
/// copy of `rng` knows it.
using EfpAdversary = std::function<std::pair<Element, Element>(EmOracles&)>;
bool run_efp(const EfpAdversary& adversary, const GroupHandle& g, const QueryBudget& budget,
             Rng& rng);

/// Oracle access in the cracking game. decrypt refuses the challenge
/// ciphertext by returning nullopt.
class CpOracles {
 public:
  virtual ~CpOracles() = default;
  virtual const GroupHandle& group() const = 0;
  virtual const Element& challenge() const = 0;
  virtual Element encrypt(const Element& m) = 0;
  virtual std::optional<Element> decrypt(const Element& c) = 0;
  virtual Element permute(const Element& x) = 0;
  virtual Element unpermute(const Element& y) = 0;
};

using CpAdversary = std::function<Element(CpOracles&)>;

/// Cracking problem: key first (em_keygen), then P, then a uniform m0 with
/// challenge c0 = E_k(m0). Succeeds iff the adversary outputs m0.
bool run_cp(const CpAdversary& adversary, const GroupHandle& g, const QueryBudget& budget,
            Rng& rng);

/// E and P access for attack code over any oracle bundle with encrypt and
/// permute. Answers are cached, so re-asking never reaches the underlying
/// oracles twice.
template <class Oracles>
class CachedAttackView final : public EmAttackOracles {
 public:
  explicit CachedAttackView(Oracles& o) : o_(o) {}
  const GroupHandle& group() const override { return o_.group(); }
  bool seen_encrypt(const Element& m) const { return e_.count(m) != 0; }
  bool seen_permute(const Element& x) const { return p_.count(x) != 0; }

 protected:
  Element do_encrypt(const Element& m) override {
    if (auto it = e_.find(m); it != e_.end()) return it->second;
    return e_.emplace(m, o_.encrypt(m)).first->second;
  }
  Element do_permute(const Element& x) override {
    if (auto it = p_.find(x); it != p_.end()) return it->second;
    return p_.emplace(x, o_.permute(x)).first->second;
  }

 private:
  Oracles& o_;
  ElementMap<Element> e_;
  ElementMap<Element> p_;
};

/// One step of a fixed query script. The operand is a literal element.
struct ScriptStep {
  EmOracleKind kind;
  Element operand;
};

/// Adversary that runs `script` in order. A step whose answer is already
/// known from earlier answers is answered locally instead of being asked.
/// Outputs the parity of the index sum of all answers seen.
EmAdversary script_adversary(std::vector<ScriptStep> script);

enum class EquivalencePairing { x_vs_x_prime, r_flag_vs_r_prime_flag };

/// Exact distribution of a game run over all random choices, keyed by a
/// printable rendering of the observed answer sequence (or, for flag
/// distributions, "bad"/"good").
using ExactDistribution = std::map<std::string, Rational>;

ExactDistribution exact_answer_distribution(EmGame variant, const std::vector<ScriptStep>& script,
                                            const GroupHandle& g, EmGameOptions opts = {});
ExactDistribution exact_flag_distribution(EmGame variant, const std::vector<ScriptStep>& script,
                                          const GroupHandle& g, EmGameOptions opts = {});

/// Enumerates every random choice of both games and compares exactly:
/// X vs X' on the distribution of answer sequences, R vs R' on the
/// probability that the flag ends up bad. `corrupt_x` applies the
/// corrupt_redefine mutation to Game X.
/// Throws CapacityError if |G| > 5 or the script has more than 3 steps.
bool exhaustive_game_equivalence(EquivalencePairing pairing, const GroupHandle& g,
                                 const std::vector<ScriptStep>& script, bool corrupt_x = false);

}  // namespace gemlab
