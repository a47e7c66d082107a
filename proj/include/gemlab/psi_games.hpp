#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gemlab/em_games.hpp"
#include "gemlab/errors.hpp"
#include "gemlab/feistel.hpp"
#include "gemlab/group.hpp"
#include "gemlab/parallel.hpp"
#include "gemlab/random.hpp"
#include "gemlab/sampler.hpp"
#include "gemlab/stats.hpp"
#include "gemlab/transcript.hpp"

namespace gemlab {

/// The four oracles of the Psi setting: a cipher on G^2 in both directions
/// and the round-function oracles f and g on G.
class PsiOracles {
 public:
  virtual ~PsiOracles() = default;
  virtual const GroupHandle& half() const = 0;
  virtual FeistelPair encrypt(const FeistelPair& x) = 0;
  virtual FeistelPair decrypt(const FeistelPair& y) = 0;
  virtual Element f(const Element& x) = 0;
  virtual Element g(const Element& x) = 0;
};

using PsiAdversary = std::function<bool(PsiOracles&)>;

/// psi:       Psi_k^{f,g} with O^f = f and O^g = g.
/// psi_tilde: cipher as in psi, but O^g answered by an independent h.
/// r_tilde:   a repeated cipher query gets its earlier answer, anything
///            else a uniform element of G^2; O^f, O^g from f and g.
/// random:    a uniform permutation of G^2; O^f, O^g from f and g.
enum class PsiGame { psi, psi_tilde, r_tilde, random };

const char* to_string(PsiGame g);

struct PsiGameOptions {
  /// Use this key instead of drawing one (psi and psi_tilde only).
  std::optional<PsiKey> key;
  bool enforce_protocol = true;
};

/// One run of a Psi-setting game as an oracle bundle, with the same budget
/// (qc, qf, qg) and protocol enforcement as EmGameOracles. The key is drawn
/// first, then f, g (and h) and the cipher are sampled lazily.
class PsiGameOracles final : public PsiOracles {
 public:
  PsiGameOracles(PsiGame variant, GroupHandle half, QueryBudget budget, Sampler& sampler,
                 PsiGameOptions opts = {});
  PsiGameOracles(PsiGame variant, GroupHandle half, QueryBudget budget, Rng rng,
                 PsiGameOptions opts = {});
  ~PsiGameOracles() override;

  const GroupHandle& half() const override;
  FeistelPair encrypt(const FeistelPair& x) override;
  FeistelPair decrypt(const FeistelPair& y) override;
  Element f(const Element& x) override;
  Element g(const Element& x) override;

  PsiGame variant() const;
  const Transcript& transcript() const;
  /// Set for psi and psi_tilde.
  const std::optional<PsiKey>& key() const;

  struct Engine;

 private:
  std::unique_ptr<Sampler> owned_;
  std::unique_ptr<Engine> engine_;
};

struct PsiGameOutcome {
  bool output = false;
  Transcript transcript;
  std::optional<PsiKey> key;
};

PsiGameOutcome run_psi_game(PsiGame variant, const PsiAdversary& adversary,
                            const GroupHandle& half, const QueryBudget& budget, Sampler& sampler,
                            PsiGameOptions opts = {});
PsiGameOutcome run_psi_game(PsiGame variant, const PsiAdversary& adversary,
                            const GroupHandle& half, const QueryBudget& budget, Rng& rng,
                            PsiGameOptions opts = {});

/// The cipher oracles of a Psi bundle as a PairPermutationOracle, so the
/// Feistel distinguishers can run against it. Pairs already seen are
/// answered from a cache and never asked twice.
class PsiCipherView final : public PairPermutationOracle {
 public:
  explicit PsiCipherView(PsiOracles& o) : o_(o) {}
  const GroupHandle& half() const override { return o_.half(); }

 protected:
  FeistelPair do_forward(const FeistelPair& x) override;
  FeistelPair do_backward(const FeistelPair& y) override;

 private:
  static std::string key(const FeistelPair& p) { return p.left.bytes + '|' + p.right.bytes; }

  PsiOracles& o_;
  std::unordered_map<std::string, FeistelPair> fwd_;
  std::unordered_map<std::string, FeistelPair> bwd_;
};

/// A world is a factory for fresh oracle bundles; the adversary gets its
/// own generator for any internal coins.
template <class Oracles>
using WorldFactory = std::function<std::unique_ptr<Oracles>(Rng&)>;
template <class Oracles>
using RandomizedAdversary = std::function<bool(Oracles&, Rng&)>;

/// Output bits of `samples` independent runs of `adversary` in `world`.
/// Run i uses seed derive_seed(derive_seed(seed, stream), i), so the bits do
/// not depend on thread count or scheduling.
template <class Oracles>
std::vector<char> world_bits(const RandomizedAdversary<Oracles>& adversary,
                             const WorldFactory<Oracles>& world, std::uint64_t samples,
                             std::uint64_t seed, std::uint64_t stream, unsigned threads = 0) {
  std::vector<char> bits(samples);
  const std::uint64_t base = derive_seed(seed, stream);
  parallel_for(
      samples,
      [&](std::uint64_t i) {
        Rng rng(derive_seed(base, i));
        Rng adv_rng = rng.split();
        auto oracles = world(rng);
        bits[i] = adversary(*oracles, adv_rng) ? 1 : 0;
      },
      threads);
  return bits;
}

/// |Pr[A = 1 | real] - Pr[A = 1 | ideal]| from `samples` independent runs
/// per world (real is stream 0, ideal stream 1 of world_bits).
template <class Oracles>
AdvantageEstimate estimate_advantage(const RandomizedAdversary<Oracles>& adversary,
                                     const WorldFactory<Oracles>& real,
                                     const WorldFactory<Oracles>& ideal, std::uint64_t samples,
                                     std::uint64_t seed, unsigned threads = 0) {
  if (samples == 0) throw ConfigError("samples must be positive");
  const auto r = world_bits(adversary, real, samples, seed, 0, threads);
  const auto i = world_bits(adversary, ideal, samples, seed, 1, threads);
  auto ones = [](const std::vector<char>& bits) {
    std::uint64_t n = 0;
    for (char b : bits) n += static_cast<std::uint64_t>(b);
    return n;
  };
  return make_advantage(ones(r), ones(i), samples);
}

/// Adversary running `trials` rounds of the 3-round SPRP test through the
/// cipher oracles and outputting 1 iff every round passed. Uses 3 cipher
/// queries per round.
RandomizedAdversary<PsiOracles> f3_sprp_adversary(std::size_t trials);

/// Factory for a Psi-setting game world.
WorldFactory<PsiOracles> psi_world(PsiGame variant, GroupHandle half, QueryBudget budget);

/// Factory for an Even-Mansour game world.
WorldFactory<EmOracles> em_world(EmGame variant, GroupHandle g, QueryBudget budget);

}  // namespace gemlab
