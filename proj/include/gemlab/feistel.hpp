#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "gemlab/group.hpp"
#include "gemlab/oracle.hpp"
#include "gemlab/random.hpp"

namespace gemlab {

/// A point of G x G, written (L, R).
struct FeistelPair {
  Element left;
  Element right;

  friend bool operator==(const FeistelPair&, const FeistelPair&) = default;
};

enum class CipherDirection { encrypt, decrypt };

/// A round function G -> G. Need not be injective.
using RoundFunction = std::function<Element(const Element&)>;

/// Round function backed by a shared lazy random function. Every copy reads
/// and extends the same table.
RoundFunction shared_round(std::shared_ptr<LazyFunction> f);

/// Round functions f_1..f_r over one group, applied in order when encrypting.
class RoundFunctionChain {
 public:
  /// Throws ConfigError if `rounds` is empty.
  RoundFunctionChain(GroupHandle group, std::vector<RoundFunction> rounds);

  const GroupHandle& group() const { return group_; }
  std::size_t size() const { return rounds_.size(); }
  const RoundFunction& operator[](std::size_t i) const { return rounds_[i]; }

 private:
  GroupHandle group_;
  std::vector<RoundFunction> rounds_;
};

/// (x, y) -> (y, x * f(y)).
FeistelPair feistel_round(const GroupHandle& g, const RoundFunction& f, const FeistelPair& p);

/// Inverse of feistel_round for the same f: (L, R) -> (R * f(L)^-1, L).
/// Works for any f, invertible or not.
FeistelPair feistel_unround(const GroupHandle& g, const RoundFunction& f, const FeistelPair& p);

/// r-round Feistel cipher; decryption runs the rounds in reverse.
FeistelPair feistel_apply(const RoundFunctionChain& chain, const FeistelPair& p,
                          CipherDirection direction);

/// Even-Mansour over G^2 with the 4-round Feistel F_{g,f,f,g} as public
/// permutation:
///
///   Psi_k(x) = F_{g,f,f,g}(x * k) * k,   k = (k^L, k^R)
///
/// The key acts coordinate-wise by right multiplication. Rounds 1 and 4 share
/// the g table, rounds 2 and 3 the f table; the same tables answer direct
/// f and g oracle queries.
class PsiInstance {
 public:
  PsiInstance(GroupHandle group, Element key_left, Element key_right,
              std::shared_ptr<LazyFunction> f, std::shared_ptr<LazyFunction> g);

  const GroupHandle& group() const { return group_; }
  const Element& key_left() const { return key_left_; }
  const Element& key_right() const { return key_right_; }
  LazyFunction& f() { return *f_; }
  LazyFunction& g() { return *g_; }
  const std::shared_ptr<LazyFunction>& f_handle() const { return f_; }
  const std::shared_ptr<LazyFunction>& g_handle() const { return g_; }

  FeistelPair apply(const FeistelPair& v, CipherDirection direction);
  /// The public permutation F_{g,f,f,g}.
  const RoundFunctionChain& chain() const { return chain_; }

 private:
  GroupHandle group_;
  Element key_left_;
  Element key_right_;
  Element key_left_inv_;
  Element key_right_inv_;
  std::shared_ptr<LazyFunction> f_;
  std::shared_ptr<LazyFunction> g_;
  RoundFunctionChain chain_;
};

FeistelPair psi_apply(PsiInstance& inst, const FeistelPair& v, CipherDirection direction);

/// Independent uniform subkeys and fresh lazy f, g, all derived from `rng`.
PsiInstance make_psi_instance(const GroupHandle& g, Rng& rng);

/// Forward/backward access to some permutation of G x G, with query counts.
class PairPermutationOracle {
 public:
  virtual ~PairPermutationOracle() = default;

  virtual const GroupHandle& half() const = 0;

  FeistelPair forward(const FeistelPair& p) {
    ++forward_queries_;
    return do_forward(p);
  }
  FeistelPair backward(const FeistelPair& p) {
    ++backward_queries_;
    return do_backward(p);
  }

  std::size_t forward_queries() const { return forward_queries_; }
  std::size_t backward_queries() const { return backward_queries_; }

 protected:
  virtual FeistelPair do_forward(const FeistelPair& p) = 0;
  virtual FeistelPair do_backward(const FeistelPair& p) = 0;

 private:
  std::size_t forward_queries_ = 0;
  std::size_t backward_queries_ = 0;
};

class FeistelOracle final : public PairPermutationOracle {
 public:
  explicit FeistelOracle(RoundFunctionChain chain) : chain_(std::move(chain)) {}
  const GroupHandle& half() const override { return chain_.group(); }

 protected:
  FeistelPair do_forward(const FeistelPair& p) override {
    return feistel_apply(chain_, p, CipherDirection::encrypt);
  }
  FeistelPair do_backward(const FeistelPair& p) override {
    return feistel_apply(chain_, p, CipherDirection::decrypt);
  }

 private:
  RoundFunctionChain chain_;
};

class PsiOracle final : public PairPermutationOracle {
 public:
  explicit PsiOracle(PsiInstance inst) : inst_(std::move(inst)) {}
  const GroupHandle& half() const override { return inst_.group(); }
  PsiInstance& instance() { return inst_; }

 protected:
  FeistelPair do_forward(const FeistelPair& p) override {
    return inst_.apply(p, CipherDirection::encrypt);
  }
  FeistelPair do_backward(const FeistelPair& p) override {
    return inst_.apply(p, CipherDirection::decrypt);
  }

 private:
  PsiInstance inst_;
};

/// Uniformly random permutation of G x G, sampled lazily.
class RandomPairPermutation final : public PairPermutationOracle {
 public:
  RandomPairPermutation(const GroupHandle& half, Rng rng);
  RandomPairPermutation(const GroupHandle& half, Sampler& sampler);
  const GroupHandle& half() const override { return half_; }

 protected:
  FeistelPair do_forward(const FeistelPair& p) override;
  FeistelPair do_backward(const FeistelPair& p) override;

 private:
  GroupHandle half_;
  GroupHandle square_;
  LazyPermutation perm_;
};

/// r-round Feistel cipher with independent lazy random round functions.
FeistelOracle make_random_feistel(const GroupHandle& g, std::size_t rounds, Rng& rng);

/// F_{g,f,f,g} with lazy random f and g.
FeistelOracle make_random_feistel_gffg(const GroupHandle& g, Rng& rng);

}  // namespace gemlab
