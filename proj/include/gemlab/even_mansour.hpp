#pragma once

#include "gemlab/group.hpp"
#include "gemlab/oracle.hpp"
#include "gemlab/random.hpp"

namespace gemlab {

/// Uniform key for the one-key Even-Mansour scheme over `g`.
Element em_keygen(const GroupHandle& g, Rng& rng);

/// One-key Even-Mansour over a (not necessarily abelian) group:
///
///   E_k(m) = P(m * k) * k,    D_k(c) = P^-1(c * k^-1) * k^-1
///
/// Multiplication by the key is always on the right. Encryption and
/// decryption share the single public permutation P.
class EmInstance {
 public:
  EmInstance(GroupHandle group, Element key, LazyPermutation perm);

  const GroupHandle& group() const { return group_; }
  const Element& key() const { return key_; }

  Element encrypt(const Element& m);
  Element decrypt(const Element& c);

  /// The public permutation; queries through it are the P / P^-1 oracles.
  LazyPermutation& perm() { return perm_; }
  const LazyPermutation& perm() const { return perm_; }

 private:
  GroupHandle group_;
  Element key_;
  Element key_inv_;
  LazyPermutation perm_;
};

/// Fresh instance: uniform key, lazily sampled P, both from `rng`.
EmInstance make_em_instance(const GroupHandle& g, Rng& rng);

}  // namespace gemlab
