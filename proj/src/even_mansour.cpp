#include "gemlab/even_mansour.hpp"

#include "gemlab/errors.hpp"

namespace gemlab {

Element em_keygen(const GroupHandle& g, Rng& rng) { return g.sample(rng); }

EmInstance::EmInstance(GroupHandle group, Element key, LazyPermutation perm)
    : group_(std::move(group)), key_(std::move(key)), perm_(std::move(perm)) {
  if (!group_.contains(key_)) throw DomainError("key is not an element of " + group_.spec());
  if (!(perm_.domain() == group_)) throw DomainError("permutation domain differs from key group");
  key_inv_ = group_.inv(key_);
}

Element EmInstance::encrypt(const Element& m) {
  return group_.op(perm_.forward(group_.op(m, key_)), key_);
}

Element EmInstance::decrypt(const Element& c) {
  return group_.op(perm_.backward(group_.op(c, key_inv_)), key_inv_);
}

EmInstance make_em_instance(const GroupHandle& g, Rng& rng) {
  Element key = em_keygen(g, rng);
  return EmInstance(g, std::move(key), LazyPermutation(g, rng.split()));
}

}  // namespace gemlab
