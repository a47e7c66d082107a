#include "gemlab/feistel.hpp"

#include "gemlab/errors.hpp"

namespace gemlab {

RoundFunction shared_round(std::shared_ptr<LazyFunction> f) {
  return [f = std::move(f)](const Element& x) { return f->query(x); };
}

RoundFunctionChain::RoundFunctionChain(GroupHandle group, std::vector<RoundFunction> rounds)
    : group_(std::move(group)), rounds_(std::move(rounds)) {
  if (rounds_.empty()) throw ConfigError("a Feistel cipher needs at least one round");
}

FeistelPair feistel_round(const GroupHandle& g, const RoundFunction& f, const FeistelPair& p) {
  return {p.right, g.op(p.left, f(p.right))};
}

FeistelPair feistel_unround(const GroupHandle& g, const RoundFunction& f, const FeistelPair& p) {
  // R_{i-1} := L_i, then L_{i-1} := R_i * f(R_{i-1})^-1.
  return {g.op(p.right, g.inv(f(p.left))), p.left};
}

FeistelPair feistel_apply(const RoundFunctionChain& chain, const FeistelPair& p,
                          CipherDirection direction) {
  FeistelPair state = p;
  const auto& g = chain.group();
  if (direction == CipherDirection::encrypt) {
    for (std::size_t i = 0; i < chain.size(); ++i) state = feistel_round(g, chain[i], state);
  } else {
    for (std::size_t i = chain.size(); i-- > 0;) state = feistel_unround(g, chain[i], state);
  }
  return state;
}

PsiInstance::PsiInstance(GroupHandle group, Element key_left, Element key_right,
                         std::shared_ptr<LazyFunction> f, std::shared_ptr<LazyFunction> g)
    : group_(std::move(group)),
      key_left_(std::move(key_left)),
      key_right_(std::move(key_right)),
      f_(std::move(f)),
      g_(std::move(g)),
      chain_(group_, {shared_round(g_), shared_round(f_), shared_round(f_), shared_round(g_)}) {
  if (!group_.contains(key_left_) || !group_.contains(key_right_)) {
    throw DomainError("Psi subkeys must be elements of " + group_.spec());
  }
  key_left_inv_ = group_.inv(key_left_);
  key_right_inv_ = group_.inv(key_right_);
}

FeistelPair PsiInstance::apply(const FeistelPair& v, CipherDirection direction) {
  const auto& G = group_;
  if (direction == CipherDirection::encrypt) {
    FeistelPair keyed{G.op(v.left, key_left_), G.op(v.right, key_right_)};
    FeistelPair out = feistel_apply(chain_, keyed, direction);
    return {G.op(out.left, key_left_), G.op(out.right, key_right_)};
  }
  FeistelPair keyed{G.op(v.left, key_left_inv_), G.op(v.right, key_right_inv_)};
  FeistelPair out = feistel_apply(chain_, keyed, direction);
  return {G.op(out.left, key_left_inv_), G.op(out.right, key_right_inv_)};
}

FeistelPair psi_apply(PsiInstance& inst, const FeistelPair& v, CipherDirection direction) {
  return inst.apply(v, direction);
}

PsiInstance make_psi_instance(const GroupHandle& g, Rng& rng) {
  Element kl = g.sample(rng);
  Element kr = g.sample(rng);
  auto f = std::make_shared<LazyFunction>(g, rng.split());
  auto gg = std::make_shared<LazyFunction>(g, rng.split());
  return PsiInstance(g, std::move(kl), std::move(kr), std::move(f), std::move(gg));
}

RandomPairPermutation::RandomPairPermutation(const GroupHandle& half, Rng rng)
    : half_(half),
      square_(GroupHandle::product(half, half)),
      perm_(square_, std::move(rng)) {}

RandomPairPermutation::RandomPairPermutation(const GroupHandle& half, Sampler& sampler)
    : half_(half), square_(GroupHandle::product(half, half)), perm_(square_, sampler) {}

FeistelPair RandomPairPermutation::do_forward(const FeistelPair& p) {
  auto [l, r] = square_.split(perm_.forward(square_.join(p.left, p.right)));
  return {std::move(l), std::move(r)};
}

FeistelPair RandomPairPermutation::do_backward(const FeistelPair& p) {
  auto [l, r] = square_.split(perm_.backward(square_.join(p.left, p.right)));
  return {std::move(l), std::move(r)};
}

FeistelOracle make_random_feistel(const GroupHandle& g, std::size_t rounds, Rng& rng) {
  std::vector<RoundFunction> fs;
  fs.reserve(rounds);
  for (std::size_t i = 0; i < rounds; ++i) {
    fs.push_back(shared_round(std::make_shared<LazyFunction>(g, rng.split())));
  }
  return FeistelOracle(RoundFunctionChain(g, std::move(fs)));
}

FeistelOracle make_random_feistel_gffg(const GroupHandle& g, Rng& rng) {
  auto f = std::make_shared<LazyFunction>(g, rng.split());
  auto gg = std::make_shared<LazyFunction>(g, rng.split());
  return FeistelOracle(
      RoundFunctionChain(g, {shared_round(gg), shared_round(f), shared_round(f), shared_round(gg)}));
}

}  // namespace gemlab
