#include "gemlab/oracle.hpp"

#include <algorithm>

#include "gemlab/errors.hpp"

namespace gemlab {

LazyPermutation::LazyPermutation(GroupHandle domain, Rng rng)
    : domain_(std::move(domain)),
      owned_(std::make_unique<RngSampler>(std::move(rng))),
      sampler_(owned_.get()) {}

LazyPermutation::LazyPermutation(GroupHandle domain, Sampler& sampler)
    : domain_(std::move(domain)), sampler_(&sampler) {}

Element LazyPermutation::forward(const Element& x) {
  if (auto it = forward_.find(x); it != forward_.end()) return it->second;
  if (!domain_.contains(x)) throw DomainError("permutation query outside " + domain_.spec());
  // |defined| < |G| here because x itself is undefined, so a fresh value exists.
  Element y = sampler_->uniform_excluding(
      domain_, [this](const Element& c) { return backward_.contains(c); });
  forward_.emplace(x, y);
  backward_.emplace(y, x);
  return y;
}

Element LazyPermutation::backward(const Element& y) {
  if (auto it = backward_.find(y); it != backward_.end()) return it->second;
  if (!domain_.contains(y)) throw DomainError("permutation query outside " + domain_.spec());
  Element x = sampler_->uniform_excluding(
      domain_, [this](const Element& c) { return forward_.contains(c); });
  forward_.emplace(x, y);
  backward_.emplace(y, x);
  return x;
}

Element LazyPermutation::query(Direction direction, const Element& v) {
  return direction == Direction::forward ? forward(v) : backward(v);
}

const Element* LazyPermutation::find_forward(const Element& x) const {
  auto it = forward_.find(x);
  return it == forward_.end() ? nullptr : &it->second;
}

const Element* LazyPermutation::find_backward(const Element& y) const {
  auto it = backward_.find(y);
  return it == backward_.end() ? nullptr : &it->second;
}

void LazyPermutation::define(const Element& x, const Element& y) {
  if (!domain_.contains(x) || !domain_.contains(y)) {
    throw DomainError("permutation definition outside " + domain_.spec());
  }
  const Element* fx = find_forward(x);
  const Element* by = find_backward(y);
  if (fx && *fx == y) return;
  if (fx || by) throw DomainError("permutation point already defined differently");
  forward_.emplace(x, y);
  backward_.emplace(y, x);
}

bool LazyPermutation::is_partial_bijection() const {
  if (forward_.size() != backward_.size()) return false;
  return std::all_of(forward_.begin(), forward_.end(), [this](const auto& kv) {
    auto it = backward_.find(kv.second);
    return it != backward_.end() && it->second == kv.first;
  });
}

LazyPermutation fully_sampled_permutation(const GroupHandle& g, Rng rng) {
  const auto domain = g.enumerate();
  auto images = domain;
  for (std::size_t i = images.size(); i > 1; --i) {
    std::swap(images[i - 1], images[rng.below(i)]);
  }
  LazyPermutation p(g, std::move(rng));
  for (std::size_t i = 0; i < domain.size(); ++i) p.define(domain[i], images[i]);
  return p;
}

LazyFunction::LazyFunction(GroupHandle domain, Rng rng)
    : domain_(std::move(domain)),
      owned_(std::make_unique<RngSampler>(std::move(rng))),
      sampler_(owned_.get()) {}

LazyFunction::LazyFunction(GroupHandle domain, Sampler& sampler)
    : domain_(std::move(domain)), sampler_(&sampler) {}

Element LazyFunction::query(const Element& x) {
  if (auto it = table_.find(x); it != table_.end()) return it->second;
  if (!domain_.contains(x)) throw DomainError("function query outside " + domain_.spec());
  Element y = sampler_->uniform(domain_);
  table_.emplace(x, y);
  return y;
}

const Element* LazyFunction::find(const Element& x) const {
  auto it = table_.find(x);
  return it == table_.end() ? nullptr : &it->second;
}

}  // namespace gemlab
