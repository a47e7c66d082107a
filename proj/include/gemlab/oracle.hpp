#pragma once

#include <cstddef>
#include <memory>

#include "gemlab/group.hpp"
#include "gemlab/random.hpp"
#include "gemlab/sampler.hpp"

namespace gemlab {

enum class Direction { forward, backward };

/// A uniformly random permutation of a group, defined point by point as it
/// is queried.
///
/// Fresh forward answers are drawn uniformly from the not-yet-used part of
/// the codomain (by rejection against the used set), fresh backward answers
/// likewise from the unused part of the domain. The forward and backward
/// tables are always mutually inverse partial bijections.
///
/// Single-threaded mutable state; movable, not copyable.
class LazyPermutation {
 public:
  /// Owns its randomness.
  LazyPermutation(GroupHandle domain, Rng rng);
  /// Draws from an external source, which must outlive the permutation.
  LazyPermutation(GroupHandle domain, Sampler& sampler);

  LazyPermutation(LazyPermutation&&) noexcept = default;
  LazyPermutation& operator=(LazyPermutation&&) noexcept = default;
  LazyPermutation(const LazyPermutation&) = delete;
  LazyPermutation& operator=(const LazyPermutation&) = delete;

  const GroupHandle& domain() const { return domain_; }

  Element forward(const Element& x);
  Element backward(const Element& y);
  Element query(Direction direction, const Element& v);

  /// Lookups that never sample; nullptr when undefined.
  const Element* find_forward(const Element& x) const;
  const Element* find_backward(const Element& y) const;

  /// Fixes P(x) = y. Throws DomainError if that contradicts a defined pair.
  void define(const Element& x, const Element& y);

  std::size_t size() const { return forward_.size(); }
  bool is_total() const { return forward_.size() == domain_.order(); }
  const ElementMap<Element>& forward_table() const { return forward_; }

  /// Checks the partial-bijection invariant (for tests and debugging).
  bool is_partial_bijection() const;

 private:
  GroupHandle domain_;
  std::unique_ptr<Sampler> owned_;
  Sampler* sampler_;
  ElementMap<Element> forward_;
  ElementMap<Element> backward_;
};

/// Eagerly samples a uniform permutation of an enumerable group (Fisher-Yates).
LazyPermutation fully_sampled_permutation(const GroupHandle& g, Rng rng);

/// A uniformly random function on a group, defined as it is queried.
/// Repeated queries agree; distinct inputs may collide.
class LazyFunction {
 public:
  LazyFunction(GroupHandle domain, Rng rng);
  LazyFunction(GroupHandle domain, Sampler& sampler);

  LazyFunction(LazyFunction&&) noexcept = default;
  LazyFunction& operator=(LazyFunction&&) noexcept = default;
  LazyFunction(const LazyFunction&) = delete;
  LazyFunction& operator=(const LazyFunction&) = delete;

  const GroupHandle& domain() const { return domain_; }

  Element query(const Element& x);
  Element operator()(const Element& x) { return query(x); }
  const Element* find(const Element& x) const;

  std::size_t size() const { return table_.size(); }
  const ElementMap<Element>& table() const { return table_; }

 private:
  GroupHandle domain_;
  std::unique_ptr<Sampler> owned_;
  Sampler* sampler_;
  ElementMap<Element> table_;
};

}  // namespace gemlab
