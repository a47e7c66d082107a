#include "gemlab/sampler.hpp"

#include <stdexcept>

#include "gemlab/errors.hpp"

namespace gemlab {

namespace {

// Consecutive failed draws tolerated before falling back to an explicit
// candidate list (only possible for enumerable groups).
constexpr int kRejectionPatience = 4096;

std::vector<Element> admissible(const GroupHandle& g, const ElementPredicate& excluded) {
  std::vector<Element> out;
  for (auto& e : g.enumerate()) {
    if (!excluded(e)) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

Element RngSampler::uniform(const GroupHandle& g) { return g.sample(rng_); }

Element RngSampler::uniform_excluding(const GroupHandle& g, const ElementPredicate& excluded) {
  for (int attempt = 0; attempt < kRejectionPatience; ++attempt) {
    Element e = g.sample(rng_);
    if (!excluded(e)) return e;
  }
  // Dense exclusion: pick directly among the admissible elements, which has
  // the same distribution as continuing to reject.
  auto pool = admissible(g, excluded);
  if (pool.empty()) throw DomainError("no admissible element left in " + g.spec());
  return pool[rng_.below(pool.size())];
}

Redraw RngSampler::uniform_until(const GroupHandle& g, const ElementPredicate& excluded,
                                 const ElementPredicate& reject) {
  bool rejected = false;
  for (int attempt = 0; attempt < kRejectionPatience; ++attempt) {
    Element e = uniform_excluding(g, excluded);
    if (!reject(e)) return {std::move(e), rejected};
    rejected = true;
  }
  auto pool = admissible(g, [&](const Element& e) { return excluded(e) || reject(e); });
  if (pool.empty()) throw DomainError("redraw loop on " + g.spec() + " can never terminate");
  return {pool[rng_.below(pool.size())], true};
}

void ChoiceTree::begin_path() {
  depth_ = 0;
  weight_ = 1;
  if (++paths_ > max_paths_) {
    throw CapacityError("exhaustive enumeration exceeded " + std::to_string(max_paths_) + " paths");
  }
}

bool ChoiceTree::advance() {
  if (depth_ < path_.size()) path_.resize(depth_);
  while (!path_.empty()) {
    Node& last = path_.back();
    if (last.index + 1 < last.arity) {
      ++last.index;
      return true;
    }
    path_.pop_back();
  }
  return false;
}

std::size_t ChoiceTree::branch(std::size_t arity, std::vector<Rational> weights) {
  if (arity == 0) throw DomainError("choice over an empty set");
  if (depth_ < path_.size()) {
    if (path_[depth_].arity != arity) {
      throw std::logic_error("computation under ChoiceTree is not deterministic");
    }
  } else {
    path_.push_back(Node{0, arity, std::move(weights)});
  }
  const Node& node = path_[depth_++];
  if (node.weights.empty()) {
    weight_ /= static_cast<unsigned long long>(arity);
  } else {
    weight_ *= node.weights[node.index];
  }
  return node.index;
}

std::size_t ChoiceTree::choose_uniform(std::size_t arity) { return branch(arity, {}); }

Element ChoiceTree::uniform(const GroupHandle& g) {
  const auto n = g.order();
  if (n > kEnumerationCap) throw CapacityError(g.spec() + " is too large to enumerate choices");
  return g.element_at(choose_uniform(static_cast<std::size_t>(n)));
}

Element ChoiceTree::uniform_excluding(const GroupHandle& g, const ElementPredicate& excluded) {
  auto pool = admissible(g, excluded);
  if (pool.empty()) throw DomainError("no admissible element left in " + g.spec());
  return pool[choose_uniform(pool.size())];
}

Redraw ChoiceTree::uniform_until(const GroupHandle& g, const ElementPredicate& excluded,
                                 const ElementPredicate& reject) {
  auto pool = admissible(g, excluded);
  std::vector<Element> accepted;
  for (const auto& e : pool) {
    if (!reject(e)) accepted.push_back(e);
  }
  if (accepted.empty()) {
    throw DomainError("redraw loop on " + g.spec() + " can never terminate");
  }
  const std::size_t total = pool.size();
  const std::size_t acc = accepted.size();
  const std::size_t rej = total - acc;
  // (a, clean): the first draw is a, probability 1/|pool|.
  // (a, rejected): at least one rejection and then a, (rej/|pool|) / |accepted|.
  std::vector<Rational> weights(acc, ratio(1, total));
  if (rej > 0) weights.resize(2 * acc, ratio(rej, static_cast<std::uint64_t>(total) * acc));
  const std::size_t arity = weights.size();
  const std::size_t pick = branch(arity, std::move(weights));
  return {accepted[pick % acc], pick >= acc};
}

}  // namespace gemlab
