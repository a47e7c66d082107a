#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "gemlab/group.hpp"
#include "gemlab/random.hpp"
#include "gemlab/rational.hpp"

namespace gemlab {

using ElementPredicate = std::function<bool(const Element&)>;

/// Outcome of a draw-until-accepted loop.
struct Redraw {
  Element value;
  bool rejected_any = false;
};

/// Source of the uniform choices made by oracles and games.
///
/// Two implementations exist: RngSampler draws from a seeded generator, and
/// ChoiceTree walks every possible outcome with its exact probability so that
/// small games can be evaluated exhaustively through the same code path.
class Sampler {
 public:
  virtual ~Sampler() = default;

  /// Uniform over the whole group.
  virtual Element uniform(const GroupHandle& g) = 0;

  /// Uniform over { x : !excluded(x) }.
  virtual Element uniform_excluding(const GroupHandle& g, const ElementPredicate& excluded) = 0;

  /// Draws uniformly from { x : !excluded(x) }, redrawing while reject(x)
  /// holds. The result is uniform over the accepted set; `rejected_any`
  /// records whether at least one draw was thrown away.
  virtual Redraw uniform_until(const GroupHandle& g, const ElementPredicate& excluded,
                               const ElementPredicate& reject) = 0;
};

class RngSampler final : public Sampler {
 public:
  explicit RngSampler(Rng rng) : rng_(std::move(rng)) {}
  explicit RngSampler(std::uint64_t seed) : rng_(seed) {}

  Element uniform(const GroupHandle& g) override;
  Element uniform_excluding(const GroupHandle& g, const ElementPredicate& excluded) override;
  Redraw uniform_until(const GroupHandle& g, const ElementPredicate& excluded,
                       const ElementPredicate& reject) override;

  Rng& rng() { return rng_; }

 private:
  Rng rng_;
};

/// Exhaustive enumeration of every sequence of choices a deterministic
/// computation can make.
///
/// The computation is re-run once per path. On each run the tree replays the
/// current path's choices and extends it with first choices; weight() is the
/// exact probability of the path. Requires enumerable groups.
class ChoiceTree final : public Sampler {
 public:
  explicit ChoiceTree(std::uint64_t max_paths = 50'000'000) : max_paths_(max_paths) {}

  /// Calls `run()` once per path. `run` must be deterministic given the choices.
  template <class F>
  void for_each_path(F&& run) {
    path_.clear();
    paths_ = 0;
    do {
      begin_path();
      run();
    } while (advance());
  }

  const Rational& weight() const { return weight_; }
  std::uint64_t paths() const { return paths_; }

  Element uniform(const GroupHandle& g) override;
  Element uniform_excluding(const GroupHandle& g, const ElementPredicate& excluded) override;
  Redraw uniform_until(const GroupHandle& g, const ElementPredicate& excluded,
                       const ElementPredicate& reject) override;

  /// Branch over `arity` equally likely outcomes.
  std::size_t choose_uniform(std::size_t arity);

 private:
  struct Node {
    std::size_t index = 0;
    std::size_t arity = 0;
    std::vector<Rational> weights;  // empty: uniform
  };

  void begin_path();
  bool advance();
  std::size_t branch(std::size_t arity, std::vector<Rational> weights);

  std::vector<Node> path_;
  std::size_t depth_ = 0;
  Rational weight_{1};
  std::uint64_t paths_ = 0;
  std::uint64_t max_paths_;
};

}  // namespace gemlab
