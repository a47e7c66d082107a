#include "gemlab/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "gemlab/errors.hpp"

namespace gemlab {

const char* to_string(Guess g) { return g == Guess::cipher ? "cipher" : "random"; }

namespace {

FeistelPair random_pair(const GroupHandle& g, Rng& rng) {
  Element l = g.sample(rng);
  Element r = g.sample(rng);
  return {std::move(l), std::move(r)};
}

Verdict one_sided(std::size_t trials, std::size_t held) {
  Verdict v;
  v.trials = trials;
  v.success_rate = trials == 0 ? 0.0 : static_cast<double>(held) / static_cast<double>(trials);
  v.guess = held == trials ? Guess::cipher : Guess::random;
  return v;
}

}  // namespace

std::vector<Element> sample_distinct(const GroupHandle& g, std::uint64_t count, Rng& rng) {
  const std::uint64_t n = g.order();
  if (count > n) throw ConfigError("cannot draw more distinct elements than |G|");
  std::vector<Element> out;
  out.reserve(count);
  if (count * 2 > n && n <= kEnumerationCap) {
    // Dense request: partial Fisher-Yates over the index range.
    std::vector<std::uint64_t> idx(n);
    for (std::uint64_t i = 0; i < n; ++i) idx[i] = i;
    for (std::uint64_t i = 0; i < count; ++i) {
      std::swap(idx[i], idx[i + rng.below(n - i)]);
      out.push_back(g.element_at(idx[i]));
    }
    return out;
  }
  ElementSet seen;
  while (out.size() < count) {
    Element e = g.sample(rng);
    if (seen.insert(e).second) out.push_back(std::move(e));
  }
  return out;
}

Verdict distinguish_f1(PairPermutationOracle& oracle, std::size_t trials, Rng& rng) {
  if (trials == 0) throw ConfigError("trials must be positive");
  const auto& g = oracle.half();
  std::size_t held = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    FeistelPair in = random_pair(g, rng);
    if (oracle.forward(in).left == in.right) ++held;
  }
  return one_sided(trials, held);
}

Verdict distinguish_f2(PairPermutationOracle& oracle, const Element& probe, std::size_t probes,
                       Rng& rng) {
  const auto& g = oracle.half();
  if (!g.contains(probe)) throw DomainError("probe is not an element of " + g.spec());
  if (probe == g.identity()) throw PreconditionError("the F(2) probe must not be the identity");
  if (probes == 0) throw ConfigError("probes must be positive");
  const auto rights = sample_distinct(g, probes, rng);
  std::size_t held = 0;
  for (const auto& r : rights) {
    const Element l2 = oracle.forward({g.identity(), r}).left;
    const Element l2p = oracle.forward({probe, r}).left;
    if (g.op(l2p, g.inv(l2)) == probe) ++held;
  }
  return one_sided(probes, held);
}

bool f3_sprp_trial(PairPermutationOracle& oracle, Rng& rng) {
  const auto& g = oracle.half();
  if (g.order() < 2) throw PreconditionError("the SPRP test needs two distinct left halves");
  const Element l0 = g.sample(rng);
  Element l0p = g.sample(rng);
  while (l0p == l0) l0p = g.sample(rng);
  const Element r0 = g.sample(rng);

  const FeistelPair c = oracle.forward({l0, r0});
  const FeistelPair cp = oracle.forward({l0p, r0});
  const FeistelPair back = oracle.backward({cp.left, g.op(g.op(l0, g.inv(l0p)), cp.right)});
  return back.right == g.op(g.op(cp.left, g.inv(c.left)), r0);
}

Verdict distinguish_f3_sprp(PairPermutationOracle& oracle, std::size_t trials, Rng& rng) {
  if (trials == 0) throw ConfigError("trials must be positive");
  std::size_t held = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    if (f3_sprp_trial(oracle, rng)) ++held;
  }
  return one_sided(trials, held);
}

std::uint64_t ceil_sqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while (r * r < n) ++r;
  return r;
}

bool verify_key(EmAttackOracles& oracles, const Element& k, std::size_t n_checks, Rng& rng) {
  if (n_checks == 0) throw PreconditionError("verify_key needs at least one check");
  const auto& g = oracles.group();
  for (std::size_t i = 0; i < n_checks; ++i) {
    const Element x = g.sample(rng);
    if (oracles.encrypt(x) != g.op(oracles.permute(g.op(x, k)), k)) return false;
  }
  return true;
}

std::vector<Element> slide_candidates(EmAttackOracles& oracles, std::uint64_t d, Rng& rng) {
  const auto& g = oracles.group();
  if (d == 0) throw ConfigError("d must be positive");
  if (d > g.order()) throw ConfigError("d must not exceed |G|");

  const auto xs = sample_distinct(g, d, rng);
  const auto ys = sample_distinct(g, d, rng);
  std::vector<Element> ex;
  std::vector<Element> py;
  ex.reserve(xs.size());
  py.reserve(ys.size());
  for (const auto& x : xs) ex.push_back(oracles.encrypt(x));
  for (const auto& y : ys) py.push_back(oracles.permute(y));

  std::vector<Element> candidates;
  ElementSet seen;
  auto add = [&](std::size_t i, std::size_t j) {
    Element k = g.op(g.inv(xs[i]), ys[j]);
    if (seen.insert(k).second) candidates.push_back(std::move(k));
  };
  if (g.is_abelian()) {
    // E(x_i) y_j^-1 = P(y_j) x_i^-1 separates into E(x_i) x_i = P(y_j) y_j.
    ElementMap<std::vector<std::size_t>> table;
    for (std::size_t i = 0; i < xs.size(); ++i) table[g.op(ex[i], xs[i])].push_back(i);
    std::vector<std::pair<std::size_t, std::size_t>> hits;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      auto it = table.find(g.op(py[j], ys[j]));
      if (it == table.end()) continue;
      for (std::size_t i : it->second) hits.emplace_back(i, j);
    }
    std::sort(hits.begin(), hits.end());
    for (auto [i, j] : hits) add(i, j);
  } else {
    std::vector<Element> x_inv;
    std::vector<Element> y_inv;
    for (const auto& x : xs) x_inv.push_back(g.inv(x));
    for (const auto& y : ys) y_inv.push_back(g.inv(y));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < ys.size(); ++j) {
        if (g.op(ex[i], y_inv[j]) == g.op(py[j], x_inv[i])) add(i, j);
      }
    }
  }
  return candidates;
}

SlideResult slide_attack(EmAttackOracles& oracles, const SlideConfig& cfg, Rng& rng) {
  SlideResult res;
  res.d = cfg.d;
  if (cfg.verify_checks == 0) throw PreconditionError("verify_checks must be positive");

  const std::size_t e0 = oracles.encrypt_queries();
  const std::size_t p0 = oracles.permute_queries();
  const auto candidates = slide_candidates(oracles, res.d, rng);
  res.encrypt_queries = oracles.encrypt_queries() - e0;
  res.permute_queries = oracles.permute_queries() - p0;
  res.candidates = candidates.size();

  const std::size_t e1 = oracles.encrypt_queries();
  const std::size_t p1 = oracles.permute_queries();
  for (const auto& k : candidates) {
    if (verify_key(oracles, k, cfg.verify_checks, rng) && !res.key) res.key = k;
  }
  res.verify_encrypt_queries = oracles.encrypt_queries() - e1;
  res.verify_permute_queries = oracles.permute_queries() - p1;
  return res;
}

}  // namespace gemlab
