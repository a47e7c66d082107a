#include "gemlab/transcript.hpp"

#include "gemlab/attacks.hpp"
#include "gemlab/errors.hpp"

namespace gemlab {

namespace {

bool functional(const std::vector<FunctionRecord>& pairs) {
  ElementMap<const Element*> seen;
  for (const auto& r : pairs) {
    auto [it, fresh] = seen.emplace(r.x, &r.y);
    if (!fresh && *it->second != r.y) return false;
  }
  return true;
}

}  // namespace

bool check_consistency(const Transcript& tr) {
  const auto& c = tr.cipher;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      if ((c[i].x == c[j].x) != (c[i].y == c[j].y)) return false;
    }
  }
  return functional(tr.f) && functional(tr.g);
}

bool detect_badg(const GroupHandle& G, const Transcript& tr, const PsiKey& k) {
  if (tr.g.empty()) return false;
  ElementSet g_inputs;
  for (const auto& r : tr.g) g_inputs.insert(r.x);
  const Element kl_inv = G.inv(k.left);
  for (const auto& c : tr.cipher) {
    if (g_inputs.count(G.op(c.x.right, k.right))) return true;  // BG1
    if (g_inputs.count(G.op(c.y.left, kl_inv))) return true;    // BG2
  }
  return false;
}

BadEvents bad_events(const GroupHandle& G, const Transcript& tr, const PsiKey& k, LazyFunction& g) {
  const Element kl_inv = G.inv(k.left);
  const Element kr_inv = G.inv(k.right);
  std::vector<Element> X;
  std::vector<Element> Y;
  for (const auto& c : tr.cipher) {
    X.push_back(G.op(G.op(c.x.left, k.left), g.query(G.op(c.x.right, k.right))));
    Y.push_back(G.op(G.op(c.y.right, kr_inv), G.inv(g.query(G.op(c.y.left, kl_inv)))));
  }
  BadEvents ev;
  const std::size_t n = X.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ev.b1 = ev.b1 || X[i] == X[j];
      ev.b2 = ev.b2 || Y[i] == Y[j];
    }
    for (std::size_t j = 0; j < n; ++j) ev.b3 = ev.b3 || X[i] == Y[j];
    for (const auto& r : tr.f) {
      ev.b4 = ev.b4 || X[i] == r.x;
      ev.b5 = ev.b5 || Y[i] == r.x;
    }
  }
  return ev;
}

bool detect_bad(const GroupHandle& G, const Transcript& tr, const PsiKey& k, LazyFunction& g) {
  return bad_events(G, tr, k, g).any();
}

Transcript random_transcript(const GroupHandle& G, std::uint64_t qc, std::uint64_t qf,
                             std::uint64_t qg, Rng& rng) {
  const GroupHandle G2 = GroupHandle::product(G, G);
  Transcript tr;
  const auto xs = sample_distinct(G2, qc, rng);
  const auto ys = sample_distinct(G2, qc, rng);
  for (std::uint64_t i = 0; i < qc; ++i) {
    auto [xl, xr] = G2.split(xs[i]);
    auto [yl, yr] = G2.split(ys[i]);
    tr.cipher.push_back({{xl, xr}, {yl, yr}, rng.coin() ? Sign::plus : Sign::minus});
  }
  for (auto& x : sample_distinct(G, qf, rng)) tr.f.push_back({std::move(x), G.sample(rng)});
  for (auto& x : sample_distinct(G, qg, rng)) tr.g.push_back({std::move(x), G.sample(rng)});
  return tr;
}

bool is_bad_key(const GroupHandle& G, const EmTranscript& tr, const Element& k) {
  const Element k_inv = G.inv(k);
  for (const auto& [m, c] : tr.s) {
    const Element mk = G.op(m, k);
    const Element ck = G.op(c, k_inv);
    for (const auto& [x, y] : tr.t) {
      if (mk == x || ck == y) return true;
    }
  }
  return false;
}

std::uint64_t count_bad_keys(const GroupHandle& G, const EmTranscript& tr) {
  std::uint64_t bad = 0;
  for (const auto& k : G.enumerate()) bad += is_bad_key(G, tr, k) ? 1 : 0;
  return bad;
}

EmTranscript random_em_transcript(const GroupHandle& G, std::uint64_t s, std::uint64_t t,
                                  Rng& rng) {
  EmTranscript tr;
  const auto ms = sample_distinct(G, s, rng);
  const auto cs = sample_distinct(G, s, rng);
  const auto xs = sample_distinct(G, t, rng);
  const auto ys = sample_distinct(G, t, rng);
  for (std::uint64_t i = 0; i < s; ++i) tr.s.emplace_back(ms[i], cs[i]);
  for (std::uint64_t i = 0; i < t; ++i) tr.t.emplace_back(xs[i], ys[i]);
  return tr;
}

}  // namespace gemlab
