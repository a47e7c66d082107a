#include "gemlab/psi_games.hpp"

#include <unordered_set>

#include "gemlab/attacks.hpp"

namespace gemlab {

const char* to_string(PsiGame g) {
  switch (g) {
    case PsiGame::psi: return "Psi";
    case PsiGame::psi_tilde: return "Psi~";
    case PsiGame::r_tilde: return "R~";
    case PsiGame::random: return "R";
  }
  return "?";
}

namespace {

std::string pair_key(const FeistelPair& p) { return p.left.bytes + '|' + p.right.bytes; }

}  // namespace

struct PsiGameOracles::Engine {
  PsiGame variant;
  GroupHandle G;
  QueryBudget budget;
  Sampler& sampler;
  PsiGameOptions opts;

  std::optional<PsiKey> key;
  std::shared_ptr<LazyFunction> f;
  std::shared_ptr<LazyFunction> g;
  std::shared_ptr<LazyFunction> h;
  std::optional<PsiInstance> psi;
  std::optional<RandomPairPermutation> perm;

  Transcript tr;
  std::unordered_set<std::string> known_x;
  std::unordered_set<std::string> known_y;
  ElementSet known_f;
  ElementSet known_g;
  std::uint64_t qc_used = 0;
  std::uint64_t qf_used = 0;
  std::uint64_t qg_used = 0;

  Engine(PsiGame v, GroupHandle half, QueryBudget b, Sampler& s, PsiGameOptions o)
      : variant(v), G(std::move(half)), budget(b), sampler(s), opts(std::move(o)) {
    const bool keyed = variant == PsiGame::psi || variant == PsiGame::psi_tilde;
    if (keyed) {
      if (opts.key) {
        key = *opts.key;
      } else {
        Element kl = sampler.uniform(G);
        Element kr = sampler.uniform(G);
        key = PsiKey{std::move(kl), std::move(kr)};
      }
    }
    f = std::make_shared<LazyFunction>(G, sampler);
    g = std::make_shared<LazyFunction>(G, sampler);
    if (variant == PsiGame::psi_tilde) h = std::make_shared<LazyFunction>(G, sampler);
    if (keyed) psi.emplace(G, key->left, key->right, f, g);
    if (variant == PsiGame::random) perm.emplace(G, sampler);
  }

  void spend(std::uint64_t& used, std::uint64_t limit, const char* what) {
    if (used >= limit) {
      throw BudgetError(std::string(what) + " budget of " + std::to_string(limit) + " exhausted");
    }
    ++used;
  }

  void check(const Element& v) const {
    if (!G.contains(v)) throw DomainError("query outside " + G.spec());
  }

  FeistelPair uniform_pair() {
    Element l = sampler.uniform(G);
    Element r = sampler.uniform(G);
    return {std::move(l), std::move(r)};
  }

  FeistelPair cipher(const FeistelPair& v, Sign sign) {
    check(v.left);
    check(v.right);
    const bool fwd = sign == Sign::plus;
    const std::string k = pair_key(v);
    if (opts.enforce_protocol && (fwd ? known_x : known_y).contains(k)) {
      throw ProtocolError("cipher query repeats a pair the adversary already holds");
    }
    spend(qc_used, budget.qc, "cipher");
    FeistelPair out;
    switch (variant) {
      case PsiGame::psi:
      case PsiGame::psi_tilde:
        out = psi->apply(v, fwd ? CipherDirection::encrypt : CipherDirection::decrypt);
        break;
      case PsiGame::random:
        out = fwd ? perm->forward(v) : perm->backward(v);
        break;
      case PsiGame::r_tilde: {
        const CipherRecord* earlier = nullptr;
        for (const auto& r : tr.cipher) {
          if ((fwd ? r.x : r.y) == v) {
            earlier = &r;
            break;
          }
        }
        out = earlier ? (fwd ? earlier->y : earlier->x) : uniform_pair();
        break;
      }
    }
    const FeistelPair& x = fwd ? v : out;
    const FeistelPair& y = fwd ? out : v;
    tr.cipher.push_back({x, y, sign});
    known_x.insert(pair_key(x));
    known_y.insert(pair_key(y));
    return out;
  }

  Element function(const Element& x, bool is_f) {
    check(x);
    ElementSet& known = is_f ? known_f : known_g;
    if (opts.enforce_protocol && known.contains(x)) {
      throw ProtocolError(std::string(is_f ? "f" : "g") + " query repeats " + G.format(x));
    }
    spend(is_f ? qf_used : qg_used, is_f ? budget.qf : budget.qg, is_f ? "f" : "g");
    LazyFunction& fn = is_f ? *f : (h ? *h : *g);
    Element y = fn.query(x);
    known.insert(x);
    (is_f ? tr.f : tr.g).push_back({x, y});
    return y;
  }
};

PsiGameOracles::PsiGameOracles(PsiGame variant, GroupHandle half, QueryBudget budget,
                               Sampler& sampler, PsiGameOptions opts)
    : engine_(std::make_unique<Engine>(variant, std::move(half), budget, sampler, std::move(opts))) {}

PsiGameOracles::PsiGameOracles(PsiGame variant, GroupHandle half, QueryBudget budget, Rng rng,
                               PsiGameOptions opts)
    : owned_(std::make_unique<RngSampler>(std::move(rng))),
      engine_(std::make_unique<Engine>(variant, std::move(half), budget, *owned_, std::move(opts))) {}

PsiGameOracles::~PsiGameOracles() = default;

const GroupHandle& PsiGameOracles::half() const { return engine_->G; }
FeistelPair PsiGameOracles::encrypt(const FeistelPair& x) { return engine_->cipher(x, Sign::plus); }
FeistelPair PsiGameOracles::decrypt(const FeistelPair& y) { return engine_->cipher(y, Sign::minus); }
Element PsiGameOracles::f(const Element& x) { return engine_->function(x, true); }
Element PsiGameOracles::g(const Element& x) { return engine_->function(x, false); }
PsiGame PsiGameOracles::variant() const { return engine_->variant; }
const Transcript& PsiGameOracles::transcript() const { return engine_->tr; }
const std::optional<PsiKey>& PsiGameOracles::key() const { return engine_->key; }

PsiGameOutcome run_psi_game(PsiGame variant, const PsiAdversary& adversary,
                            const GroupHandle& half, const QueryBudget& budget, Sampler& sampler,
                            PsiGameOptions opts) {
  PsiGameOracles o(variant, half, budget, sampler, std::move(opts));
  PsiGameOutcome out;
  out.output = adversary(o);
  out.transcript = o.transcript();
  out.key = o.key();
  return out;
}

PsiGameOutcome run_psi_game(PsiGame variant, const PsiAdversary& adversary,
                            const GroupHandle& half, const QueryBudget& budget, Rng& rng,
                            PsiGameOptions opts) {
  RngSampler sampler(rng.split());
  return run_psi_game(variant, adversary, half, budget, sampler, std::move(opts));
}

FeistelPair PsiCipherView::do_forward(const FeistelPair& x) {
  if (auto it = fwd_.find(key(x)); it != fwd_.end()) return it->second;
  FeistelPair y = o_.encrypt(x);
  fwd_.emplace(key(x), y);
  bwd_.emplace(key(y), x);
  return y;
}

FeistelPair PsiCipherView::do_backward(const FeistelPair& y) {
  if (auto it = bwd_.find(key(y)); it != bwd_.end()) return it->second;
  FeistelPair x = o_.decrypt(y);
  fwd_.emplace(key(x), y);
  bwd_.emplace(key(y), x);
  return x;
}

RandomizedAdversary<PsiOracles> f3_sprp_adversary(std::size_t trials) {
  return [trials](PsiOracles& o, Rng& rng) {
    PsiCipherView view(o);
    return distinguish_f3_sprp(view, trials, rng).guess == Guess::cipher;
  };
}

WorldFactory<PsiOracles> psi_world(PsiGame variant, GroupHandle half, QueryBudget budget) {
  return [variant, half = std::move(half), budget](Rng& rng) -> std::unique_ptr<PsiOracles> {
    return std::make_unique<PsiGameOracles>(variant, half, budget, rng.split());
  };
}

WorldFactory<EmOracles> em_world(EmGame variant, GroupHandle g, QueryBudget budget) {
  return [variant, g = std::move(g), budget](Rng& rng) -> std::unique_ptr<EmOracles> {
    return std::make_unique<EmGameOracles>(variant, g, budget, rng.split());
  };
}

}  // namespace gemlab
