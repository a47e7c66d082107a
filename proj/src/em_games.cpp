#include "gemlab/em_games.hpp"

#include <stdexcept>

#include "gemlab/errors.hpp"
#include "gemlab/even_mansour.hpp"

namespace gemlab {

const char* to_string(EmOracleKind k) {
  switch (k) {
    case EmOracleKind::encrypt: return "E";
    case EmOracleKind::decrypt: return "D";
    case EmOracleKind::permute: return "P";
    case EmOracleKind::unpermute: return "P^-1";
  }
  return "?";
}

const char* to_string(EmGame g) {
  switch (g) {
    case EmGame::R: return "R";
    case EmGame::X: return "X";
    case EmGame::X_prime: return "X'";
    case EmGame::R_prime: return "R'";
  }
  return "?";
}

namespace {

/// A partial bijection written as two maps.
struct Table {
  ElementMap<Element> fwd;
  ElementMap<Element> bwd;

  const Element* f(const Element& x) const {
    auto it = fwd.find(x);
    return it == fwd.end() ? nullptr : &it->second;
  }
  const Element* b(const Element& y) const {
    auto it = bwd.find(y);
    return it == bwd.end() ? nullptr : &it->second;
  }
  bool has_input(const Element& x) const { return fwd.contains(x); }
  bool has_output(const Element& y) const { return bwd.contains(y); }
  void define(const Element& x, const Element& y) {
    if (fwd.contains(x) || bwd.contains(y)) {
      throw std::logic_error("game table would stop being a partial bijection");
    }
    fwd.emplace(x, y);
    bwd.emplace(y, x);
  }
};

}  // namespace

struct EmGameOracles::Engine {
  EmGame variant;
  GroupHandle G;
  QueryBudget budget;
  Sampler& sampler;
  EmGameOptions opts;

  std::optional<Element> key;
  Element key_inv;
  Table e;  // E: m -> c (D is the reverse)
  Table p;  // P: x -> y

  GameFlag flag;
  std::vector<bool> trace;
  Table view_s;
  Table view_t;
  EmTranscript view;
  std::vector<EmQueryRecord> log;
  std::uint64_t s_used = 0;
  std::uint64_t t_used = 0;
  bool finished = false;

  Engine(EmGame v, GroupHandle g, QueryBudget b, Sampler& s, EmGameOptions o)
      : variant(v), G(std::move(g)), budget(b), sampler(s), opts(o) {
    if (variant != EmGame::R_prime) set_key(sampler.uniform(G));
  }

  void set_key(Element k) {
    key_inv = G.inv(k);
    key = std::move(k);
  }
  Element mk(const Element& m) const { return G.op(m, *key); }
  Element mk_inv(const Element& c) const { return G.op(c, key_inv); }

  ElementPredicate in(const ElementMap<Element>& m) const {
    return [&m](const Element& v) { return m.contains(v); };
  }

  void admit(EmOracleKind kind, const Element& v) {
    if (finished) throw ProtocolError("query after the game finished");
    if (!G.contains(v)) throw DomainError("query outside " + G.spec());
    const bool cipher = kind == EmOracleKind::encrypt || kind == EmOracleKind::decrypt;
    std::uint64_t& used = cipher ? s_used : t_used;
    const std::uint64_t limit = cipher ? budget.s : budget.t;
    if (used >= limit) {
      throw BudgetError(std::string(cipher ? "E/D" : "P/P^-1") + " budget of " +
                        std::to_string(limit) + " exhausted");
    }
    if (opts.enforce_protocol) {
      bool known = false;
      switch (kind) {
        case EmOracleKind::encrypt: known = view_s.has_input(v); break;
        case EmOracleKind::decrypt: known = view_s.has_output(v); break;
        case EmOracleKind::permute: known = view_t.has_input(v); break;
        case EmOracleKind::unpermute: known = view_t.has_output(v); break;
      }
      if (known) {
        throw ProtocolError(std::string(to_string(kind)) + " query " + G.format(v) +
                            " repeats a pair the adversary already holds");
      }
    }
    ++used;
  }

  void record(EmOracleKind kind, const Element& q, const Element& a) {
    log.push_back({kind, q, a});
    switch (kind) {
      case EmOracleKind::encrypt:
        if (!view_s.has_input(q)) view_s.define(q, a), view.s.emplace_back(q, a);
        break;
      case EmOracleKind::decrypt:
        if (!view_s.has_output(q)) view_s.define(a, q), view.s.emplace_back(a, q);
        break;
      case EmOracleKind::permute:
        if (!view_t.has_input(q)) view_t.define(q, a), view.t.emplace_back(q, a);
        break;
      case EmOracleKind::unpermute:
        if (!view_t.has_output(q)) view_t.define(a, q), view.t.emplace_back(a, q);
        break;
    }
    trace.push_back(flag.bad());
  }

  // Game R and the query phase of R'.
  Element r_encrypt(const Element& m) {
    Element c = sampler.uniform_excluding(G, in(e.bwd));
    if (key && (p.has_input(mk(m)) || p.has_output(mk_inv(c)))) flag.set_bad();
    e.define(m, c);
    return c;
  }
  Element r_decrypt(const Element& c) {
    Element m = sampler.uniform_excluding(G, in(e.fwd));
    if (key && (p.has_output(mk_inv(c)) || p.has_input(mk(m)))) flag.set_bad();
    e.define(m, c);
    return m;
  }
  Element r_permute(const Element& x) {
    Element y = sampler.uniform_excluding(G, in(p.bwd));
    if (key && (e.has_input(mk_inv(x)) || e.has_output(mk(y)))) flag.set_bad();
    p.define(x, y);
    return y;
  }
  Element r_unpermute(const Element& y) {
    Element x = sampler.uniform_excluding(G, in(p.fwd));
    if (key && (e.has_output(mk(y)) || e.has_input(mk_inv(x)))) flag.set_bad();
    p.define(x, y);
    return x;
  }

  // Game X. Step 1 draws, step 2 either redefines from a known value or
  // sends the draw back to step 1 while it would clash.
  Element x_encrypt(const Element& m) {
    Element c;
    if (const Element* y = p.f(mk(m))) {
      flag.set_bad();
      c = opts.corrupt_redefine ? sampler.uniform_excluding(G, in(e.bwd)) : G.op(*y, *key);
    } else {
      Redraw r = sampler.uniform_until(G, in(e.bwd),
                                       [&](const Element& v) { return p.has_output(mk_inv(v)); });
      if (r.rejected_any) flag.set_bad();
      c = std::move(r.value);
    }
    e.define(m, c);
    return c;
  }
  Element x_decrypt(const Element& c) {
    Element m;
    if (const Element* x = p.b(mk_inv(c))) {
      flag.set_bad();
      m = opts.corrupt_redefine ? sampler.uniform_excluding(G, in(e.fwd)) : G.op(*x, key_inv);
    } else {
      Redraw r = sampler.uniform_until(G, in(e.fwd),
                                       [&](const Element& v) { return p.has_input(mk(v)); });
      if (r.rejected_any) flag.set_bad();
      m = std::move(r.value);
    }
    e.define(m, c);
    return m;
  }
  Element x_permute(const Element& x) {
    Element y;
    if (const Element* c = e.f(mk_inv(x))) {
      flag.set_bad();
      y = opts.corrupt_redefine ? sampler.uniform_excluding(G, in(p.bwd)) : G.op(*c, key_inv);
    } else {
      Redraw r = sampler.uniform_until(G, in(p.bwd),
                                       [&](const Element& v) { return e.has_output(mk(v)); });
      if (r.rejected_any) flag.set_bad();
      y = std::move(r.value);
    }
    p.define(x, y);
    return y;
  }
  Element x_unpermute(const Element& y) {
    Element x;
    if (const Element* m = e.b(mk(y))) {
      flag.set_bad();
      x = opts.corrupt_redefine ? sampler.uniform_excluding(G, in(p.fwd)) : G.op(*m, *key);
    } else {
      Redraw r = sampler.uniform_until(G, in(p.fwd),
                                       [&](const Element& v) { return e.has_input(mk_inv(v)); });
      if (r.rejected_any) flag.set_bad();
      x = std::move(r.value);
    }
    p.define(x, y);
    return x;
  }

  // Game X': only P is stored; E and D are computed through it.
  Element xp_permute(const Element& x) {
    if (const Element* y = p.f(x)) return *y;
    Element y = sampler.uniform_excluding(G, in(p.bwd));
    p.define(x, y);
    return y;
  }
  Element xp_unpermute(const Element& y) {
    if (const Element* x = p.b(y)) return *x;
    Element x = sampler.uniform_excluding(G, in(p.fwd));
    p.define(x, y);
    return x;
  }
  Element xp_encrypt(const Element& m) { return G.op(xp_permute(mk(m)), *key); }
  Element xp_decrypt(const Element& c) { return G.op(xp_unpermute(mk_inv(c)), key_inv); }

  Element query(EmOracleKind kind, const Element& v) {
    admit(kind, v);
    Element a;
    switch (variant) {
      case EmGame::R:
      case EmGame::R_prime:
        switch (kind) {
          case EmOracleKind::encrypt: a = r_encrypt(v); break;
          case EmOracleKind::decrypt: a = r_decrypt(v); break;
          case EmOracleKind::permute: a = r_permute(v); break;
          case EmOracleKind::unpermute: a = r_unpermute(v); break;
        }
        break;
      case EmGame::X:
        switch (kind) {
          case EmOracleKind::encrypt: a = x_encrypt(v); break;
          case EmOracleKind::decrypt: a = x_decrypt(v); break;
          case EmOracleKind::permute: a = x_permute(v); break;
          case EmOracleKind::unpermute: a = x_unpermute(v); break;
        }
        break;
      case EmGame::X_prime:
        switch (kind) {
          case EmOracleKind::encrypt: a = xp_encrypt(v); break;
          case EmOracleKind::decrypt: a = xp_decrypt(v); break;
          case EmOracleKind::permute: a = xp_permute(v); break;
          case EmOracleKind::unpermute: a = xp_unpermute(v); break;
        }
        break;
    }
    record(kind, v, a);
    return a;
  }

  void finish() {
    if (finished) return;
    finished = true;
    if (variant == EmGame::R_prime) {
      set_key(sampler.uniform(G));
      if (is_bad_key(G, EmTranscript{e_pairs(), p_pairs()}, *key)) flag.set_bad();
    }
  }

  std::vector<std::pair<Element, Element>> e_pairs() const {
    return {e.fwd.begin(), e.fwd.end()};
  }
  std::vector<std::pair<Element, Element>> p_pairs() const {
    return {p.fwd.begin(), p.fwd.end()};
  }
};

EmGameOracles::EmGameOracles(EmGame variant, GroupHandle group, QueryBudget budget,
                             Sampler& sampler, EmGameOptions opts)
    : engine_(std::make_unique<Engine>(variant, std::move(group), budget, sampler, opts)) {}

EmGameOracles::EmGameOracles(EmGame variant, GroupHandle group, QueryBudget budget, Rng rng,
                             EmGameOptions opts)
    : owned_(std::make_unique<RngSampler>(std::move(rng))),
      engine_(std::make_unique<Engine>(variant, std::move(group), budget, *owned_, opts)) {}

EmGameOracles::~EmGameOracles() = default;

const GroupHandle& EmGameOracles::group() const { return engine_->G; }
Element EmGameOracles::encrypt(const Element& m) {
  return engine_->query(EmOracleKind::encrypt, m);
}
Element EmGameOracles::decrypt(const Element& c) {
  return engine_->query(EmOracleKind::decrypt, c);
}
Element EmGameOracles::permute(const Element& x) {
  return engine_->query(EmOracleKind::permute, x);
}
Element EmGameOracles::unpermute(const Element& y) {
  return engine_->query(EmOracleKind::unpermute, y);
}
void EmGameOracles::finish() { engine_->finish(); }
EmGame EmGameOracles::variant() const { return engine_->variant; }
const GameFlag& EmGameOracles::flag() const { return engine_->flag; }
const std::vector<bool>& EmGameOracles::flag_trace() const { return engine_->trace; }
const std::optional<Element>& EmGameOracles::key() const { return engine_->key; }
const EmTranscript& EmGameOracles::transcript() const { return engine_->view; }
const std::vector<EmQueryRecord>& EmGameOracles::log() const { return engine_->log; }

namespace {

EmGameOutcome collect(EmGameOracles& o, bool output) {
  o.finish();
  EmGameOutcome out;
  out.output = output;
  out.bad = o.flag().bad();
  out.flag_trace = o.flag_trace();
  out.key = o.key();
  out.transcript = o.transcript();
  out.log = o.log();
  return out;
}

}  // namespace

EmGameOutcome run_em_game(EmGame variant, const EmAdversary& adversary, const GroupHandle& g,
                          const QueryBudget& budget, Sampler& sampler, EmGameOptions opts) {
  EmGameOracles o(variant, g, budget, sampler, opts);
  const bool bit = adversary(o);
  return collect(o, bit);
}

EmGameOutcome run_em_game(EmGame variant, const EmAdversary& adversary, const GroupHandle& g,
                          const QueryBudget& budget, Rng& rng, EmGameOptions opts) {
  EmGameOracles o(variant, g, budget, rng.split(), opts);
  const bool bit = adversary(o);
  return collect(o, bit);
}

namespace {

/// Real Even-Mansour behind budget counting; used by the EFP and CP games.
class RealEm {
 public:
  RealEm(const GroupHandle& g, const QueryBudget& budget, Rng& rng)
      : inst_(make_em_instance(g, rng)), budget_(budget) {}

  EmInstance& instance() { return inst_; }
  const EmInstance& instance() const { return inst_; }

  void spend_cipher() {
    if (s_++ >= budget_.s) throw BudgetError("E/D budget of " + std::to_string(budget_.s) + " exhausted");
  }
  void spend_perm() {
    if (t_++ >= budget_.t) throw BudgetError("P/P^-1 budget of " + std::to_string(budget_.t) + " exhausted");
  }
  void check(const Element& v) const {
    if (!inst_.group().contains(v)) throw DomainError("query outside " + inst_.group().spec());
  }

 private:
  EmInstance inst_;
  QueryBudget budget_;
  std::uint64_t s_ = 0;
  std::uint64_t t_ = 0;
};

class EfpOracles final : public EmOracles {
 public:
  EfpOracles(const GroupHandle& g, const QueryBudget& budget, Rng& rng) : em_(g, budget, rng) {}

  const GroupHandle& group() const override { return em_.instance().group(); }
  Element encrypt(const Element& m) override {
    em_.check(m);
    em_.spend_cipher();
    Element c = em_.instance().encrypt(m);
    seen_.emplace(m.bytes + '|' + c.bytes);
    return c;
  }
  Element decrypt(const Element& c) override {
    em_.check(c);
    em_.spend_cipher();
    Element m = em_.instance().decrypt(c);
    seen_.emplace(m.bytes + '|' + c.bytes);
    return m;
  }
  Element permute(const Element& x) override {
    em_.check(x);
    em_.spend_perm();
    return em_.instance().perm().forward(x);
  }
  Element unpermute(const Element& y) override {
    em_.check(y);
    em_.spend_perm();
    return em_.instance().perm().backward(y);
  }

  bool queried(const Element& m, const Element& c) const {
    return seen_.contains(m.bytes + '|' + c.bytes);
  }
  EmInstance& instance() { return em_.instance(); }

 private:
  RealEm em_;
  std::unordered_set<std::string> seen_;
};

class CpGameOracles final : public CpOracles {
 public:
  CpGameOracles(const GroupHandle& g, const QueryBudget& budget, Rng& rng)
      : em_(g, budget, rng), m0_(g.sample(rng)), c0_(em_.instance().encrypt(m0_)) {}

  const GroupHandle& group() const override { return em_.instance().group(); }
  const Element& challenge() const override { return c0_; }
  const Element& secret() const { return m0_; }

  Element encrypt(const Element& m) override {
    em_.check(m);
    em_.spend_cipher();
    return em_.instance().encrypt(m);
  }
  std::optional<Element> decrypt(const Element& c) override {
    em_.check(c);
    em_.spend_cipher();
    if (c == c0_) return std::nullopt;
    return em_.instance().decrypt(c);
  }
  Element permute(const Element& x) override {
    em_.check(x);
    em_.spend_perm();
    return em_.instance().perm().forward(x);
  }
  Element unpermute(const Element& y) override {
    em_.check(y);
    em_.spend_perm();
    return em_.instance().perm().backward(y);
  }

 private:
  RealEm em_;
  Element m0_;
  Element c0_;
};

}  // namespace

bool run_efp(const EfpAdversary& adversary, const GroupHandle& g, const QueryBudget& budget,
             Rng& rng) {
  EfpOracles o(g, budget, rng);
  auto [m, c] = adversary(o);
  if (!g.contains(m) || !g.contains(c)) return false;
  if (o.queried(m, c)) return false;
  return o.instance().encrypt(m) == c;
}

bool run_cp(const CpAdversary& adversary, const GroupHandle& g, const QueryBudget& budget,
            Rng& rng) {
  CpGameOracles o(g, budget, rng);
  return adversary(o) == o.secret();
}

EmAdversary script_adversary(std::vector<ScriptStep> script) {
  return [script = std::move(script)](EmOracles& o) {
    const auto& g = o.group();
    ElementMap<Element> e, d, p, pinv;
    std::uint64_t acc = 0;
    for (const auto& step : script) {
      const Element& v = step.operand;
      Element a;
      switch (step.kind) {
        case EmOracleKind::encrypt:
          a = e.contains(v) ? e.at(v) : o.encrypt(v);
          e[v] = a, d[a] = v;
          break;
        case EmOracleKind::decrypt:
          a = d.contains(v) ? d.at(v) : o.decrypt(v);
          d[v] = a, e[a] = v;
          break;
        case EmOracleKind::permute:
          a = p.contains(v) ? p.at(v) : o.permute(v);
          p[v] = a, pinv[a] = v;
          break;
        case EmOracleKind::unpermute:
          a = pinv.contains(v) ? pinv.at(v) : o.unpermute(v);
          pinv[v] = a, p[a] = v;
          break;
      }
      acc += g.index_of(a);
    }
    return acc % 2 == 1;
  };
}

namespace {

void check_exhaustible(const GroupHandle& g, const std::vector<ScriptStep>& script) {
  if (g.order() > 5) throw CapacityError("exhaustive game comparison needs |G| <= 5");
  if (script.size() > 3) throw CapacityError("exhaustive game comparison needs at most 3 queries");
}

std::string render(const GroupHandle& g, const EmGameOutcome& out) {
  std::string s;
  for (const auto& r : out.log) {
    s += to_string(r.kind);
    s += '(' + g.format(r.query) + ")=" + g.format(r.answer) + ';';
  }
  s += out.output ? "->1" : "->0";
  return s;
}

QueryBudget script_budget(const std::vector<ScriptStep>& script) {
  QueryBudget b;
  for (const auto& st : script) {
    const bool cipher = st.kind == EmOracleKind::encrypt || st.kind == EmOracleKind::decrypt;
    ++(cipher ? b.s : b.t);
  }
  return b;
}

template <class Key>
ExactDistribution enumerate_game(EmGame variant, const std::vector<ScriptStep>& script,
                                 const GroupHandle& g, EmGameOptions opts, Key key_of) {
  check_exhaustible(g, script);
  const EmAdversary adv = script_adversary(script);
  const QueryBudget budget = script_budget(script);
  ExactDistribution dist;
  ChoiceTree tree;
  tree.for_each_path([&] {
    const EmGameOutcome out = run_em_game(variant, adv, g, budget, tree, opts);
    dist[key_of(out)] += tree.weight();
  });
  return dist;
}

}  // namespace

ExactDistribution exact_answer_distribution(EmGame variant, const std::vector<ScriptStep>& script,
                                            const GroupHandle& g, EmGameOptions opts) {
  return enumerate_game(variant, script, g, opts,
                        [&](const EmGameOutcome& out) { return render(g, out); });
}

ExactDistribution exact_flag_distribution(EmGame variant, const std::vector<ScriptStep>& script,
                                          const GroupHandle& g, EmGameOptions opts) {
  return enumerate_game(variant, script, g, opts, [](const EmGameOutcome& out) {
    return std::string(out.bad ? "bad" : "good");
  });
}

bool exhaustive_game_equivalence(EquivalencePairing pairing, const GroupHandle& g,
                                 const std::vector<ScriptStep>& script, bool corrupt_x) {
  check_exhaustible(g, script);
  if (pairing == EquivalencePairing::x_vs_x_prime) {
    EmGameOptions x_opts;
    x_opts.corrupt_redefine = corrupt_x;
    return exact_answer_distribution(EmGame::X, script, g, x_opts) ==
           exact_answer_distribution(EmGame::X_prime, script, g);
  }
  auto bad_mass = [](const ExactDistribution& d) {
    auto it = d.find("bad");
    return it == d.end() ? Rational(0) : it->second;
  };
  return bad_mass(exact_flag_distribution(EmGame::R, script, g)) ==
         bad_mass(exact_flag_distribution(EmGame::R_prime, script, g));
}

}  // namespace gemlab
