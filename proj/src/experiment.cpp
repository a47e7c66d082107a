#include "gemlab/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "gemlab/attacks.hpp"
#include "gemlab/bounds.hpp"
#include "gemlab/errors.hpp"
#include "gemlab/feistel.hpp"
#include "gemlab/parallel.hpp"
#include "gemlab/psi_games.hpp"
#include "gemlab/stats.hpp"
#include "gemlab/transcript.hpp"

namespace gemlab {

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::slide, "slide"},
    {ExperimentKind::feistel1, "feistel1"},
    {ExperimentKind::feistel2, "feistel2"},
    {ExperimentKind::feistel3, "feistel3"},
    {ExperimentKind::psi_advantage, "psi-advantage"},
    {ExperimentKind::em_advantage, "em-advantage"},
    {ExperimentKind::efp, "efp"},
    {ExperimentKind::cp, "cp"},
    {ExperimentKind::game_equivalence, "game-equivalence"},
    {ExperimentKind::bad_event_rate, "bad-event-rate"},
};

}  // namespace

std::string_view to_string(ExperimentKind k) {
  for (auto [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  for (auto [kind, name] : kKindNames) {
    if (name == text) return kind;
  }
  throw ConfigError("experiment: unknown kind '" + std::string(text) + "'");
}

std::string_view to_string(ReportFormat f) { return f == ReportFormat::json ? "json" : "csv"; }

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  throw ConfigError("format: expected json or csv, got '" + std::string(text) + "'");
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  auto tie = [](const ExperimentConfig& c) {
    return std::tie(c.group, c.kind, c.budget.s, c.budget.t, c.budget.qc, c.budget.qf,
                    c.budget.qg, c.d, c.trials, c.seed, c.out, c.format);
  };
  return tie(a) == tie(b);
}

namespace {

std::uint64_t or_default(std::uint64_t v, std::uint64_t fallback) { return v == 0 ? fallback : v; }

/// Effective parameters after defaults, shared by validate() and the runners.
struct Plan {
  GroupHandle G;
  QueryBudget budget;
  std::uint64_t d = 0;
  std::uint64_t runs = 0;  // distinguisher repetitions, probes or script length
};

Plan plan_for(const ExperimentConfig& cfg) {
  Plan p{parse_group_spec(cfg.group), cfg.budget, cfg.d, 0};
  if (cfg.trials == 0) throw ConfigError("trials: must be at least 1");
  const std::uint64_t n = p.G.order();
  const std::uint64_t root = ceil_sqrt(n);
  switch (cfg.kind) {
    case ExperimentKind::slide:
    case ExperimentKind::em_advantage:
      p.d = or_default(cfg.d, root);
      if (p.d > n) throw ConfigError("d: must not exceed |G| = " + std::to_string(n));
      p.budget.s = p.budget.t = p.d;
      break;
    case ExperimentKind::feistel1:
      p.budget.qc = or_default(cfg.budget.qc, 1);
      p.runs = p.budget.qc;
      break;
    case ExperimentKind::feistel2:
      p.budget.qc = or_default(cfg.budget.qc, 2);
      p.runs = p.budget.qc / 2;
      if (p.runs == 0) throw ConfigError("qc: feistel2 needs at least 2 queries per run");
      if (p.runs > n) throw ConfigError("qc: feistel2 needs at most 2|G| queries per run");
      break;
    case ExperimentKind::feistel3:
      p.budget.qc = or_default(cfg.budget.qc, 3);
      p.runs = p.budget.qc / 3;
      if (p.runs == 0) throw ConfigError("qc: feistel3 needs at least 3 queries per run");
      break;
    case ExperimentKind::psi_advantage:
      p.budget.qc = or_default(cfg.budget.qc, 3);
      p.runs = p.budget.qc / 3;
      if (p.runs == 0) throw ConfigError("qc: psi-advantage needs at least 3 cipher queries");
      break;
    case ExperimentKind::efp:
    case ExperimentKind::cp:
      p.budget.s = or_default(cfg.budget.s, root + 1);
      p.budget.t = or_default(cfg.budget.t, root + 1);
      break;
    case ExperimentKind::game_equivalence:
      p.runs = or_default(cfg.budget.s, 2);
      if (p.runs > 3) throw ConfigError("s: game-equivalence scripts have at most 3 steps");
      if (n > 5) throw ConfigError("group: game-equivalence needs |G| <= 5");
      break;
    case ExperimentKind::bad_event_rate:
      p.budget.qc = or_default(cfg.budget.qc, 3);
      p.budget.qf = or_default(cfg.budget.qf, 2);
      p.budget.qg = or_default(cfg.budget.qg, 2);
      if (p.budget.qc > n * n || p.budget.qf > n || p.budget.qg > n) {
        throw ConfigError("qc/qf/qg: more distinct queries than the group allows");
      }
      break;
  }
  return p;
}

std::string bit(bool b) { return b ? "1" : "0"; }

double rate(std::uint64_t hits, std::uint64_t n) {
  return static_cast<double>(hits) / static_cast<double>(n);
}

using TrialFn = std::function<TrialRecord(std::uint64_t, Rng&)>;

std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, const TrialFn& fn) {
  std::vector<TrialRecord> out(cfg.trials);
  parallel_for(
      cfg.trials,
      [&](std::uint64_t i) {
        Rng rng(derive_seed(cfg.seed, i));
        out[i] = fn(i, rng);
        out[i].index = i;
      },
      cfg.threads);
  return out;
}

std::uint64_t count_verdict(const std::vector<TrialRecord>& t, std::string_view v) {
  return static_cast<std::uint64_t>(
      std::count_if(t.begin(), t.end(), [&](const TrialRecord& r) { return r.verdict == v; }));
}

/// Reads `key=value` from a detail string.
double detail_value(const std::string& detail, const std::string& key) {
  std::istringstream in(detail);
  std::string tok;
  while (in >> tok) {
    if (tok.rfind(key + "=", 0) == 0) return std::stod(tok.substr(key.size() + 1));
  }
  return 0.0;
}

double mean_detail(const std::vector<TrialRecord>& t, const std::string& key) {
  double sum = 0.0;
  for (const auto& r : t) sum += detail_value(r.detail, key);
  return sum / static_cast<double>(t.size());
}

void add_rate_ci(Report& rep, const std::string& name, std::uint64_t hits, std::uint64_t n) {
  rep.aggregate[name] = rate(hits, n);
  rep.aggregate[name + "_ci99"] = clopper_pearson_halfwidth(hits, n);
}

// Exact probability that one run of each distinguisher guesses "cipher"
// against a uniform permutation of G x G, for N = |G|^2.
Rational f1_ideal_probability(std::uint64_t n) { return ratio(1, n); }
Rational f2_ideal_probability(std::uint64_t n) { return ratio(n, n * n - 1); }
Rational f3_ideal_probability(std::uint64_t n) {
  const Rational g(n);
  const Rational N = g * g;
  return 1 / (N - 1) + (g - 2) / (N - 1) * (g - 2) / (N - 2) + (N - g) / (N - 1) * g / (N - 2);
}

void run_slide(const ExperimentConfig& cfg, const Plan& p, Report& rep) {
  rep.trials = run_trials(cfg, [&](std::uint64_t, Rng& rng) {
    EmInstance inst = make_em_instance(p.G, rng);
    EmInstanceOracles o(inst);
    const SlideResult r = slide_attack(o, SlideConfig{p.d, 8}, rng);
    TrialRecord t;
    t.verdict = r.key ? "recovered" : "failed";
    t.detail = "candidates=" + std::to_string(r.candidates) +
               " e_queries=" + std::to_string(r.encrypt_queries) +
               " p_queries=" + std::to_string(r.permute_queries) +
               " correct=" + bit(r.key && *r.key == inst.key());
    return t;
  });
  const auto n = rep.trials.size();
  add_rate_ci(rep, "success_rate", count_verdict(rep.trials, "recovered"), n);
  rep.aggregate["correct_rate"] = mean_detail(rep.trials, "correct");
  rep.aggregate["mean_candidates"] = mean_detail(rep.trials, "candidates");
  rep.aggregate["d"] = static_cast<double>(p.d);
  const double inv = 1.0 / static_cast<double>(p.G.order());
  rep.aggregate["expected_success"] =
      1.0 - std::pow(1.0 - inv, static_cast<double>(p.d) * static_cast<double>(p.d));
  rep.bound["em_bad_key_bound"] = em_bad_key_bound(p.d, p.d, p.G.order());
}

void run_feistel(const ExperimentConfig& cfg, const Plan& p, Report& rep) {
  const std::size_t rounds = cfg.kind == ExperimentKind::feistel1   ? 1
                             : cfg.kind == ExperimentKind::feistel2 ? 2
                                                                    : 3;
  auto distinguish = [&](PairPermutationOracle& o, Rng& rng) {
    switch (cfg.kind) {
      case ExperimentKind::feistel1: return distinguish_f1(o, p.runs, rng);
      case ExperimentKind::feistel2: {
        Element probe = p.G.sample(rng);
        while (probe == p.G.identity()) probe = p.G.sample(rng);
        return distinguish_f2(o, probe, p.runs, rng);
      }
      default: return distinguish_f3_sprp(o, p.runs, rng);
    }
  };
  rep.trials = run_trials(cfg, [&](std::uint64_t, Rng& rng) {
    FeistelOracle real = make_random_feistel(p.G, rounds, rng);
    RandomPairPermutation ideal(p.G, rng.split());
    Rng real_rng = rng.split();
    Rng ideal_rng = rng.split();
    const Verdict vr = distinguish(real, real_rng);
    const Verdict vi = distinguish(ideal, ideal_rng);
    return TrialRecord{0, to_string(vr.guess), std::string("ideal=") + to_string(vi.guess)};
  });
  const auto n = rep.trials.size();
  std::uint64_t ideal_cipher = 0;
  for (const auto& t : rep.trials) ideal_cipher += t.detail == "ideal=cipher" ? 1 : 0;
  add_rate_ci(rep, "real_cipher_rate", count_verdict(rep.trials, "cipher"), n);
  add_rate_ci(rep, "ideal_cipher_rate", ideal_cipher, n);
  rep.aggregate["runs_per_trial"] = static_cast<double>(p.runs);
  if (p.runs == 1) {
    const std::uint64_t g = p.G.order();
    rep.bound["ideal_cipher_probability"] = cfg.kind == ExperimentKind::feistel1 ? f1_ideal_probability(g)
                                            : cfg.kind == ExperimentKind::feistel2
                                                ? f2_ideal_probability(g)
                                                : f3_ideal_probability(g);
  }
}

template <class Oracles>
void fill_advantage(const ExperimentConfig& cfg, const RandomizedAdversary<Oracles>& adv,
                    const WorldFactory<Oracles>& real, const WorldFactory<Oracles>& ideal,
                    Report& rep) {
  const auto r = world_bits(adv, real, cfg.trials, cfg.seed, 0, cfg.threads);
  const auto i = world_bits(adv, ideal, cfg.trials, cfg.seed, 1, cfg.threads);
  std::uint64_t r1 = 0;
  std::uint64_t i1 = 0;
  rep.trials.resize(cfg.trials);
  for (std::uint64_t k = 0; k < cfg.trials; ++k) {
    rep.trials[k] = {k, bit(r[k] != 0), "ideal=" + bit(i[k] != 0)};
    r1 += static_cast<std::uint64_t>(r[k]);
    i1 += static_cast<std::uint64_t>(i[k]);
  }
  const AdvantageEstimate a = make_advantage(r1, i1, cfg.trials);
  rep.aggregate["real_rate"] = a.real_rate;
  rep.aggregate["ideal_rate"] = a.ideal_rate;
  rep.aggregate["measured"] = a.measured;
  rep.aggregate["ci_halfwidth"] = a.ci_halfwidth;
  rep.aggregate["samples"] = static_cast<double>(a.samples);
}

void run_psi_advantage(const ExperimentConfig& cfg, const Plan& p, Report& rep) {
  fill_advantage<PsiOracles>(cfg, f3_sprp_adversary(p.runs),
                             psi_world(PsiGame::psi, p.G, p.budget),
                             psi_world(PsiGame::random, p.G, p.budget), rep);
  rep.bound["psi_bound"] = psi_bound(p.budget.qc, p.budget.qf, p.budget.qg, p.G.order());
}

void run_em_advantage(const ExperimentConfig& cfg, const Plan& p, Report& rep) {
  const std::uint64_t d = p.d;
  RandomizedAdversary<EmOracles> adv = [d](EmOracles& o, Rng& rng) {
    CachedAttackView<EmOracles> view(o);
    return !slide_candidates(view, d, rng).empty();
  };
  fill_advantage<EmOracles>(cfg, adv, em_world(EmGame::X_prime, p.G, p.budget),
                            em_world(EmGame::R, p.G, p.budget), rep);
  rep.aggregate["d"] = static_cast<double>(d);
  rep.bound["em_bad_key_bound"] = em_bad_key_bound(d, d, p.G.order());
}

void run_efp_cp(const ExperimentConfig& cfg, const Plan& p, Report& rep) {
  const bool efp = cfg.kind == ExperimentKind::efp;
  const std::uint64_t d = std::min(p.budget.s, p.budget.t == 0 ? 0 : p.budget.t - 1);
  rep.trials = run_trials(cfg, [&](std::uint64_t, Rng& rng) {
    Rng adv_rng = rng.split();
    std::size_t candidates = 0;
    bool ok = false;
    if (efp) {
      EfpAdversary adv = [&](EmOracles& o) {
        CachedAttackView<EmOracles> view(o);
        std::vector<Element> keys;
        if (d > 0) keys = slide_candidates(view, d, adv_rng);
        candidates = keys.size();
        Element m = p.G.sample(adv_rng);
        for (int tries = 0; view.seen_encrypt(m) && tries < 64; ++tries) m = p.G.sample(adv_rng);
        if (keys.empty()) return std::make_pair(m, p.G.sample(adv_rng));
        const Element& k = keys.front();
        return std::make_pair(m, p.G.op(view.permute(p.G.op(m, k)), k));
      };
      ok = run_efp(adv, p.G, p.budget, rng);
    } else {
      CpAdversary adv = [&](CpOracles& o) {
        CachedAttackView<CpOracles> view(o);
        std::vector<Element> keys;
        if (d > 0) keys = slide_candidates(view, d, adv_rng);
        candidates = keys.size();
        if (keys.empty()) return p.G.sample(adv_rng);
        // P^-1(c0 k^-1) k^-1 = m0 when k is the key.
        const Element k_inv = p.G.inv(keys.front());
        return p.G.op(o.unpermute(p.G.op(o.challenge(), k_inv)), k_inv);
      };
      ok = run_cp(adv, p.G, p.budget, rng);
    }
    return TrialRecord{0, ok ? (efp ? "forged" : "cracked") : "failed",
                       "candidates=" + std::to_string(candidates)};
  });
  const auto n = rep.trials.size();
  add_rate_ci(rep, "success_rate", count_verdict(rep.trials, efp ? "forged" : "cracked"), n);
  rep.aggregate["mean_candidates"] = mean_detail(rep.trials, "candidates");
  rep.aggregate["d"] = static_cast<double>(d);
  rep.bound["em_bad_key_bound"] = em_bad_key_bound(p.budget.s, p.budget.t, p.G.order());
}

void run_game_equivalence(const ExperimentConfig& cfg, const Plan& p, Report& rep) {
  rep.trials = run_trials(cfg, [&](std::uint64_t, Rng& rng) {
    std::vector<ScriptStep> script;
    std::string text;
    for (std::uint64_t s = 0; s < p.runs; ++s) {
      const auto kind = static_cast<EmOracleKind>(rng.below(4));
      Element v = p.G.sample(rng);
      text += std::string(text.empty() ? "" : ";") + to_string(kind) + "(" + p.G.format(v) + ")";
      script.push_back({kind, std::move(v)});
    }
    const bool xx = exhaustive_game_equivalence(EquivalencePairing::x_vs_x_prime, p.G, script);
    const bool rr =
        exhaustive_game_equivalence(EquivalencePairing::r_flag_vs_r_prime_flag, p.G, script);
    const bool mutant =
        !exhaustive_game_equivalence(EquivalencePairing::x_vs_x_prime, p.G, script, true);
    return TrialRecord{0, xx && rr ? "equal" : "differ",
                       "script=" + text + " x_xprime=" + bit(xx) + " r_rprime=" + bit(rr) +
                           " mutant_differs=" + bit(mutant)};
  });
  const auto n = rep.trials.size();
  rep.aggregate["equal_rate"] = rate(count_verdict(rep.trials, "equal"), n);
  rep.aggregate["mutant_detect_rate"] = mean_detail(rep.trials, "mutant_differs");
}

void run_bad_event_rate(const ExperimentConfig& cfg, const Plan& p, Report& rep) {
  const auto& b = p.budget;
  rep.trials = run_trials(cfg, [&](std::uint64_t, Rng& rng) {
    const Transcript tr = random_transcript(p.G, b.qc, b.qf, b.qg, rng);
    Element kl = p.G.sample(rng);
    Element kr = p.G.sample(rng);
    const PsiKey k{std::move(kl), std::move(kr)};
    LazyFunction g(p.G, rng.split());
    const bool badg = detect_badg(p.G, tr, k);
    const BadEvents ev = bad_events(p.G, tr, k, g);
    return TrialRecord{0, badg ? "badg" : "clean",
                       "bad=" + bit(ev.any()) + " b1=" + bit(ev.b1) + " b2=" + bit(ev.b2) +
                           " b3=" + bit(ev.b3) + " b4=" + bit(ev.b4) + " b5=" + bit(ev.b5)};
  });
  const auto n = rep.trials.size();
  add_rate_ci(rep, "badg_rate", count_verdict(rep.trials, "badg"), n);
  std::uint64_t bad = 0;
  for (const auto& t : rep.trials) bad += detail_value(t.detail, "bad") != 0.0 ? 1 : 0;
  add_rate_ci(rep, "bad_rate", bad, n);
  rep.bound["badg_bound"] = badg_bound(b.qc, b.qg, p.G.order());
  rep.bound["bad_bound"] = bad_bound(b.qc, b.qf, p.G.order());
}

}  // namespace

void validate(const ExperimentConfig& cfg) { (void)plan_for(cfg); }

Report run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Plan p = plan_for(cfg);
  Report rep;
  rep.config = cfg;
  switch (cfg.kind) {
    case ExperimentKind::slide: run_slide(cfg, p, rep); break;
    case ExperimentKind::feistel1:
    case ExperimentKind::feistel2:
    case ExperimentKind::feistel3: run_feistel(cfg, p, rep); break;
    case ExperimentKind::psi_advantage: run_psi_advantage(cfg, p, rep); break;
    case ExperimentKind::em_advantage: run_em_advantage(cfg, p, rep); break;
    case ExperimentKind::efp:
    case ExperimentKind::cp: run_efp_cp(cfg, p, rep); break;
    case ExperimentKind::game_equivalence: run_game_equivalence(cfg, p, rep); break;
    case ExperimentKind::bad_event_rate: run_bad_event_rate(cfg, p, rep); break;
  }
  rep.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace {

using nlohmann::json;

json config_json(const ExperimentConfig& c) {
  return json{{"group", c.group},         {"experiment", std::string(to_string(c.kind))},
              {"trials", c.trials},       {"seed", c.seed},
              {"qc", c.budget.qc},        {"qf", c.budget.qf},
              {"qg", c.budget.qg},        {"s", c.budget.s},
              {"t", c.budget.t},          {"d", c.d},
              {"out", c.out},             {"format", std::string(to_string(c.format))}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.group = j.at("group").get<std::string>();
  c.kind = parse_experiment_kind(j.at("experiment").get<std::string>());
  c.trials = j.at("trials").get<std::uint64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.budget.qc = j.at("qc").get<std::uint64_t>();
  c.budget.qf = j.at("qf").get<std::uint64_t>();
  c.budget.qg = j.at("qg").get<std::uint64_t>();
  c.budget.s = j.at("s").get<std::uint64_t>();
  c.budget.t = j.at("t").get<std::uint64_t>();
  c.d = j.at("d").get<std::uint64_t>();
  c.out = j.at("out").get<std::string>();
  c.format = parse_report_format(j.at("format").get<std::string>());
  return c;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

// Shortest text that reads back as the same double.
std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

std::string report_to_json(const Report& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    trials.push_back({{"trial", t.index}, {"verdict", t.verdict}, {"detail", t.detail}});
  }
  json aggregate = json::object();
  for (const auto& [k, v] : r.aggregate) aggregate[k] = v;
  json bound = json::object();
  for (const auto& [k, v] : r.bound) bound[k] = to_string(v);
  json j{{"config", config_json(r.config)},
         {"trials", std::move(trials)},
         {"aggregate", std::move(aggregate)},
         {"bound", std::move(bound)},
         {"duration_ms", r.duration_ms}};
  return j.dump(2) + "\n";
}

Report report_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    Report r;
    r.config = config_from_json(j.at("config"));
    for (const auto& t : j.at("trials")) {
      r.trials.push_back({t.at("trial").get<std::uint64_t>(), t.at("verdict").get<std::string>(),
                          t.at("detail").get<std::string>()});
    }
    for (const auto& [k, v] : j.at("aggregate").items()) r.aggregate[k] = v.get<double>();
    for (const auto& [k, v] : j.at("bound").items()) {
      r.bound[k] = rational_from_string(v.get<std::string>());
    }
    r.duration_ms = j.at("duration_ms").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report JSON has the wrong shape: ") + e.what());
  }
}

std::string report_to_csv(const Report& r) {
  std::string out = "trial,verdict,detail\n";
  for (const auto& t : r.trials) {
    out += std::to_string(t.index) + ',' + csv_field(t.verdict) + ',' + csv_field(t.detail) + '\n';
  }
  for (const auto& [k, v] : r.aggregate) out += "# aggregate=" + k + '=' + format_double(v) + '\n';
  for (const auto& [k, v] : r.bound) out += "# bound=" + k + '=' + to_string(v) + '\n';
  out += "# duration_ms=" + format_double(r.duration_ms) + '\n';
  return out;
}

void emit_report(const Report& r, ReportFormat format, const std::string& path) {
  const std::string body = format == ReportFormat::json ? report_to_json(r) : report_to_csv(r);
  if (path.empty() || path == "-") {
    std::cout << body << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open report file '" + path + "' for writing");
  out << body;
  out.flush();
  if (!out) throw Error("failed writing report file '" + path + "'");
}

}  // namespace gemlab
