#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gemlab/em_games.hpp"
#include "gemlab/rational.hpp"

namespace gemlab {

enum class ExperimentKind {
  slide,
  feistel1,
  feistel2,
  feistel3,
  psi_advantage,
  em_advantage,
  efp,
  cp,
  game_equivalence,
  bad_event_rate,
};

std::string_view to_string(ExperimentKind k);
/// Throws ConfigError naming the field for unknown kinds.
ExperimentKind parse_experiment_kind(std::string_view text);

enum class ReportFormat { json, csv };

std::string_view to_string(ReportFormat f);
ReportFormat parse_report_format(std::string_view text);

/// One batch run. Which budget fields an experiment reads:
///   slide             d (default ceil(sqrt|G|))
///   feistel1/2/3      qc: cipher queries per distinguisher run
///                     (defaults 1, 2, 3; f2 uses qc/2 probes, f3 qc/3 rounds)
///   psi-advantage     qc, qf, qg (defaults 3, 0, 0)
///   em-advantage      d (default ceil(sqrt|G|)); s = t = d
///   efp, cp           s, t (default ceil(sqrt|G|) + 1 each)
///   game-equivalence  s: script length (default 2, at most 3)
///   bad-event-rate    qc, qf, qg (defaults 3, 2, 2)
/// Feistel and Psi experiments take the half group G and work on G x G.
/// Unset fields are 0; a value of 0 selects the default.
struct ExperimentConfig {
  std::string group;
  ExperimentKind kind = ExperimentKind::slide;
  QueryBudget budget;
  std::uint64_t d = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string out;
  ReportFormat format = ReportFormat::json;
  /// Worker threads; 0 = hardware concurrency. Never changes results.
  unsigned threads = 0;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

struct TrialRecord {
  std::uint64_t index = 0;
  std::string verdict;
  std::string detail;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct Report {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  std::map<std::string, double> aggregate;
  std::map<std::string, Rational> bound;
  double duration_ms = 0.0;

  friend bool operator==(const Report&, const Report&) = default;
};

/// Throws ConfigError (with the field name) if the config cannot run.
void validate(const ExperimentConfig& cfg);

/// Runs the experiment. Trial i draws all randomness from
/// derive_seed(cfg.seed, i), so reports do not depend on thread count.
Report run_experiment(const ExperimentConfig& cfg);

std::string report_to_json(const Report& r);
Report report_from_json(std::string_view text);
std::string report_to_csv(const Report& r);

/// Writes the report to `path`, or to stdout when path is empty or "-".
/// Throws Error naming the path on I/O failure.
void emit_report(const Report& r, ReportFormat format, const std::string& path);

}  // namespace gemlab
