#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "treelearn/automata.hpp"
#include "treelearn/ctree.hpp"
#include "treelearn/oracles.hpp"

namespace treelearn {

enum class Scenario { mutation, feature_add };
enum class LearnerKind { classic, incremental };

std::string to_string(Scenario s);
std::string to_string(LearnerKind k);
Scenario scenario_from_string(const std::string& s);

struct ScenarioConfig {
  Scenario scenario = Scenario::mutation;
  std::vector<std::size_t> sizes{10, 20, 40, 80};
  std::size_t alphabet_size = 2;
  std::size_t repetitions = 300;
  std::uint64_t switch_point = 10000;
  double alpha = 0.999;
  EqConfig eq;
  std::uint64_t master_seed = 1;
  std::filesystem::path out_dir;
  std::size_t parallel = 1;
  std::uint64_t curve_step = 100;
};

struct Checkpoint {
  std::uint64_t queries;
  double progress;
};

/// One evolving-target learning run: t0 until the switch point, then t1.
struct RunRecord {
  std::uint64_t seed = 0;
  LearnerKind kind = LearnerKind::classic;
  std::vector<Checkpoint> checkpoints;  // strictly increasing query counts
  std::uint64_t phase2_start = 0;       // counter when t1 learning began
  std::uint64_t queries_to_final_t1 = 0;
  double first_post_switch_progress = 0.0;
  bool converged_t0 = false;
  bool converged_t1 = false;
};

struct RatioPoint {
  std::size_t size;
  double ratio;  // mean incremental queries / mean classic queries, on t1
};

/// Draws t0 at the requested minimal size and derives t1 by the scenario's
/// evolution operator. Both are returned un-minimized.
std::pair<Dfa, Dfa> make_pair_targets(Scenario scenario, std::size_t size,
                                      const Alphabet& alphabet, Rng& rng);

struct SessionConfig {
  std::uint64_t switch_point = 10000;
  double alpha = 0.999;
  EqConfig eq;
  std::uint64_t seed = 0;
};

/// Runs one evolving session: phase 1 learns t0 on a counting oracle; the
/// counter then idles forward to the switch point if needed; phase 2
/// learns t1 (classic restarts, incremental reuses the phase-1 tree).
/// Progress checkpoints are taken at every hypothesis emission; finality
/// of the last hypothesis is certified by an uncounted exact oracle.
RunRecord run_session(LearnerKind kind, const Dfa& t0, const Dfa& t1,
                      const SessionConfig& config);

using Curve = std::vector<std::pair<double, double>>;

/// Resamples each record's step curve onto a common query grid
/// (last-value-carried-forward) and averages pointwise. Throws on empty
/// input.
Curve average_curves(const std::vector<RunRecord>& records,
                     std::uint64_t step = 100);

/// Per-size query ratios over converged runs only. Throws when a
/// (size, kind) cell has no converged record, naming the cell.
std::vector<RatioPoint> compute_ratios(
    const std::map<std::size_t, std::vector<RunRecord>>& records_by_size);

/// Plain-text series: one "x y" pair per line, 6 significant digits,
/// sorted by x. Written atomically (temp file + rename).
void emit_dat(const Curve& series, const std::filesystem::path& path);

void save_tree(const ClassificationTree& tree, const Alphabet& alphabet,
               const std::filesystem::path& path);
ClassificationTree load_tree(const std::filesystem::path& path,
                             const Alphabet& alphabet);

/// Per-run record persistence (JSON), consumed by `bench ratios`.
void save_records(const std::vector<RunRecord>& records,
                  const std::filesystem::path& path);
std::vector<RunRecord> load_records(const std::filesystem::path& path);

/// Full experiment: runs every (size, repetition, kind) cell, writes
/// progress curves, ratio file, per-run records, and a summary under
/// config.out_dir. Deterministic in the config.
void run_benchmark(const ScenarioConfig& config);

/// Recomputes ratio files from records previously written by run_benchmark
/// under dir. Returns the ratio lines per scenario found.
std::map<Scenario, std::vector<RatioPoint>> write_ratios_from_dir(
    const std::filesystem::path& dir);

}  // namespace treelearn
