#include "treelearn/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "treelearn/learners.hpp"
#include "treelearn/metrics.hpp"

namespace treelearn {

std::string to_string(Scenario s) {
  return s == Scenario::mutation ? "mutation" : "feature-add";
}

std::string to_string(LearnerKind k) {
  return k == LearnerKind::classic ? "classic" : "incremental";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "mutation") return Scenario::mutation;
  if (s == "feature-add" || s == "feature_add") return Scenario::feature_add;
  throw std::invalid_argument("unknown scenario: " + s);
}

std::pair<Dfa, Dfa> make_pair_targets(Scenario scenario, std::size_t size,
                                      const Alphabet& alphabet, Rng& rng) {
  if (size < 2) throw std::invalid_argument("target size must be at least 2");
  Dfa t0 = random_dfa(size, alphabet, rng);
  Dfa t1 = scenario == Scenario::mutation ? apply_mutation_scenario(t0, rng)
                                          : apply_feature_add(t0, rng);
  return {std::move(t0), std::move(t1)};
}

RunRecord run_session(LearnerKind kind, const Dfa& t0, const Dfa& t1,
                      const SessionConfig& config) {
  RunRecord rec;
  rec.seed = config.seed;
  rec.kind = kind;
  const Alphabet& alphabet = t0.alphabet;
  auto counter = std::make_shared<QueryCounter>();

  auto push_checkpoint = [&rec](std::uint64_t q, double p) {
    if (!rec.checkpoints.empty() && rec.checkpoints.back().queries == q)
      rec.checkpoints.back().progress = p;
    else
      rec.checkpoints.push_back({q, p});
  };

  // Phase 1: learn t0 from scratch for both kinds.
  DfaOracle mq0(t0, counter);
  EqConfig eq_cfg0 = config.eq;
  eq_cfg0.seed = mix_seed(config.seed, 0xF0);
  RandomWordEq eq0(mq0, eq_cfg0);
  LearnObserver watch0 = [&](const RoundEvent& ev, const Dfa& hyp) {
    push_checkpoint(ev.queries, progress_solved(t0, hyp, config.alpha));
  };
  LearnResult phase1 =
      kind == LearnerKind::classic
          ? classic_kv(alphabet, mq0, eq0, watch0)
          : incremental_kv(alphabet, std::nullopt, mq0, eq0, watch0);
  rec.converged_t0 = !exact_counterexample(phase1.hypothesis, t0).has_value();

  // Idle until the scheduled mutation if phase 1 finished early.
  counter->advance_to(config.switch_point);
  rec.phase2_start = counter->value();

  // Phase 2: target t1; classic restarts, incremental reuses the tree.
  DfaOracle mq1(t1, counter);
  EqConfig eq_cfg1 = config.eq;
  eq_cfg1.seed = mix_seed(config.seed, 0xF1);
  RandomWordEq eq1(mq1, eq_cfg1);
  std::uint64_t last_emission = rec.phase2_start;
  bool first = true;
  LearnObserver watch1 = [&](const RoundEvent& ev, const Dfa& hyp) {
    double p = progress_solved(t1, hyp, config.alpha);
    if (first) {
      rec.first_post_switch_progress = p;
      first = false;
    }
    last_emission = ev.queries;
    push_checkpoint(ev.queries, p);
  };
  LearnResult phase2 =
      kind == LearnerKind::classic
          ? classic_kv(alphabet, mq1, eq1, watch1)
          : incremental_kv(alphabet, std::move(phase1.tree), mq1, eq1, watch1);
  rec.converged_t1 = !exact_counterexample(phase2.hypothesis, t1).has_value();
  rec.queries_to_final_t1 = last_emission - rec.phase2_start;
  return rec;
}

Curve average_curves(const std::vector<RunRecord>& records,
                     std::uint64_t step) {
  if (records.empty())
    throw std::invalid_argument("average_curves: no records");
  if (step == 0) throw std::invalid_argument("average_curves: zero step");

  std::uint64_t max_q = 0;
  for (const RunRecord& r : records) {
    if (r.checkpoints.empty())
      throw std::invalid_argument("average_curves: record without checkpoints");
    max_q = std::max(max_q, r.checkpoints.back().queries);
  }

  Curve curve;
  for (std::uint64_t x = 0;; x += step) {
    double sum = 0.0;
    for (const RunRecord& r : records) {
      // Last value carried forward; the first value also covers the grid
      // points before the first checkpoint.
      double value = r.checkpoints.front().progress;
      for (const Checkpoint& cp : r.checkpoints) {
        if (cp.queries > x) break;
        value = cp.progress;
      }
      sum += value;
    }
    curve.emplace_back(double(x), sum / double(records.size()));
    if (x >= max_q) break;
  }
  return curve;
}

std::vector<RatioPoint> compute_ratios(
    const std::map<std::size_t, std::vector<RunRecord>>& records_by_size) {
  std::vector<RatioPoint> out;
  for (const auto& [size, records] : records_by_size) {
    double sums[2] = {0.0, 0.0};
    std::size_t counts[2] = {0, 0};
    for (const RunRecord& r : records) {
      if (!r.converged_t1) continue;
      std::size_t i = r.kind == LearnerKind::classic ? 0 : 1;
      sums[i] += double(r.queries_to_final_t1);
      counts[i] += 1;
    }
    for (std::size_t i = 0; i < 2; ++i)
      if (counts[i] == 0)
        throw std::runtime_error(
            "no converged runs for size " + std::to_string(size) + ", kind " +
            to_string(i == 0 ? LearnerKind::classic : LearnerKind::incremental));
    out.push_back({size, (sums[1] / double(counts[1])) /
                             (sums[0] / double(counts[0]))});
  }
  return out;
}

namespace {

std::string format_sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

void emit_dat(const Curve& series, const std::filesystem::path& path) {
  if (series.empty()) throw std::invalid_argument("emit_dat: empty series");
  Curve sorted = series;
  std::sort(sorted.begin(), sorted.end());
  std::string content;
  for (const auto& [x, y] : sorted) {
    content += format_sig6(x);
    content += ' ';
    content += format_sig6(y);
    content += '\n';
  }
  atomic_write(path, content);
}

void save_tree(const ClassificationTree& tree, const Alphabet& alphabet,
               const std::filesystem::path& path) {
  atomic_write(path, tree_to_json(tree, alphabet).dump(2) + "\n");
}

ClassificationTree load_tree(const std::filesystem::path& path,
                             const Alphabet& alphabet) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("tree file " + path.string() + ": " +
                                e.what());
  }
  return tree_from_json(j, alphabet);
}

namespace {

nlohmann::json record_to_json(const RunRecord& r) {
  nlohmann::json cps = nlohmann::json::array();
  for (const Checkpoint& cp : r.checkpoints)
    cps.push_back({cp.queries, cp.progress});
  return {{"seed", r.seed},
          {"kind", to_string(r.kind)},
          {"checkpoints", std::move(cps)},
          {"phase2_start", r.phase2_start},
          {"queries_to_final_t1", r.queries_to_final_t1},
          {"first_post_switch_progress", r.first_post_switch_progress},
          {"converged_t0", r.converged_t0},
          {"converged_t1", r.converged_t1}};
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.seed = j.at("seed").get<std::uint64_t>();
  std::string kind = j.at("kind").get<std::string>();
  r.kind = kind == "classic" ? LearnerKind::classic : LearnerKind::incremental;
  for (const auto& cp : j.at("checkpoints"))
    r.checkpoints.push_back(
        {cp.at(0).get<std::uint64_t>(), cp.at(1).get<double>()});
  r.phase2_start = j.at("phase2_start").get<std::uint64_t>();
  r.queries_to_final_t1 = j.at("queries_to_final_t1").get<std::uint64_t>();
  r.first_post_switch_progress =
      j.at("first_post_switch_progress").get<double>();
  r.converged_t0 = j.at("converged_t0").get<bool>();
  r.converged_t1 = j.at("converged_t1").get<bool>();
  return r;
}

}  // namespace

void save_records(const std::vector<RunRecord>& records,
                  const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const RunRecord& r : records) j.push_back(record_to_json(r));
  atomic_write(path, j.dump(1) + "\n");
}

std::vector<RunRecord> load_records(const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::parse(read_file(path));
  std::vector<RunRecord> out;
  for (const auto& rj : j) out.push_back(record_from_json(rj));
  return out;
}

namespace {

std::uint64_t pair_seed(const ScenarioConfig& cfg, std::size_t size,
                        std::size_t rep) {
  std::uint64_t s = mix_seed(cfg.master_seed,
                             cfg.scenario == Scenario::mutation ? 1 : 2);
  s = mix_seed(s, size);
  return mix_seed(s, rep);
}

struct KindStats {
  std::size_t total = 0;
  std::size_t non_converged = 0;
  double mean_queries = 0.0;
  double mean_first_progress = 0.0;
};

KindStats cell_stats(const std::vector<RunRecord>& records, LearnerKind kind) {
  KindStats st;
  double qsum = 0.0, psum = 0.0;
  std::size_t converged = 0;
  for (const RunRecord& r : records) {
    if (r.kind != kind) continue;
    ++st.total;
    psum += r.first_post_switch_progress;
    if (r.converged_t1) {
      qsum += double(r.queries_to_final_t1);
      ++converged;
    } else {
      ++st.non_converged;
    }
  }
  if (converged > 0) st.mean_queries = qsum / double(converged);
  if (st.total > 0) st.mean_first_progress = psum / double(st.total);
  return st;
}

}  // namespace

void run_benchmark(const ScenarioConfig& config) {
  if (config.out_dir.empty())
    throw std::invalid_argument("benchmark needs an output directory");
  if (config.alphabet_size < 1 || config.alphabet_size > 26)
    throw std::invalid_argument("alphabet size must be in [1, 26]");
  std::string chars;
  for (std::size_t i = 0; i < config.alphabet_size; ++i)
    chars.push_back(char('a' + i));
  const Alphabet alphabet(chars);

  struct Task {
    std::size_t size;
    std::size_t rep;
  };
  std::vector<Task> tasks;
  for (std::size_t size : config.sizes)
    for (std::size_t rep = 0; rep < config.repetitions; ++rep)
      tasks.push_back({size, rep});

  // One slot per task; workers are stateless so the output is independent
  // of the thread count.
  std::vector<std::pair<RunRecord, RunRecord>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      std::uint64_t seed = pair_seed(config, task.size, task.rep);
      Rng rng(seed);
      auto [t0, t1] =
          make_pair_targets(config.scenario, task.size, alphabet, rng);
      SessionConfig sc{config.switch_point, config.alpha, config.eq, seed};
      results[i].first = run_session(LearnerKind::classic, t0, t1, sc);
      results[i].second = run_session(LearnerKind::incremental, t0, t1, sc);
    }
  };
  std::size_t threads = std::max<std::size_t>(1, config.parallel);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::map<std::size_t, std::vector<RunRecord>> by_size;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    by_size[tasks[i].size].push_back(results[i].first);
    by_size[tasks[i].size].push_back(results[i].second);
  }

  const std::filesystem::path scenario_dir =
      config.out_dir / to_string(config.scenario);
  std::ostringstream summary;
  summary << "scenario: " << to_string(config.scenario) << "\n"
          << "repetitions: " << config.repetitions
          << ", switch: " << config.switch_point << ", alpha: " << config.alpha
          << ", seed: " << config.master_seed << "\n\n";

  for (const auto& [size, records] : by_size) {
    std::filesystem::path size_dir = scenario_dir / std::to_string(size);
    std::filesystem::create_directories(size_dir);
    for (LearnerKind kind : {LearnerKind::classic, LearnerKind::incremental}) {
      std::vector<RunRecord> of_kind;
      for (const RunRecord& r : records)
        if (r.kind == kind) of_kind.push_back(r);
      emit_dat(average_curves(of_kind, config.curve_step),
               size_dir / (to_string(kind) + ".dat"));
      KindStats st = cell_stats(records, kind);
      summary << "size " << size << " " << to_string(kind)
              << ": mean queries_to_final_t1 = " << st.mean_queries
              << ", mean first post-switch progress = "
              << st.mean_first_progress << ", non-converged " << st.non_converged
              << "/" << st.total << "\n";
    }
    save_records(records, size_dir / "records.json");
  }

  std::vector<RatioPoint> ratios = compute_ratios(by_size);
  Curve ratio_series;
  summary << "\n";
  for (const RatioPoint& rp : ratios) {
    ratio_series.emplace_back(double(rp.size), rp.ratio);
    summary << "size " << rp.size << " ratio (incremental/classic) = "
            << rp.ratio << "\n";
  }
  emit_dat(ratio_series,
           config.out_dir /
               (config.scenario == Scenario::mutation ? "mut.dat" : "feat.dat"));
  atomic_write(scenario_dir / "summary.txt", summary.str());
}

std::map<Scenario, std::vector<RatioPoint>> write_ratios_from_dir(
    const std::filesystem::path& dir) {
  std::map<Scenario, std::vector<RatioPoint>> out;
  for (Scenario scenario : {Scenario::mutation, Scenario::feature_add}) {
    std::filesystem::path scenario_dir = dir / to_string(scenario);
    if (!std::filesystem::is_directory(scenario_dir)) continue;
    std::map<std::size_t, std::vector<RunRecord>> by_size;
    for (const auto& entry :
         std::filesystem::directory_iterator(scenario_dir)) {
      if (!entry.is_directory()) continue;
      std::filesystem::path records = entry.path() / "records.json";
      if (!std::filesystem::exists(records)) continue;
      std::size_t size = std::stoul(entry.path().filename().string());
      by_size[size] = load_records(records);
    }
    if (by_size.empty()) continue;
    std::vector<RatioPoint> ratios = compute_ratios(by_size);
    Curve series;
    for (const RatioPoint& rp : ratios)
      series.emplace_back(double(rp.size), rp.ratio);
    emit_dat(series, dir / (scenario == Scenario::mutation ? "mut.dat"
                                                           : "feat.dat"));
    out[scenario] = std::move(ratios);
  }
  return out;
}

}  // namespace treelearn
