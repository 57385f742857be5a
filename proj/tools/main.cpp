// Command-line front end: evolving-target benchmarks, single adaptive
// learning sessions on DFA files, and random target generation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treelearn/bench.hpp"
#include "treelearn/learners.hpp"
#include "treelearn/metrics.hpp"

using namespace treelearn;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// `key = value` config file; '#' starts a comment. Keys match the long
// flag names of `bench run`.
std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError(path.string() + ":" +
                                 std::to_string(lineno) +
                                 ": expected `key = value`");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
  std::vector<std::size_t> sizes;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    sizes.push_back(std::stoul(trim(item)));
  return sizes;
}

// Config values apply only where the flag was not given on the command
// line.
void apply_config_file(const std::filesystem::path& path, const CLI::App& run,
                       ScenarioConfig& cfg, std::string& scenario_name) {
  auto entries = parse_config_file(path);
  auto take = [&](const char* key, auto&& set) {
    auto it = entries.find(key);
    if (it == entries.end()) return;
    if (run.count(std::string("--") + key) == 0) set(it->second);
    entries.erase(it);
  };
  take("scenario", [&](const std::string& v) { scenario_name = v; });
  take("sizes", [&](const std::string& v) { cfg.sizes = parse_size_list(v); });
  take("alphabet-size",
       [&](const std::string& v) { cfg.alphabet_size = std::stoul(v); });
  take("reps", [&](const std::string& v) { cfg.repetitions = std::stoul(v); });
  take("alpha", [&](const std::string& v) { cfg.alpha = std::stod(v); });
  take("switch", [&](const std::string& v) { cfg.switch_point = std::stoull(v); });
  take("seed", [&](const std::string& v) { cfg.master_seed = std::stoull(v); });
  take("out", [&](const std::string& v) { cfg.out_dir = v; });
  take("eq-attempts",
       [&](const std::string& v) { cfg.eq.max_attempts = std::stoul(v); });
  take("eq-mean-len",
       [&](const std::string& v) { cfg.eq.expected_length = std::stod(v); });
  take("parallel", [&](const std::string& v) { cfg.parallel = std::stoul(v); });
  take("step", [&](const std::string& v) { cfg.curve_step = std::stoull(v); });
  if (!entries.empty())
    throw CLI::ValidationError(path.string() + ": unknown key `" +
                               entries.begin()->first + "`");
}

int cmd_bench_run(const ScenarioConfig& cfg) {
  run_benchmark(cfg);
  std::cout << "wrote " << (cfg.out_dir / to_string(cfg.scenario)).string()
            << " and "
            << (cfg.out_dir / (cfg.scenario == Scenario::mutation
                                   ? "mut.dat"
                                   : "feat.dat"))
                   .string()
            << "\n";
  return 0;
}

int cmd_bench_ratios(const std::filesystem::path& dir) {
  auto ratios = write_ratios_from_dir(dir);
  if (ratios.empty()) {
    std::cerr << "no records found under " << dir.string() << "\n";
    return 1;
  }
  for (const auto& [scenario, points] : ratios) {
    std::cout << to_string(scenario) << ":\n";
    for (const RatioPoint& rp : points)
      std::cout << "  size " << rp.size << " ratio " << rp.ratio << "\n";
  }
  return 0;
}

struct LearnArgs {
  std::filesystem::path target;
  std::filesystem::path tree;
  std::filesystem::path save_tree_path;
  EqConfig eq;
};

int cmd_learn(const LearnArgs& args) {
  Dfa target = dfa_from_text(read_file(args.target));
  const Alphabet alphabet = target.alphabet;

  std::optional<ClassificationTree> prev;
  if (!args.tree.empty()) prev = load_tree(args.tree, alphabet);

  DfaOracle mq(target);
  RandomWordEq eq(mq, args.eq);
  LearnObserver report = [](const RoundEvent& ev, const Dfa&) {
    std::cout << "round " << ev.round << ": " << ev.queries << " queries, "
              << ev.hypothesis_states << " states\n";
  };
  LearnResult res = incremental_kv(alphabet, std::move(prev), mq, eq, report);

  bool exact = !exact_counterexample(res.hypothesis, target).has_value();
  std::cout << "final hypothesis: " << res.hypothesis.num_states()
            << " states after " << mq.queries_issued() << " membership queries"
            << (exact ? "" : " (equivalence oracle gave up early)") << "\n";
  if (!args.save_tree_path.empty()) {
    save_tree(res.tree, alphabet, args.save_tree_path);
    std::cout << "tree saved to " << args.save_tree_path.string() << "\n";
  }
  return exact ? 0 : 1;
}

int cmd_gen(std::size_t states, const std::string& alphabet_chars,
            std::uint64_t seed, const std::filesystem::path& out) {
  Rng rng(seed);
  Dfa d = random_dfa(states, Alphabet(alphabet_chars), rng);
  std::string text = to_text(d);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw CLI::ValidationError("cannot open " + out.string());
    f << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tree-based adaptive DFA learning"};
  app.require_subcommand(1);

  // bench: evolving-target experiments.
  CLI::App* bench = app.add_subcommand("bench", "evolving-target benchmarks");
  bench->require_subcommand(1);

  ScenarioConfig cfg;
  std::string scenario_name = "mutation";
  std::filesystem::path config_path;
  CLI::App* run = bench->add_subcommand("run", "run a benchmark scenario");
  run->add_option("--config", config_path,
                  "key = value config file; flags override");
  run->add_option("--scenario", scenario_name, "mutation or feature-add")
      ->capture_default_str();
  run->add_option("--sizes", cfg.sizes, "minimal target sizes")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--alphabet-size", cfg.alphabet_size, "alphabet size")
      ->capture_default_str();
  run->add_option("--reps", cfg.repetitions, "repetitions per size")
      ->capture_default_str();
  run->add_option("--alpha", cfg.alpha, "progress discount factor")
      ->capture_default_str();
  run->add_option("--switch", cfg.switch_point,
                  "query count at which the target evolves")
      ->capture_default_str();
  run->add_option("--seed", cfg.master_seed, "master seed")
      ->capture_default_str();
  run->add_option("--out", cfg.out_dir, "output directory");
  run->add_option("--eq-attempts", cfg.eq.max_attempts,
                  "random words tried per equivalence query")
      ->capture_default_str();
  run->add_option("--eq-mean-len", cfg.eq.expected_length,
                  "mean random test word length")
      ->capture_default_str();
  run->add_option("--parallel", cfg.parallel, "worker threads")
      ->capture_default_str();
  run->add_option("--step", cfg.curve_step, "progress curve grid step")
      ->capture_default_str();

  std::filesystem::path ratios_dir;
  CLI::App* ratios =
      bench->add_subcommand("ratios", "recompute ratio files from records");
  ratios->add_option("dir", ratios_dir, "benchmark output directory")
      ->required();

  // learn: one adaptive session against a DFA file.
  LearnArgs learn_args;
  CLI::App* learn =
      app.add_subcommand("learn", "learn a DFA file, optionally reusing a tree");
  learn->add_option("--target", learn_args.target, "target DFA text file")
      ->required();
  learn->add_option("--tree", learn_args.tree,
                    "classification tree (JSON) to start from");
  learn->add_option("--save-tree", learn_args.save_tree_path,
                    "where to save the final tree (JSON)");
  learn->add_option("--eq-attempts", learn_args.eq.max_attempts,
                    "random words tried per equivalence query")
      ->capture_default_str();
  learn->add_option("--eq-mean-len", learn_args.eq.expected_length,
                    "mean random test word length")
      ->capture_default_str();
  learn->add_option("--seed", learn_args.eq.seed, "equivalence oracle seed")
      ->capture_default_str();

  // gen: random minimal target files for `learn`.
  std::size_t gen_states = 10;
  std::string gen_alphabet = "ab";
  std::uint64_t gen_seed = 1;
  std::filesystem::path gen_out;
  CLI::App* gen = app.add_subcommand("gen", "generate a random minimal DFA");
  gen->add_option("--states", gen_states, "minimal state count")
      ->capture_default_str();
  gen->add_option("--alphabet", gen_alphabet, "alphabet characters")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output file (stdout when absent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!config_path.empty())
        apply_config_file(config_path, *run, cfg, scenario_name);
      if (cfg.out_dir.empty())
        throw CLI::ValidationError("--out is required (flag or config file)");
      cfg.scenario = scenario_from_string(scenario_name);
      return cmd_bench_run(cfg);
    }
    if (ratios->parsed()) return cmd_bench_ratios(ratios_dir);
    if (learn->parsed()) return cmd_learn(learn_args);
    if (gen->parsed()) return cmd_gen(gen_states, gen_alphabet, gen_seed,
                                      gen_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
