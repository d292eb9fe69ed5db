#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "mms/cli.hpp"
#include "mms/instance.hpp"
#include "mms/report.hpp"
#include "mms/search.hpp"

namespace mms::cli {

namespace {

namespace fs = std::filesystem;

/** Raised for flag values CLI11 accepts syntactically but the solver rejects. */
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SearchFlags {
  std::string format = "orlib";
  std::size_t iterations = 2500;
  std::optional<double> time_limit;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::string lambda = "paper";
  std::optional<std::size_t> max_flips;
  std::string diversify = "perturb";
  std::string clock = "wall";
  unsigned workers = 0;
};

void add_search_flags(CLI::App& cmd, SearchFlags& f) {
  cmd.add_option("--format", f.format, "Instance file format")
      ->check(CLI::IsMember({"orlib", "single"}))
      ->capture_default_str();
  cmd.add_option("--iterations", f.iterations, "Diversify-screen-ascend iterations")
      ->capture_default_str();
  cmd.add_option("--time-limit", f.time_limit, "Stop after this many seconds");
  cmd.add_option("--samples", f.samples, "Random samples for the screening mean")
      ->capture_default_str();
  cmd.add_option("--seed", f.seed, "Random seed")->capture_default_str();
  cmd.add_option("--lambda", f.lambda, "Screening lambda: 'paper' or a number in (0,1]")
      ->capture_default_str();
  cmd.add_option("--max-flips", f.max_flips, "Flip budget per ascent (default 10n)");
  cmd.add_option("--diversify", f.diversify, "Diversification operator")
      ->check(CLI::IsMember({"perturb", "blend"}))
      ->capture_default_str();
  cmd.add_option("--clock", f.clock,
                 "'wall' for real time, 'virtual' for a reproducible 1 ms/reading clock")
      ->check(CLI::IsMember({"wall", "virtual"}))
      ->capture_default_str();
  cmd.add_option("--workers", f.workers, "Batch evaluation threads (0 = all cores)")
      ->capture_default_str();
}

SearchConfig to_config(const SearchFlags& f) {
  SearchConfig config;
  if (f.iterations < 1) throw UsageError("iterations must be ≥ 1");
  if (f.samples < 1) throw UsageError("samples must be ≥ 1");
  if (f.max_flips && *f.max_flips < 1) throw UsageError("max-flips must be ≥ 1");
  if (f.time_limit && !(*f.time_limit > 0.0)) throw UsageError("time-limit must be positive");
  config.num_iterations = f.iterations;
  config.time_limit = f.time_limit;
  config.num_samples = f.samples;
  config.seed = f.seed;
  config.max_flips = f.max_flips;
  config.diversify_strategy =
      f.diversify == "blend" ? DiversifyStrategy::blend : DiversifyStrategy::perturb;
  if (f.lambda != "paper") {
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(f.lambda, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != f.lambda.size() || !std::isfinite(v) || v <= 0.0)
      throw UsageError("lambda must be 'paper' or a positive number, got '" + f.lambda + "'");
    config.lambda_policy = LambdaPolicy::fixed(v);
  }
  return config;
}

std::unique_ptr<Clock> make_clock(const std::string& kind) {
  if (kind == "virtual") return std::make_unique<VirtualClock>();
  return std::make_unique<SteadyClock>();
}

QuboInstance load(const fs::path& path, const std::string& format, std::size_t index) {
  if (format == "single") {
    if (index != 1) throw UsageError("single-format files hold one instance; index must be 1");
    return load_single_file(path);
  }
  return load_orlib_instance(path, index);
}

struct Outcome {
  RunRecord record;
  SearchResult result;
};

Outcome solve_one(const QuboInstance& instance, const SearchConfig& config,
                  const SearchFlags& flags, std::optional<std::int64_t> reference) {
  const ThreadedBatchBackend backend(flags.workers);
  auto clock = make_clock(flags.clock);
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  SearchResult result = run(instance, config, *clock, rng, {}, backend);
  const double wall = clock->elapsed();

  if (evaluate(instance, result.best.bits) != result.best_value)
    throw std::logic_error("best solution does not re-evaluate to the reported value");
  RunRecord record = make_run_record(instance.name(), config.seed, result, reference, wall);
  return {std::move(record), std::move(result)};
}

void write_trajectory_file(const fs::path& path, const SearchResult& result,
                           std::optional<std::int64_t> reference) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_trajectory_csv(result, reference, file);
}

int cmd_solve(const fs::path& instance_path, std::size_t index, const SearchFlags& flags,
              std::optional<std::int64_t> best_known,
              const std::optional<fs::path>& trajectory, std::ostream& out,
              std::ostream& err) {
  SearchConfig config;
  try {
    if (index < 1) throw UsageError("index must be ≥ 1");
    if (best_known && *best_known == 0) throw UsageError("best-known must be nonzero");
    config = to_config(flags);
    if (flags.format == "single" && index != 1)
      throw UsageError("single-format files hold one instance; index must be 1");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    const QuboInstance instance = load(instance_path, flags.format, index);
    const Outcome outcome = solve_one(instance, config, flags, best_known);
    if (trajectory) write_trajectory_file(*trajectory, outcome.result, best_known);
    out << format_run_record(outcome.record) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("failed to write summary");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

struct ManifestEntry {
  std::size_t line = 0;
  fs::path path;
  std::size_t index = 1;
  std::optional<std::int64_t> best_known;
  std::string problem;  // nonempty when the line itself is malformed
};

std::vector<ManifestEntry> read_manifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot open manifest " + manifest.string());

  std::vector<ManifestEntry> entries;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos || text[0] == '#') continue;

    std::vector<std::string> fields;
    std::stringstream ss(text);
    for (std::string field; std::getline(ss, field, '\t');) fields.push_back(field);

    ManifestEntry entry;
    entry.line = line_no;
    entry.path = fields[0];
    if (entry.path.is_relative()) entry.path = manifest.parent_path() / entry.path;
    try {
      if (fields.size() > 3) throw std::invalid_argument("too many fields");
      if (fields.size() >= 2 && !fields[1].empty()) {
        std::size_t used = 0;
        const long long idx = std::stoll(fields[1], &used);
        if (used != fields[1].size() || idx < 1) throw std::invalid_argument("bad index");
        entry.index = static_cast<std::size_t>(idx);
      }
      if (fields.size() == 3 && !fields[2].empty()) {
        std::size_t used = 0;
        entry.best_known = std::stoll(fields[2], &used);
        if (used != fields[2].size()) throw std::invalid_argument("bad best_known");
        if (*entry.best_known == 0) throw std::invalid_argument("best_known must be nonzero");
      }
    } catch (const std::exception& e) {
      entry.problem = std::string("malformed entry (") + e.what() + ")";
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

int cmd_bench(const fs::path& manifest, const SearchFlags& flags, unsigned parallel,
              const std::optional<fs::path>& trajectory_dir, std::ostream& out,
              std::ostream& err) {
  SearchConfig config;
  try {
    config = to_config(flags);
    if (parallel < 1) throw UsageError("parallel must be ≥ 1");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  std::vector<ManifestEntry> entries;
  try {
    entries = read_manifest(manifest);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  if (entries.empty()) {
    err << "error: empty manifest\n";
    return kRuntimeError;
  }

  std::vector<std::optional<RunRecord>> records(entries.size());
  std::vector<std::string> failures(entries.size());
  auto process = [&](std::size_t k) {
    const ManifestEntry& entry = entries[k];
    try {
      if (!entry.problem.empty()) throw std::runtime_error(entry.problem);
      const QuboInstance instance = load(entry.path, flags.format, entry.index);
      Outcome outcome = solve_one(instance, config, flags, entry.best_known);
      if (trajectory_dir)
        write_trajectory_file(*trajectory_dir / (instance.name() + ".csv"), outcome.result,
                              entry.best_known);
      records[k] = std::move(outcome.record);
    } catch (const std::exception& e) {
      failures[k] = e.what();
    }
  };

  const std::size_t workers = std::min<std::size_t>(parallel, entries.size());
  if (workers <= 1) {
    for (std::size_t k = 0; k < entries.size(); ++k) process(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < entries.size();) process(k);
      });
    for (auto& t : pool) t.join();
  }

  std::vector<RunRecord> done;
  bool failed = false;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (records[k]) {
      out << format_run_record(*records[k]) << '\n';
      done.push_back(*records[k]);
    } else {
      failed = true;
      err << "manifest line " << entries[k].line << ": " << failures[k] << '\n';
    }
  }
  out << format_average(done) << '\n';
  out.flush();
  return failed || !out ? kRuntimeError : kOk;
}

int cmd_gen(std::size_t n, double density, std::int64_t low, std::int64_t high,
            std::uint64_t seed, const fs::path& path, std::ostream& err) {
  std::optional<QuboInstance> instance;
  try {
    if (n < 1) throw UsageError("n must be ≥ 1");
    if (!(density > 0.0 && density <= 1.0)) throw UsageError("density must lie in (0, 1]");
    if (low > high) throw UsageError("low must not exceed high");
    instance = generate_random(n, density, WeightSpec{low, high}, seed);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  std::ofstream file(path, std::ios::binary);
  if (file) write_single(*instance, file);
  file.flush();
  if (!file) {
    err << "error: cannot write " << path.string() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diversified multi-start solver for unconstrained binary quadratic problems"};
  app.require_subcommand(1);

  SearchFlags solve_flags;
  fs::path instance_path;
  std::size_t index = 1;
  std::optional<std::int64_t> best_known;
  std::optional<fs::path> trajectory;
  auto* solve = app.add_subcommand("solve", "Run the search on one instance");
  solve->add_option("--instance", instance_path, "Instance file (plain or gzip)")->required();
  solve->add_option("--index", index, "1-based instance ordinal in a multi-instance file")
      ->capture_default_str();
  solve->add_option("--best-known", best_known, "Reference value for the gap column");
  solve->add_option("--trajectory", trajectory, "Write the improvement trajectory CSV here");
  add_search_flags(*solve, solve_flags);

  SearchFlags bench_flags;
  fs::path manifest;
  unsigned parallel = 1;
  std::optional<fs::path> trajectory_dir;
  auto* bench = app.add_subcommand("bench", "Run every entry of a manifest");
  bench->add_option("--manifest", manifest, "Lines of instance_path<TAB>index<TAB>best_known")
      ->required();
  bench->add_option("--parallel", parallel, "Entries solved concurrently")->capture_default_str();
  bench->add_option("--trajectory-dir", trajectory_dir,
                    "Write <instance>.csv trajectories into this directory");
  add_search_flags(*bench, bench_flags);

  std::size_t gen_n = 0;
  double gen_density = 0.0;
  std::int64_t gen_low = 0, gen_high = 0;
  std::uint64_t gen_seed = 0;
  fs::path gen_out;
  auto* gen = app.add_subcommand("gen", "Write a seeded random instance (single format)");
  gen->add_option("--n", gen_n, "Variables")->required();
  gen->add_option("--density", gen_density, "Probability that a pair is nonzero")->required();
  gen->add_option("--low", gen_low, "Smallest coefficient")->required();
  gen->add_option("--high", gen_high, "Largest coefficient")->required();
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  if (*solve)
    return cmd_solve(instance_path, index, solve_flags, best_known, trajectory, out, err);
  if (*bench) return cmd_bench(manifest, bench_flags, parallel, trajectory_dir, out, err);
  return cmd_gen(gen_n, gen_density, gen_low, gen_high, gen_seed, gen_out, err);
}

}  // namespace mms::cli
