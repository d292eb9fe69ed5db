#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mms/eval.hpp"
#include "mms/instance.hpp"
#include "mms/random.hpp"

namespace mms {

/**
 * Screening bar T = mean + lambda * (max - mean).
 *
 * mean is the average objective of random samples, max the best value seen so
 * far. A diversified start earns a steepest ascent only when its value
 * strictly exceeds threshold. Use make() or the mutators below so threshold
 * never goes stale.
 */
struct ScreeningState {
  double mean = 0.0;
  std::int64_t max = 0;
  double lambda = 1.0;
  double threshold = 0.0;

  static ScreeningState make(double mean, std::int64_t max, double lambda);
};

double compute_threshold(const ScreeningState& state);

// Raises max (and T) when candidate_value > max. Lambda is left untouched.
bool update_best_and_threshold(ScreeningState& state, std::int64_t candidate_value);

struct LambdaPolicy {
  enum class Kind { paper_clamped, fixed };
  Kind kind = Kind::paper_clamped;
  double value = 0.0;  // used by fixed only

  static LambdaPolicy paper_clamped() { return {}; }
  static LambdaPolicy fixed(double v) { return {Kind::fixed, v}; }
};

inline constexpr double kMinLambda = 1e-6;

// paper_clamped: start_value / mean clamped to [1e-6, 1], or 0.5 when either
// is nonpositive. fixed: the given value clamped to [1e-6, 1].
double initial_lambda(double mean, std::int64_t start_value, LambdaPolicy policy);

enum class DiversifyStrategy { perturb, blend };

struct SearchConfig {
  std::size_t num_iterations = 2500;
  std::optional<double> time_limit;  // seconds
  std::size_t num_samples = 1000;
  std::uint64_t seed = 0;
  LambdaPolicy lambda_policy = LambdaPolicy::paper_clamped();
  std::optional<std::size_t> max_flips;  // default 10 * n
  DiversifyStrategy diversify_strategy = DiversifyStrategy::perturb;
};

struct TrajectoryPoint {
  double elapsed = 0.0;
  std::size_t iteration = 0;
  std::int64_t best_value = 0;
};

struct SearchResult {
  Solution best;
  std::int64_t best_value = 0;
  std::vector<TrajectoryPoint> trajectory;
  std::size_t iterations_run = 0;
  std::size_t ascent_count = 0;
  SampleStats sample_stats;
  ScreeningState screening;  // final state
};

/** Seconds since the start of a run. */
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double elapsed() = 0;
};

class SteadyClock final : public Clock {
 public:
  SteadyClock() : start_(std::chrono::steady_clock::now()) {}
  double elapsed() override {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Advances by a fixed step on every reading; makes timed output reproducible.
class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(double step = 1e-3) : step_(step) {}
  double elapsed() override {
    now_ += step_;
    return now_;
  }

 private:
  double step_;
  double now_ = 0.0;
};

Solution first_derivative_start(const QuboInstance& instance);

// Flip count used by the perturb operator at loop index i:
// 1 + (i mod K) with K = max(2, ceil(n / 10)).
std::size_t perturbation_size(std::size_t n, std::size_t iteration);

// Never modifies best. The result is unevaluated.
Solution diversify(const Solution& best, std::size_t iteration, DiversifyStrategy strategy,
                   Rng& rng);

// Uniform crossover: each bit from `best` with probability 1/2, else from `other`.
Solution blend(const Solution& best, const BitVector& other, Rng& rng);

struct AscentResult {
  Solution solution;
  std::size_t flips = 0;
  std::vector<std::int64_t> deltas;  // objective change of every flip, in order
  GainVector gains;                  // gains at the returned solution
};

// Repeatedly applies the largest strictly positive 1-flip gain (lowest index
// on ties) until none is left or max_flips flips were made.
AscentResult steepest_ascent(const QuboInstance& instance, Solution start, std::size_t max_flips);

/** Per-iteration record handed to an optional observer. */
struct IterationEvent {
  std::size_t iteration = 0;
  std::int64_t value = 0;         // value of x before any ascent
  double threshold = 0.0;         // screening bar in force
  std::int64_t best_before = 0;   // incumbent before this iteration
  bool ascended = false;
  std::int64_t value_after = 0;   // value after the ascent (== value when none ran)
};

using IterationObserver = std::function<void(const IterationEvent&)>;

SearchResult run(const QuboInstance& instance, const SearchConfig& config, Clock& clock,
                 Rng& rng, const IterationObserver& observer = {},
                 const BatchBackend& backend = default_backend());

// Steady clock and an Rng derived from config.seed.
SearchResult run(const QuboInstance& instance, const SearchConfig& config);

}  // namespace mms
