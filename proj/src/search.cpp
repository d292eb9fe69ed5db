#include "mms/search.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace mms {

ScreeningState ScreeningState::make(double mean, std::int64_t max, double lambda) {
  ScreeningState state{mean, max, lambda, 0.0};
  state.threshold = compute_threshold(state);
  return state;
}

double compute_threshold(const ScreeningState& state) {
  // mean + lambda * (max - mean), arranged so lambda == 1 yields max exactly.
  const double max = static_cast<double>(state.max);
  const double t = max - (1.0 - state.lambda) * (max - state.mean);
  return max >= state.mean ? std::clamp(t, state.mean, max) : t;
}

bool update_best_and_threshold(ScreeningState& state, std::int64_t candidate_value) {
  if (candidate_value <= state.max) return false;
  state.max = candidate_value;
  state.threshold = compute_threshold(state);
  return true;
}

double initial_lambda(double mean, std::int64_t start_value, LambdaPolicy policy) {
  const auto clamp = [](double v) { return std::clamp(v, kMinLambda, 1.0); };
  if (policy.kind == LambdaPolicy::Kind::fixed) return clamp(policy.value);
  if (mean <= 0.0 || start_value <= 0) return 0.5;
  return clamp(static_cast<double>(start_value) / mean);
}

Solution first_derivative_start(const QuboInstance& instance) {
  const std::vector<std::int64_t> sums = row_sums(instance);
  BitVector bits(instance.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = sums[i] > 0 ? 1 : 0;
  return make_solution(instance, std::move(bits));
}

std::size_t perturbation_size(std::size_t n, std::size_t iteration) {
  const std::size_t cycle = std::max<std::size_t>(2, (n + 9) / 10);
  return 1 + iteration % cycle;
}

Solution diversify(const Solution& best, std::size_t iteration, DiversifyStrategy strategy,
                   Rng& rng) {
  const std::size_t n = best.bits.size();
  if (strategy == DiversifyStrategy::blend) {
    BitVector other(n);
    for (auto& b : other) b = rng.bit() ? 1 : 0;
    return blend(best, other, rng);
  }

  Solution child{best.bits, 0, false};
  const std::size_t k = std::min(perturbation_size(n, iteration), n);
  // Floyd's sampling of k distinct positions out of n.
  std::vector<std::uint8_t> picked(n, 0);
  for (std::size_t j = n - k; j < n; ++j) {
    std::size_t t = static_cast<std::size_t>(rng.below(j + 1));
    if (picked[t]) t = j;
    picked[t] = 1;
    child.bits[t] ^= 1;
  }
  return child;
}

Solution blend(const Solution& best, const BitVector& other, Rng& rng) {
  if (other.size() != best.bits.size())
    throw std::invalid_argument("blend parents differ in length");
  Solution child{best.bits, 0, false};
  for (std::size_t i = 0; i < child.bits.size(); ++i)
    if (!rng.bit()) child.bits[i] = other[i];
  return child;
}

AscentResult steepest_ascent(const QuboInstance& instance, Solution start, std::size_t max_flips) {
  if (!start.evaluated) {
    start.value = evaluate(instance, start.bits);
    start.evaluated = true;
  }
  AscentResult result{std::move(start), 0, {}, {}};
  result.gains = init_gains(instance, result.solution.bits);
  auto& gains = result.gains.gains;

  while (result.flips < max_flips) {
    const auto best_it = std::max_element(gains.begin(), gains.end());
    if (best_it == gains.end() || *best_it <= 0) break;
    const auto i = static_cast<std::size_t>(best_it - gains.begin());
    result.deltas.push_back(apply_flip(instance, result.solution, result.gains, i));
    ++result.flips;
  }
  assert(result.solution.value == evaluate(instance, result.solution.bits));
  return result;
}

SearchResult run(const QuboInstance& instance, const SearchConfig& config, Clock& clock,
                 Rng& rng, const IterationObserver& observer, const BatchBackend& backend) {
  if (config.num_iterations == 0) throw std::invalid_argument("num_iterations must be at least 1");
  if (config.num_samples == 0) throw std::invalid_argument("num_samples must be at least 1");
  if (config.max_flips && *config.max_flips == 0)
    throw std::invalid_argument("max_flips must be at least 1");

  const std::size_t n = instance.size();
  const std::size_t max_flips = config.max_flips.value_or(10 * n);

  SearchResult result;
  result.sample_stats = sample_random_stats(instance, config.num_samples, config.seed, backend);

  Solution start = first_derivative_start(instance);
  ScreeningState state = ScreeningState::make(
      result.sample_stats.mean, start.value,
      initial_lambda(result.sample_stats.mean, start.value, config.lambda_policy));
  result.best = start;

  for (std::size_t i = 0; i < config.num_iterations; ++i) {
    if (i > 0 && config.time_limit && clock.elapsed() >= *config.time_limit) break;

    Solution x = i == 0 ? start : diversify(result.best, i, config.diversify_strategy, rng);
    x.value = evaluate_batch(instance, std::span<const BitVector>(&x.bits, 1), backend)[0];
    x.evaluated = true;

    IterationEvent event{i, x.value, state.threshold, result.best.value, false, x.value};

    // Iteration 0 always ascends from the start, even when lambda puts T above it.
    if (i == 0 || static_cast<double>(x.value) > state.threshold) {
      AscentResult ascent = steepest_ascent(instance, std::move(x), max_flips);
      ++result.ascent_count;
      event.ascended = true;
      event.value_after = ascent.solution.value;

      const bool improved = update_best_and_threshold(state, ascent.solution.value);
      if (improved || i == 0) {
        result.best = std::move(ascent.solution);
        result.trajectory.push_back({clock.elapsed(), i, result.best.value});
      }
    }
    ++result.iterations_run;
    if (observer) observer(event);
  }

  result.best_value = result.best.value;
  result.screening = state;
  return result;
}

SearchResult run(const QuboInstance& instance, const SearchConfig& config) {
  SteadyClock clock;
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  return run(instance, config, clock, rng);
}

}  // namespace mms
