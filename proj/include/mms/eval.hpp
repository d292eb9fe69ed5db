#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mms/instance.hpp"

namespace mms {

using BitVector = std::vector<std::uint8_t>;

/** A 0/1 assignment with a cached objective value. */
struct Solution {
  BitVector bits;
  std::int64_t value = 0;
  // False after construction by a diversification operator until evaluated.
  bool evaluated = false;
};

/** gains[i] is f(x with bit i flipped) - f(x), exact. */
struct GainVector {
  std::vector<std::int64_t> gains;
};

struct SampleStats {
  double mean = 0.0;
  std::int64_t sample_max = 0;
  std::size_t count = 0;
  // Sample standard deviation (n - 1 denominator); 0 when count == 1.
  double stddev = 0.0;
};

// x'Qx over the full matrix. Throws std::invalid_argument on length mismatch.
std::int64_t evaluate(const QuboInstance& instance, std::span<const std::uint8_t> bits);

Solution make_solution(const QuboInstance& instance, BitVector bits);

/**
 * Evaluates many assignments at once.
 *
 * Implementations must return values in input order and give the same result
 * as calling evaluate() on each element, whatever their internal parallelism.
 */
class BatchBackend {
 public:
  virtual ~BatchBackend() = default;
  virtual std::vector<std::int64_t> evaluate(const QuboInstance& instance,
                                             std::span<const BitVector> batch) const = 0;
};

/** Splits the batch into contiguous chunks, one per worker thread. */
class ThreadedBatchBackend final : public BatchBackend {
 public:
  // workers == 0 selects std::thread::hardware_concurrency().
  explicit ThreadedBatchBackend(unsigned workers = 0);

  unsigned workers() const { return workers_; }

  std::vector<std::int64_t> evaluate(const QuboInstance& instance,
                                     std::span<const BitVector> batch) const override;

 private:
  unsigned workers_;
};

const BatchBackend& default_backend();

std::vector<std::int64_t> evaluate_batch(const QuboInstance& instance,
                                         std::span<const BitVector> batch,
                                         const BatchBackend& backend = default_backend());

// Mean and max of x'Qx over num_samples uniform random assignments.
SampleStats sample_random_stats(const QuboInstance& instance, std::size_t num_samples,
                                std::uint64_t seed,
                                const BatchBackend& backend = default_backend());

// E[x'Qx] for independent fair bits: sum_{i != j} q_ij / 4 + sum_i q_ii / 2.
double expected_random_value(const QuboInstance& instance);

GainVector init_gains(const QuboInstance& instance, std::span<const std::uint8_t> bits);

/**
 * Toggles bit i and keeps `gains` exact in O(n).
 *
 * Returns the objective change, which equals the gain of i before the flip.
 * solution.value is advanced by the same amount.
 */
std::int64_t apply_flip(const QuboInstance& instance, Solution& solution, GainVector& gains,
                        std::size_t i);

}  // namespace mms
