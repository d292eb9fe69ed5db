#include "mms/eval.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "mms/random.hpp"

namespace mms {

namespace {

void check_length(const QuboInstance& instance, std::size_t length) {
  if (length != instance.size())
    throw std::invalid_argument("bit vector has length " + std::to_string(length) +
                                ", instance has " + std::to_string(instance.size()) +
                                " variables");
}

std::int64_t evaluate_unchecked(const QuboInstance& instance, std::span<const std::uint8_t> bits,
                                std::vector<std::size_t>& ones) {
  ones.clear();
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) ones.push_back(i);

  std::int64_t total = 0;
  for (std::size_t a = 0; a < ones.size(); ++a) {
    const auto row = instance.row(ones[a]);
    std::int64_t off = 0;
    for (std::size_t b = a + 1; b < ones.size(); ++b) off += row[ones[b]];
    total += row[ones[a]] + 2 * off;
  }
  return total;
}

}  // namespace

std::int64_t evaluate(const QuboInstance& instance, std::span<const std::uint8_t> bits) {
  check_length(instance, bits.size());
  std::vector<std::size_t> ones;
  ones.reserve(bits.size());
  return evaluate_unchecked(instance, bits, ones);
}

Solution make_solution(const QuboInstance& instance, BitVector bits) {
  const std::int64_t value = evaluate(instance, bits);
  return Solution{std::move(bits), value, true};
}

ThreadedBatchBackend::ThreadedBatchBackend(unsigned workers)
    : workers_(workers != 0 ? workers : std::max(1u, std::thread::hardware_concurrency())) {}

std::vector<std::int64_t> ThreadedBatchBackend::evaluate(const QuboInstance& instance,
                                                         std::span<const BitVector> batch) const {
  for (const BitVector& bits : batch) check_length(instance, bits.size());

  std::vector<std::int64_t> values(batch.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> ones;
    ones.reserve(instance.size());
    for (std::size_t k = begin; k < end; ++k)
      values[k] = evaluate_unchecked(instance, batch[k], ones);
  };

  const std::size_t chunks = std::min<std::size_t>(workers_, batch.size());
  if (chunks <= 1) {
    work(0, batch.size());
    return values;
  }

  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(chunks);
  threads.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = batch.size() * c / chunks;
    const std::size_t end = batch.size() * (c + 1) / chunks;
    threads.emplace_back([&, c, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return values;
}

const BatchBackend& default_backend() {
  static const ThreadedBatchBackend backend;
  return backend;
}

std::vector<std::int64_t> evaluate_batch(const QuboInstance& instance,
                                         std::span<const BitVector> batch,
                                         const BatchBackend& backend) {
  return backend.evaluate(instance, batch);
}

SampleStats sample_random_stats(const QuboInstance& instance, std::size_t num_samples,
                                std::uint64_t seed, const BatchBackend& backend) {
  if (num_samples == 0) throw std::invalid_argument("num_samples must be at least 1");

  const std::size_t n = instance.size();
  Rng rng(seed);
  std::vector<BitVector> samples(num_samples, BitVector(n));
  for (BitVector& bits : samples) {
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) word = rng.next();
      bits[i] = static_cast<std::uint8_t>(word & 1u);
      word >>= 1;
    }
  }

  const std::vector<std::int64_t> values = evaluate_batch(instance, samples, backend);

  __int128 sum = 0;
  for (std::int64_t v : values) sum += v;
  SampleStats stats;
  stats.count = num_samples;
  stats.mean = static_cast<double>(static_cast<long double>(sum) / num_samples);
  stats.sample_max = *std::max_element(values.begin(), values.end());
  if (num_samples > 1) {
    long double squares = 0;
    for (std::int64_t v : values) {
      const long double d = static_cast<long double>(v) - stats.mean;
      squares += d * d;
    }
    stats.stddev = static_cast<double>(std::sqrt(squares / (num_samples - 1)));
  }
  return stats;
}

double expected_random_value(const QuboInstance& instance) {
  // 4 * E = sum of all entries + sum of diagonal entries.
  __int128 four_times = 0;
  for (std::int64_t v : instance.coefficients()) four_times += v;
  for (std::size_t i = 0; i < instance.size(); ++i) four_times += instance(i, i);
  return static_cast<double>(static_cast<long double>(four_times) / 4);
}

GainVector init_gains(const QuboInstance& instance, std::span<const std::uint8_t> bits) {
  check_length(instance, bits.size());
  const std::size_t n = instance.size();
  GainVector g{std::vector<std::int64_t>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = instance.row(i);
    std::int64_t off = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (bits[j] && j != i) off += row[j];
    const std::int64_t d = row[i] + 2 * off;
    g.gains[i] = bits[i] ? -d : d;
  }
  return g;
}

std::int64_t apply_flip(const QuboInstance& instance, Solution& solution, GainVector& gains,
                        std::size_t i) {
  const std::size_t n = instance.size();
  if (i >= n) throw std::out_of_range("flip index " + std::to_string(i) + " out of range");
  check_length(instance, solution.bits.size());
  if (gains.gains.size() != n) throw std::invalid_argument("gain vector length mismatch");

  const std::int64_t delta = gains.gains[i];
  const bool now_set = solution.bits[i] == 0;
  solution.bits[i] = now_set ? 1 : 0;
  solution.value += delta;
  gains.gains[i] = -delta;

  // The 2*q_ij*x_i term inside every other gain moved by +-2*q_ij; its sign
  // in gain j is (1 - 2 x_j).
  const auto row = instance.row(i);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const std::int64_t change = 2 * row[j];
    const bool same_direction = now_set == (solution.bits[j] == 0);
    gains.gains[j] += same_direction ? change : -change;
  }
  return delta;
}

}  // namespace mms
