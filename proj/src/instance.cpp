#include "mms/instance.hpp"

#include <cstdlib>
#include <limits>
#include <string>

#include "mms/random.hpp"

namespace mms {

namespace {

std::int64_t magnitude(std::int64_t v) {
  if (v == std::numeric_limits<std::int64_t>::min())
    throw std::invalid_argument("coefficient magnitude exceeds int64 range");
  return v < 0 ? -v : v;
}

}  // namespace

QuboInstance::QuboInstance(std::size_t n, std::vector<std::int64_t> q, std::string name)
    : n_(n), q_(std::move(q)), name_(std::move(name)) {
  if (n_ == 0) throw std::invalid_argument("instance must have at least one variable");
  if (n_ > std::numeric_limits<std::size_t>::max() / n_ || q_.size() != n_ * n_)
    throw std::invalid_argument("coefficient matrix must be exactly " + std::to_string(n_) +
                                "x" + std::to_string(n_));

  std::size_t nonzeros = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const std::int64_t v = q_[i * n_ + j];
      if (v != q_[j * n_ + i])
        throw std::invalid_argument("coefficient matrix is not symmetric at (" +
                                    std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      if (v != 0) ++nonzeros;
      max_abs_ = std::max(max_abs_, magnitude(v));
    }
  }

  // Any partial sum of x'Qx is bounded by n^2 * max|q|.
  const auto n64 = static_cast<std::uint64_t>(n_);
  const auto limit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
  if (n64 > limit / n64 || (max_abs_ != 0 && static_cast<std::uint64_t>(max_abs_) > limit / (n64 * n64)))
    throw std::invalid_argument("n^2 * max|q| overflows 64-bit objective arithmetic");

  density_ = static_cast<double>(nonzeros) / static_cast<double>(n_ * n_);
}

ParseError::ParseError(std::size_t line, const std::string& cause)
    : std::runtime_error(line == 0 ? cause : "line " + std::to_string(line) + ": " + cause),
      line_(line) {}

QuboInstance generate_random(std::size_t n, double density, WeightSpec weights,
                             std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (!(density > 0.0 && density <= 1.0))
    throw std::invalid_argument("density must lie in (0, 1]");
  if (weights.low > weights.high) throw std::invalid_argument("weight range has low > high");

  // Zero is excluded from the draw unless it is the only value, so inclusion
  // probability and nonzero probability coincide.
  const bool skip_zero = weights.low <= 0 && weights.high >= 0 && weights.low != weights.high;
  auto draw = [&](Rng& rng) {
    if (!skip_zero) return rng.between(weights.low, weights.high);
    std::int64_t v = rng.between(weights.low, weights.high - 1);
    return v >= 0 ? v + 1 : v;
  };

  Rng rng(seed);
  std::vector<std::int64_t> q(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (!rng.chance(density)) continue;
      const std::int64_t v = draw(rng);
      q[i * n + j] = v;
      q[j * n + i] = v;
    }
  }
  return QuboInstance(n, std::move(q),
                      "rand-n" + std::to_string(n) + "-s" + std::to_string(seed));
}

std::vector<std::int64_t> row_sums(const QuboInstance& instance) {
  std::vector<std::int64_t> sums(instance.size(), 0);
  for (std::size_t i = 0; i < instance.size(); ++i)
    for (std::int64_t v : instance.row(i)) sums[i] += v;
  return sums;
}

}  // namespace mms
