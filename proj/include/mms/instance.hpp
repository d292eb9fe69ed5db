#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mms {

/**
 * A UBQP instance: maximize x'Qx over x in {0,1}^n.
 *
 * Q is dense, symmetric and stored row-major as exact 64-bit integers.
 * Construction rejects asymmetric matrices and coefficient magnitudes for
 * which n^2 * max|q| would not fit in an int64_t, so every objective value
 * computed against the instance is exact.
 */
class QuboInstance {
 public:
  QuboInstance(std::size_t n, std::vector<std::int64_t> q, std::string name);

  std::size_t size() const { return n_; }
  const std::string& name() const { return name_; }

  /** Fraction of nonzero entries over the full n x n matrix. */
  double density() const { return density_; }

  std::int64_t operator()(std::size_t i, std::size_t j) const { return q_[i * n_ + j]; }
  std::span<const std::int64_t> row(std::size_t i) const {
    return {q_.data() + i * n_, n_};
  }
  std::span<const std::int64_t> coefficients() const { return q_; }

  std::int64_t max_abs_coefficient() const { return max_abs_; }

 private:
  std::size_t n_;
  std::vector<std::int64_t> q_;
  std::string name_;
  double density_ = 0.0;
  std::int64_t max_abs_ = 0;
};

/** Inclusive integer range for generated coefficients. */
struct WeightSpec {
  std::int64_t low = -100;
  std::int64_t high = 100;
};

/** Rejected instance text. line() is 1-based; 0 when the position is unknown. */
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& cause);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// ORLIB multi-instance text: instance count, then per instance "n m" and m
// triples "i j q" with 1-based indices. Off-diagonal triples set both q[i][j]
// and q[j][i]; repeated entries accumulate. Names are "<stem>.<ordinal>".
std::vector<QuboInstance> parse_orlib_multi(std::string_view text,
                                            std::string_view stem = "instance");

// Only the index-th (1-based) instance of an ORLIB multi-instance text; the
// other blocks are validated but not stored.
QuboInstance parse_orlib_instance(std::string_view text, std::string_view stem,
                                  std::size_t index);

// One ORLIB block without the leading count.
QuboInstance parse_single(std::string_view text, std::string name = "instance");

// Writes the single-instance format (upper triangle, i <= j, nonzeros only).
void write_single(const QuboInstance& instance, std::ostream& out);

// Each unordered pair {i, j}, i <= j, is nonzero with probability `density`;
// nonzero values are uniform over the nonzero integers of [low, high] (or the
// single value when low == high). Deterministic in all arguments.
QuboInstance generate_random(std::size_t n, double density, WeightSpec weights,
                             std::uint64_t seed);

std::vector<std::int64_t> row_sums(const QuboInstance& instance);

// File contents, gunzipped when the file starts with the gzip magic bytes.
std::string read_instance_text(const std::filesystem::path& path);

std::vector<QuboInstance> load_orlib_file(const std::filesystem::path& path);
QuboInstance load_orlib_instance(const std::filesystem::path& path, std::size_t index);
QuboInstance load_single_file(const std::filesystem::path& path);

}  // namespace mms
