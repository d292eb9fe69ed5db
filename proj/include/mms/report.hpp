#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "mms/search.hpp"

namespace mms {

/** One benchmark line: the outcome of a single run on a single instance. */
struct RunRecord {
  std::string instance_name;
  std::uint64_t seed = 0;
  std::int64_t best_value = 0;
  std::optional<std::int64_t> reference_value;
  std::optional<double> gap_percent;  // (reference - best) / reference * 100
  double time_to_best = 0.0;          // elapsed at the last trajectory point
  std::size_t iterations_run = 0;
  double wall_time = 0.0;
};

// Throws std::invalid_argument for a zero reference.
double gap_percent(std::int64_t reference, std::int64_t achieved);

RunRecord make_run_record(const std::string& instance_name, std::uint64_t seed,
                          const SearchResult& result, std::optional<std::int64_t> reference,
                          double wall_time);

// Tab-separated: name, seed, best, reference, gap (2 dp), time_to_best (3 dp),
// iterations, wall_time (3 dp). Absent optionals are empty fields.
std::string format_run_record(const RunRecord& record);

// "AVERAGE\t<mean gap>\t<mean time_to_best>", over the records with a gap
// for the first column and all records for the second.
std::string format_average(std::span<const RunRecord> records);

inline constexpr const char* kTrajectoryHeader =
    "elapsed_s,iteration,best_value,percent_of_reference";

// Throws std::runtime_error when the stream fails.
void write_trajectory_csv(const SearchResult& result, std::optional<std::int64_t> reference,
                          std::ostream& sink);

}  // namespace mms
