#include "mms/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace mms {

namespace {

std::string fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", places, v);
  return buf;
}

}  // namespace

double gap_percent(std::int64_t reference, std::int64_t achieved) {
  if (reference == 0) throw std::invalid_argument("reference value must be nonzero");
  return static_cast<double>(reference - achieved) / static_cast<double>(reference) * 100.0;
}

RunRecord make_run_record(const std::string& instance_name, std::uint64_t seed,
                          const SearchResult& result, std::optional<std::int64_t> reference,
                          double wall_time) {
  RunRecord record;
  record.instance_name = instance_name;
  record.seed = seed;
  record.best_value = result.best_value;
  record.reference_value = reference;
  if (reference) record.gap_percent = gap_percent(*reference, result.best_value);
  record.time_to_best = result.trajectory.empty() ? 0.0 : result.trajectory.back().elapsed;
  record.iterations_run = result.iterations_run;
  record.wall_time = std::max(wall_time, record.time_to_best);
  return record;
}

std::string format_run_record(const RunRecord& r) {
  std::string line = r.instance_name;
  line += '\t' + std::to_string(r.seed);
  line += '\t' + std::to_string(r.best_value);
  line += '\t' + (r.reference_value ? std::to_string(*r.reference_value) : std::string());
  line += '\t' + (r.gap_percent ? fixed(*r.gap_percent, 2) : std::string());
  line += '\t' + fixed(r.time_to_best, 3);
  line += '\t' + std::to_string(r.iterations_run);
  line += '\t' + fixed(r.wall_time, 3);
  return line;
}

std::string format_average(std::span<const RunRecord> records) {
  double gap_sum = 0.0, time_sum = 0.0;
  std::size_t gaps = 0;
  for (const RunRecord& r : records) {
    time_sum += r.time_to_best;
    if (r.gap_percent) {
      gap_sum += *r.gap_percent;
      ++gaps;
    }
  }
  std::string line = "AVERAGE\t";
  if (gaps > 0) line += fixed(gap_sum / gaps, 2);
  line += '\t';
  if (!records.empty()) line += fixed(time_sum / records.size(), 3);
  return line;
}

void write_trajectory_csv(const SearchResult& result, std::optional<std::int64_t> reference,
                          std::ostream& sink) {
  if (reference && *reference == 0) throw std::invalid_argument("reference value must be nonzero");
  sink << kTrajectoryHeader << '\n';
  for (const TrajectoryPoint& p : result.trajectory) {
    sink << fixed(p.elapsed, 3) << ',' << p.iteration << ',' << p.best_value << ',';
    if (reference)
      sink << fixed(static_cast<double>(p.best_value) / static_cast<double>(*reference) * 100.0, 4);
    sink << '\n';
  }
  sink.flush();
  if (!sink) throw std::runtime_error("failed to write trajectory");
}

}  // namespace mms
