#include "ldfs/signal.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "ldfs/csv.hpp"
#include "ldfs/error.hpp"

namespace ldfs {

namespace {
constexpr double kNominalDurationS = 480.0;
constexpr double kMinDurationS = 60.0;
constexpr double kMaxRelativeJitter = 0.01;
}  // namespace

RawSignal make_raw_signal(std::vector<double> timestamps,
                          std::vector<double> perfusion) {
  if (timestamps.size() != perfusion.size()) {
    raise(errc::shape_mismatch, "timestamps and perfusion lengths differ");
  }
  const std::size_t n = timestamps.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) {
      raise(errc::non_monotonic_time,
            "timestamp at index " + std::to_string(i) + " does not increase");
    }
  }
  if (n < 2) raise(errc::too_short, "signal has fewer than 2 samples");

  const double span = timestamps.back() - timestamps.front();
  const double mean_dt = span / double(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const double dt = timestamps[i] - timestamps[i - 1];
    if (std::abs(dt - mean_dt) > kMaxRelativeJitter * mean_dt) {
      raise(errc::non_uniform_sampling,
            "sample spacing at index " + std::to_string(i) + " deviates " +
                csv::format_double(std::abs(dt - mean_dt) / mean_dt * 100.0) +
                "% from the mean");
    }
  }

  RawSignal s;
  s.timestamps = std::move(timestamps);
  s.perfusion = std::move(perfusion);
  s.sample_rate = double(n - 1) / span;
  s.duration = double(n) / s.sample_rate;
  if (s.duration < kMinDurationS) {
    raise(errc::too_short, "duration " + csv::format_double(s.duration) +
                               " s is below the 60 s minimum");
  }
  s.short_recording = s.duration < kNominalDurationS * 0.99;
  return s;
}

RawSignal load_raw_signal(const std::string& path) {
  const csv::Table t = csv::read_table(path);
  int tc = -1, pc = -1;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    const std::string h = csv::to_lower(csv::trim(t.header[c]));
    if (h == "t_s" || h == "t" || h == "time" || h == "time_s") tc = int(c);
    if (h == "perfusion_pu" || h == "perfusion" || h == "pu") pc = int(c);
  }
  if (tc < 0) raise(errc::missing_column, "t_s");
  if (pc < 0) raise(errc::missing_column, "perfusion_pu");

  std::vector<double> ts, pu;
  ts.reserve(t.rows.size());
  pu.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto tv = csv::parse_number(t.rows[r][tc]);
    const auto pv = csv::parse_number(t.rows[r][pc]);
    if (!tv || !pv) {
      raise(errc::bad_value,
            "row " + std::to_string(r) + ": non-numeric sample");
    }
    ts.push_back(*tv);
    pu.push_back(*pv);
  }
  return make_raw_signal(std::move(ts), std::move(pu));
}

void write_raw_signal(const std::string& path, const RawSignal& signal) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot write '" + path + "'");
  out << "t_s,perfusion_pu\n";
  for (std::size_t i = 0; i < signal.size(); ++i) {
    out << csv::format_double(signal.timestamps[i]) << ','
        << csv::format_double(signal.perfusion[i]) << '\n';
  }
}

}  // namespace ldfs
