#pragma once

#include <string>
#include <vector>

namespace ldfs {

// Uniformly sampled perfusion recording from one hand/session.
struct RawSignal {
  std::vector<double> timestamps;  // seconds, strictly increasing
  std::vector<double> perfusion;   // perfusion units (PU)
  double sample_rate = 0.0;        // Hz, derived as (n-1)/(t_last-t_first)
  double duration = 0.0;           // seconds, n / sample_rate
  bool short_recording = false;    // true when shorter than the nominal 480 s

  std::size_t size() const { return perfusion.size(); }
};

// Validates monotonicity, length (>= 60 s) and uniformity (<= 1% relative
// jitter), then derives sample_rate/duration. Throws NonMonotonicTime,
// TooShort, NonUniformSampling.
RawSignal make_raw_signal(std::vector<double> timestamps,
                          std::vector<double> perfusion);

// Two-column delimited file `t_s,perfusion_pu` with a header row.
RawSignal load_raw_signal(const std::string& path);

void write_raw_signal(const std::string& path, const RawSignal& signal);

}  // namespace ldfs
