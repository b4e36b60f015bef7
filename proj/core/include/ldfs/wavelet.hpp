#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ldfs/signal.hpp"

namespace ldfs {

enum class Band { endothelial, neurogenic, myogenic, respiratory, cardiac };

const char* band_name(Band b) noexcept;

struct BandDefinition {
  Band name;
  double f_lo = 0.0;  // Hz, inclusive
  double f_hi = 0.0;  // Hz, exclusive
};

// The five physiological oscillation bands: endothelial 0.0095-0.02 Hz,
// neurogenic 0.02-0.06, myogenic 0.06-0.16, respiratory 0.16-0.4,
// cardiac 0.4-1.6. Contiguous, non-overlapping, each [f_lo, f_hi).
const std::array<BandDefinition, 5>& canonical_bands() noexcept;

struct MorletParams {
  double omega0 = 6.0;        // wavelet center frequency (dimensionless)
  int voices_per_octave = 16;
  double f_min = 0.0095;      // Hz
  double f_max = 1.6;         // Hz
  // When true, COI masking is skipped (short recordings); band averaging
  // then uses the full record and callers get a warning flag on the result.
  bool ignore_coi = false;
  // Alternative "average maximum amplitude" reading: time-average of
  // per-time maxima instead of max of the time-averaged spectrum.
  bool per_time_max = false;
};

struct Scalogram {
  std::vector<double> frequencies;  // Hz, strictly increasing (log-spaced)
  std::vector<double> times;        // s
  std::vector<double> modulus;      // row-major [freq][time], PU
  std::vector<std::uint8_t> coi;    // 1 = inside cone of influence
  std::size_t n_freqs = 0;
  std::size_t n_times = 0;

  double mod(std::size_t f, std::size_t t) const { return modulus[f * n_times + t]; }
  bool inside_coi(std::size_t f, std::size_t t) const { return coi[f * n_times + t] != 0; }
};

// Continuous wavelet transform with the analytic Morlet wavelet
// psi(t) = pi^(-1/4) exp(i w0 t) exp(-t^2/2), scales log-spaced with
// `voices_per_octave` per octave covering [f_min, f_max] via f = w0/(2 pi s).
// The modulus is amplitude-calibrated: a unit real sinusoid at an in-grid
// frequency reads 1.0 inside the COI (up to grid resolution).
// Throws NyquistViolation, DurationTooShortForBand.
Scalogram cwt_morlet(const RawSignal& signal, const MorletParams& params);

struct BandFeature {
  double amplitude = 0.0;  // PU
  double frequency = 0.0;  // Hz
};

struct BandFeatures {
  std::array<BandFeature, 5> per_band;  // indexed by Band

  const BandFeature& operator[](Band b) const { return per_band[int(b)]; }
  BandFeature& operator[](Band b) { return per_band[int(b)]; }
};

// Time-averaged in-COI spectrum S(f); per band, amplitude = max_f S(f) and
// frequency = argmax (ties resolve to the lowest frequency).
// Throws BandNotCovered, EmptyCoi.
BandFeatures band_features(const Scalogram& scalogram,
                           std::span<const BandDefinition> bands,
                           bool per_time_max = false);

struct LdfSummary {
  double m = 0.0;      // mean perfusion, PU
  double sigma = 0.0;  // population standard deviation, PU
  double kv100 = 0.0;  // 100 * sigma / m
};

// Throws ZeroMeanPerfusion when the mean is <= 0.
LdfSummary ldf_summary(const RawSignal& signal);

struct SynthComponent {
  double frequency = 0.0;  // Hz
  double amplitude = 0.0;  // PU
  double phase = 0.0;      // rad
};

struct SynthSpec {
  std::vector<SynthComponent> components;
  double baseline = 0.0;     // PU
  double noise_sigma = 0.0;  // PU
  double duration = 480.0;   // s
  double sample_rate = 20.0; // Hz
  std::uint64_t seed = 0;
};

// x(t) = baseline + sum a_i sin(2 pi f_i t + phi_i) + N(0, noise_sigma);
// bit-deterministic given the seed. Throws AliasedComponent.
RawSignal synthesize_signal(const SynthSpec& spec);

}  // namespace ldfs
