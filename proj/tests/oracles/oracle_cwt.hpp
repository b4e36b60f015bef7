#pragma once

// Independent CWT oracle: integrates the transform definition directly in the
// time domain against the analytic Morlet wavelet. Deliberately shares no code
// with the FFT implementation it checks.

#include <cmath>
#include <complex>
#include <vector>

#include "ldfs/signal.hpp"

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// |W(f, b)| with the library's amplitude calibration (unit sinusoid -> 1.0),
// computed as (1/s) * sum_j x_j conj(psi((t_j - b)/s)) dt on the
// mean-subtracted signal.
inline double cwt_modulus(const ldfs::RawSignal& signal, double frequency,
                          double omega0, double b) {
  const double scale = omega0 / (2.0 * kPi * frequency);
  const double dt = 1.0 / signal.sample_rate;
  const double norm = std::pow(kPi, -0.25);
  const double calib = 2.0 / (norm * std::sqrt(2.0 * kPi));

  double mean = 0.0;
  for (double v : signal.perfusion) mean += v;
  mean /= double(signal.size());

  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < signal.size(); ++j) {
    const double u = (signal.timestamps[j] - b) / scale;
    if (std::abs(u) > 8.0) continue;  // Gaussian support, e^-32 tail
    const double envelope = norm * std::exp(-0.5 * u * u);
    // conj(psi(u)) = envelope * exp(-i w0 u)
    const std::complex<double> w{envelope * std::cos(omega0 * u),
                                 -envelope * std::sin(omega0 * u)};
    acc += (signal.perfusion[j] - mean) * w;
  }
  acc *= dt / scale;
  return std::abs(acc) * calib;
}

// Time-averaged spectrum value at one frequency over the in-COI window
// (e-folding time sqrt(2) * scale from each edge), subsampled by `stride`.
inline double band_spectrum(const ldfs::RawSignal& signal, double frequency,
                            double omega0, std::size_t stride = 16) {
  const double scale = omega0 / (2.0 * kPi * frequency);
  const double efold = std::sqrt(2.0) * scale;
  const double t0 = signal.timestamps.front();
  const double t1 = signal.timestamps.back();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < signal.size(); i += stride) {
    const double t = signal.timestamps[i];
    if (t - t0 < efold || t1 - t < efold) continue;
    sum += cwt_modulus(signal, frequency, omega0, t);
    ++count;
  }
  return count > 0 ? sum / double(count) : 0.0;
}

}  // namespace oracle
