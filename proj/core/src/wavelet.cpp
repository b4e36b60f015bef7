#include "ldfs/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include <fftw3.h>

#include "ldfs/csv.hpp"
#include "ldfs/error.hpp"
#include "ldfs/rng.hpp"

namespace ldfs {

namespace {
constexpr double kPi = 3.14159265358979323846;

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

const char* band_name(Band b) noexcept {
  switch (b) {
    case Band::endothelial: return "endothelial";
    case Band::neurogenic: return "neurogenic";
    case Band::myogenic: return "myogenic";
    case Band::respiratory: return "respiratory";
    case Band::cardiac: return "cardiac";
  }
  return "?";
}

const std::array<BandDefinition, 5>& canonical_bands() noexcept {
  static const std::array<BandDefinition, 5> bands = {{
      {Band::endothelial, 0.0095, 0.02},
      {Band::neurogenic, 0.02, 0.06},
      {Band::myogenic, 0.06, 0.16},
      {Band::respiratory, 0.16, 0.4},
      {Band::cardiac, 0.4, 1.6},
  }};
  return bands;
}

Scalogram cwt_morlet(const RawSignal& signal, const MorletParams& params) {
  const std::size_t n = signal.size();
  if (n < 2) raise(errc::too_short, "signal too short for CWT");
  if (signal.sample_rate < 2.0 * params.f_max * 1.1) {
    raise(errc::nyquist_violation,
          "sample rate " + csv::format_double(signal.sample_rate) +
              " Hz below 2.2 x f_max = " +
              csv::format_double(2.2 * params.f_max) + " Hz");
  }
  const double min_resolvable = 2.0 / signal.duration;
  if (params.f_min < min_resolvable) {
    std::string what = "f_min " + csv::format_double(params.f_min) +
                       " Hz needs > " +
                       csv::format_double(2.0 / params.f_min) +
                       " s of signal, have " +
                       csv::format_double(signal.duration) + " s";
    for (const auto& b : canonical_bands()) {
      if (params.f_min >= b.f_lo && params.f_min < b.f_hi) {
        what = std::string(band_name(b.name)) + " band: " + what;
        break;
      }
    }
    raise(errc::duration_too_short_for_band, what);
  }

  Scalogram out;
  // Log-spaced frequency grid, voices_per_octave points per octave, covering
  // [f_min, f_max] (the top point may slightly overshoot f_max).
  const int vpo = params.voices_per_octave;
  const int n_freqs =
      int(std::ceil(vpo * std::log2(params.f_max / params.f_min))) + 1;
  out.frequencies.resize(n_freqs);
  for (int j = 0; j < n_freqs; ++j) {
    out.frequencies[j] = params.f_min * std::pow(2.0, double(j) / vpo);
  }
  out.times = signal.timestamps;
  out.n_freqs = n_freqs;
  out.n_times = n;
  out.modulus.assign(out.n_freqs * out.n_times, 0.0);
  out.coi.assign(out.n_freqs * out.n_times, 0);

  // Zero-pad to a power of two >= 2n so the circular convolution cannot wrap
  // signal content into the analysis window.
  std::size_t nfft = 1;
  while (nfft < 2 * n) nfft <<= 1;

  // The transform measures oscillations about the mean; removing the mean
  // keeps the baseline's zero-padding edge out of the low-frequency bands.
  double mean = 0.0;
  for (double v : signal.perfusion) mean += v;
  mean /= double(n);

  std::vector<std::complex<double>> buf(nfft, {0.0, 0.0});
  std::vector<std::complex<double>> freq(nfft);
  std::vector<std::complex<double>> row(nfft);
  for (std::size_t i = 0; i < n; ++i) buf[i] = {signal.perfusion[i] - mean, 0.0};

  fftw_plan fwd, inv;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft_1d(int(nfft), reinterpret_cast<fftw_complex*>(buf.data()),
                           reinterpret_cast<fftw_complex*>(freq.data()),
                           FFTW_FORWARD, FFTW_ESTIMATE);
    inv = fftw_plan_dft_1d(int(nfft), reinterpret_cast<fftw_complex*>(row.data()),
                           reinterpret_cast<fftw_complex*>(row.data()),
                           FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(fwd);

  const double dt = 1.0 / signal.sample_rate;
  const double t0 = signal.timestamps.front();
  const double t1 = signal.timestamps.back();

  for (int j = 0; j < n_freqs; ++j) {
    const double f = out.frequencies[j];
    const double scale = params.omega0 / (2.0 * kPi * f);

    // L1-normalized Morlet response is psi_hat(s w) = pi^-1/4 sqrt(2 pi)
    // exp(-(s w - w0)^2 / 2); dividing by psi_hat(w0)/2 calibrates a unit real
    // sinusoid to modulus 1, which folds the whole kernel to 2 exp(...).
    for (std::size_t k = 0; k < nfft; ++k) {
      if (k == 0 || k > nfft / 2) {
        row[k] = {0.0, 0.0};  // analytic wavelet: no negative/zero frequencies
        continue;
      }
      const double w = 2.0 * kPi * double(k) / (double(nfft) * dt);
      const double arg = scale * w - params.omega0;
      row[k] = freq[k] * (2.0 * std::exp(-0.5 * arg * arg));
    }
    fftw_execute(inv);

    const double efold = std::sqrt(2.0) * scale;
    double* mod_row = out.modulus.data() + std::size_t(j) * n;
    std::uint8_t* coi_row = out.coi.data() + std::size_t(j) * n;
    for (std::size_t i = 0; i < n; ++i) {
      mod_row[i] = std::abs(row[i]) / double(nfft);
      const double t = signal.timestamps[i];
      const bool inside =
          params.ignore_coi || (t - t0 >= efold && t1 - t >= efold);
      coi_row[i] = inside ? 1 : 0;
    }
  }

  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  return out;
}

BandFeatures band_features(const Scalogram& sg,
                           std::span<const BandDefinition> bands,
                           bool per_time_max) {
  BandFeatures out;
  for (const auto& band : bands) {
    // Grid rows inside [f_lo, f_hi).
    std::vector<std::size_t> rows;
    for (std::size_t j = 0; j < sg.n_freqs; ++j) {
      if (sg.frequencies[j] >= band.f_lo && sg.frequencies[j] < band.f_hi) {
        rows.push_back(j);
      }
    }
    if (rows.empty()) {
      raise(errc::band_not_covered,
            std::string(band_name(band.name)) + " [" +
                csv::format_double(band.f_lo) + ", " +
                csv::format_double(band.f_hi) + ") Hz has no grid points");
    }

    double best_amp = -1.0;
    double best_freq = 0.0;
    bool any_coverage = false;

    if (!per_time_max) {
      // S(f) = mean over in-COI t of |W(f, t)|; amplitude = max_f S(f).
      for (std::size_t j : rows) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < sg.n_times; ++i) {
          if (sg.inside_coi(j, i)) {
            sum += sg.mod(j, i);
            ++count;
          }
        }
        if (count == 0) continue;
        any_coverage = true;
        const double s = sum / double(count);
        if (s > best_amp) {
          best_amp = s;
          best_freq = sg.frequencies[j];
        }
      }
    } else {
      // Alternative reading: average over in-COI t of max_f |W(f, t)|; the
      // reported frequency is still the argmax of the time-averaged spectrum.
      double sum = 0.0;
      std::size_t count = 0;
      std::vector<double> s_of_f(rows.size(), 0.0);
      std::vector<std::size_t> n_of_f(rows.size(), 0);
      for (std::size_t i = 0; i < sg.n_times; ++i) {
        double mx = -1.0;
        for (std::size_t k = 0; k < rows.size(); ++k) {
          const std::size_t j = rows[k];
          if (!sg.inside_coi(j, i)) continue;
          mx = std::max(mx, sg.mod(j, i));
          s_of_f[k] += sg.mod(j, i);
          ++n_of_f[k];
        }
        if (mx >= 0.0) {
          sum += mx;
          ++count;
        }
      }
      if (count > 0) {
        any_coverage = true;
        best_amp = sum / double(count);
        double best_s = -1.0;
        for (std::size_t k = 0; k < rows.size(); ++k) {
          if (n_of_f[k] == 0) continue;
          const double s = s_of_f[k] / double(n_of_f[k]);
          if (s > best_s) {
            best_s = s;
            best_freq = sg.frequencies[rows[k]];
          }
        }
      }
    }

    if (!any_coverage) {
      raise(errc::empty_coi, std::string(band_name(band.name)) +
                                 " band: every sample is outside the COI");
    }
    out[band.name] = {best_amp, best_freq};
  }
  return out;
}

LdfSummary ldf_summary(const RawSignal& signal) {
  const std::size_t n = signal.size();
  if (n == 0) raise(errc::too_short, "empty signal");
  // Kahan sums: a constant record must come out with sigma exactly 0.
  auto kahan = [](auto&& get, std::size_t count) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double y = get(i) - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    return sum;
  };
  const double mean =
      kahan([&](std::size_t i) { return signal.perfusion[i]; }, n) / double(n);
  const double ss = kahan(
      [&](std::size_t i) {
        const double d = signal.perfusion[i] - mean;
        return d * d;
      },
      n);
  LdfSummary out;
  out.m = mean;
  out.sigma = std::sqrt(ss / double(n));
  if (!(mean > 0.0)) {
    raise(errc::zero_mean_perfusion,
          "mean perfusion " + csv::format_double(mean) +
              " PU; Kv is undefined");
  }
  out.kv100 = 100.0 * out.sigma / out.m;
  return out;
}

RawSignal synthesize_signal(const SynthSpec& spec) {
  for (const auto& c : spec.components) {
    if (!(c.frequency < spec.sample_rate / 2.0)) {
      raise(errc::aliased_component,
            csv::format_double(c.frequency) + " Hz >= Nyquist " +
                csv::format_double(spec.sample_rate / 2.0) + " Hz");
    }
  }
  const std::size_t n =
      std::size_t(std::llround(spec.duration * spec.sample_rate));
  if (n < 2) raise(errc::too_short, "duration x sample_rate < 2 samples");

  Rng rng(spec.seed);
  std::vector<double> ts(n), pu(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = double(i) / spec.sample_rate;
    ts[i] = t;
    double x = spec.baseline;
    for (const auto& c : spec.components) {
      x += c.amplitude * std::sin(2.0 * kPi * c.frequency * t + c.phase);
    }
    if (spec.noise_sigma > 0.0) x += rng.normal(0.0, spec.noise_sigma);
    pu[i] = x;
  }
  return make_raw_signal(std::move(ts), std::move(pu));
}

}  // namespace ldfs
