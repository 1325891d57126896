// SPDX-License-Identifier: Apache-2.0
#include "cfpn/synthesis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "detail_synthesis.hpp"

namespace cfpn {

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// One-sided phase PSD in rad^2/Hz from an SSB level in dBc/Hz; -inf maps to
// zero power.  NaN/+inf are contract violations.
double psd_rad2_per_hz(double level_dbc) {
  if (level_dbc == -std::numeric_limits<double>::infinity()) return 0.0;
  if (!std::isfinite(level_dbc))
    throw std::invalid_argument("PSD level must be finite or -inf");
  return 2.0 * std::pow(10.0, level_dbc / 10.0);
}

}  // namespace

PsdFunction psd_from_table(const PsdTable& table) {
  return [table](double f) { return table.level_at(f); };
}

PsdFunction band_limited(PsdFunction psd, double min_hz, double max_hz) {
  return [psd = std::move(psd), min_hz, max_hz](double f) {
    if (f < min_hz || f > max_hz)
      return -std::numeric_limits<double>::infinity();
    return psd(f);
  };
}

namespace detail {

std::vector<double> synthesis_bin_amplitudes(const PsdFunction& psd,
                                             double sample_rate,
                                             std::size_t nfft) {
  // Bin k at frequency k*bin_hz gets expected power n^2 * S(f_k) * bin_hz / 2
  // (so the one-sided periodogram 2|X_k|^2/(n*fs) has expectation S(f_k));
  // the Nyquist bin is real and carries the full n^2 * S * bin_hz.  DC stays
  // zero: absolute phase is unobservable after symbol-0 referencing.
  const double bin_hz = sample_rate / static_cast<double>(nfft);
  const double nd = static_cast<double>(nfft);
  std::vector<double> amp(nfft / 2 + 1, 0.0);
  for (std::size_t k = 1; k < nfft / 2; ++k)
    amp[k] = 0.5 * nd *
             std::sqrt(psd_rad2_per_hz(psd(static_cast<double>(k) * bin_hz)) *
                       bin_hz);
  amp[nfft / 2] =
      nd * std::sqrt(psd_rad2_per_hz(psd(sample_rate / 2.0)) * bin_hz);
  return amp;
}

PhaseTrace synthesize_pn_from_amplitudes(const std::vector<double>& amp,
                                         double sample_rate, std::size_t nfft,
                                         std::size_t n, Rng& rng) {
  std::vector<std::complex<double>> spectrum(nfft / 2 + 1,
                                             std::complex<double>(0.0, 0.0));
  for (std::size_t k = 1; k < nfft / 2; ++k) {
    const double a = rng.gaussian();
    const double b = rng.gaussian();
    spectrum[k] = {amp[k] * a, amp[k] * b};
  }
  spectrum[nfft / 2] = {amp[nfft / 2] * rng.gaussian(), 0.0};

  // Reused per thread so the plan cache survives across the (very many)
  // per-oscillator draws of a Monte-Carlo run.
  thread_local Eigen::FFT<double> fft;
  std::vector<double> time;
  fft.inv(time, spectrum, static_cast<int>(nfft));

  PhaseTrace trace;
  trace.sample_rate = sample_rate;
  trace.model_id = "synth";
  trace.samples.assign(time.begin(), time.begin() + static_cast<long>(n));
  return trace;
}

}  // namespace detail

PhaseTrace synthesize_pn(const PsdFunction& psd, double sample_rate,
                         std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("synthesis needs n >= 1");
  if (!(sample_rate > 0.0))
    throw std::invalid_argument("sample rate must be > 0");
  const std::size_t nfft = std::max<std::size_t>(2, next_pow2(n));
  return detail::synthesize_pn_from_amplitudes(
      detail::synthesis_bin_amplitudes(psd, sample_rate, nfft), sample_rate,
      nfft, n, rng);
}

}  // namespace cfpn
