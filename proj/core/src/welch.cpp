// SPDX-License-Identifier: Apache-2.0
#include "cfpn/welch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace cfpn {

namespace {

// dB floor so all-zero traces still produce a valid (finite) table.
constexpr double kFloorDb = -400.0;

}  // namespace

PsdTable estimate_psd(const PhaseTrace& trace, std::size_t segments) {
  trace.validate();
  if (segments < 1) throw std::invalid_argument("segments must be >= 1");
  const std::size_t n = trace.samples.size();
  if (n < 4 * segments)
    throw std::invalid_argument("trace too short for requested segment count");

  // Segment length: largest power of two giving at least `segments` 50%-
  // overlapped segments (count = floor((n - P)/(P/2)) + 1 >= segments when
  // P <= 2n/(segments+1)).
  std::size_t nperseg = 2;
  while (nperseg * 2 <= 2 * n / (segments + 1)) nperseg *= 2;
  const std::size_t hop = nperseg / 2;
  const std::size_t n_segments = (n - nperseg) / hop + 1;

  // Periodic Hann window and its power normalization U = sum w^2.
  std::vector<double> window(nperseg);
  double u = 0.0;
  for (std::size_t m = 0; m < nperseg; ++m) {
    window[m] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                      static_cast<double>(m) /
                                      static_cast<double>(nperseg)));
    u += window[m] * window[m];
  }

  Eigen::FFT<double> fft;
  std::vector<double> buf(nperseg);
  std::vector<std::complex<double>> spec;
  std::vector<double> psd(nperseg / 2, 0.0);  // bins 1 .. nperseg/2
  for (std::size_t s = 0; s < n_segments; ++s) {
    const double* src = trace.samples.data() + s * hop;
    for (std::size_t m = 0; m < nperseg; ++m) buf[m] = src[m] * window[m];
    fft.fwd(spec, buf);
    // One-sided periodogram 2|F_k|^2/(fs*U); Nyquist bin keeps factor 1.
    for (std::size_t k = 1; k <= nperseg / 2; ++k) {
      const double factor = (k == nperseg / 2) ? 1.0 : 2.0;
      psd[k - 1] += factor * std::norm(spec[k]) / (trace.sample_rate * u);
    }
  }

  std::vector<PsdPoint> points;
  points.reserve(nperseg / 2);
  for (std::size_t k = 1; k <= nperseg / 2; ++k) {
    const double s_phi = psd[k - 1] / static_cast<double>(n_segments);
    // SSB convention: L(f) = S_phi(f)/2.
    const double level =
        10.0 * std::log10(std::max(s_phi / 2.0, std::pow(10.0, kFloorDb / 10.0)));
    points.push_back({static_cast<double>(k) * trace.sample_rate /
                          static_cast<double>(nperseg),
                      level});
  }
  return PsdTable(std::move(points));
}

double psd_max_abs_deviation_db(const PsdTable& estimate,
                                const std::function<double(double)>& reference,
                                double f_lo, double f_hi, std::size_t bands) {
  if (!(f_lo > 0.0) || !(f_hi > f_lo) || bands < 1)
    throw std::invalid_argument("invalid PSD comparison band specification");
  const double log_lo = std::log10(f_lo);
  const double log_step = (std::log10(f_hi) - log_lo) / static_cast<double>(bands);
  double worst = 0.0;
  std::size_t used = 0;
  for (std::size_t b = 0; b < bands; ++b) {
    const double lo = std::pow(10.0, log_lo + log_step * static_cast<double>(b));
    const double hi = std::pow(10.0, log_lo + log_step * static_cast<double>(b + 1));
    double est_sum = 0.0, ref_sum = 0.0;
    std::size_t count = 0;
    for (const auto& p : estimate.points()) {
      if (p.offset_hz < lo || p.offset_hz >= hi) continue;
      // Compare in linear power, sampled at the same frequencies for both
      // sides so interpolation/slope bias cancels.
      est_sum += std::pow(10.0, p.dbc_per_hz / 10.0);
      ref_sum += std::pow(10.0, reference(p.offset_hz) / 10.0);
      ++count;
    }
    if (count == 0) continue;  // band narrower than the bin spacing
    ++used;
    worst = std::max(worst, std::abs(10.0 * std::log10(est_sum / ref_sum)));
  }
  if (used == 0)
    throw std::invalid_argument("no estimate points inside comparison bands");
  return worst;
}

}  // namespace cfpn
