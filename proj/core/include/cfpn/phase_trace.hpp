// SPDX-License-Identifier: Apache-2.0
//
// Phase traces: sampled oscillator phase in radians plus enough metadata to
// reproduce the draw, and the per-symbol CPE sequence derived from a pair of
// traces (UE oscillator + AP oscillator).
#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cfpn {

struct PhaseTrace {
  std::vector<double> samples;  // phase in radians, length >= 1, all finite
  double sample_rate = 0.0;     // Hz
  std::string model_id;         // provenance tag, e.g. "wiener" or "device:b200"
  std::uint64_t seed = 0;       // RNG seed used to draw the trace

  // Throws std::invalid_argument on empty/non-finite samples or rate <= 0.
  void validate() const;

  // Largest |samples[t] - samples[0]| over the trace; 0 for length-1 traces.
  double max_drift() const;

  // Sample variance of first differences; throws for length < 2.
  double increment_variance() const;

  // CSV round-trip with header "t_s,phase_rad" (t_s = index / sample_rate).
  static PhaseTrace from_csv(const std::filesystem::path& path);
  void to_csv(const std::filesystem::path& path) const;
};

// Per-OFDM-symbol CPE rotations for a link whose UE and AP phases are given
// by symbol-rate traces.  Element t is exp(j[(phi_t - phi_0) + (psi_t -
// psi_0)]); element 0 is exactly 1 because the symbol-0 CPE is absorbed into
// channel estimation.  Throws std::invalid_argument on length mismatch.
std::vector<std::complex<double>> cpe_sequence(const PhaseTrace& ue_trace,
                                               const PhaseTrace& ap_trace);

}  // namespace cfpn
