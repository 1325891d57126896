// SPDX-License-Identifier: Apache-2.0
//
// Oscillator model selection for experiments: no phase noise, a free-running
// Wiener oscillator, or a hardware LO described by a measured/composite PSD
// table.  A single factory draws symbol-rate (or full-rate) phase traces for
// any variant so the harness can treat models uniformly.
#pragma once

#include <optional>
#include <string>
#include <variant>

#include "cfpn/phase_trace.hpp"
#include "cfpn/psd.hpp"
#include "cfpn/rng.hpp"
#include "cfpn/synthesis.hpp"
#include "cfpn/wiener.hpp"

namespace cfpn {

struct NoOscillator {};

struct WienerOscillator {
  double sigma2 = 0.23;   // innovation variance per OFDM symbol, rad^2
  double dt_ref = 0.0;    // interval sigma2 refers to, s; 0 = per trace step
};

struct DeviceOscillator {
  PsdTable psd;           // composite LO phase noise at the carrier, dBc/Hz
  std::string label;      // provenance tag for traces/results, e.g. "b200"
};

using OscillatorModel =
    std::variant<NoOscillator, WienerOscillator, DeviceOscillator>;

// Knobs of the PSD-to-trace synthesis path.
struct SynthesisOptions {
  std::size_t fft_len = 4096;   // internal synthesis length (power of two)
  double min_offset_hz = 10.0;  // offsets below this are zeroed
  double max_offset_hz = 0.0;   // 0 = Nyquist
};

// Human-readable tag for a model ("none", "wiener", "device:<label>").
std::string model_label(const OscillatorModel& model);

// Draws one oscillator's phase trace of length n at sample_rate.
//  - NoOscillator: all-zero trace.
//  - WienerOscillator: random walk; when dt_ref > 0 the per-step variance is
//    rescaled to sigma2 * (1/sample_rate) / dt_ref so the same model can be
//    sampled at symbol rate or at full rate.
//  - DeviceOscillator: frequency-domain synthesis of the table, band-limited
//    per options (synthesis length max(fft_len, next_pow2(n)), first n
//    samples returned).
PhaseTrace oscillator_trace(const OscillatorModel& model, std::size_t n,
                            double sample_rate, Rng& rng,
                            const SynthesisOptions& options = {});

}  // namespace cfpn
