// SPDX-License-Identifier: Apache-2.0
//
// Welch-averaged periodogram for phase traces.  Fixed recipe: Hann window,
// 50% overlap, segment length the largest power of two that yields at least
// the requested number of segments.  Output is returned as an SSB level in
// dBc/Hz, i.e. 10*log10(S_phi(f)/2) with S_phi the one-sided phase PSD in
// rad^2/Hz — the same convention the synthesis path consumes, so a
// synthesize/estimate round trip is level-preserving.
#pragma once

#include <functional>
#include <vector>

#include "cfpn/phase_trace.hpp"
#include "cfpn/psd.hpp"

namespace cfpn {

// Welch estimate of the trace's phase-noise PSD.  `segments` is the minimum
// number of averaged segments (>= 1); the DC bin is dropped from the output.
// Throws std::invalid_argument if the trace is shorter than 4*segments.
PsdTable estimate_psd(const PhaseTrace& trace, std::size_t segments);

// Band-averaged deviation between an estimated PSD and a reference profile:
// the frequency axis [f_lo, f_hi] is split into `bands` log-spaced bands, the
// estimate and the reference are power-averaged within each band, and the
// largest |difference| in dB across bands is returned.  Band averaging irons
// out per-bin chi-squared scatter so a +/-3 dB check reflects the spectral
// envelope rather than estimator noise.  Bands narrower than the bin spacing
// are skipped; throws std::invalid_argument if every band is empty.
double psd_max_abs_deviation_db(const PsdTable& estimate,
                                const std::function<double(double)>& reference,
                                double f_lo, double f_hi, std::size_t bands);

}  // namespace cfpn
