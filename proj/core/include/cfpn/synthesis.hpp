// SPDX-License-Identifier: Apache-2.0
//
// Frequency-domain synthesis of a real phase trace from a one-sided phase-
// noise PSD.  Each positive-frequency FFT bin receives an independent complex
// Gaussian weight whose expected power equals S(f_k) * Delta_f_bin, with
// S(f) = 2 * 10^(dBc/10) rad^2/Hz (one-sided total phase PSD from the SSB
// level); the DC bin is zeroed (absolute phase is unobservable after
// symbol-0 referencing) and Hermitian symmetry makes the trace real.
#pragma once

#include <functional>

#include "cfpn/phase_trace.hpp"
#include "cfpn/psd.hpp"
#include "cfpn/rng.hpp"

namespace cfpn {

// Target profile for synthesis: maps offset (Hz) to SSB level (dBc/Hz).
// Return -infinity to zero a bin.
using PsdFunction = std::function<double(double)>;

// Profile evaluated from a table via interpolate_psd.
PsdFunction psd_from_table(const PsdTable& table);

// Wraps a profile so it returns -infinity outside [min_hz, max_hz]; used to
// confine synthesis to the modeled offset band.
PsdFunction band_limited(PsdFunction psd, double min_hz, double max_hz);

// Draws a real phase trace of length n whose one-sided PSD matches the
// target.  n is padded internally to the next power of two; the first n
// samples of the padded synthesis are returned.  Throws
// std::invalid_argument for sample_rate <= 0 or n < 1.
PhaseTrace synthesize_pn(const PsdFunction& psd, double sample_rate,
                         std::size_t n, Rng& rng);

}  // namespace cfpn
