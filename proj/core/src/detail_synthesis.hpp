// SPDX-License-Identifier: Apache-2.0
//
// Internal split of synthesize_pn: the deterministic per-bin amplitude table
// (pure function of PSD, rate, and length) and the random draw that consumes
// it.  Callers that draw many traces from one PSD (the Monte-Carlo harness)
// cache the amplitudes; the public synthesize_pn composes the two parts.
#pragma once

#include <cstddef>
#include <vector>

#include "cfpn/phase_trace.hpp"
#include "cfpn/rng.hpp"
#include "cfpn/synthesis.hpp"

namespace cfpn::detail {

// amp[k] for bins k = 0 .. nfft/2 (DC forced to zero, Nyquist real-valued).
std::vector<double> synthesis_bin_amplitudes(const PsdFunction& psd,
                                             double sample_rate,
                                             std::size_t nfft);

// Draws one trace of length n <= nfft using precomputed amplitudes.  Consumes
// exactly the same Rng sequence as synthesize_pn.
PhaseTrace synthesize_pn_from_amplitudes(const std::vector<double>& amp,
                                         double sample_rate, std::size_t nfft,
                                         std::size_t n, Rng& rng);

}  // namespace cfpn::detail
