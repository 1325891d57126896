// SPDX-License-Identifier: Apache-2.0
//
// Free-running oscillator model: the phase follows a Wiener process whose
// increments over an interval dt are zero-mean Gaussian with variance
//   sigma^2 = 4 pi^2 f_c^2 c dt        (c: oscillator constant, seconds)
// or sigma^2 may be given directly per step.
#pragma once

#include "cfpn/phase_trace.hpp"
#include "cfpn/rng.hpp"

namespace cfpn {

struct WienerParams {
  double sigma2 = 0.0;  // innovation variance per step, rad^2 (>= 0)

  // Direct per-step variance.
  static WienerParams from_sigma2(double sigma2);
  // Derived from carrier frequency, oscillator constant, and step interval.
  static WienerParams from_oscillator(double fc_hz, double c_s, double dt_s);
};

// Random-walk phase trace: samples[0] = 0, increments i.i.d. N(0, sigma^2).
// Throws std::invalid_argument for n < 1 or sigma2 < 0.
PhaseTrace wiener_trace(const WienerParams& params, std::size_t n,
                        double sample_rate, Rng& rng);

}  // namespace cfpn
