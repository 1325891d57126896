// SPDX-License-Identifier: Apache-2.0
#include "cfpn/wiener.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cfpn {

WienerParams WienerParams::from_sigma2(double sigma2) {
  if (!(sigma2 >= 0.0))
    throw std::invalid_argument("Wiener sigma2 must be >= 0");
  return WienerParams{sigma2};
}

WienerParams WienerParams::from_oscillator(double fc_hz, double c_s,
                                           double dt_s) {
  if (!(fc_hz > 0.0) || !(c_s >= 0.0) || !(dt_s > 0.0))
    throw std::invalid_argument(
        "Wiener oscillator parameters require fc > 0, c >= 0, dt > 0");
  const double two_pi_fc = 2.0 * std::numbers::pi * fc_hz;
  return WienerParams{two_pi_fc * two_pi_fc * c_s * dt_s};
}

PhaseTrace wiener_trace(const WienerParams& params, std::size_t n,
                        double sample_rate, Rng& rng) {
  if (n < 1) throw std::invalid_argument("Wiener trace needs n >= 1");
  if (!(params.sigma2 >= 0.0))
    throw std::invalid_argument("Wiener sigma2 must be >= 0");
  if (!(sample_rate > 0.0))
    throw std::invalid_argument("sample rate must be > 0");
  PhaseTrace trace;
  trace.sample_rate = sample_rate;
  trace.model_id = "wiener";
  trace.samples.resize(n, 0.0);
  const double sigma = std::sqrt(params.sigma2);
  double phase = 0.0;
  for (std::size_t t = 1; t < n; ++t) {
    phase += sigma * rng.gaussian();
    trace.samples[t] = phase;
  }
  return trace;
}

}  // namespace cfpn
