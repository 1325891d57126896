// SPDX-License-Identifier: Apache-2.0
#include "cfpn/numerology.hpp"

#include <cmath>
#include <stdexcept>

namespace cfpn {

namespace {

// floor() with a relative epsilon guard: 1e-3 / (1e-3/14) can land a few
// ulps under 14 and must still count as 14 symbols.
std::size_t guarded_floor(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("ratio must be positive");
  return static_cast<std::size_t>(std::floor(x * (1.0 + 1e-9)));
}

}  // namespace

void Numerology::validate() const {
  if (!(delta_f > 0.0) || !(b_c > 0.0) || !(t_c > 0.0) || !(t_ofdm > 0.0))
    throw std::invalid_argument("numerology rates/durations must be positive");
  if (n_cb != guarded_floor(b_c / delta_f))
    throw std::invalid_argument("n_cb must equal floor(b_c/delta_f)");
  if (n_ct != guarded_floor(t_c / t_ofdm))
    throw std::invalid_argument("n_ct must equal floor(t_c/t_ofdm)");
  if (tau_c != n_ct * n_cb)
    throw std::invalid_argument("tau_c must equal n_ct*n_cb");
  if (tau_p > tau_c)
    throw std::invalid_argument("tau_p must not exceed tau_c");
}

Numerology Numerology::from_physical(double delta_f, double b_c, double t_c,
                                     double t_ofdm, std::size_t tau_p) {
  Numerology num;
  num.delta_f = delta_f;
  num.b_c = b_c;
  num.t_c = t_c;
  num.t_ofdm = t_ofdm;
  num.n_cb = guarded_floor(b_c / delta_f);
  num.n_ct = guarded_floor(t_c / t_ofdm);
  num.tau_c = num.n_ct * num.n_cb;
  num.tau_p = tau_p;
  num.validate();
  return num;
}

}  // namespace cfpn
