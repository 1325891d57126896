// SPDX-License-Identifier: Apache-2.0
//
// 5G NR FR1 numerology: subcarrier spacing, coherence-block geometry, and the
// derived OFDM symbol timing used throughout the simulator.
#pragma once

#include <cstddef>

namespace cfpn {

struct Numerology {
  double delta_f = 15e3;   // subcarrier spacing, Hz
  double b_c = 180e3;      // coherence bandwidth, Hz
  double t_c = 1e-3;       // coherence time (= TTI), s
  double t_ofdm = 1e-3 / 14.0;  // OFDM symbol duration, s
  std::size_t n_cb = 12;   // subcarriers per coherence bandwidth
  std::size_t n_ct = 14;   // OFDM symbols per coherence time
  std::size_t tau_p = 12;  // pilot channel uses per coherence block
  std::size_t tau_c = 168; // total channel uses per coherence block

  // Symbol rate n_ct / t_c (Hz); 14 kHz for the default instance.
  double symbol_rate() const { return static_cast<double>(n_ct) / t_c; }

  // Throws std::invalid_argument unless n_cb = floor(b_c/delta_f),
  // n_ct = floor(t_c/t_ofdm), tau_c = n_ct*n_cb, and tau_p <= tau_c.
  void validate() const;

  // Builds a consistent instance from the physical quantities, deriving the
  // counts (with an epsilon guard so t_c/t_ofdm = 14 - 1 ulp still floors to
  // 14).
  static Numerology from_physical(double delta_f, double b_c, double t_c,
                                  double t_ofdm, std::size_t tau_p);
};

}  // namespace cfpn
