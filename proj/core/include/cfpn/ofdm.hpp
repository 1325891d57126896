// SPDX-License-Identifier: Apache-2.0
//
// OFDM symbol model and the exact CPE/ICI decomposition.  With phase noise
// theta_n across the N samples of one symbol, the received subcarriers are
//   Y_i = P_0 H_i X_i + sum_{l != i} P_{(i-l) mod N} H_l X_l + Z_i
// where P_i = (1/N) sum_n e^{j theta_n} e^{-j 2 pi n i / N}.  P_0 is the
// common phase error; 1 - |P_0|^2 is the power leaked into inter-carrier
// interference (Parseval).
#pragma once

#include <complex>
#include <vector>

namespace cfpn {

using CVec = std::vector<std::complex<double>>;

// Unitary N-point inverse DFT, x_n = (1/sqrt N) sum_i X_i e^{j 2 pi i n / N}.
// Throws std::invalid_argument on empty input.
CVec idft(const CVec& freq);

// Forward counterpart (1/sqrt N normalization); provided for the time-domain
// oracle path.
CVec dft(const CVec& time);

// Frequency-domain phase-noise coefficients P of a length-N theta vector.
CVec pn_freq_coeffs(const std::vector<double>& theta);

// Eq.-(5) assembly of the received symbol from per-subcarrier channel H,
// transmitted symbols X, PN coefficients P, and additive noise Z.  All four
// vectors must share one length.
CVec received_with_ici(const CVec& X, const CVec& H, const CVec& P,
                       const CVec& noise);

struct IciSplit {
  double cpe_power = 0.0;  // |P_0|^2
  double ici_power = 0.0;  // 1 - |P_0|^2
};

// CPE/ICI power split of a full-rate phase trace spanning one OFDM symbol.
IciSplit ici_power(const std::vector<double>& theta);

}  // namespace cfpn
