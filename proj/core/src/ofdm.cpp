// SPDX-License-Identifier: Apache-2.0
#include "cfpn/ofdm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace cfpn {

namespace {

// Plain DFT sums via kissfft.  Eigen's defaults: fwd is the unscaled
// e^{-j2pi k n/N} sum, inv carries a 1/N factor.
CVec fft_fwd(const CVec& in) {
  Eigen::FFT<double> fft;
  CVec out(in.size());
  fft.fwd(out.data(), in.data(), static_cast<int>(in.size()));
  return out;
}

CVec fft_inv_scaled(const CVec& in) {
  Eigen::FFT<double> fft;
  CVec out(in.size());
  fft.inv(out.data(), in.data(), static_cast<int>(in.size()));
  return out;
}

}  // namespace

CVec idft(const CVec& freq) {
  if (freq.empty()) throw std::invalid_argument("idft requires length >= 1");
  // Want (1/sqrt N) * sum; Eigen inv gives (1/N) * sum.
  CVec out = fft_inv_scaled(freq);
  const double scale = std::sqrt(static_cast<double>(freq.size()));
  for (auto& v : out) v *= scale;
  return out;
}

CVec dft(const CVec& time) {
  if (time.empty()) throw std::invalid_argument("dft requires length >= 1");
  CVec out = fft_fwd(time);
  const double scale = 1.0 / std::sqrt(static_cast<double>(time.size()));
  for (auto& v : out) v *= scale;
  return out;
}

CVec pn_freq_coeffs(const std::vector<double>& theta) {
  if (theta.empty())
    throw std::invalid_argument("pn_freq_coeffs requires length >= 1");
  const std::size_t n = theta.size();
  CVec rotated(n);
  for (std::size_t m = 0; m < n; ++m) rotated[m] = std::polar(1.0, theta[m]);
  // P_i = (1/N) sum_n e^{j theta_n} e^{-j 2 pi n i / N}
  CVec p = fft_fwd(rotated);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : p) v *= scale;
  return p;
}

CVec received_with_ici(const CVec& X, const CVec& H, const CVec& P,
                       const CVec& noise) {
  const std::size_t n = X.size();
  if (H.size() != n || P.size() != n || noise.size() != n)
    throw std::invalid_argument("received_with_ici requires equal lengths");
  CVec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> acc = noise[i];
    for (std::size_t l = 0; l < n; ++l) {
      // Circular convolution of P with H.*X: index (i - l) mod N.
      const std::size_t shift = (i + n - l) % n;
      acc += P[shift] * H[l] * X[l];
    }
    y[i] = acc;
  }
  return y;
}

IciSplit ici_power(const std::vector<double>& theta) {
  const CVec p = pn_freq_coeffs(theta);
  const double cpe = std::norm(p[0]);
  return {cpe, 1.0 - cpe};
}

}  // namespace cfpn
