// SPDX-License-Identifier: Apache-2.0
#include "cfpn/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "detail_linalg.hpp"

namespace cfpn {

ChannelRealization sample_channels(const NetworkRealization& net, Rng& rng) {
  if (net.R.size() != net.M * net.K)
    throw std::invalid_argument("network realization missing R matrices");
  const bool have_cache = net.R_sqrt.size() == net.R.size();
  ChannelRealization ch;
  ch.h.resize(static_cast<Eigen::Index>(net.M * net.L),
              static_cast<Eigen::Index>(net.K));
  Eigen::VectorXcd g(static_cast<Eigen::Index>(net.L));
  // Draw order (determinism contract): k-major, then m, then antenna.
  for (std::size_t k = 0; k < net.K; ++k) {
    for (std::size_t m = 0; m < net.M; ++m) {
      for (Eigen::Index a = 0; a < g.size(); ++a)
        g(a) = rng.circular_gaussian();
      const Eigen::MatrixXcd sqrt_R =
          have_cache ? net.R_sqrt[m * net.K + k]
                     : detail::hermitian_sqrt(net.R[m * net.K + k]);
      ch.h.block(static_cast<Eigen::Index>(m * net.L),
                 static_cast<Eigen::Index>(k),
                 static_cast<Eigen::Index>(net.L), 1) = sqrt_R * g;
    }
  }
  return ch;
}

Eigen::VectorXcd apply_pn(const Eigen::VectorXcd& h,
                          const Eigen::VectorXd& theta, std::size_t L) {
  if (L < 1 || h.size() % static_cast<Eigen::Index>(L) != 0)
    throw std::invalid_argument("channel length must be a multiple of L");
  if (theta.size() * static_cast<Eigen::Index>(L) != h.size())
    throw std::invalid_argument("need one phase per AP block");
  for (Eigen::Index m = 0; m < theta.size(); ++m)
    if (!std::isfinite(theta(m)))
      throw std::invalid_argument("phases must be finite");
  Eigen::VectorXcd out(h.size());
  for (Eigen::Index m = 0; m < theta.size(); ++m)
    out.segment(m * static_cast<Eigen::Index>(L),
                static_cast<Eigen::Index>(L)) =
        std::polar(1.0, theta(m)) *
        h.segment(m * static_cast<Eigen::Index>(L),
                  static_cast<Eigen::Index>(L));
  return out;
}

}  // namespace cfpn
