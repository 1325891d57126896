// SPDX-License-Identifier: Apache-2.0
//
// Small-scale fading: correlated Rayleigh channels h_k ~ CN(0, R_k) with
// R_k block-diagonal over APs, and the per-symbol phase-noise rotation of
// the collective channel.
#pragma once

#include <Eigen/Dense>

#include "cfpn/network.hpp"
#include "cfpn/rng.hpp"

namespace cfpn {

struct ChannelRealization {
  // Collective channels, column k = h_k of length W = M*L; block m of
  // column k is h_mk.
  Eigen::MatrixXcd h;
};

// Draws h_mk = R_mk^{1/2} g with g ~ CN(0, I_L), independently per link.
// Throws std::invalid_argument if some R_mk is not positive semi-definite.
ChannelRealization sample_channels(const NetworkRealization& net, Rng& rng);

// Applies per-AP phase rotations to a collective channel: block m of the
// result is e^{j theta_m} times block m of h.  theta holds one entry per AP
// (the summed UE+AP link phase at the symbol of interest, symbol-0
// referenced).  Norm-preserving by construction.
Eigen::VectorXcd apply_pn(const Eigen::VectorXcd& h,
                          const Eigen::VectorXd& theta, std::size_t L);

}  // namespace cfpn
