// SPDX-License-Identifier: Apache-2.0
//
// Per-symbol SINR under phase noise, estimated by sample means over a
// Monte-Carlo ensemble of joint channel + phase-noise realizations:
//
//            p_k |E{v_k^H D_k h~_k^t}|^2
//  SINR_k^t = ------------------------------------------------------------
//            sum_l p_l E{|v_k^H D_k h~_l^t|^2} - p_k |E{v_k^H D_k h~_k^t}|^2
//                                              + sigma^2 E{||D_k v_k||^2}
//
// where h~^t is the symbol-t effective (phase-rotated) channel and v_k is
// computed from the symbol-0 channels of each realization.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cfpn/channel.hpp"
#include "cfpn/combining.hpp"
#include "cfpn/network.hpp"

namespace cfpn {

// Running sample-mean statistics for one (UE, symbol-index) pair.  add() is
// called once per ensemble member with that member's inner products; sinr()
// assembles the estimate.
class SinrAccumulator {
 public:
  explicit SinrAccumulator(std::size_t n_ue) : sum_sq_(n_ue, 0.0) {}

  // c[l] = v_k^H D_k h~_l^t for this realization (contiguous, one entry per
  // UE, desired UE at index k); vnorm2 = ||D_k v_k||^2.
  void add(const std::complex<double>* c, std::size_t n_ue, std::size_t k,
           double vnorm2);

  // Assembles the SINR estimate (linear).  The denominator is clamped to be
  // reported non-positive rather than thrown: a non-positive estimate
  // returns 0 and sets *degenerate if provided (caller may enlarge the
  // ensemble).  Requires at least one added realization.
  double sinr(std::size_t k, double p_w, double noise_var_w,
              bool* degenerate = nullptr) const;

  std::size_t count() const { return count_; }

 private:
  std::complex<double> sum_desired_{0.0, 0.0};
  std::vector<double> sum_sq_;  // per-interferer sum of |c_l|^2
  double sum_vnorm2_ = 0.0;
  std::size_t count_ = 0;
};

// Phase-noise realization for one ensemble member: raw oscillator phases at
// symbol rate.  Rotations use symbol-0-referenced sums
// theta_mk^t = (ue(k,t) - ue(k,0)) + (ap(m,t) - ap(m,0)).
struct PnRealization {
  Eigen::MatrixXd ue_phase;  // K x T
  Eigen::MatrixXd ap_phase;  // M x T
};

// Reference (direct-formula) ensemble SINR estimator for UE k at symbol t.
// Combiners are recomputed per realization from its symbol-0 channels.  The
// optimized harness path must agree with this to numerical precision; it is
// kept simple deliberately.  Throws std::invalid_argument on empty ensemble
// or mismatched dimensions.
double sinr_per_symbol(std::size_t k, std::size_t t, CombinerKind kind,
                       const NetworkRealization& net,
                       const std::vector<ChannelRealization>& channels,
                       const std::vector<PnRealization>& pn, double p_w,
                       double noise_var_w);

// Achievable spectral efficiency log2(1 + sinr), bits/s/Hz.  Throws
// std::invalid_argument for negative input.
double se_per_symbol(double sinr_linear);

}  // namespace cfpn
