// SPDX-License-Identifier: Apache-2.0
//
// Centralized uplink receive combining over the D_k-masked collective
// channel dimensions:
//   MR:    v_k = D_k h_k
//   MMSE:  v_k = p_k (sum_l p_l D_k h_l h_l^H D_k + Z_k)^+ D_k h_k,
//          Z_k = D_k (sum_l p_l R_l + sigma^2 I_W) D_k
// with ^+ the Moore-Penrose pseudo-inverse (singular values below
// 1e-12 * sigma_max truncated).  Combiners assume perfect CSI at symbol 0.
#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cfpn/channel.hpp"
#include "cfpn/network.hpp"

namespace cfpn {

enum class CombinerKind { MR, MMSE };

struct CombinerStats {
  std::size_t rank_deficient = 0;  // solves that hit the pinv tolerance
};

inline constexpr double kPinvTolerance = 1e-12;

// Per-drop combining context: caches each UE's active (masked) dimensions
// and the channel-independent MMSE term Z_k = D_k (sum_l p_l R_l +
// sigma^2 I) D_k, so repeated per-realization combining does not rebuild
// them.
class CombinerContext {
 public:
  CombinerContext(const NetworkRealization& net, double p_w,
                  double noise_var_w);

  // Combining vectors for all UEs: column k of the returned W x K matrix is
  // v_k, zero outside UE k's serving-AP blocks.  `hhat` is the W x K matrix
  // of estimated collective channels (columns h_l).  Ill-conditioned MMSE
  // systems are handled by pseudo-inverse truncation and counted in `stats`
  // (never fatal).
  Eigen::MatrixXcd combine(CombinerKind kind, const Eigen::MatrixXcd& hhat,
                           CombinerStats* stats = nullptr) const;

  const std::vector<std::size_t>& active_aps(std::size_t k) const {
    return active_[k];
  }

 private:
  const NetworkRealization& net_;
  double p_w_;
  std::vector<std::vector<std::size_t>> active_;  // serving APs per UE
  std::vector<Eigen::MatrixXcd> z_;               // masked Z_k per UE
};

// One-shot convenience wrapper around CombinerContext.
Eigen::MatrixXcd combiner(CombinerKind kind, const Eigen::MatrixXcd& hhat,
                          const NetworkRealization& net, double p_w,
                          double noise_var_w, CombinerStats* stats = nullptr);

}  // namespace cfpn
