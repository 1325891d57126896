// SPDX-License-Identifier: Apache-2.0
//
// Scalable user-centric cell-free network geometry: AP/UE placement on a
// square, large-scale fading with log-normal shadowing, spatial correlation,
// and dynamic cooperation clustering (per-link all-or-nothing D matrices).
#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cfpn/rng.hpp"

namespace cfpn {

struct PathlossParams {
  double lambda0_db = -35.3;  // gain at the reference distance, dB
  double eta = 3.76;          // path-loss exponent
  double d0_m = 1.0;          // reference distance, m
  double sigma_sf_db = 10.0;  // shadow-fading standard deviation, dB
};

// Cluster formation rule: each UE is served either by its top_n strongest
// APs, or by every AP within threshold_db of its strongest.
struct ClusterRule {
  enum class Kind { TopN, ThresholdDb };
  Kind kind = Kind::TopN;
  std::size_t top_n = 5;
  double threshold_db = 20.0;
};

enum class CorrelationModel {
  Uncorrelated,     // R_mk = beta_mk * I_L
  LocalScattering,  // Gaussian local scattering around the AP-UE bearing
};

struct NetworkConfig {
  std::size_t M = 100;  // AP count
  std::size_t L = 4;    // antennas per AP
  std::size_t K = 40;   // UE count
  double area_m = 400.0;              // square side length, m
  double fc_hz = 3.5e9;               // carrier frequency, Hz
  double p_w = 0.1;                   // per-UE transmit power, W
  double noise_psd_dbm_hz = -174.0;   // thermal noise PSD, dBm/Hz
  double bandwidth_hz = 180e3;        // detection bandwidth (one CB), Hz
  PathlossParams pathloss;
  ClusterRule cluster;
  CorrelationModel correlation = CorrelationModel::Uncorrelated;
  double angular_spread_deg = 15.0;   // local-scattering spread (if enabled)

  std::size_t W() const { return M * L; }
  // Receiver noise variance in W: noise_psd + 10 log10(bandwidth), dBm -> W.
  double noise_variance_w() const;
  // Throws std::invalid_argument on non-positive dimensions/areas/powers.
  void validate() const;
};

// Channel gain in dB at distance d (m):
//   beta_dB = Lambda0 - 10 eta log10(max(d, d0)/d0) + shadow
// Lambda0 is the (negative) gain at d0, so beta decreases with distance.
// Throws std::invalid_argument for d <= 0.
double pathloss_db(double d_m, const PathlossParams& params, double shadow_db);

struct NetworkRealization {
  std::size_t M = 0, L = 0, K = 0;
  Eigen::MatrixXd ap_positions;  // M x 2
  Eigen::MatrixXd ue_positions;  // K x 2
  Eigen::MatrixXd beta;          // M x K linear power gain
  // Per-link L x L correlation matrices, row-major by link index m*K + k;
  // tr(R_mk)/L = beta_mk.
  std::vector<Eigen::MatrixXcd> R;
  // Cached Hermitian square roots R_mk^{1/2} (same indexing); populated by
  // drop_network, rebuilt on demand by sample_channels for hand-built nets.
  std::vector<Eigen::MatrixXcd> R_sqrt;
  // Serving incidence: serving(m,k) != 0 iff D_mk = I_L.
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> serving;

  const Eigen::MatrixXcd& R_of(std::size_t m, std::size_t k) const {
    return R[m * K + k];
  }
  bool serves(std::size_t m, std::size_t k) const {
    return serving(static_cast<Eigen::Index>(m),
                   static_cast<Eigen::Index>(k)) != 0;
  }
  // Indices of APs serving UE k, ascending.
  std::vector<std::size_t> serving_aps(std::size_t k) const;
};

// Cluster assignment from the large-scale gains.  Guarantees every UE at
// least one serving AP (its strongest).
Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> form_clusters(
    const Eigen::MatrixXd& beta, const ClusterRule& rule);

// One Monte-Carlo drop: i.i.d. uniform positions, path loss with shadowing,
// correlation matrices per the configured model, clusters per the rule.
// Deterministic given the RNG stream.
NetworkRealization drop_network(const NetworkConfig& cfg, Rng& rng);

}  // namespace cfpn
