// SPDX-License-Identifier: Apache-2.0
#include "cfpn/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "detail_linalg.hpp"

namespace cfpn {

double NetworkConfig::noise_variance_w() const {
  const double dbm = noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz);
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

void NetworkConfig::validate() const {
  if (M < 1 || L < 1 || K < 1)
    throw std::invalid_argument("M, L, K must all be >= 1");
  if (!(area_m > 0.0)) throw std::invalid_argument("area side must be > 0");
  if (!(fc_hz > 0.0)) throw std::invalid_argument("carrier must be > 0");
  if (!(p_w > 0.0)) throw std::invalid_argument("UE power must be > 0");
  if (!(bandwidth_hz > 0.0))
    throw std::invalid_argument("bandwidth must be > 0");
  if (!(pathloss.d0_m > 0.0) || !(pathloss.sigma_sf_db >= 0.0))
    throw std::invalid_argument("invalid path-loss parameters");
  if (cluster.kind == ClusterRule::Kind::TopN && cluster.top_n < 1)
    throw std::invalid_argument("cluster top_n must be >= 1");
  if (cluster.kind == ClusterRule::Kind::ThresholdDb &&
      !(cluster.threshold_db >= 0.0))
    throw std::invalid_argument("cluster threshold must be >= 0 dB");
}

double pathloss_db(double d_m, const PathlossParams& params, double shadow_db) {
  if (!(d_m > 0.0)) throw std::invalid_argument("distance must be > 0");
  const double d = std::max(d_m, params.d0_m);
  return params.lambda0_db - 10.0 * params.eta * std::log10(d / params.d0_m) +
         shadow_db;
}

std::vector<std::size_t> NetworkRealization::serving_aps(std::size_t k) const {
  std::vector<std::size_t> aps;
  for (std::size_t m = 0; m < M; ++m)
    if (serves(m, k)) aps.push_back(m);
  return aps;
}

Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> form_clusters(
    const Eigen::MatrixXd& beta, const ClusterRule& rule) {
  const auto M = beta.rows();
  const auto K = beta.cols();
  if (M < 1 || K < 1)
    throw std::invalid_argument("cluster formation needs M, K >= 1");
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> serving =
      Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(M, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    if (rule.kind == ClusterRule::Kind::TopN) {
      std::vector<Eigen::Index> order(static_cast<std::size_t>(M));
      for (Eigen::Index m = 0; m < M; ++m)
        order[static_cast<std::size_t>(m)] = m;
      // Descending beta, ties broken by AP index for determinism.
      std::sort(order.begin(), order.end(),
                [&](Eigen::Index a, Eigen::Index b) {
                  if (beta(a, k) != beta(b, k)) return beta(a, k) > beta(b, k);
                  return a < b;
                });
      const auto n = std::min<Eigen::Index>(
          static_cast<Eigen::Index>(rule.top_n), M);
      for (Eigen::Index i = 0; i < n; ++i) serving(order[static_cast<std::size_t>(i)], k) = 1;
    } else {
      const double best = beta.col(k).maxCoeff();
      const double cutoff = best * std::pow(10.0, -rule.threshold_db / 10.0);
      for (Eigen::Index m = 0; m < M; ++m)
        if (beta(m, k) >= cutoff) serving(m, k) = 1;
    }
    if (serving.col(k).sum() == 0) {
      // Degenerate threshold rule fallback: the strongest AP always serves.
      Eigen::Index best_m = 0;
      beta.col(k).maxCoeff(&best_m);
      serving(best_m, k) = 1;
    }
  }
  return serving;
}

namespace {

// Gaussian local-scattering correlation for a half-wavelength ULA: nominal
// bearing phi, angular std sigma (radians):
//   [R]_{p,q} = beta * e^{j pi (p-q) sin phi} * e^{-(sigma pi (p-q) cos phi)^2 / 2}
Eigen::MatrixXcd local_scattering_R(std::size_t L, double beta, double phi,
                                    double sigma_rad) {
  Eigen::MatrixXcd R(L, L);
  for (std::size_t p = 0; p < L; ++p) {
    for (std::size_t q = 0; q < L; ++q) {
      const double delta = static_cast<double>(p) - static_cast<double>(q);
      const double arg = std::numbers::pi * delta;
      const double damp = sigma_rad * arg * std::cos(phi);
      R(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
          beta * std::exp(-0.5 * damp * damp) *
          std::polar(1.0, arg * std::sin(phi));
    }
  }
  return R;
}

}  // namespace

NetworkRealization drop_network(const NetworkConfig& cfg, Rng& rng) {
  cfg.validate();
  NetworkRealization net;
  net.M = cfg.M;
  net.L = cfg.L;
  net.K = cfg.K;
  net.ap_positions.resize(static_cast<Eigen::Index>(cfg.M), 2);
  net.ue_positions.resize(static_cast<Eigen::Index>(cfg.K), 2);
  // Draw order is part of the determinism contract: AP positions, then UE
  // positions, then shadowing m-major.
  for (Eigen::Index m = 0; m < net.ap_positions.rows(); ++m) {
    net.ap_positions(m, 0) = rng.uniform() * cfg.area_m;
    net.ap_positions(m, 1) = rng.uniform() * cfg.area_m;
  }
  for (Eigen::Index k = 0; k < net.ue_positions.rows(); ++k) {
    net.ue_positions(k, 0) = rng.uniform() * cfg.area_m;
    net.ue_positions(k, 1) = rng.uniform() * cfg.area_m;
  }
  net.beta.resize(static_cast<Eigen::Index>(cfg.M),
                  static_cast<Eigen::Index>(cfg.K));
  Eigen::MatrixXd bearing(net.beta.rows(), net.beta.cols());
  for (Eigen::Index m = 0; m < net.beta.rows(); ++m) {
    for (Eigen::Index k = 0; k < net.beta.cols(); ++k) {
      const double dx = net.ue_positions(k, 0) - net.ap_positions(m, 0);
      const double dy = net.ue_positions(k, 1) - net.ap_positions(m, 1);
      const double d = std::max(std::hypot(dx, dy), 1e-3);
      const double shadow = cfg.pathloss.sigma_sf_db * rng.gaussian();
      net.beta(m, k) =
          std::pow(10.0, pathloss_db(d, cfg.pathloss, shadow) / 10.0);
      bearing(m, k) = std::atan2(dy, dx);
    }
  }

  net.R.reserve(cfg.M * cfg.K);
  net.R_sqrt.reserve(cfg.M * cfg.K);
  const double sigma_rad =
      cfg.angular_spread_deg * std::numbers::pi / 180.0;
  for (std::size_t m = 0; m < cfg.M; ++m) {
    for (std::size_t k = 0; k < cfg.K; ++k) {
      const double beta = net.beta(static_cast<Eigen::Index>(m),
                                   static_cast<Eigen::Index>(k));
      if (cfg.correlation == CorrelationModel::Uncorrelated) {
        net.R.push_back(beta *
                        Eigen::MatrixXcd::Identity(
                            static_cast<Eigen::Index>(cfg.L),
                            static_cast<Eigen::Index>(cfg.L)));
        net.R_sqrt.push_back(std::sqrt(beta) *
                             Eigen::MatrixXcd::Identity(
                                 static_cast<Eigen::Index>(cfg.L),
                                 static_cast<Eigen::Index>(cfg.L)));
      } else {
        Eigen::MatrixXcd R = local_scattering_R(
            cfg.L, beta,
            bearing(static_cast<Eigen::Index>(m),
                    static_cast<Eigen::Index>(k)),
            sigma_rad);
        net.R_sqrt.push_back(detail::hermitian_sqrt(R));
        net.R.push_back(std::move(R));
      }
    }
  }

  net.serving = form_clusters(net.beta, cfg.cluster);
  return net;
}

}  // namespace cfpn
