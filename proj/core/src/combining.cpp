// SPDX-License-Identifier: Apache-2.0
#include "cfpn/combining.hpp"

#include <stdexcept>

namespace cfpn {

namespace {

// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix via
// eigendecomposition; eigenvalues at or below kPinvTolerance * lambda_max
// are truncated.  Returns true when truncation happened (rank deficiency).
bool hermitian_pinv(const Eigen::MatrixXcd& a, Eigen::MatrixXcd* out) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  if (es.info() != Eigen::Success)
    throw std::invalid_argument("combiner eigendecomposition failed");
  const double lambda_max = es.eigenvalues().cwiseAbs().maxCoeff();
  const double tol = kPinvTolerance * lambda_max;
  bool deficient = false;
  Eigen::VectorXd inv = es.eigenvalues();
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    if (inv(i) <= tol) {
      inv(i) = 0.0;
      deficient = true;
    } else {
      inv(i) = 1.0 / inv(i);
    }
  }
  *out = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
  return deficient;
}

}  // namespace

CombinerContext::CombinerContext(const NetworkRealization& net, double p_w,
                                 double noise_var_w)
    : net_(net), p_w_(p_w) {
  if (!(p_w > 0.0) || !(noise_var_w > 0.0))
    throw std::invalid_argument("powers must be positive");
  const auto L = static_cast<Eigen::Index>(net.L);
  // Channel-independent part of the MMSE matrix, per AP:
  // sum_l p_l R_ml + sigma^2 I_L (equal power p for all UEs).
  std::vector<Eigen::MatrixXcd> ap_term(net.M,
                                        Eigen::MatrixXcd::Zero(L, L));
  for (std::size_t m = 0; m < net.M; ++m) {
    for (std::size_t l = 0; l < net.K; ++l)
      ap_term[m] += p_w * net.R[m * net.K + l];
    ap_term[m] += noise_var_w * Eigen::MatrixXcd::Identity(L, L);
  }

  active_.resize(net.K);
  z_.resize(net.K);
  for (std::size_t k = 0; k < net.K; ++k) {
    active_[k] = net.serving_aps(k);
    if (active_[k].empty())
      throw std::invalid_argument("every UE needs at least one serving AP");
    const auto nk = static_cast<Eigen::Index>(active_[k].size()) * L;
    z_[k] = Eigen::MatrixXcd::Zero(nk, nk);
    for (std::size_t i = 0; i < active_[k].size(); ++i)
      z_[k].block(static_cast<Eigen::Index>(i) * L,
                  static_cast<Eigen::Index>(i) * L, L, L) =
          ap_term[active_[k][i]];
  }
}

Eigen::MatrixXcd CombinerContext::combine(CombinerKind kind,
                                          const Eigen::MatrixXcd& hhat,
                                          CombinerStats* stats) const {
  const auto L = static_cast<Eigen::Index>(net_.L);
  const auto W = static_cast<Eigen::Index>(net_.M * net_.L);
  const auto K = static_cast<Eigen::Index>(net_.K);
  if (hhat.rows() != W || hhat.cols() != K)
    throw std::invalid_argument("channel matrix must be W x K");

  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(W, K);
  for (std::size_t k = 0; k < net_.K; ++k) {
    const auto& aps = active_[k];
    const auto nk = static_cast<Eigen::Index>(aps.size()) * L;
    // Masked channels: rows are UE k's active dimensions, columns all UEs.
    Eigen::MatrixXcd hm(nk, K);
    for (std::size_t i = 0; i < aps.size(); ++i)
      hm.middleRows(static_cast<Eigen::Index>(i) * L, L) =
          hhat.middleRows(static_cast<Eigen::Index>(aps[i]) * L, L);

    Eigen::VectorXcd vk;
    if (kind == CombinerKind::MR) {
      vk = hm.col(static_cast<Eigen::Index>(k));
    } else {
      const Eigen::MatrixXcd a =
          p_w_ * (hm * hm.adjoint()) + z_[k];
      Eigen::MatrixXcd a_pinv;
      if (hermitian_pinv(a, &a_pinv) && stats != nullptr)
        ++stats->rank_deficient;
      vk = p_w_ * (a_pinv * hm.col(static_cast<Eigen::Index>(k)));
    }
    for (std::size_t i = 0; i < aps.size(); ++i)
      v.block(static_cast<Eigen::Index>(aps[i]) * L,
              static_cast<Eigen::Index>(k), L, 1) =
          vk.segment(static_cast<Eigen::Index>(i) * L, L);
  }
  return v;
}

Eigen::MatrixXcd combiner(CombinerKind kind, const Eigen::MatrixXcd& hhat,
                          const NetworkRealization& net, double p_w,
                          double noise_var_w, CombinerStats* stats) {
  return CombinerContext(net, p_w, noise_var_w).combine(kind, hhat, stats);
}

}  // namespace cfpn
