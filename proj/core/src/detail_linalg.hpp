// SPDX-License-Identifier: Apache-2.0
//
// Internal linear-algebra helpers shared between translation units; not
// installed.
#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace cfpn::detail {

// Hermitian PSD square root via eigendecomposition.  Small negative
// eigenvalues (round-off) are clamped to zero; genuinely negative ones are a
// modeling error.
inline Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& R) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(R);
  if (es.info() != Eigen::Success)
    throw std::invalid_argument("correlation eigendecomposition failed");
  const double scale = std::max(es.eigenvalues().maxCoeff(), 0.0);
  Eigen::VectorXd lambda = es.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -1e-10 * std::max(scale, 1e-300))
      throw std::invalid_argument("correlation matrix is not PSD");
    lambda(i) = std::sqrt(std::max(lambda(i), 0.0));
  }
  return es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace cfpn::detail
