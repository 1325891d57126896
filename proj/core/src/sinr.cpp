// SPDX-License-Identifier: Apache-2.0
#include "cfpn/sinr.hpp"

#include <cmath>
#include <stdexcept>

namespace cfpn {

void SinrAccumulator::add(const std::complex<double>* c, std::size_t n_ue,
                          std::size_t k, double vnorm2) {
  if (n_ue != sum_sq_.size())
    throw std::invalid_argument("interferer count mismatch");
  if (k >= n_ue) throw std::invalid_argument("UE index out of range");
  sum_desired_ += c[k];
  for (std::size_t l = 0; l < n_ue; ++l) sum_sq_[l] += std::norm(c[l]);
  sum_vnorm2_ += vnorm2;
  ++count_;
}

double SinrAccumulator::sinr(std::size_t k, double p_w, double noise_var_w,
                             bool* degenerate) const {
  if (count_ == 0)
    throw std::invalid_argument("SINR requires at least one realization");
  if (k >= sum_sq_.size()) throw std::invalid_argument("UE index out of range");
  const double inv_n = 1.0 / static_cast<double>(count_);
  const std::complex<double> desired = sum_desired_ * inv_n;
  const double numerator = p_w * std::norm(desired);
  double moment_sum = 0.0;
  for (double s : sum_sq_) moment_sum += s * inv_n;
  const double denominator =
      p_w * moment_sum - numerator + noise_var_w * sum_vnorm2_ * inv_n;
  if (!(denominator > 0.0)) {
    // Possible only for an (all-zero) degenerate combiner; reported, not
    // thrown, so a sweep can continue and the caller may enlarge the
    // ensemble.
    if (degenerate != nullptr) *degenerate = true;
    return 0.0;
  }
  if (degenerate != nullptr) *degenerate = false;
  return numerator / denominator;
}

double sinr_per_symbol(std::size_t k, std::size_t t, CombinerKind kind,
                       const NetworkRealization& net,
                       const std::vector<ChannelRealization>& channels,
                       const std::vector<PnRealization>& pn, double p_w,
                       double noise_var_w) {
  if (channels.empty() || channels.size() != pn.size())
    throw std::invalid_argument("need matching channel and PN ensembles");
  if (k >= net.K) throw std::invalid_argument("UE index out of range");

  const auto L = static_cast<Eigen::Index>(net.L);
  const CombinerContext context(net, p_w, noise_var_w);
  const auto& aps = context.active_aps(k);

  SinrAccumulator acc(net.K);
  std::vector<std::complex<double>> c(net.K);
  for (std::size_t e = 0; e < channels.size(); ++e) {
    const auto& h = channels[e].h;
    const auto& phases = pn[e];
    if (h.rows() != static_cast<Eigen::Index>(net.M * net.L) ||
        h.cols() != static_cast<Eigen::Index>(net.K))
      throw std::invalid_argument("channel matrix must be W x K");
    if (phases.ue_phase.rows() != static_cast<Eigen::Index>(net.K) ||
        phases.ap_phase.rows() != static_cast<Eigen::Index>(net.M) ||
        static_cast<Eigen::Index>(t) >= phases.ue_phase.cols() ||
        phases.ue_phase.cols() != phases.ap_phase.cols())
      throw std::invalid_argument("PN realization dimensions mismatch");

    // Perfect CSI at symbol 0: combiners from this member's channels.
    const Eigen::MatrixXcd v = context.combine(kind, h);
    const Eigen::VectorXcd vk = v.col(static_cast<Eigen::Index>(k));

    double vnorm2 = 0.0;
    for (std::size_t m : aps)
      vnorm2 += vk.segment(static_cast<Eigen::Index>(m) * L, L).squaredNorm();

    const auto ti = static_cast<Eigen::Index>(t);
    for (std::size_t l = 0; l < net.K; ++l) {
      std::complex<double> acc_c(0.0, 0.0);
      const double ue_drift = phases.ue_phase(static_cast<Eigen::Index>(l), ti) -
                              phases.ue_phase(static_cast<Eigen::Index>(l), 0);
      for (std::size_t m : aps) {
        const double theta =
            ue_drift + phases.ap_phase(static_cast<Eigen::Index>(m), ti) -
            phases.ap_phase(static_cast<Eigen::Index>(m), 0);
        const std::complex<double> partial =
            vk.segment(static_cast<Eigen::Index>(m) * L, L)
                .dot(h.col(static_cast<Eigen::Index>(l))
                         .segment(static_cast<Eigen::Index>(m) * L, L));
        acc_c += std::polar(1.0, theta) * partial;
      }
      c[l] = acc_c;
    }
    acc.add(c.data(), net.K, k, vnorm2);
  }
  return acc.sinr(k, p_w, noise_var_w);
}

double se_per_symbol(double sinr_linear) {
  if (!(sinr_linear >= 0.0))
    throw std::invalid_argument("SINR must be non-negative");
  return std::log2(1.0 + sinr_linear);
}

}  // namespace cfpn
