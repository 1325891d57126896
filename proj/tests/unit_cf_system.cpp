// SPDX-License-Identifier: Apache-2.0
//
// Cell-free system layer: geometry and large-scale fading, clustering,
// correlated Rayleigh sampling, combining, and the per-symbol SINR/SE
// estimator (including its scalar hand-evaluated cases).
#include <cmath>
#include <complex>

#include <doctest.h>

#include "cfpn/channel.hpp"
#include "cfpn/combining.hpp"
#include "cfpn/network.hpp"
#include "cfpn/rng.hpp"
#include "cfpn/sinr.hpp"

using cfpn::ChannelRealization;
using cfpn::ClusterRule;
using cfpn::CombinerKind;
using cfpn::NetworkConfig;
using cfpn::NetworkRealization;
using cfpn::PathlossParams;
using cfpn::PnRealization;
using cfpn::Rng;

namespace {

NetworkConfig desk_config() {
  NetworkConfig cfg;
  cfg.M = 25;
  cfg.L = 2;
  cfg.K = 8;
  cfg.area_m = 200.0;
  return cfg;
}

// Minimal hand-built single-link network with R = beta * I_L.
NetworkRealization toy_net(std::size_t M, std::size_t L, std::size_t K,
                           double beta) {
  NetworkRealization net;
  net.M = M;
  net.L = L;
  net.K = K;
  net.beta = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(M),
                                       static_cast<Eigen::Index>(K), beta);
  for (std::size_t i = 0; i < M * K; ++i)
    net.R.push_back(beta * Eigen::MatrixXcd::Identity(
                               static_cast<Eigen::Index>(L),
                               static_cast<Eigen::Index>(L)));
  net.serving = Eigen::Matrix<std::uint8_t, Eigen::Dynamic,
                              Eigen::Dynamic>::Constant(
      static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(K), 1);
  return net;
}

PnRealization no_pn(std::size_t M, std::size_t K, std::size_t T) {
  PnRealization pn;
  pn.ue_phase = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K),
                                      static_cast<Eigen::Index>(T));
  pn.ap_phase = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(M),
                                      static_cast<Eigen::Index>(T));
  return pn;
}

}  // namespace

TEST_CASE("pathloss gain model") {
  const PathlossParams params;
  CHECK(cfpn::pathloss_db(1.0, params, 0.0) == doctest::Approx(-35.3));
  CHECK(cfpn::pathloss_db(100.0, params, 0.0) == doctest::Approx(-110.5));
  // Distances below the reference clamp to d0.
  CHECK(cfpn::pathloss_db(0.2, params, 0.0) == doctest::Approx(-35.3));
  CHECK(cfpn::pathloss_db(50.0, params, 3.0) ==
        doctest::Approx(-35.3 - 37.6 * std::log10(50.0) + 3.0));
  CHECK_THROWS_AS(cfpn::pathloss_db(0.0, params, 0.0), std::invalid_argument);
}

TEST_CASE("shadowing statistics") {
  Rng rng(12);
  const double sigma = 10.0;
  double sum = 0.0, sum2 = 0.0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = sigma * rng.gaussian();
    sum += s;
    sum2 += s * s;
  }
  const double mean = sum / static_cast<double>(n);
  const double std_dev =
      std::sqrt(sum2 / static_cast<double>(n) - mean * mean);
  CHECK(std::abs(std_dev - sigma) / sigma < 0.02);
}

TEST_CASE("cluster formation rules") {
  SUBCASE("top_n = M serves everywhere; top_n = 1 keeps the strongest") {
    Eigen::MatrixXd beta(3, 2);
    beta << 1.0, 0.1, 0.5, 0.9, 0.2, 0.3;
    ClusterRule all;
    all.kind = ClusterRule::Kind::TopN;
    all.top_n = 3;
    CHECK(cfpn::form_clusters(beta, all).sum() == 6);
    ClusterRule one;
    one.kind = ClusterRule::Kind::TopN;
    one.top_n = 1;
    const auto d = cfpn::form_clusters(beta, one);
    CHECK(d.sum() == 2);
    CHECK(d(0, 0) == 1);  // UE 0: AP 0 is strongest
    CHECK(d(1, 1) == 1);  // UE 1: AP 1 is strongest
  }
  SUBCASE("threshold rule membership on a hand-built matrix") {
    // UE 0: betas {1.0, 0.5, 0.2} -> within 20 dB of 1.0 means >= 0.01: all.
    // UE 1: betas {1e-4, 0.9, 3e-3} -> cutoff 9e-3: only AP 1.
    Eigen::MatrixXd beta(3, 2);
    beta << 1.0, 1e-4, 0.5, 0.9, 0.2, 3e-3;
    ClusterRule rule;
    rule.kind = ClusterRule::Kind::ThresholdDb;
    rule.threshold_db = 20.0;
    const auto d = cfpn::form_clusters(beta, rule);
    CHECK(d(0, 0) == 1);
    CHECK(d(1, 0) == 1);
    CHECK(d(2, 0) == 1);
    CHECK(d(0, 1) == 0);
    CHECK(d(1, 1) == 1);
    CHECK(d(2, 1) == 0);
  }
}

TEST_CASE("network drops are physical and deterministic") {
  NetworkConfig cfg = desk_config();
  Rng a(77, {cfpn::kStreamGeometry, 0});
  Rng b(77, {cfpn::kStreamGeometry, 0});
  const NetworkRealization na = cfpn::drop_network(cfg, a);
  const NetworkRealization nb = cfpn::drop_network(cfg, b);
  CHECK(na.beta == nb.beta);
  CHECK(na.ap_positions == nb.ap_positions);
  for (Eigen::Index m = 0; m < na.beta.rows(); ++m) {
    for (Eigen::Index k = 0; k < na.beta.cols(); ++k) {
      CHECK(na.beta(m, k) > 0.0);
      CHECK(na.beta(m, k) < 10.0);  // shadowing may exceed unity, not 10 dB+
    }
  }
  // Every UE has at least one serving AP; top_n = 5 gives exactly 5.
  for (std::size_t k = 0; k < cfg.K; ++k)
    CHECK(na.serving_aps(k).size() == 5);
  // tr(R)/L = beta on every link.
  for (std::size_t m = 0; m < cfg.M; ++m)
    for (std::size_t k = 0; k < cfg.K; ++k)
      CHECK(na.R_of(m, k).trace().real() / static_cast<double>(cfg.L) ==
            doctest::Approx(na.beta(static_cast<Eigen::Index>(m),
                                    static_cast<Eigen::Index>(k))));
}

TEST_CASE("single-link network must serve") {
  NetworkConfig cfg = desk_config();
  cfg.M = 1;
  cfg.K = 1;
  Rng rng(5, {cfpn::kStreamGeometry, 0});
  const NetworkRealization net = cfpn::drop_network(cfg, rng);
  CHECK(net.serves(0, 0));
}

TEST_CASE("local scattering correlation keeps trace and PSD-ness") {
  NetworkConfig cfg = desk_config();
  cfg.L = 4;
  cfg.correlation = cfpn::CorrelationModel::LocalScattering;
  Rng rng(9, {cfpn::kStreamGeometry, 0});
  const NetworkRealization net = cfpn::drop_network(cfg, rng);
  const auto& R = net.R_of(0, 0);
  CHECK(R.rows() == 4);
  CHECK((R - R.adjoint()).norm() < 1e-12 * R.norm());
  CHECK(R.trace().real() / 4.0 == doctest::Approx(net.beta(0, 0)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(R);
  CHECK(es.eigenvalues().minCoeff() > -1e-12 * es.eigenvalues().maxCoeff());
  // Off-diagonal correlation is genuinely nonzero.
  CHECK(std::abs(R(0, 1)) > 0.0);
}

TEST_CASE("channel sampling statistics") {
  SUBCASE("per-antenna variance matches beta") {
    const double beta = 0.37;
    NetworkRealization net = toy_net(1, 1, 1, beta);
    Rng rng(21);
    double acc = 0.0;
    const std::size_t n = 100000;
    for (std::size_t i = 0; i < n; ++i)
      acc += std::norm(cfpn::sample_channels(net, rng).h(0, 0));
    CHECK(std::abs(acc / static_cast<double>(n) - beta) / beta < 0.02);
  }
  SUBCASE("zero correlation gives the zero channel") {
    NetworkRealization net = toy_net(1, 2, 1, 0.0);
    Rng rng(22);
    const ChannelRealization ch = cfpn::sample_channels(net, rng);
    CHECK(ch.h.norm() == 0.0);
  }
  SUBCASE("empirical covariance approaches R") {
    const double beta = 1.7;
    NetworkRealization net = toy_net(1, 2, 1, beta);
    Rng rng(23);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(2, 2);
    const std::size_t n = 10000;
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::VectorXcd h = cfpn::sample_channels(net, rng).h.col(0);
      acc += h * h.adjoint();
    }
    acc /= static_cast<double>(n);
    CHECK((acc - net.R[0]).norm() < 0.05 * net.R[0].norm());
  }
}

TEST_CASE("phase rotation of the collective channel") {
  Rng rng(31);
  NetworkRealization net = toy_net(3, 2, 1, 1.0);
  const Eigen::VectorXcd h = cfpn::sample_channels(net, rng).h.col(0);
  SUBCASE("zero phases are the identity") {
    const Eigen::VectorXcd r = cfpn::apply_pn(h, Eigen::VectorXd::Zero(3), 2);
    CHECK((r - h).norm() == 0.0);
  }
  SUBCASE("a common phase factors out") {
    const Eigen::VectorXcd r =
        cfpn::apply_pn(h, Eigen::VectorXd::Constant(3, 0.4), 2);
    const Eigen::VectorXcd expected = std::polar(1.0, 0.4) * h;
    CHECK((r - expected).norm() < 1e-14 * h.norm());
  }
  SUBCASE("norms are preserved") {
    Eigen::VectorXd theta(3);
    theta << 0.3, -1.2, 2.9;
    const Eigen::VectorXcd r = cfpn::apply_pn(h, theta, 2);
    CHECK(std::abs(r.norm() - h.norm()) < 1e-12 * h.norm());
  }
  SUBCASE("dimension mismatches throw") {
    CHECK_THROWS_AS(cfpn::apply_pn(h, Eigen::VectorXd::Zero(2), 2),
                    std::invalid_argument);
  }
}

TEST_CASE("MR combiner is the masked channel") {
  NetworkRealization net = toy_net(2, 2, 1, 1.0);
  net.serving(1, 0) = 0;  // only AP 0 serves
  Rng rng(41);
  const ChannelRealization ch = cfpn::sample_channels(net, rng);
  const Eigen::MatrixXcd v =
      cfpn::combiner(CombinerKind::MR, ch.h, net, 0.1, 1e-3);
  CHECK((v.col(0).head(2) - ch.h.col(0).head(2)).norm() == 0.0);
  CHECK(v.col(0).tail(2).norm() == 0.0);
}

TEST_CASE("scalar MMSE matches the hand formula") {
  // M = L = K = 1, D = 1: v = p h / (p|h|^2 + p beta + sigma^2).
  const double p = 2.0, beta = 0.25, sigma2 = 0.5;
  const std::complex<double> h(0.3, 0.4);
  NetworkRealization net = toy_net(1, 1, 1, beta);
  Eigen::MatrixXcd hhat(1, 1);
  hhat(0, 0) = h;
  const Eigen::MatrixXcd v =
      cfpn::combiner(CombinerKind::MMSE, hhat, net, p, sigma2);
  const std::complex<double> expected =
      p * h / (p * std::norm(h) + p * beta + sigma2);
  CHECK(std::abs(v(0, 0) - expected) < 1e-12);
}

TEST_CASE("MMSE suppresses interference relative to MR") {
  NetworkRealization net = toy_net(2, 2, 2, 0.8);
  Rng rng(55);
  const ChannelRealization ch = cfpn::sample_channels(net, rng);
  const double p = 0.1, sigma2 = 1e-3;
  const Eigen::MatrixXcd v_mr =
      cfpn::combiner(CombinerKind::MR, ch.h, net, p, sigma2);
  const Eigen::MatrixXcd v_mmse =
      cfpn::combiner(CombinerKind::MMSE, ch.h, net, p, sigma2);
  // Post-combining interference-to-signal ratio of UE 0 against UE 1.
  const auto isr = [&](const Eigen::MatrixXcd& v) {
    const std::complex<double> s = v.col(0).dot(ch.h.col(0));
    const std::complex<double> i = v.col(0).dot(ch.h.col(1));
    return std::norm(i) / std::norm(s);
  };
  CHECK(isr(v_mmse) <= isr(v_mr) + 1e-12);
}

TEST_CASE("SINR without phase noise is symbol-invariant") {
  NetworkRealization net = toy_net(2, 2, 2, 0.6);
  Rng rng(61);
  std::vector<ChannelRealization> channels;
  std::vector<PnRealization> pn;
  for (int e = 0; e < 4; ++e) {
    channels.push_back(cfpn::sample_channels(net, rng));
    pn.push_back(no_pn(2, 2, 14));
  }
  const double first = cfpn::sinr_per_symbol(0, 0, CombinerKind::MR, net,
                                             channels, pn, 0.1, 1e-3);
  for (std::size_t t = 1; t < 14; ++t) {
    const double s = cfpn::sinr_per_symbol(0, t, CombinerKind::MR, net,
                                           channels, pn, 0.1, 1e-3);
    CHECK(s == doctest::Approx(first).epsilon(1e-12));
  }
}

TEST_CASE("single-sample scalar SINR reduces to p|h|^2/sigma^2") {
  NetworkRealization net = toy_net(1, 1, 1, 1.0);
  Rng rng(62);
  std::vector<ChannelRealization> channels{cfpn::sample_channels(net, rng)};
  std::vector<PnRealization> pn{no_pn(1, 1, 2)};
  const double p = 0.2, sigma2 = 0.01;
  const double h2 = std::norm(channels[0].h(0, 0));
  const double sinr = cfpn::sinr_per_symbol(0, 1, CombinerKind::MR, net,
                                            channels, pn, p, sigma2);
  CHECK(sinr == doctest::Approx(p * h2 / sigma2).epsilon(1e-10));
}

TEST_CASE("phase jitter shrinks the coherent numerator like e^{-var}") {
  // Accumulator-level check of the Gaussian characteristic function: with
  // c = e^{j theta} and theta ~ N(0, var), |E c|^2 -> e^{-var}.  Noise-
  // dominated denominator keeps the SINR proportional to the numerator.
  const double var = 0.23;
  Rng rng(63);
  cfpn::SinrAccumulator with_pn(1), without_pn(1);
  const std::size_t n = 20000;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> jitter =
        std::polar(1.0, std::sqrt(var) * rng.gaussian());
    const std::complex<double> clean(1.0, 0.0);
    with_pn.add(&jitter, 1, 0, 1.0);
    without_pn.add(&clean, 1, 0, 1.0);
  }
  // Large sigma^2 makes the denominator ~ sigma^2 * E||v||^2 for both.
  const double sigma2 = 1e6;
  const double ratio = with_pn.sinr(0, 1.0, sigma2) /
                       without_pn.sinr(0, 1.0, sigma2);
  CHECK(std::abs(ratio - std::exp(-var)) / std::exp(-var) < 0.05);
}

TEST_CASE("spectral efficiency mapping") {
  CHECK(cfpn::se_per_symbol(0.0) == doctest::Approx(0.0));
  CHECK(cfpn::se_per_symbol(1.0) == doctest::Approx(1.0));
  CHECK(cfpn::se_per_symbol(15.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(cfpn::se_per_symbol(-0.1), std::invalid_argument);
}

TEST_CASE("noise variance bookkeeping") {
  NetworkConfig cfg;
  // -174 dBm/Hz over 180 kHz: -121.447 dBm = 7.16e-16 W.
  CHECK(cfg.noise_variance_w() == doctest::Approx(7.1637e-16).epsilon(1e-3));
}
