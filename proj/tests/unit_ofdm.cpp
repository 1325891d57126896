// SPDX-License-Identifier: Apache-2.0
//
// Numerology arithmetic and the OFDM CPE/ICI decomposition, including the
// time-domain oracle for the frequency-domain received-signal assembly.
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>

#include <doctest.h>

#include "cfpn/numerology.hpp"
#include "cfpn/ofdm.hpp"
#include "cfpn/oscillator.hpp"
#include "cfpn/psd.hpp"
#include "cfpn/rng.hpp"

using cfpn::CVec;
using cfpn::Numerology;
using cfpn::Rng;

namespace {

const std::filesystem::path kDataDir = CFPN_DATA_DIR;

CVec random_cvec(std::size_t n, Rng& rng) {
  CVec v(n);
  for (auto& x : v) x = rng.circular_gaussian();
  return v;
}

}  // namespace

TEST_CASE("default numerology arithmetic") {
  Numerology num;
  CHECK_NOTHROW(num.validate());
  CHECK(num.n_cb == 12);
  CHECK(num.n_ct == 14);
  CHECK(num.tau_c == 168);
  CHECK(num.symbol_rate() == doctest::Approx(14000.0));
  // Front-loaded pilots occupy ceil(tau_p/n_cb) = 1 OFDM symbol, leaving 13
  // data symbols in the TTI.
  const std::size_t pilot_symbols =
      (num.tau_p + num.n_cb - 1) / num.n_cb;
  CHECK(num.n_ct - pilot_symbols == 13);
}

TEST_CASE("numerology derivation guards the floor against roundoff") {
  const Numerology num =
      Numerology::from_physical(15e3, 180e3, 1e-3, 1e-3 / 14.0, 12);
  CHECK(num.n_ct == 14);
  CHECK(num.n_cb == 12);
  CHECK(num.tau_c == 168);
  Numerology bad;
  bad.n_ct = 13;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("idft basis vectors and Parseval") {
  SUBCASE("DC basis maps to the all-ones vector") {
    const std::size_t n = 12;
    CVec freq(n, {0.0, 0.0});
    freq[0] = {std::sqrt(static_cast<double>(n)), 0.0};
    const CVec time = cfpn::idft(freq);
    for (const auto& x : time) {
      CHECK(x.real() == doctest::Approx(1.0));
      CHECK(x.imag() == doctest::Approx(0.0).scale(1.0));
    }
  }
  SUBCASE("unit impulse at bin k gives a 1/sqrt(N) exponential") {
    const std::size_t n = 8;
    CVec freq(n, {0.0, 0.0});
    freq[3] = {1.0, 0.0};
    const CVec time = cfpn::idft(freq);
    const double mag = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t m = 0; m < n; ++m) {
      const double arg = 2.0 * std::numbers::pi * 3.0 *
                         static_cast<double>(m) / static_cast<double>(n);
      CHECK(time[m].real() == doctest::Approx(mag * std::cos(arg)));
      CHECK(time[m].imag() == doctest::Approx(mag * std::sin(arg)));
    }
  }
  SUBCASE("energy is preserved") {
    Rng rng(3);
    const CVec freq = random_cvec(64, rng);
    const CVec time = cfpn::idft(freq);
    double ef = 0.0, et = 0.0;
    for (const auto& x : freq) ef += std::norm(x);
    for (const auto& x : time) et += std::norm(x);
    CHECK(std::abs(ef - et) < 1e-10 * ef);
  }
  CHECK_THROWS_AS(cfpn::idft({}), std::invalid_argument);
}

TEST_CASE("phase-noise frequency coefficients") {
  SUBCASE("zero phase gives the unit impulse") {
    const CVec p = cfpn::pn_freq_coeffs(std::vector<double>(12, 0.0));
    CHECK(p[0].real() == doctest::Approx(1.0));
    for (std::size_t i = 1; i < p.size(); ++i)
      CHECK(std::abs(p[i]) < 1e-12);
  }
  SUBCASE("constant phase rotates only the CPE") {
    const CVec p = cfpn::pn_freq_coeffs(std::vector<double>(12, 0.7));
    CHECK(p[0].real() == doctest::Approx(std::cos(0.7)));
    CHECK(p[0].imag() == doctest::Approx(std::sin(0.7)));
    for (std::size_t i = 1; i < p.size(); ++i)
      CHECK(std::abs(p[i]) < 1e-12);
  }
  SUBCASE("a full turn across the symbol lands on bin 1") {
    const std::size_t n = 16;
    std::vector<double> theta(n);
    for (std::size_t m = 0; m < n; ++m)
      theta[m] = 2.0 * std::numbers::pi * static_cast<double>(m) /
                 static_cast<double>(n);
    const CVec p = cfpn::pn_freq_coeffs(theta);
    CHECK(std::abs(p[1] - std::complex<double>(1.0, 0.0)) < 1e-12);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == 1) continue;
      CHECK(std::abs(p[i]) < 1e-12);
    }
  }
  SUBCASE("Parseval: coefficients sum to unit power") {
    Rng rng(4);
    std::vector<double> theta(24);
    for (auto& t : theta) t = 3.0 * rng.gaussian();
    const CVec p = cfpn::pn_freq_coeffs(theta);
    double total = 0.0;
    for (const auto& x : p) total += std::norm(x);
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("received symbol assembly matches the time-domain pipeline") {
  const std::size_t n = 12;
  Rng rng(5);
  SUBCASE("no phase noise reduces to per-subcarrier fading") {
    const CVec x = random_cvec(n, rng);
    const CVec h = random_cvec(n, rng);
    const CVec z = random_cvec(n, rng);
    CVec p(n, {0.0, 0.0});
    p[0] = {1.0, 0.0};
    const CVec y = cfpn::received_with_ici(x, h, p, z);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(y[i] - (h[i] * x[i] + z[i])) < 1e-12);
  }
  SUBCASE("zero input passes the noise through") {
    const CVec x(n, {0.0, 0.0});
    const CVec h = random_cvec(n, rng);
    const CVec z = random_cvec(n, rng);
    const CVec p = cfpn::pn_freq_coeffs(std::vector<double>(n, 0.3));
    const CVec y = cfpn::received_with_ici(x, h, p, z);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - z[i]) < 1e-12);
  }
  SUBCASE("frequency-domain assembly equals DFT(e^{j theta} . IDFT(X))") {
    const CVec x = random_cvec(n, rng);
    CVec h(n, {1.0, 0.0});
    const CVec z(n, {0.0, 0.0});
    std::vector<double> theta(n);
    for (auto& t : theta) t = rng.gaussian();
    const CVec p = cfpn::pn_freq_coeffs(theta);
    const CVec y_freq = cfpn::received_with_ici(x, h, p, z);

    CVec time = cfpn::idft(x);
    for (std::size_t m = 0; m < n; ++m)
      time[m] *= std::polar(1.0, theta[m]);
    const CVec y_time = cfpn::dft(time);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(y_freq[i] - y_time[i]) < 1e-9);
  }
  SUBCASE("length mismatch throws") {
    const CVec x = random_cvec(n, rng);
    const CVec h = random_cvec(n - 1, rng);
    const CVec p = random_cvec(n, rng);
    const CVec z = random_cvec(n, rng);
    CHECK_THROWS_AS(cfpn::received_with_ici(x, h, p, z),
                    std::invalid_argument);
  }
}

TEST_CASE("CPE/ICI power split") {
  SUBCASE("no phase noise puts all power in the CPE") {
    const auto split = cfpn::ici_power(std::vector<double>(12, 0.0));
    CHECK(split.cpe_power == doctest::Approx(1.0));
    CHECK(split.ici_power == doctest::Approx(0.0));
  }
  SUBCASE("split sums to one for arbitrary phases") {
    Rng rng(6);
    std::vector<double> theta(12);
    for (auto& t : theta) t = 2.0 * rng.gaussian();
    const auto split = cfpn::ici_power(theta);
    CHECK(split.cpe_power + split.ici_power == doctest::Approx(1.0));
    CHECK(split.cpe_power >= 0.0);
  }
  SUBCASE("full-rate B200 symbol leaks under one percent into ICI") {
    const cfpn::PsdTable b200 =
        cfpn::PsdTable::from_csv(kDataDir / "devices" / "b200.csv");
    cfpn::DeviceOscillator dev{b200, "b200"};
    const std::size_t n = 12;         // one coherence-bandwidth symbol
    const double fs = 12.0 * 15e3;    // N * delta_f
    std::size_t ok = 0;
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
      Rng rng(1000 + trial, {cfpn::kStreamPhaseNoise, trial});
      const cfpn::PhaseTrace t = cfpn::oscillator_trace(dev, n, fs, rng);
      if (cfpn::ici_power(t.samples).ici_power < 0.01) ++ok;
    }
    CHECK(ok == 50);
  }
}
