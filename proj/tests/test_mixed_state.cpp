#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "dph/mixed_state.hpp"

using namespace dph;

namespace {

constexpr double kPi = std::numbers::pi;

InitialSuperposition balanced() {
  const double r = 1.0 / std::sqrt(2.0);
  return {Complex(r, 0.0), Complex(r, 0.0)};
}

InitialSuperposition weighted(double p, double phase_plus, double phase_minus) {
  return {std::polar(std::sqrt(p), phase_plus), std::polar(std::sqrt(1.0 - p), phase_minus)};
}

}  // namespace

TEST_CASE("initial superposition must be normalized") {
  CHECK_NOTHROW(InitialSuperposition{}.validate());
  CHECK_NOTHROW(balanced().validate());
  CHECK_THROWS_AS((InitialSuperposition{Complex(0.5, 0.0), Complex(0.5, 0.0)}.validate()),
                  std::invalid_argument);
}

TEST_CASE("reduced state of the dephasing superposition") {
  const SystemParams params{1.0, 1.0, 0};
  const std::vector<BathMode> bath{{1.0, 0.5}};

  SUBCASE("single branch stays a projector") {
    const QubitDensityMatrix rho = reduced_density(params, bath, InitialSuperposition{}, 1.3);
    CHECK(rho.mat(0, 0) == Complex(1.0, 0.0));
    CHECK(rho.mat(1, 1) == Complex(0.0, 0.0));
    CHECK(rho.mat(0, 1) == Complex(0.0, 0.0));
  }
  SUBCASE("balanced start is the coherent half-half state") {
    const QubitDensityMatrix rho = reduced_density(params, bath, balanced(), 0.0);
    CHECK(std::abs(rho.mat(0, 0) - Complex(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(rho.mat(1, 1) - Complex(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(rho.mat(0, 1) - Complex(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(rho.mat(1, 0) - Complex(0.5, 0.0)) < 1e-15);
  }
  SUBCASE("populations are frozen while the off-diagonal decays") {
    const InitialSuperposition init = weighted(0.64, 0.8, -0.5);
    const QubitDensityMatrix at0 = reduced_density(params, bath, init, 0.0);
    for (double t : {0.4, kPi, 4.4}) {
      const QubitDensityMatrix rho = reduced_density(params, bath, init, t);
      CHECK(rho.mat(0, 0) == at0.mat(0, 0));
      CHECK(rho.mat(1, 1) == at0.mat(1, 1));
      const DecoherenceFactor f = decoherence_factor(params, bath, t);
      CHECK(std::abs(rho.mat(0, 1) - init.c_plus * std::conj(init.c_minus) * f.value) == 0.0);
      CHECK(std::abs(rho.mat(1, 0) - std::conj(rho.mat(0, 1))) == 0.0);
    }
  }
  SUBCASE("resonant half period leaves e^-2 of the coherence") {
    const QubitDensityMatrix rho = reduced_density(params, bath, balanced(), kPi);
    CHECK(std::abs(rho.mat(0, 1)) == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-13));
  }
}

TEST_CASE("closed-form spectral decomposition of a 2x2 state") {
  SUBCASE("diagonal input") {
    QubitDensityMatrix rho;
    rho.mat << 0.7, 0.0, 0.0, 0.3;
    const SpectralDecomposition s = eigendecompose(rho);
    CHECK(s.eps_plus == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(s.eps_minus == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(std::abs(s.psi_plus(0) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(s.psi_plus(1)) < 1e-15);
    CHECK(std::abs(s.psi_minus(1) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(s.gauge_plus == GaugeTag::component0);
    CHECK(s.gauge_minus == GaugeTag::component1);
    CHECK_FALSE(s.near_degenerate);
  }
  SUBCASE("maximal real coherence") {
    QubitDensityMatrix rho;
    rho.mat << 0.5, 0.5, 0.5, 0.5;
    const SpectralDecomposition s = eigendecompose(rho);
    CHECK(s.eps_plus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.eps_minus == 0.0);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s.psi_plus(0) - Complex(r, 0.0)) < 1e-15);
    CHECK(std::abs(s.psi_plus(1) - Complex(r, 0.0)) < 1e-15);
    CHECK(std::abs(s.psi_minus(0) - Complex(r, 0.0)) < 1e-15);
    CHECK(std::abs(s.psi_minus(1) + Complex(r, 0.0)) < 1e-15);
  }
  SUBCASE("partial real coherence") {
    QubitDensityMatrix rho;
    rho.mat << 0.5, 0.25, 0.25, 0.5;
    const SpectralDecomposition s = eigendecompose(rho);
    CHECK(s.eps_plus == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(s.eps_minus == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("eigenpairs satisfy the eigenvalue equation and are orthonormal") {
    const std::vector<std::pair<double, Complex>> cases = {
        {0.6, Complex(0.2, 0.3)},
        {0.5, Complex(0.0, 0.25)},
        {0.9, Complex(-0.1, 0.05)},
        {0.2, Complex(0.15, -0.3)},
    };
    for (const auto& [a, b] : cases) {
      QubitDensityMatrix rho;
      rho.mat(0, 0) = a;
      rho.mat(1, 1) = 1.0 - a;
      rho.mat(0, 1) = b;
      rho.mat(1, 0) = std::conj(b);
      const SpectralDecomposition s = eigendecompose(rho);
      CHECK((rho.mat * s.psi_plus - s.eps_plus * s.psi_plus).norm() < 1e-14);
      CHECK((rho.mat * s.psi_minus - s.eps_minus * s.psi_minus).norm() < 1e-14);
      CHECK(std::abs(s.psi_plus.norm() - 1.0) < 1e-14);
      CHECK(std::abs(s.psi_minus.norm() - 1.0) < 1e-14);
      CHECK(std::abs(s.psi_plus.dot(s.psi_minus)) < 1e-14);
      // the gauge-fixed component is real and non-negative
      const Complex lead_p =
          s.gauge_plus == GaugeTag::component0 ? s.psi_plus(0) : s.psi_plus(1);
      const Complex lead_m =
          s.gauge_minus == GaugeTag::component0 ? s.psi_minus(0) : s.psi_minus(1);
      CHECK(std::abs(lead_p.imag()) < 1e-15);
      CHECK(lead_p.real() >= 0.0);
      CHECK(std::abs(lead_m.imag()) < 1e-15);
      CHECK(lead_m.real() >= 0.0);
    }
  }
  SUBCASE("proportional to the identity: flagged, fixed basis") {
    QubitDensityMatrix rho;
    rho.mat << 0.5, 0.0, 0.0, 0.5;
    const SpectralDecomposition s = eigendecompose(rho);
    CHECK(s.near_degenerate);
    CHECK(s.psi_plus(0) == Complex(1.0, 0.0));
    CHECK(s.psi_minus(1) == Complex(1.0, 0.0));
  }
  SUBCASE("tiny but nonzero gap is flagged, vectors stay clean") {
    QubitDensityMatrix rho;
    rho.mat << 0.5 + 4e-11, 0.0, 0.0, 0.5 - 4e-11;
    const SpectralDecomposition s = eigendecompose(rho);
    CHECK(s.near_degenerate);
    CHECK(std::abs(s.psi_plus(0) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(s.psi_minus(1) - Complex(1.0, 0.0)) < 1e-15);
  }
  SUBCASE("rejects non-Hermitian and non-positive input") {
    QubitDensityMatrix skew;
    skew.mat << 0.5, 0.3, 0.1, 0.5;
    CHECK_THROWS_AS(eigendecompose(skew), std::invalid_argument);

    QubitDensityMatrix indefinite;
    indefinite.mat << 1.0, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(eigendecompose(indefinite), std::invalid_argument);
  }
}

TEST_CASE("endpoint spectrum follows the coherence magnitude") {
  const SystemParams params{1.0, 0.8, 0};
  const std::vector<BathMode> bath{{1.0, 0.4}, {2.2, 0.15}};
  const InitialSuperposition init = weighted(0.64, 0.8, -0.5);
  const double p = std::norm(init.c_plus);
  const double q = std::norm(init.c_minus);
  for (double t : {0.0, 0.5, 1.7, 3.0}) {
    const SpectralDecomposition s = eigendecompose(reduced_density(params, bath, init, t));
    const double f = std::exp(-eta_sum(bath, params.n, t));
    const double radius = 0.5 * std::sqrt((p - q) * (p - q) + 4.0 * p * q * f * f);
    CHECK(s.eps_plus == doctest::Approx(0.5 + radius).epsilon(1e-12));
    CHECK(s.eps_minus == doctest::Approx(0.5 - radius).epsilon(1e-12));
  }
}

TEST_CASE("density path sampling") {
  const SystemParams params{1.0, 0.7, 0};
  const std::vector<BathMode> bath{{1.0, 0.2}};
  const InitialSuperposition init = balanced();

  const std::vector<QubitDensityMatrix> path = sample_density_path(params, bath, init, 2.0, 4);
  REQUIRE(path.size() == 5);
  const QubitDensityMatrix first = reduced_density(params, bath, init, 0.0);
  const QubitDensityMatrix last = reduced_density(params, bath, init, 2.0);
  CHECK((path.front().mat - first.mat).cwiseAbs().maxCoeff() == 0.0);
  CHECK((path.back().mat - last.mat).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(sample_density_path(params, bath, init, 2.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_density_path(params, bath, init, -1.0, 4), std::invalid_argument);
}

TEST_CASE("eigensystem tracking along a clean path") {
  const SystemParams params{1.0, 0.7, 0};
  const std::vector<BathMode> bath{{1.0, 0.2}};
  const TrackedPath tracked =
      eigensystem_path(sample_density_path(params, bath, balanced(), 3.0, 64));
  CHECK(tracked.samples.size() == 65);
  CHECK(tracked.bridged_samples == 0);
  for (size_t i = 0; i < tracked.usable.size(); ++i) CHECK(tracked.usable[i]);
  for (size_t i = 0; i + 1 < tracked.samples.size(); ++i) {
    CHECK(std::abs(tracked.samples[i].psi_plus.dot(tracked.samples[i + 1].psi_plus)) > 0.99);
  }
}

TEST_CASE("tracking refuses paths it cannot follow") {
  const InitialSuperposition init = balanced();

  SUBCASE("fully decohered endpoint") {
    const SystemParams params{1.0, 1.0, 0};
    const std::vector<BathMode> strong{{1.0, 3.0}};
    CHECK_THROWS_AS(mixed_geometric_phase(params, strong, init, kPi, 64), degeneracy_error);
  }
  SUBCASE("interior degeneracy lasting most of the loop") {
    const SystemParams params{1.0, 1.0, 0};
    const std::vector<BathMode> strong{{1.0, 3.0}};
    CHECK_THROWS_AS(mixed_geometric_phase(params, strong, init, 2.0 * kPi, 256),
                    degeneracy_error);
  }
}

TEST_CASE("short degenerate stretch is bridged, not fatal") {
  // eta peaks at 23.1 around t = pi, pushing the gap under the guard for a
  // few percent of the samples; the revival at t = 2 pi restores purity.
  const SystemParams params{1.0, 0.3, 0};
  const std::vector<BathMode> bath{{1.0, 1.7}};
  const InitialSuperposition init = balanced();

  const MixedPhaseDetail detail = mixed_phase_detail(params, bath, init, 2.0 * kPi, 512);
  CHECK(detail.bridged_samples > 0);
  CHECK(detail.bridged_samples <= 32);
  // balanced superposition with a pure revival: the surviving branch carries
  // cos(g sqrt(n+1) T) < 0, so the phase is pi on the nose
  CHECK(std::abs(std::remainder(detail.phase - kPi, 2.0 * kPi)) < 1e-8);

  const MixedPhaseDetail finer = mixed_phase_detail(params, bath, init, 2.0 * kPi, 1024);
  CHECK(std::abs(std::remainder(finer.phase - detail.phase, 2.0 * kPi)) < 1e-8);
}

TEST_CASE("phase chain edge cases on hand-built paths") {
  SUBCASE("no surviving weight") {
    SpectralDecomposition s;
    s.eps_plus = 0.0;
    s.eps_minus = 0.0;
    s.psi_plus << 1.0, 0.0;
    s.psi_minus << 0.0, 1.0;
    TrackedPath path;
    path.samples = {s, s};
    path.usable = {true, true};
    CHECK_THROWS_AS(kinematic_phase_of_path(path), std::domain_error);
  }
  SUBCASE("fewer than two usable samples") {
    SpectralDecomposition s;
    s.eps_plus = 1.0;
    s.psi_plus << 1.0, 0.0;
    s.psi_minus << 0.0, 1.0;
    TrackedPath path;
    path.samples = {s, s};
    path.usable = {true, false};
    CHECK_THROWS_AS(kinematic_phase_of_path(path), degeneracy_error);
  }
  SUBCASE("orthogonal consecutive samples with live weight") {
    SpectralDecomposition s0;
    s0.eps_plus = 1.0;
    s0.psi_plus << 1.0, 0.0;
    s0.psi_minus << 0.0, 1.0;
    SpectralDecomposition s1;
    s1.eps_plus = 1.0;
    s1.psi_plus << 0.0, 1.0;  // jumped by 90 degrees in one step
    s1.psi_minus << 1.0, 0.0;
    TrackedPath path;
    path.samples = {s0, s1};
    path.usable = {true, true};
    CHECK_THROWS_AS(kinematic_phase_of_path(path), convergence_error);
  }
}

TEST_CASE("kinematic phase of a single-branch start is exactly zero") {
  const SystemParams params{1.0, 0.9, 1};
  const std::vector<BathMode> bath{{1.3, 0.4}};
  CHECK(mixed_geometric_phase(params, bath, InitialSuperposition{}, 2.5, 64) == 0.0);
}

TEST_CASE("without an environment the phase closes on the pure-state value") {
  // For a silent bath the reduced state stays pure; the kinematic phase must
  // approach arg(p + q e^{i dE T}) - q dE T as the sampling refines.
  const SystemParams params{1.0, 0.45, 0};
  const std::vector<BathMode> silent{{1.0, 0.0}};
  const InitialSuperposition init = weighted(0.7, 1.1, -0.4);
  const double p = std::norm(init.c_plus);
  const double q = std::norm(init.c_minus);
  const double de = 2.0 * params.g;  // E+ - E- at n = 0
  const double T = 2.0;

  const Complex endpoint = p + q * std::polar(1.0, de * T);
  const double closed = std::arg(endpoint) - q * de * T;
  const double sampled = mixed_geometric_phase(params, silent, init, T, 4096);
  CHECK(std::abs(std::remainder(sampled - closed, 2.0 * kPi)) < 2e-6);

  const double checked = mixed_geometric_phase_checked(params, silent, init, T, 1e-7);
  CHECK(std::abs(std::remainder(checked - closed, 2.0 * kPi)) < 1e-5);
}

TEST_CASE("checked refinement rejects bad knobs") {
  const SystemParams params{1.0, 0.45, 0};
  const std::vector<BathMode> silent{{1.0, 0.0}};
  CHECK_THROWS_AS(mixed_geometric_phase_checked(params, silent, balanced(), 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(mixed_geometric_phase_checked(params, silent, balanced(), 1.0, 1e-7, 128),
                  std::invalid_argument);
}

TEST_CASE("asymptotic pointer phase") {
  const std::vector<BathMode> strong{{1.0, 2.2}};
  SUBCASE("balanced superposition lands on pi") {
    CHECK(long_time_phase({1.0, 1.0, 0}, strong, balanced(), kPi) == kPi);
  }
  SUBCASE("lopsided complex superposition lands on pi too") {
    CHECK(long_time_phase({1.0, 1.0, 1}, strong, weighted(0.7, 0.9, 0.0), kPi) == kPi);
  }
  SUBCASE("refuses while coherence is still alive") {
    const std::vector<BathMode> weak{{1.0, 0.1}};
    CHECK_THROWS_AS(long_time_phase({1.0, 1.0, 0}, weak, balanced(), kPi), std::domain_error);
  }
}

TEST_CASE("detail record is consistent with its parts") {
  const SystemParams params{1.0, 0.7, 0};
  const std::vector<BathMode> bath{{1.0, 0.2}};
  const InitialSuperposition init = balanced();
  const double T = 3.0;

  const MixedPhaseDetail detail = mixed_phase_detail(params, bath, init, T, 128);
  CHECK(detail.phase == mixed_geometric_phase(params, bath, init, T, 128));
  CHECK(detail.abs_coherence == std::exp(-eta_sum(bath, params.n, T)));
  CHECK(detail.eps_plus >= detail.eps_minus);
  CHECK(detail.bridged_samples == 0);
  CHECK(detail.steps == 128);
}
