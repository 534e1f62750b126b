#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "dph/model.hpp"

using namespace dph;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("branch_sign") {
  CHECK(branch_sign(Branch::plus) == 1.0);
  CHECK(branch_sign(Branch::minus) == -1.0);
}

TEST_CASE("parameter validation rejects bad input") {
  CHECK_THROWS_AS((SystemParams{0.0, 0.1, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SystemParams{-1.0, 0.1, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SystemParams{1.0, -0.1, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SystemParams{1.0, 0.1, -1}.validate()), std::invalid_argument);
  CHECK_NOTHROW((SystemParams{2.0, 0.0, 3}.validate()));

  CHECK_THROWS_AS(validate_bath({{0.0, 0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_bath({{1.0, std::nan("")}}), std::invalid_argument);
  CHECK_NOTHROW(validate_bath({{1.0, 0.0}, {2.5, 0.3}}));
  CHECK_NOTHROW(validate_bath({}));  // no environment is a valid environment

  CHECK_THROWS_AS((OhmicSpectrum{-0.1, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OhmicSpectrum{0.1, 0.0}.validate()), std::invalid_argument);
  CHECK_NOTHROW((OhmicSpectrum{0.0, 1.0}.validate()));
}

TEST_CASE("dressed energies split symmetrically about the ladder center") {
  SUBCASE("no coupling, ground doublet") {
    const auto [ep, em] = dressed_energies({1.0, 0.0, 0});
    CHECK(ep == 0.5);
    CHECK(em == 0.5);
  }
  SUBCASE("unit coupling, ground doublet") {
    const auto [ep, em] = dressed_energies({1.0, 1.0, 0});
    CHECK(ep == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(em == doctest::Approx(-0.5).epsilon(1e-15));
  }
  SUBCASE("n = 3 doublet") {
    // center (2*3+1)*2/2 = 7, split 1*sqrt(4) = 2
    const auto [ep, em] = dressed_energies({2.0, 1.0, 3});
    CHECK(ep == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(em == doctest::Approx(5.0).epsilon(1e-15));
  }
  SUBCASE("upper branch never below the lower one") {
    for (int n = 0; n < 6; ++n) {
      const auto [ep, em] = dressed_energies({0.7, 1.3, n});
      CHECK(ep >= em);
    }
  }
}

TEST_CASE("effective couplings scale every mode by sqrt(n+1)") {
  const std::vector<BathMode> bath{{1.0, 0.1}};
  CHECK(effective_couplings(bath, 3) == std::vector<double>{0.1 * 2.0});

  const std::vector<BathMode> two{{1.0, 0.3}, {2.0, 0.4}};
  const std::vector<double> at_ground = effective_couplings(two, 0);
  CHECK(at_ground[0] == 0.3);
  CHECK(at_ground[1] == 0.4);

  CHECK_THROWS_AS(effective_couplings(bath, -1), std::invalid_argument);
}

TEST_CASE("coupling_ratio_sq") {
  CHECK(coupling_ratio_sq({2.0, 1.0}) == 0.25);
  CHECK(coupling_ratio_sq({0.5, 0.0}) == 0.0);
}

TEST_CASE("ohmic discretization uses midpoints and conserves the weight sum") {
  SUBCASE("single mode sits at the interval midpoint") {
    const std::vector<BathMode> bath = discretize_ohmic({0.1, 1.0}, 1);
    REQUIRE(bath.size() == 1);
    CHECK(bath[0].omega == 0.5);
    CHECK(bath[0].lambda * bath[0].lambda == doctest::Approx(0.025).epsilon(1e-14));
  }
  SUBCASE("sum of (lambda/omega)^2 equals eps * omega_c for any resolution") {
    const std::vector<BathMode> bath = discretize_ohmic({0.1, 1.0}, 10000);
    double s = 0.0;
    for (const BathMode& m : bath) s += coupling_ratio_sq(m);
    CHECK(s == doctest::Approx(0.1).epsilon(1e-6));
  }
  SUBCASE("zero-strength spectrum gives silent modes") {
    const std::vector<BathMode> bath = discretize_ohmic({0.0, 2.0}, 5);
    REQUIRE(bath.size() == 5);
    for (const BathMode& m : bath) {
      CHECK(m.lambda == 0.0);
      CHECK(m.omega > 0.0);
      CHECK(m.omega < 2.0);
    }
  }
  SUBCASE("grid never touches omega = 0") {
    for (int m : {1, 3, 17}) {
      for (const BathMode& mode : discretize_ohmic({0.2, 3.0}, m)) CHECK(mode.omega > 0.0);
    }
  }
  CHECK_THROWS_AS(discretize_ohmic({0.1, 1.0}, 0), std::invalid_argument);
}

TEST_CASE("dressed state amplitudes") {
  SUBCASE("equal weight, sign from the branch") {
    const Eigen::Vector2cd plus = DressedState{Branch::plus, 0}.amplitudes();
    const Eigen::Vector2cd minus = DressedState{Branch::minus, 0}.amplitudes();
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(plus(0) - Complex(r, 0.0)) < 1e-15);
    CHECK(std::abs(plus(1) - Complex(r, 0.0)) < 1e-15);
    CHECK(std::abs(minus(0) - Complex(r, 0.0)) < 1e-15);
    CHECK(std::abs(minus(1) + Complex(r, 0.0)) < 1e-15);
  }
  SUBCASE("normalized and orthogonal at any phase") {
    for (double psi : {0.0, 0.3, 2.0, 5.9}) {
      const Eigen::Vector2cd a = DressedState{Branch::plus, 2}.amplitudes(psi);
      const Eigen::Vector2cd b = DressedState{Branch::minus, 2}.amplitudes(psi);
      CHECK(std::abs(a.norm() - 1.0) < 1e-15);
      CHECK(std::abs(a.dot(b)) < 1e-15);
    }
  }
  SUBCASE("phase shift multiplies components by exp(-i psi N)") {
    const double psi = 0.7;
    const Eigen::Vector2cd a = DressedState{Branch::plus, 1}.amplitudes(psi);
    const Eigen::Vector2cd a0 = DressedState{Branch::plus, 1}.amplitudes(0.0);
    CHECK(std::abs(a(0) - a0(0) * std::polar(1.0, -2.0 * psi)) < 1e-15);  // N = n+1 = 2
    CHECK(std::abs(a(1) - a0(1) * std::polar(1.0, -1.0 * psi)) < 1e-15);  // N = n = 1
  }
}

TEST_CASE("closed-form loop phase of the dressed doublet") {
  CHECK(dressed_berry_phase(0) == kPi);
  CHECK(dressed_berry_phase(3) == 7.0 * kPi);
  CHECK_THROWS_AS(dressed_berry_phase(-1), std::invalid_argument);
}

TEST_CASE("berry connection is constant in psi") {
  for (int n : {0, 2}) {
    const double at0 = berry_connection(n, Branch::plus, 0.0);
    for (double psi : {0.4, 1.9, 4.4}) {
      CHECK(berry_connection(n, Branch::plus, psi) == doctest::Approx(at0).epsilon(1e-14));
      CHECK(berry_connection(n, Branch::minus, psi) == doctest::Approx(at0).epsilon(1e-14));
    }
    CHECK(at0 == doctest::Approx(n + 0.5).epsilon(1e-14));  // loop integral / 2pi
  }
}

TEST_CASE("quadrature holonomy reproduces (2n+1) pi for both branches") {
  CHECK(std::abs(adiabatic_berry_phase(0, Branch::plus) - kPi) < 1e-9);
  CHECK(std::abs(adiabatic_berry_phase(3, Branch::plus) - 7.0 * kPi) < 1e-9);
  CHECK(std::abs(adiabatic_berry_phase(1, Branch::minus) - 3.0 * kPi) < 1e-9);
  CHECK_THROWS_AS(adiabatic_berry_phase(-2, Branch::plus), std::invalid_argument);
}
