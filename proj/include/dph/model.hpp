// model.hpp — Dressed-pair parameters, bath modes, Ohmic discretization, and
// the adiabatic loop phase of the dressed states.
//
// Conventions used across the library: hbar = 1, so couplings and energies
// are angular frequencies; all phases are in radians. Phases built from
// additive formulas are kept unwrapped (real-valued, not reduced mod 2pi);
// only arg() of a complex number is principal-valued.

#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dph {

using Complex = std::complex<double>;

enum class Branch { plus, minus };

// +1 for the upper branch, -1 for the lower one
double branch_sign(Branch branch);

struct SystemParams {
  double omega{1.0};  // shared qubit/field angular frequency, > 0
  double g{0.0};      // qubit-field coupling, >= 0
  int n{0};           // photon index of the dressed pair, >= 0

  void validate() const;  // throws std::invalid_argument on violation
};

struct BathMode {
  double omega{1.0};   // mode angular frequency, > 0 (displaced modes divide by it)
  double lambda{0.0};  // dephasing coupling amplitude, real and finite
};

void validate_bath(const std::vector<BathMode>& bath);

// Spectral family with weight eps * omega^2 up to a hard cutoff. Only the
// product rho(omega) * lambda_omega^2 = eps * omega^2 is ever needed, so the
// two factors have no independent representation here.
struct OhmicSpectrum {
  double epsilon{0.0};  // dimensionless strength, >= 0
  double omega_c{1.0};  // cutoff angular frequency, > 0

  void validate() const;
};

// One member of the dressed doublet at photon index n,
//   |+-(n)> = (|g,n+1> +- |e,n>)/sqrt(2).
// A field phase shift psi multiplies the Fock components by exp(-i psi N).
struct DressedState {
  Branch branch{Branch::plus};
  int n{0};

  // amplitudes over the ordered basis {|g,n+1>, |e,n>}
  Eigen::Vector2cd amplitudes(double psi = 0.0) const;
};

// (E+, E-) with E±(n) = (2n+1) omega/2 ± g sqrt(n+1); E+ >= E-.
std::pair<double, double> dressed_energies(const SystemParams& params);

// Branch-conditioned couplings Lambda_j = lambda_j sqrt(n+1), order-preserving.
std::vector<double> effective_couplings(const std::vector<BathMode>& bath, int n);

// (lambda_j / omega_j)^2 — the n-independent per-mode weight. Callers scale by
// (n+1) *outside* their mode sums so that the scaling is exact in floating point.
double coupling_ratio_sq(const BathMode& mode);

// Midpoint discretization of the Ohmic spectrum: omega_j = (j - 1/2) omega_c / M
// and lambda_j^2 = eps omega_j^2 (omega_c / M), so Sum_j lambda_j^2 f(omega_j)
// is the midpoint rule for eps * Integral_0^omega_c omega^2 f(omega) domega.
// The grid never touches omega = 0, where Lambda_j/omega_j would blow up.
std::vector<BathMode> discretize_ohmic(const OhmicSpectrum& spectrum, int num_modes);

// Closed-form loop phase gamma±(n) = (2n+1) pi, identical for both branches.
// This is the value the quadrature below must reproduce.
double dressed_berry_phase(int n);

// Connection A(psi) = i <±(n,psi)| d/dpsi |±(n,psi)> of the phase-shifted
// dressed state, evaluated from the amplitude vector and its derivative.
double berry_connection(int n, Branch branch, double psi);

// Integral of the connection over one full loop psi in [0, 2pi] by composite
// Simpson quadrature; unwrapped. Also cross-checks that the minus-branch
// integral agrees bit-for-bit with the plus-branch one.
double adiabatic_berry_phase(int n, Branch branch);

}  // namespace dph
