#include "dph/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dph {

namespace {
constexpr double kPi = std::numbers::pi;
}

double branch_sign(Branch branch) {
  return branch == Branch::plus ? 1.0 : -1.0;
}

void SystemParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("SystemParams: omega must be > 0, got " + std::to_string(omega));
  if (!(g >= 0.0) || !std::isfinite(g))
    throw std::invalid_argument("SystemParams: g must be >= 0, got " + std::to_string(g));
  if (n < 0)
    throw std::invalid_argument("SystemParams: photon index n must be >= 0, got " + std::to_string(n));
}

void validate_bath(const std::vector<BathMode>& bath) {
  for (std::size_t j = 0; j < bath.size(); ++j) {
    if (!(bath[j].omega > 0.0) || !std::isfinite(bath[j].omega))
      throw std::invalid_argument("BathMode[" + std::to_string(j) + "]: omega must be > 0");
    if (!std::isfinite(bath[j].lambda))
      throw std::invalid_argument("BathMode[" + std::to_string(j) + "]: lambda must be finite");
  }
}

void OhmicSpectrum::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("OhmicSpectrum: epsilon must be >= 0");
  if (!(omega_c > 0.0) || !std::isfinite(omega_c))
    throw std::invalid_argument("OhmicSpectrum: omega_c must be > 0");
}

Eigen::Vector2cd DressedState::amplitudes(double psi) const {
  const double s = branch_sign(branch);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd a;
  // phase shift exp(-i psi N) acts with N = n+1 on |g,n+1> and N = n on |e,n>
  a(0) = std::polar(inv_sqrt2, -psi * (n + 1));
  a(1) = s * std::polar(inv_sqrt2, -psi * n);
  return a;
}

std::pair<double, double> dressed_energies(const SystemParams& params) {
  params.validate();
  const double center = 0.5 * (2 * params.n + 1) * params.omega;
  const double split = params.g * std::sqrt(params.n + 1.0);
  return {center + split, center - split};
}

std::vector<double> effective_couplings(const std::vector<BathMode>& bath, int n) {
  if (n < 0) throw std::invalid_argument("effective_couplings: n must be >= 0");
  validate_bath(bath);
  const double root = std::sqrt(n + 1.0);
  std::vector<double> out;
  out.reserve(bath.size());
  for (const auto& mode : bath) out.push_back(mode.lambda * root);
  return out;
}

double coupling_ratio_sq(const BathMode& mode) {
  const double r = mode.lambda / mode.omega;
  return r * r;
}

std::vector<BathMode> discretize_ohmic(const OhmicSpectrum& spectrum, int num_modes) {
  spectrum.validate();
  if (num_modes < 1)
    throw std::invalid_argument("discretize_ohmic: num_modes must be >= 1, got " +
                                std::to_string(num_modes));
  const double delta = spectrum.omega_c / num_modes;
  const double amp = std::sqrt(spectrum.epsilon * delta);  // lambda_j = omega_j * amp
  std::vector<BathMode> bath(num_modes);
  for (int j = 0; j < num_modes; ++j) {
    bath[j].omega = (j + 0.5) * delta;
    bath[j].lambda = bath[j].omega * amp;
  }
  return bath;
}

double dressed_berry_phase(int n) {
  if (n < 0) throw std::invalid_argument("dressed_berry_phase: n must be >= 0");
  return (2 * n + 1) * kPi;
}

double berry_connection(int n, Branch branch, double psi) {
  if (n < 0) throw std::invalid_argument("berry_connection: n must be >= 0");
  const double s = branch_sign(branch);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // amplitudes and their exact psi-derivatives
  const Complex a0 = std::polar(inv_sqrt2, -psi * (n + 1));
  const Complex a1 = s * std::polar(inv_sqrt2, -psi * n);
  const Complex d0 = Complex(0.0, -(n + 1.0)) * a0;
  const Complex d1 = Complex(0.0, -double(n)) * a1;
  const Complex ip = std::conj(a0) * d0 + std::conj(a1) * d1;
  return std::real(Complex(0.0, 1.0) * ip);
}

namespace {

// composite Simpson over psi in [0, 2pi]
double connection_loop_integral(int n, Branch branch) {
  constexpr int kPanels = 128;  // even; integrand is smooth (in fact constant)
  const double h = 2.0 * kPi / kPanels;
  double acc = berry_connection(n, branch, 0.0) + berry_connection(n, branch, 2.0 * kPi);
  for (int k = 1; k < kPanels; ++k) {
    const double w = (k % 2 == 1) ? 4.0 : 2.0;
    acc += w * berry_connection(n, branch, k * h);
  }
  return acc * h / 3.0;
}

}  // namespace

double adiabatic_berry_phase(int n, Branch branch) {
  if (n < 0) throw std::invalid_argument("adiabatic_berry_phase: n must be >= 0");
  const double value = connection_loop_integral(n, branch);
  // Both branches integrate the same connection term by term; a mismatch here
  // would mean the quadrature itself broke.
  const Branch other = branch == Branch::plus ? Branch::minus : Branch::plus;
  if (value != connection_loop_integral(n, other))
    throw std::runtime_error("adiabatic_berry_phase: branch integrals diverged");
  return value;
}

}  // namespace dph
