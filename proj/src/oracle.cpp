#include "dph/oracle.hpp"

#include <cmath>
#include <complex>

namespace dph {

namespace {

constexpr long long kMaxDimension = 65536;  // 2 * bath_dim ceiling
constexpr double kNormDriftTol = 1e-9;
constexpr double kCeilingOccupancyTol = 1e-8;

std::vector<long long> mode_strides(const std::vector<int>& dims) {
  std::vector<long long> stride(dims.size(), 1);
  for (size_t j = dims.size(); j-- > 1;) {
    stride[j - 1] = stride[j] * dims[j];
  }
  return stride;
}

int branch_block(Branch branch) { return branch == Branch::plus ? 0 : 1; }

}  // namespace

void TruncationSpec::validate(size_t num_modes) const {
  if (dims.size() != num_modes) {
    throw std::invalid_argument("TruncationSpec: one cutoff per bath mode required");
  }
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("TruncationSpec: dims must be >= 1");
  }
}

long long TruncationSpec::bath_dim() const {
  long long prod = 1;
  for (int d : dims) {
    prod *= d;
    if (prod > kMaxDimension) return prod;  // caller rejects; avoid overflow
  }
  return prod;
}

Eigen::MatrixXcd build_hamiltonian(const SystemParams& params, const std::vector<BathMode>& bath,
                                   const TruncationSpec& trunc) {
  params.validate();
  validate_bath(bath);
  trunc.validate(bath.size());

  const long long bath_dim = trunc.bath_dim();
  const long long dim = 2 * bath_dim;
  if (dim > kMaxDimension) {
    throw std::invalid_argument("build_hamiltonian: state space dimension exceeds 65536");
  }

  const std::vector<double> coupling = effective_couplings(bath, params.n);
  const auto [e_plus, e_minus] = dressed_energies(params);
  const double branch_energy[2] = {e_plus, e_minus};
  const double sign[2] = {1.0, -1.0};
  const std::vector<long long> stride = mode_strides(trunc.dims);

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int s = 0; s < 2; ++s) {
    const long long base = s * bath_dim;
    for (long long m = 0; m < bath_dim; ++m) {
      double diag = branch_energy[s];
      for (size_t j = 0; j < bath.size(); ++j) {
        const long long level = (m / stride[j]) % trunc.dims[j];
        diag += bath[j].omega * static_cast<double>(level);
        if (level + 1 < trunc.dims[j]) {
          // <level| b |level+1> = sqrt(level+1); real symmetric fill keeps
          // Hermiticity exact.
          const double elem = sign[s] * coupling[j] * std::sqrt(static_cast<double>(level + 1));
          h(base + m, base + m + stride[j]) = elem;
          h(base + m + stride[j], base + m) = elem;
        }
      }
      h(base + m, base + m) = diag;
    }
  }
  return h;
}

UniverseState branch_vacuum_start(Branch branch, const TruncationSpec& trunc) {
  const long long bath_dim = trunc.bath_dim();
  UniverseState state;
  state.dims = trunc.dims;
  state.vec = Eigen::VectorXcd::Zero(2 * bath_dim);
  state.vec(branch_block(branch) * bath_dim) = 1.0;
  return state;
}

UniverseState initial_superposition_state(const InitialSuperposition& init,
                                          const TruncationSpec& trunc) {
  init.validate();
  const long long bath_dim = trunc.bath_dim();
  UniverseState state;
  state.dims = trunc.dims;
  state.vec = Eigen::VectorXcd::Zero(2 * bath_dim);
  state.vec(0) = init.c_plus;
  state.vec(bath_dim) = init.c_minus;
  return state;
}

Trajectory propagate(const Eigen::MatrixXcd& hamiltonian, const UniverseState& start, double T,
                     int samples) {
  if (hamiltonian.rows() != hamiltonian.cols()) {
    throw std::invalid_argument("propagate: hamiltonian must be square");
  }
  if (start.vec.size() != hamiltonian.rows()) {
    throw std::invalid_argument("propagate: state and hamiltonian dimensions differ");
  }
  if (samples < 1) throw std::invalid_argument("propagate: samples must be >= 1");
  if (!std::isfinite(T) || T < 0.0) {
    throw std::invalid_argument("propagate: T must be finite and >= 0");
  }
  if (std::abs(start.vec.norm() - 1.0) > kNormDriftTol) {
    throw std::invalid_argument("propagate: start state must be normalized");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("propagate: eigendecomposition failed");
  }
  const Eigen::MatrixXcd& basis = solver.eigenvectors();
  const Eigen::VectorXd& levels = solver.eigenvalues();
  const Eigen::VectorXcd coeffs = basis.adjoint() * start.vec;

  const long long bath_dim = start.vec.size() / 2;
  const std::vector<long long> stride = mode_strides(start.dims);

  Trajectory traj;
  traj.dims = start.dims;
  traj.times.reserve(static_cast<size_t>(samples) + 1);
  traj.states.reserve(static_cast<size_t>(samples) + 1);
  std::vector<double> ceiling(start.dims.size());

  for (int i = 0; i <= samples; ++i) {
    const double t = T * static_cast<double>(i) / samples;
    Eigen::VectorXcd rotated(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
      rotated(k) = coeffs(k) * std::polar(1.0, -levels(k) * t);
    }
    Eigen::VectorXcd psi = basis * rotated;

    if (std::abs(psi.norm() - 1.0) > kNormDriftTol) {
      throw truncation_error("propagate: norm drifted; eigenbasis unreliable");
    }
    std::fill(ceiling.begin(), ceiling.end(), 0.0);
    for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
      const double weight = std::norm(psi(idx));
      if (weight == 0.0) continue;
      const long long m = idx % bath_dim;
      for (size_t j = 0; j < start.dims.size(); ++j) {
        const long long level = (m / stride[j]) % start.dims[j];
        if (level >= 1 && level >= start.dims[j] - 2) ceiling[j] += weight;
      }
    }
    for (double occupancy : ceiling) {
      if (occupancy > kCeilingOccupancyTol) {
        throw truncation_error("propagate: top Fock levels populated; increase truncation");
      }
    }

    traj.times.push_back(t);
    traj.states.push_back(std::move(psi));
  }
  return traj;
}

double pure_phase_numeric(const SystemParams& params, const std::vector<BathMode>& bath,
                          Branch branch, const TruncationSpec& trunc, double T, int samples) {
  const Eigen::MatrixXcd h = build_hamiltonian(params, bath, trunc);
  const UniverseState start = branch_vacuum_start(branch, trunc);
  const Trajectory traj = propagate(h, start, T, samples);

  // Total phase: unwrap arg<Psi(0)|Psi(t)> step by step. The overlap stays
  // away from zero for a vacuum start with the couplings this library deals
  // in; if it does not, the unwrap is meaningless and we say so.
  double total = 0.0;
  Complex prev(1.0, 0.0);
  for (size_t i = 1; i < traj.states.size(); ++i) {
    const Complex overlap = traj.states.front().dot(traj.states[i]);
    if (std::abs(overlap) < 1e-6) {
      throw convergence_error("pure_phase_numeric: survival amplitude vanished; cannot unwrap");
    }
    total += std::arg(overlap * std::conj(prev));
    prev = overlap;
  }

  // Dynamical part by trapezoid; <H> is conserved here, the quadrature is
  // just insurance against a drifting basis.
  const double dt = T / samples;
  double energy_integral = 0.0;
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const double e = traj.states[i].dot(h * traj.states[i]).real();
    const bool endpoint = (i == 0 || i + 1 == traj.states.size());
    energy_integral += (endpoint ? 0.5 : 1.0) * e;
  }
  energy_integral *= dt;

  return total + energy_integral;
}

namespace {

QubitDensityMatrix trace_out_bath(const Eigen::VectorXcd& psi, long long bath_dim) {
  const auto plus = psi.segment(0, bath_dim);
  const auto minus = psi.segment(bath_dim, bath_dim);
  QubitDensityMatrix rho;
  rho.mat(0, 0) = plus.squaredNorm();
  rho.mat(1, 1) = minus.squaredNorm();
  rho.mat(0, 1) = minus.dot(plus);  // sum_m psi_+(m) conj(psi_-(m))
  rho.mat(1, 0) = std::conj(rho.mat(0, 1));
  return rho;
}

}  // namespace

std::vector<QubitDensityMatrix> reduced_density_trajectory(const SystemParams& params,
                                                           const std::vector<BathMode>& bath,
                                                           const InitialSuperposition& init,
                                                           const TruncationSpec& trunc, double T,
                                                           int samples) {
  const Eigen::MatrixXcd h = build_hamiltonian(params, bath, trunc);
  const UniverseState start = initial_superposition_state(init, trunc);
  const Trajectory traj = propagate(h, start, T, samples);

  std::vector<QubitDensityMatrix> out;
  out.reserve(traj.states.size());
  const long long bath_dim = trunc.bath_dim();
  for (const Eigen::VectorXcd& psi : traj.states) {
    out.push_back(trace_out_bath(psi, bath_dim));
  }
  return out;
}

QubitDensityMatrix reduced_density_numeric(const SystemParams& params,
                                           const std::vector<BathMode>& bath,
                                           const InitialSuperposition& init,
                                           const TruncationSpec& trunc, double t) {
  return reduced_density_trajectory(params, bath, init, trunc, t, 1).back();
}

UniverseState coherent_reference(const SystemParams& params, const std::vector<BathMode>& bath,
                                 Branch branch, const TruncationSpec& trunc, double t) {
  params.validate();
  validate_bath(bath);
  trunc.validate(bath.size());
  if (!std::isfinite(t) || t < 0.0) {
    throw std::invalid_argument("coherent_reference: t must be finite and >= 0");
  }

  const std::vector<double> coupling = effective_couplings(bath, params.n);
  const auto [e_plus, e_minus] = dressed_energies(params);
  const double branch_energy = branch == Branch::plus ? e_plus : e_minus;
  const double sgn = branch_sign(branch);

  // Each mode ends up in a displaced vacuum with a mode-local phase; compute
  // Fock coefficients iteratively, c_{m+1} = c_m alpha / sqrt(m+1).
  double global_phase = -branch_energy * t;
  std::vector<std::vector<Complex>> mode_coeffs(bath.size());
  for (size_t j = 0; j < bath.size(); ++j) {
    const double x = coupling[j] / bath[j].omega;
    const double wt = bath[j].omega * t;
    global_phase += x * x * (wt - std::sin(wt));
    const Complex alpha = sgn * x * (std::polar(1.0, -wt) - 1.0);
    std::vector<Complex>& coeffs = mode_coeffs[j];
    coeffs.resize(trunc.dims[j]);
    coeffs[0] = std::exp(-0.5 * std::norm(alpha));
    for (int m = 1; m < trunc.dims[j]; ++m) {
      coeffs[m] = coeffs[m - 1] * alpha / std::sqrt(static_cast<double>(m));
    }
  }

  const long long bath_dim = trunc.bath_dim();
  if (2 * bath_dim > kMaxDimension) {
    throw std::invalid_argument("coherent_reference: state space dimension exceeds 65536");
  }
  const std::vector<long long> stride = mode_strides(trunc.dims);
  UniverseState state;
  state.dims = trunc.dims;
  state.vec = Eigen::VectorXcd::Zero(2 * bath_dim);
  const Complex phase_factor = std::polar(1.0, global_phase);
  const long long base = branch_block(branch) * bath_dim;
  for (long long m = 0; m < bath_dim; ++m) {
    Complex amp = phase_factor;
    for (size_t j = 0; j < bath.size(); ++j) {
      amp *= mode_coeffs[j][(m / stride[j]) % trunc.dims[j]];
    }
    state.vec(base + m) = amp;
  }
  return state;
}

double fock_tail(double mu, int d) {
  if (!std::isfinite(mu) || mu < 0.0) {
    throw std::invalid_argument("fock_tail: mu must be finite and >= 0");
  }
  if (d < 0) throw std::invalid_argument("fock_tail: d must be >= 0");
  if (d == 0) return 1.0;
  if (mu == 0.0) return 0.0;

  const double log_first = -mu + d * std::log(mu) - std::lgamma(static_cast<double>(d) + 1.0);
  // When the first term underflows but the distribution peak (m ~ mu) still
  // lies inside the tail, summing term by term would return 0 for a tail that
  // is actually of order 1.
  if (log_first < -700.0 && static_cast<double>(d) <= mu) return 1.0;

  double term = std::exp(log_first);
  double sum = 0.0;
  for (int m = d;; ++m) {
    sum += term;
    term *= mu / static_cast<double>(m + 1);
    // Terms grow until m ~ mu; test for convergence only on the decaying side,
    // or the absolute floor would cut a still-growing sum off near zero.
    if (static_cast<double>(m + 1) > mu && term <= sum * 1e-18 + 1e-300) break;
  }
  return std::min(sum, 1.0);
}

TruncationSpec choose_truncation(const SystemParams& params, const std::vector<BathMode>& bath,
                                 double tail_bound) {
  params.validate();
  validate_bath(bath);
  if (!(tail_bound > 0.0) || tail_bound > 0.1) {
    throw std::invalid_argument("choose_truncation: tail_bound must be in (0, 0.1]");
  }

  const std::vector<double> coupling = effective_couplings(bath, params.n);
  TruncationSpec trunc;
  trunc.dims.reserve(bath.size());
  for (size_t j = 0; j < bath.size(); ++j) {
    const double peak = 2.0 * coupling[j] / bath[j].omega;  // largest |alpha|
    const double mu = peak * peak;
    int chosen = 0;
    for (int d = 4; d <= 4096; ++d) {
      if (fock_tail(mu, d - 2) <= tail_bound) {
        chosen = d;
        break;
      }
    }
    if (chosen == 0) {
      throw truncation_error("choose_truncation: no cutoff under 4096 meets the tail bound");
    }
    trunc.dims.push_back(chosen);
  }
  return trunc;
}

double oracle_pure_phase(const SystemParams& params, const std::vector<BathMode>& bath,
                         Branch branch, double T, int samples, double tail_bound) {
  const TruncationSpec trunc = choose_truncation(params, bath, tail_bound);
  const double coarse = pure_phase_numeric(params, bath, branch, trunc, T, samples);
  const double fine = pure_phase_numeric(params, bath, branch, trunc, T, 2 * samples);
  if (std::abs(fine - coarse) > 1e-9) {
    throw convergence_error("oracle_pure_phase: phase depends on sampling; increase samples");
  }
  return fine;
}

}  // namespace dph
