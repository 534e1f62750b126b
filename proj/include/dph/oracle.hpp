// oracle.hpp — Brute-force numerical reference: the dressed pair plus a
// truncated Fock-space environment evolved exactly (one dense Hermitian
// eigendecomposition, then closed-form time evolution). Slow and honest;
// everything analytic in this library is checked against it.

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "dph/mixed_state.hpp"
#include "dph/model.hpp"

namespace dph {

// The kept Fock space stopped being big enough for the state.
class truncation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-mode Fock cutoffs; mode j keeps levels 0..dims[j]-1.
struct TruncationSpec {
  std::vector<int> dims;
  void validate(size_t num_modes) const;  // sizes match, every dim >= 1
  long long bath_dim() const;             // product of dims (1 when empty)
};

// Full state on {+,-} (x) Fock(d_0) (x) ... Basis index is s * bath_dim + m
// with s = 0 for the plus branch and m a row-major multi-index, last mode
// fastest.
struct UniverseState {
  Eigen::VectorXcd vec;
  std::vector<int> dims;
};

// H = sum_s |s><s| (x) [E_s + sum_j omega_j N_j + sign(s) Lambda_j (b_j + b_j^+)]
// with Lambda_j = sqrt(n+1) lambda_j. All entries are real; the matrix is
// filled symmetrically so Hermiticity holds exactly. Total dimension
// 2 * prod dims is capped at 65536.
Eigen::MatrixXcd build_hamiltonian(const SystemParams& params, const std::vector<BathMode>& bath,
                                   const TruncationSpec& trunc);

UniverseState branch_vacuum_start(Branch branch, const TruncationSpec& trunc);
UniverseState initial_superposition_state(const InitialSuperposition& init,
                                          const TruncationSpec& trunc);

// States sampled at t_i = i T / samples, i = 0..samples, each computed from
// the spectral form V e^{-iEt} V^+ psi0 (no step-to-step error growth).
// Every sample is checked for norm drift (< 1e-9, guards a bad eigensolve)
// and for occupancy of the top two Fock levels of each mode (< 1e-8, guards
// a state escaping the kept space); violations raise truncation_error.
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  std::vector<int> dims;
};

Trajectory propagate(const Eigen::MatrixXcd& hamiltonian, const UniverseState& start, double T,
                     int samples);

// Environment-induced loop phase of one branch, extracted kinematically:
// unwrap arg<Psi(0)|Psi(t)> along the sampled trajectory (the survival
// amplitude never vanishes for a vacuum start) and subtract the dynamical
// part -integral <H> dt, integrated by trapezoid. No closed-form input.
double pure_phase_numeric(const SystemParams& params, const std::vector<BathMode>& bath,
                          Branch branch, const TruncationSpec& trunc, double T, int samples);

// Reduced 2x2 state from the full evolution by tracing out every mode.
std::vector<QubitDensityMatrix> reduced_density_trajectory(const SystemParams& params,
                                                           const std::vector<BathMode>& bath,
                                                           const InitialSuperposition& init,
                                                           const TruncationSpec& trunc, double T,
                                                           int samples);

QubitDensityMatrix reduced_density_numeric(const SystemParams& params,
                                           const std::vector<BathMode>& bath,
                                           const InitialSuperposition& init,
                                           const TruncationSpec& trunc, double t);

// The displaced-vacuum state one branch should reach at time t, built
// coefficient by coefficient with its global phase, for fidelity checks
// against the propagated state.
UniverseState coherent_reference(const SystemParams& params, const std::vector<BathMode>& bath,
                                 Branch branch, const TruncationSpec& trunc, double t);

// P(N >= d) for a Poisson distribution with mean mu, summed in log space so
// small tails are not computed as 1 - (1 - tail).
double fock_tail(double mu, int d);

// Smallest per-mode cutoffs whose worst-case displaced occupancy leaves less
// than tail_bound beyond the two guard levels watched by propagate().
TruncationSpec choose_truncation(const SystemParams& params, const std::vector<BathMode>& bath,
                                 double tail_bound);

// choose_truncation + pure_phase_numeric, run at both `samples` and
// 2 * samples; a disagreement beyond 1e-9 means the unwrap aliased and is
// reported as convergence_error instead of a silently wrong phase.
double oracle_pure_phase(const SystemParams& params, const std::vector<BathMode>& bath,
                         Branch branch, double T, int samples, double tail_bound = 1e-10);

}  // namespace dph
