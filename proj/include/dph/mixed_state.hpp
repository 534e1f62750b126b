// mixed_state.hpp — Reduced qubit state in the dressed basis, its spectral
// decomposition, and the kinematic (interferometric) geometric phase of the
// decohering mixed state, evaluated along a discretely sampled path.

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "dph/closed_form.hpp"
#include "dph/model.hpp"

namespace dph {

// Eigenvalue ordering along a path cannot be trusted through a degeneracy.
class degeneracy_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Refinement stopped improving (or was exhausted) before reaching tolerance.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialSuperposition {
  Complex c_plus{1.0, 0.0};
  Complex c_minus{0.0, 0.0};
  void validate() const;  // |c+|^2 + |c-|^2 = 1 within 1e-12
};

// 2x2 density matrix in the ordered dressed basis {|+(n)>, |-(n)>}.
struct QubitDensityMatrix {
  Eigen::Matrix2cd mat{Eigen::Matrix2cd::Zero()};
};

// Which entry of an eigenvector was rotated to be real and non-negative.
enum class GaugeTag { component0, component1 };

struct SpectralDecomposition {
  double eps_plus{0.0};   // larger eigenvalue
  double eps_minus{0.0};  // smaller eigenvalue, clamped up to 0 from roundoff
  Eigen::Vector2cd psi_plus{Eigen::Vector2cd::Zero()};
  Eigen::Vector2cd psi_minus{Eigen::Vector2cd::Zero()};
  GaugeTag gauge_plus{GaugeTag::component0};
  GaugeTag gauge_minus{GaugeTag::component0};
  bool near_degenerate{false};  // eigenvalue gap below kDegenerateGap
};

// Gap under which eigenvector ordering along a path is considered unreliable.
inline constexpr double kDegenerateGap = 1e-10;

// rho(t) for the dephasing superposition: populations are frozen, the
// off-diagonal is c+ conj(c-) F(t) (and its conjugate).
QubitDensityMatrix reduced_density(const SystemParams& params, const std::vector<BathMode>& bath,
                                   const InitialSuperposition& init, double t);

// Closed-form 2x2 Hermitian eigendecomposition, stable at small gaps: the
// eigenvector representation is chosen per the sign of the diagonal imbalance
// so no catastrophic cancellation occurs. Throws std::invalid_argument if the
// input is not Hermitian (1e-12) or has an eigenvalue below -1e-10.
SpectralDecomposition eigendecompose(const QubitDensityMatrix& rho);

// rho(t_i) at t_i = i T / steps, i = 0..steps.
std::vector<QubitDensityMatrix> sample_density_path(const SystemParams& params,
                                                    const std::vector<BathMode>& bath,
                                                    const InitialSuperposition& init, double T,
                                                    int steps);

// Eigensystem along the path with continuity tracking: at each sample the
// (eps, psi) pairs are matched to the previous usable sample by maximal total
// overlap, so labels follow branches through eigenvalue crossings instead of
// the sorted order. Samples flagged near-degenerate are marked unusable and
// bridged over; a persistent run of them (more than max(8, samples/16)) or a
// degenerate endpoint raises degeneracy_error.
struct TrackedPath {
  std::vector<SpectralDecomposition> samples;
  std::vector<bool> usable;
  int bridged_samples{0};
};

TrackedPath eigensystem_path(const std::vector<QubitDensityMatrix>& path);

// Kinematic mixed-state phase of the tracked path,
//   Phi = arg Sum_k sqrt(eps_k(0) eps_k(T)) <psi_k(0)|psi_k(T)> u_k,
// where u_k is the unit-modulus conjugate of the Bargmann chain
// Prod_i <psi_k(t_i)|psi_k(t_{i+1})> over usable samples. The chain enters
// only through its phase, so the result is invariant under independent
// rephasings of every sampled eigenvector (exactly so, up to roundoff).
// Throws std::domain_error when the interference weight vanishes and
// convergence_error when a chain overlap collapses to zero with live weight.
double kinematic_phase_of_path(const TrackedPath& path);

// sample + track + chain in one call.
double mixed_geometric_phase(const SystemParams& params, const std::vector<BathMode>& bath,
                             const InitialSuperposition& init, double T, int steps);

// Doubles the sampling until two successive refinements agree to tol on the
// circle; starts at 256 steps, gives up past max_steps with convergence_error.
double mixed_geometric_phase_checked(const SystemParams& params,
                                     const std::vector<BathMode>& bath,
                                     const InitialSuperposition& init, double T, double tol,
                                     int max_steps = 1 << 16);

// Asymptotic (pointer-limit) phase; requires the coherence to have actually
// died out, |F(T)| < 1e-8, else std::domain_error("not in asymptotic regime").
double long_time_phase(const SystemParams& params, const std::vector<BathMode>& bath,
                       const InitialSuperposition& init, double T);

// One-stop record for reporting: phase plus the endpoint diagnostics.
struct MixedPhaseDetail {
  double phase{0.0};
  double abs_coherence{0.0};  // |F(T)|
  double eps_plus{0.0};       // sorted endpoint spectrum
  double eps_minus{0.0};
  int bridged_samples{0};
  int steps{0};
};

MixedPhaseDetail mixed_phase_detail(const SystemParams& params, const std::vector<BathMode>& bath,
                                    const InitialSuperposition& init, double T, int steps);

}  // namespace dph
