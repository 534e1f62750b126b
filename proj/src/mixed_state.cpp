#include "dph/mixed_state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace dph {

namespace {

// Rotate v so its dominant entry (ties: entry 0) is real and non-negative.
GaugeTag fix_gauge(Eigen::Vector2cd& v) {
  const int i = std::abs(v(1)) > std::abs(v(0)) ? 1 : 0;
  const double mag = std::abs(v(i));
  if (mag > 0.0) v *= std::conj(v(i)) / mag;
  return i == 0 ? GaugeTag::component0 : GaugeTag::component1;
}

double clamp0(double x) { return x < 0.0 ? 0.0 : x; }

}  // namespace

void InitialSuperposition::validate() const {
  const double norm_sq = std::norm(c_plus) + std::norm(c_minus);
  if (!std::isfinite(norm_sq) || std::abs(norm_sq - 1.0) > 1e-12) {
    throw std::invalid_argument("InitialSuperposition: amplitudes must be normalized");
  }
}

QubitDensityMatrix reduced_density(const SystemParams& params, const std::vector<BathMode>& bath,
                                   const InitialSuperposition& init, double t) {
  init.validate();
  const DecoherenceFactor f = decoherence_factor(params, bath, t);
  QubitDensityMatrix rho;
  rho.mat(0, 0) = std::norm(init.c_plus);
  rho.mat(1, 1) = std::norm(init.c_minus);
  rho.mat(0, 1) = init.c_plus * std::conj(init.c_minus) * f.value;
  rho.mat(1, 0) = std::conj(rho.mat(0, 1));
  return rho;
}

SpectralDecomposition eigendecompose(const QubitDensityMatrix& rho) {
  const Complex b = rho.mat(0, 1);
  if (std::abs(b - std::conj(rho.mat(1, 0))) > 1e-12 ||
      std::abs(rho.mat(0, 0).imag()) > 1e-12 || std::abs(rho.mat(1, 1).imag()) > 1e-12) {
    throw std::invalid_argument("eigendecompose: matrix is not Hermitian");
  }
  const double a = rho.mat(0, 0).real();
  const double d = rho.mat(1, 1).real();
  const double h = 0.5 * (a - d);
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(h, std::abs(b));

  SpectralDecomposition out;
  out.eps_plus = mean + radius;
  out.eps_minus = mean - radius;
  if (out.eps_minus < -1e-10) {
    throw std::invalid_argument("eigendecompose: matrix is not positive semidefinite");
  }
  out.eps_minus = clamp0(out.eps_minus);
  out.near_degenerate = (out.eps_plus - out.eps_minus) < kDegenerateGap;

  if (radius == 0.0) {
    // Exactly proportional to the identity; any basis works.
    out.psi_plus << 1.0, 0.0;
    out.psi_minus << 0.0, 1.0;
    out.gauge_plus = GaugeTag::component0;
    out.gauge_minus = GaugeTag::component1;
    return out;
  }

  // Pick the representation whose entries are O(radius) for the actual sign
  // of h, so nothing cancels as the gap closes.
  if (h >= 0.0) {
    out.psi_plus << Complex(h + radius, 0.0), std::conj(b);
    out.psi_minus << -b, Complex(h + radius, 0.0);
  } else {
    out.psi_minus << Complex(h - radius, 0.0), std::conj(b);
    out.psi_plus << -b, Complex(h - radius, 0.0);
  }
  out.psi_plus.normalize();
  out.psi_minus.normalize();
  out.gauge_plus = fix_gauge(out.psi_plus);
  out.gauge_minus = fix_gauge(out.psi_minus);
  return out;
}

std::vector<QubitDensityMatrix> sample_density_path(const SystemParams& params,
                                                    const std::vector<BathMode>& bath,
                                                    const InitialSuperposition& init, double T,
                                                    int steps) {
  if (steps < 1) throw std::invalid_argument("sample_density_path: steps must be >= 1");
  if (!std::isfinite(T) || T < 0.0) {
    throw std::invalid_argument("sample_density_path: T must be finite and >= 0");
  }
  std::vector<QubitDensityMatrix> path;
  path.reserve(static_cast<size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    path.push_back(reduced_density(params, bath, init, T * static_cast<double>(i) / steps));
  }
  return path;
}

TrackedPath eigensystem_path(const std::vector<QubitDensityMatrix>& path) {
  if (path.size() < 2) throw std::invalid_argument("eigensystem_path: need at least 2 samples");

  TrackedPath tracked;
  tracked.samples.reserve(path.size());
  tracked.usable.assign(path.size(), true);
  for (const QubitDensityMatrix& rho : path) tracked.samples.push_back(eigendecompose(rho));

  if (tracked.samples.front().near_degenerate) {
    throw degeneracy_error("eigensystem_path: initial sample is degenerate");
  }
  if (tracked.samples.back().near_degenerate) {
    throw degeneracy_error("eigensystem_path: final sample is degenerate");
  }

  const size_t max_run = std::max<size_t>(8, (path.size() - 1) / 16);
  size_t run = 0;
  size_t prev_usable = 0;
  for (size_t i = 1; i < path.size(); ++i) {
    SpectralDecomposition& cur = tracked.samples[i];
    if (cur.near_degenerate) {
      tracked.usable[i] = false;
      ++tracked.bridged_samples;
      if (++run > max_run) {
        throw degeneracy_error("eigensystem_path: persistent degeneracy along path");
      }
      continue;
    }
    run = 0;
    const SpectralDecomposition& prev = tracked.samples[prev_usable];
    const double direct = std::norm(prev.psi_plus.dot(cur.psi_plus)) +
                          std::norm(prev.psi_minus.dot(cur.psi_minus));
    const double cross = std::norm(prev.psi_plus.dot(cur.psi_minus)) +
                         std::norm(prev.psi_minus.dot(cur.psi_plus));
    if (cross > direct) {
      std::swap(cur.eps_plus, cur.eps_minus);
      cur.psi_plus.swap(cur.psi_minus);
      std::swap(cur.gauge_plus, cur.gauge_minus);
    }
    prev_usable = i;
  }
  return tracked;
}

namespace {

struct BranchChain {
  Complex contribution{0.0, 0.0};
};

// w sqrt-weighted endpoint overlap times the unit conjugate chain phase.
BranchChain chain_branch(const TrackedPath& path, const std::vector<size_t>& idx, bool plus) {
  auto vec = [&](size_t i) -> const Eigen::Vector2cd& {
    return plus ? path.samples[i].psi_plus : path.samples[i].psi_minus;
  };
  auto eps = [&](size_t i) { return plus ? path.samples[i].eps_plus : path.samples[i].eps_minus; };

  const double w = std::sqrt(clamp0(eps(idx.front())) * clamp0(eps(idx.back())));
  Complex unit(1.0, 0.0);
  for (size_t m = 0; m + 1 < idx.size(); ++m) {
    const Complex f = vec(idx[m]).dot(vec(idx[m + 1]));
    const double mag = std::abs(f);
    if (mag == 0.0) {
      if (w > 0.0) {
        throw convergence_error("kinematic_phase_of_path: chain overlap vanished; refine steps");
      }
      return {};  // weightless branch, drop it
    }
    unit *= std::conj(f) / mag;
  }
  BranchChain out;
  out.contribution = w * vec(idx.front()).dot(vec(idx.back())) * unit;
  return out;
}

}  // namespace

double kinematic_phase_of_path(const TrackedPath& path) {
  std::vector<size_t> idx;
  idx.reserve(path.samples.size());
  for (size_t i = 0; i < path.samples.size(); ++i) {
    if (path.usable[i]) idx.push_back(i);
  }
  if (idx.size() < 2) throw degeneracy_error("kinematic_phase_of_path: fewer than 2 usable samples");

  const Complex z =
      chain_branch(path, idx, true).contribution + chain_branch(path, idx, false).contribution;
  if (std::abs(z) == 0.0) {
    throw std::domain_error("kinematic_phase_of_path: interference weight vanished");
  }
  return std::arg(z);
}

double mixed_geometric_phase(const SystemParams& params, const std::vector<BathMode>& bath,
                             const InitialSuperposition& init, double T, int steps) {
  return kinematic_phase_of_path(eigensystem_path(sample_density_path(params, bath, init, T, steps)));
}

double mixed_geometric_phase_checked(const SystemParams& params,
                                     const std::vector<BathMode>& bath,
                                     const InitialSuperposition& init, double T, double tol,
                                     int max_steps) {
  if (!(tol > 0.0)) throw std::invalid_argument("mixed_geometric_phase_checked: tol must be > 0");
  if (max_steps < 512) {
    throw std::invalid_argument("mixed_geometric_phase_checked: max_steps must be >= 512");
  }
  double prev = mixed_geometric_phase(params, bath, init, T, 256);
  for (int steps = 512; steps <= max_steps; steps *= 2) {
    const double cur = mixed_geometric_phase(params, bath, init, T, steps);
    if (std::abs(std::remainder(cur - prev, 2.0 * M_PI)) <= tol) return cur;
    prev = cur;
  }
  throw convergence_error("mixed_geometric_phase_checked: refinement did not settle");
}

double long_time_phase(const SystemParams& params, const std::vector<BathMode>& bath,
                       const InitialSuperposition& init, double T) {
  init.validate();
  const DecoherenceFactor f = decoherence_factor(params, bath, T);
  if (std::exp(-f.exponent_sum) >= 1e-8) {
    throw std::domain_error("long_time_phase: not in asymptotic regime");
  }
  return pointer_limit_phase(init.c_plus, init.c_minus, params.n);
}

MixedPhaseDetail mixed_phase_detail(const SystemParams& params, const std::vector<BathMode>& bath,
                                    const InitialSuperposition& init, double T, int steps) {
  const TrackedPath tracked = eigensystem_path(sample_density_path(params, bath, init, T, steps));
  MixedPhaseDetail detail;
  detail.phase = kinematic_phase_of_path(tracked);
  detail.abs_coherence = std::exp(-eta_sum(bath, params.n, T));
  const SpectralDecomposition end = eigendecompose(reduced_density(params, bath, init, T));
  detail.eps_plus = end.eps_plus;
  detail.eps_minus = end.eps_minus;
  detail.bridged_samples = tracked.bridged_samples;
  detail.steps = steps;
  return detail;
}

}  // namespace dph
