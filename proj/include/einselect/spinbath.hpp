#pragma once

#include <functional>

#include "einselect/hilbert.hpp"

namespace einselect {
namespace spinbath {

/// Two-state system coupled to N environment spins through
/// H = (|u><u| - |d><d|) (x) sum_k g_k sigma_z^(k), with H_system = 0.
struct SpinBathParams {
  std::vector<double> couplings;          // g_k, rad / time
  std::vector<std::pair<cxd, cxd>> env;   // (alpha_k, beta_k), normalized
  cxd a{1.0, 0.0}, b{0.0, 0.0};           // system amplitudes
  double hbar = 1.0;

  SpinBathParams() = default;
  SpinBathParams(std::vector<double> g, std::vector<std::pair<cxd, cxd>> e,
                 cxd a_in, cxd b_in, double hbar_in = 1.0);

  int spins() const { return static_cast<int>(couplings.size()); }

  /// Haar-random bath spins, couplings uniform on [0.5, 1.5] * g0.
  static SpinBathParams random(int n, cxd a, cxd b, double g0, Rng& rng);
};

struct BlochPoint {
  double x = 0.0, y = 0.0, z = 0.0;
};

/// r(t) = prod_k [cos 2 g_k t + i (|alpha_k|^2 - |beta_k|^2) sin 2 g_k t].
cxd decoherence_factor(const SpinBathParams& params, double t);

/// Reduced 2x2 state: constant diagonal, off-diagonal a b* r(t).
DensityMatrix evolve_reduced(const SpinBathParams& params, double t);

struct Coherence {
  double bound;     // 2^-N prod_k [1 + (|alpha_k|^2-|beta_k|^2)^2]
  double time_avg;  // sum_j p_j^2 over interaction eigenstates
};

Coherence asymptotic_coherence(const SpinBathParams& params);

std::vector<BlochPoint> bloch_trajectory(const SpinBathParams& params,
                                         const std::vector<double>& times);

/// Draws one phase per apparatus basis state for a single noise realization.
using PhaseSampler = std::function<RVec(int dim, Rng&)>;

struct DephasingResult {
  std::vector<double> purities;  // one per realization; each should be 1
  DensityMatrix average;         // ensemble-averaged rho_SA
};

/// Random phase noise on the second register of an S (x) A pure state:
/// every realization stays pure, the ensemble average loses coherence.
DephasingResult dephasing_ensemble(const PhaseSampler& sampler,
                                   const PureState& state, int n_realizations,
                                   Rng& rng);

}  // namespace spinbath
}  // namespace einselect
