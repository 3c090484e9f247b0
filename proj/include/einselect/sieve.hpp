#pragma once

#include <variant>

#include "einselect/spinbath.hpp"
#include "einselect/wigner.hpp"

namespace einselect {
namespace sieve {

/// Minimum-uncertainty Gaussian with squeeze s: Var x = s hbar / (2 M Omega),
/// Var p = hbar M Omega / (2 s).
struct GaussianCandidate {
  double center_x = 0.0, center_p = 0.0;
  double squeeze = 1.0;
  double M = 1.0, Omega = 1.0, hbar = 1.0;

  GaussianCandidate() = default;
  GaussianCandidate(double s, double m, double omega, double hb,
                    double x0 = 0.0, double p0 = 0.0);
  double var_x() const { return squeeze * hbar / (2.0 * M * Omega); }
  double var_p() const { return hbar * M * Omega / (2.0 * squeeze); }
};

/// Instantaneous purity loss d(Tr rho^2)/dt for a pure Gaussian state:
/// -(4 eta kB T / hbar^2) Var x with eta = 2 M gamma0.
double purity_loss_rate(const GaussianCandidate& c, const qbm::QbmParams& p);

struct GridLossRate {
  double rate;
  bool mixed_input;  // full expression including +2 gamma Tr rho^2 used
};

/// Grid version; falls back to the full mixed-state expression
/// -(4 eta kB T/hbar^2) Tr(rho^2 x^2 - (rho x)^2) + 2 gamma Tr rho^2 when
/// the input purity is below 1 - 1e-8.
GridLossRate purity_loss_rate(const qbm::PositionGridState& state,
                              const qbm::QbmParams& p);

/// Purity loss averaged over one oscillator cycle:
/// -2 D (Var x + Var p / (M Omega)^2).
double cycle_averaged_loss(const GaussianCandidate& c, double D);

struct SieveCandidate {
  std::string label;
  std::variant<GaussianCandidate, Vec> payload;  // Vec: 2-level amplitudes
};

/// Candidates evolve on the position grid under the high-temperature
/// master equation. Zeros request automatic box/step choices.
struct QbmDynamics {
  qbm::QbmParams params;
  int grid_n = 256;
  double box_half = 0.0;
  double dt = 0.0;
};

/// Candidates are system qubit states decohered by a fixed spin bath.
struct SpinBathDynamics {
  std::vector<double> couplings;
  std::vector<std::pair<cxd, cxd>> env;
};

/// Candidates evolve as Wigner functions under Moyal flow with diffusion.
struct WignerDynamics {
  wigner::Potential potential;
  double D = 0.0;
  int nx = 256, np = 256;
  double box_half = 0.0;
  double hbar = 1.0, mass = 1.0;
  double dt = 0.0;
};

using SieveDynamics = std::variant<QbmDynamics, SpinBathDynamics, WignerDynamics>;

enum class SieveScore { purity, entropy };

struct SieveOutcome {
  std::string label;
  int candidate_index;
  double purity_after = 0.0;
  double entropy_gained = 0.0;  // von Neumann where available, else linear
  int rank = 0;                 // shared between candidates tied within 1e-6
  bool ok = true;
  std::string error;
};

/// Evolves every candidate independently over the horizon and orders them
/// best-first (highest retained purity / least entropy gained). Failures
/// disqualify the candidate with the reason recorded.
std::vector<SieveOutcome> run_sieve(const std::vector<SieveCandidate>& candidates,
                                    const SieveDynamics& dynamics,
                                    double horizon, SieveScore score);

struct InfoRates {
  double i_dot;        // gamma kB T / (hbar Omega)
  double h_dot;        // i_dot lg((I+1)/(I-1)), bits
  bool h_infinite;     // I = 1: pure coherent state
  double purity_dot;   // i_dot / I^2
};

/// Gaussian-state predictability loss rates as functions of the phase-space
/// action I (in hbar units, I >= 1).
InfoRates gaussian_info_rates(double I_action, const qbm::QbmParams& p);

}  // namespace sieve
}  // namespace einselect
