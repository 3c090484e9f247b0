#pragma once

#include <functional>

#include "einselect/numeric.hpp"

namespace einselect {
namespace qbm {

/// Quantum Brownian motion parameter bundle for the ohmic spectral density
/// with a Lorentzian cutoff, C(w) = 2 M gamma0 (w/pi) Gamma^2/(Gamma^2+w^2).
struct QbmParams {
  double gamma0 = 0.0;  // relaxation scale, 1/time
  double Gamma = 1.0;   // cutoff frequency
  double T = 0.0;       // temperature
  double M = 1.0;       // mass
  double Omega = 1.0;   // oscillator frequency; 0 = free particle
  double hbar = 1.0;
  double kB = 1.0;

  void validate() const;
  /// kB T dominates every other energy scale. Recorded, not enforced.
  bool high_t_flag() const {
    return kB * T > 10.0 * hbar * std::max(Omega, Gamma);
  }
  double beta() const { return T > 0.0 ? 1.0 / (kB * T) : 0.0; }
  /// High-temperature momentum-diffusion constant 2 M gamma0 kB T.
  double diffusion() const { return 2.0 * M * gamma0 * kB * T; }
};

double spectral_density(const QbmParams& p, double omega);

struct Kernels {
  double nu;   // noise kernel
  double eta;  // dissipation kernel
  bool converged;
};

/// nu(s) = int C(w) coth(hbar w beta / 2) cos(w s) dw,
/// eta(s) = int C(w) sin(w s) dw; quadrature cut off at `cutoff_mult` Gamma.
Kernels kernels(const QbmParams& p, double s, double rel_tol = 1e-8,
                double cutoff_mult = 50.0);

struct CoefficientTrace {
  std::vector<double> t;
  std::vector<double> Omega_ren_sq;  // frequency renormalization
  std::vector<double> gamma;         // relaxation coefficient
  std::vector<double> D;             // normal diffusion
  std::vector<double> f;             // anomalous diffusion
};

/// Perturbative time-dependent master-equation coefficients by cumulative
/// quadrature of the kernels:
///   Omega_ren^2(t) = -(2/M)   int_0^t cos(Omega s) eta(s) ds
///   gamma(t)       = (1/M Omega) int_0^t sin(Omega s) eta(s) ds
///   D(t)           = (1/hbar) int_0^t cos(Omega s) nu(s) ds
///   f(t)           = -(1/M Omega) int_0^t sin(Omega s) eta(s) ds
/// For Omega = 0 the sin(Omega s)/Omega limit is taken. gamma carries the
/// normalization whose long-time limit is gamma0 Gamma^2/(Gamma^2+Omega^2).
CoefficientTrace coefficients_perturbative(const QbmParams& p,
                                           const std::vector<double>& t_grid);

/// Density matrix on a periodic position grid, rho(x_i, x_j).
struct PositionGridState {
  Mat rho;  // n x n, Hermitian, trace * dx = 1
  double x_min = 0.0, x_max = 0.0;
  int n = 0;
  std::function<double(double)> potential;  // V(x)

  double dx() const { return (x_max - x_min) / n; }
  double x(int i) const { return x_min + i * dx(); }
  double trace() const;
  double purity() const;  // Tr rho^2
  void validate() const;

  static PositionGridState gaussian(double x0, double p0, double sigma_x,
                                    double x_min, double x_max, int n,
                                    std::function<double(double)> potential,
                                    double hbar);
  /// Superposition of two packets at +/- x0 (equal weights).
  static PositionGridState cat(double x0, double sigma_x, double x_min,
                               double x_max, int n,
                               std::function<double(double)> potential,
                               double hbar);

  RVec position_density() const;  // diagonal, 1/length units
  double mean_x() const;
  double var_x() const;
};

struct EvolveOptions {
  bool include_anomalous = false;  // f(t)-type term, default off
  double anomalous_f = 0.0;
  bool kinetic = true;      // disable for pure-decoherence studies
  bool relaxation = true;
  bool decoherence = true;
};

struct EvolveReport {
  double trace_drift = 0.0;
  double max_edge_density = 0.0;  // probability within 5 points of the edge
  bool leakage_warning = false;
  bool dt_warning = false;
};

/// Strang-split high-temperature master-equation evolution: exact kinetic
/// and potential phases, relaxation by spectral derivatives (RK2), and the
/// pointwise-exact decoherence factor exp(-2 M gamma kB T (x-x')^2 dt/hbar^2).
/// Aborts when the trace drifts by more than 1e-4.
EvolveReport high_t_evolve(PositionGridState& state, const QbmParams& p,
                           double dt, int steps,
                           const EvolveOptions& opt = {});

struct DecoherenceTime {
  double tau_d;
  double lambda_t;
  double ratio_to_relaxation;  // (dx / lambda_T)^2
};

/// tau_D = gamma^-1 (lambda_T / dx)^2 with lambda_T = hbar / sqrt(2 M kB T).
DecoherenceTime decoherence_time(const QbmParams& p, double separation);

/// CGS constants for macroscopic anchor estimates.
namespace cgs {
constexpr double hbar = 1.054571817e-27;  // erg s
constexpr double kB = 1.380649e-16;       // erg / K
}  // namespace cgs

}  // namespace qbm
}  // namespace einselect
