#pragma once

#include "einselect/qbm.hpp"

namespace einselect {
namespace wigner {

/// V(x, t) as a polynomial plus cosine and drive terms. Covers the
/// harmonic oscillator, the driven pendulum -kappa cos(x - l sin t) + a x^2/2,
/// the driven double well A x^4 - B x^2 + C x cos(f t), and custom
/// polynomial-plus-cosine potentials.
struct Potential {
  std::vector<double> poly;  // c0 + c1 x + c2 x^2 + ...
  double cos_amp = 0.0, cos_freq = 0.0, cos_phase = 0.0;
  double pend_kappa = 0.0, pend_l = 0.0;   // -kappa cos(x - l sin t)
  double drive_amp = 0.0, drive_freq = 0.0;  // + drive_amp cos(drive_freq t) x

  static Potential free_particle();
  static Potential harmonic(double m, double omega);
  static Potential driven_pendulum(double kappa, double l, double a = 0.0);
  static Potential driven_double_well(double A, double B, double C, double f);

  double value(double x, double t) const;
  double d1(double x, double t) const;  // dV/dx
  double d3(double x, double t) const;  // d^3V/dx^3
  bool time_dependent() const {
    return pend_l != 0.0 || drive_amp != 0.0;
  }
};

/// Real phase-space distribution on an x-p grid with the momentum spacing
/// locked to the transform dual of the x grid: dp = 2 pi hbar / (nx dx).
struct WignerGrid {
  RMat w;  // w(i, j) = W(x_i, p_j)
  int nx = 0, np = 0;
  double x_min = 0.0, dx = 0.0;
  double p_min = 0.0, dp = 0.0;
  double hbar = 1.0;
  double mass = 1.0;
  double time = 0.0;
  Potential potential;

  static WignerGrid zeros(int nx, int np, double x_min, double x_max,
                          double hbar, Potential pot = {}, double mass = 1.0);

  double x(int i) const { return x_min + i * dx; }
  double p(int j) const { return p_min + j * dp; }
  double cell() const { return dx * dp; }
  double normalization() const { return w.sum() * cell(); }
  void renormalize() { w /= normalization(); }
  void validate() const;

  double mean_x() const;
  double mean_p() const;
  double var_x() const;
  double var_p() const;
};

/// W(x,p) = (1/2 pi hbar) int dy e^{i p y / hbar} rho(x - y/2, x + y/2),
/// evaluated with band-limited interpolation of rho at half-grid points.
/// Output grid: np = nx, dp = 2 pi hbar/(nx dx).
WignerGrid wigner_transform(const qbm::PositionGridState& rho, double hbar,
                            Potential pot = {}, double mass = 1.0);

enum class CatKind { position, momentum };

/// Two Gaussian packets separated by 2 x0 (or 2 p0) plus the interference
/// ridge, normalized on the grid. xi is the position half-width of each
/// packet: G ~ exp(-x^2/xi^2 - p^2 xi^2/hbar^2).
WignerGrid build_cat(int nx, int np, double x_min, double x_max, double hbar,
                     double x0, double xi, CatKind kind, Potential pot = {},
                     double mass = 1.0);

enum class EvolveMode { moyal, liouville };

struct EvolveStats {
  double norm_drift = 0.0;
  double min_w = 0.0;
};

/// Strang-split propagation of dW/dt = {H, W}_MB + D d^2_p W (moyal) or of
/// the classical Liouville flow with the same diffusion (liouville).
/// Kinetic and potential substeps are exact multiplications in the dual
/// representations; the drive is evaluated at substep midpoints.
/// Aborts when the normalization drifts by more than 1e-5.
EvolveStats evolve(WignerGrid& grid, EvolveMode mode, double D, double dt,
                   int steps);

struct PurityReport {
  double purity;          // 2 pi hbar int W^2 dx dp
  double linear_entropy;  // 1 - purity
};

PurityReport linear_entropy(const WignerGrid& grid);

struct RateReport {
  double rate;
  bool monotone;  // purity was monotone over the window
};

/// Least-squares slope of -ln purity over [t1, t2] given (t, purity) samples.
RateReport entropy_production_rate(const std::vector<double>& t,
                                   const std::vector<double>& purity,
                                   double t1, double t2);

struct ScaleReport {
  double t_hbar;        // Ehrenfest time
  double t_r;           // correspondence time from the total action
  double sub_planck_a;  // hbar^2 / I
  double ell_c;         // steady-state coherence length
  double sigma_c;       // hbar / ell_c
};

ScaleReport scale_report(double Lambda, double Delta_p0, double chi,
                         double I_action, double gamma, double lambda_T,
                         double hbar);

/// Smallest resolved structure scales, from the 99th-percentile support of
/// the spectral transform of W along each axis: dx_struct = 1/kx99,
/// dp_struct = hbar/y99.
struct FeatureScales {
  double dx_struct;
  double dp_struct;
  double action() const { return dx_struct * dp_struct; }
};

FeatureScales measure_feature_scales(const WignerGrid& grid,
                                     double quantile = 0.99);

/// Ratio of the leading Moyal correction (hbar^2/24)|V_xxx W_ppp| to the
/// classical force term |V_x W_p|, averaged over the region |W| > 1% max.
double correction_diagnostic(const WignerGrid& grid);

}  // namespace wigner
}  // namespace einselect
