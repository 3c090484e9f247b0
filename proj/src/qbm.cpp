#include "einselect/qbm.hpp"

#include <cmath>

#include "einselect/fft.hpp"

namespace einselect {
namespace qbm {

void QbmParams::validate() const {
  if (gamma0 <= 0 || Gamma <= 0 || M <= 0 || hbar <= 0 || kB <= 0)
    throw std::invalid_argument("QbmParams: gamma0, Gamma, M, hbar, kB > 0");
  if (T < 0 || Omega < 0)
    throw std::invalid_argument("QbmParams: T >= 0, Omega >= 0");
}

double spectral_density(const QbmParams& p, double omega) {
  if (omega < 0) throw std::invalid_argument("spectral_density: omega >= 0");
  return 2.0 * p.M * p.gamma0 * (omega / kPi) * p.Gamma * p.Gamma /
         (p.Gamma * p.Gamma + omega * omega);
}

namespace {

double coth_half(double x) {
  // coth(x/2) with the T -> 0 and small-x limits handled
  if (x <= 0.0) return 1.0;  // T = 0 convention: coth -> 1
  const double h = 0.5 * x;
  if (h < 1e-6) return 1.0 / h + h / 3.0;
  if (h > 20.0) return 1.0;
  return std::cosh(h) / std::sinh(h);
}

}  // namespace

Kernels kernels(const QbmParams& p, double s, double rel_tol,
                double cutoff_mult) {
  p.validate();
  if (s < 0) throw std::invalid_argument("kernels: s >= 0");
  const double wmax = cutoff_mult * p.Gamma;
  const double hb = p.hbar * p.beta();

  auto fnu = [&](double w) {
    return spectral_density(p, w) * coth_half(hb * w) * std::cos(w * s);
  };
  auto feta = [&](double w) { return spectral_density(p, w) * std::sin(w * s); };

  // Split at the oscillation scale so the adaptive rule sees smooth pieces.
  Kernels k{0.0, 0.0, true};
  const double seg = (s > 0) ? std::max(2.0 * kPi / s, wmax / 64.0) : wmax;
  double a = 0.0;
  while (a < wmax) {
    const double b = std::min(a + seg, wmax);
    const Quadrature qn = integrate(fnu, a, b, rel_tol);
    const Quadrature qe = integrate(feta, a, b, rel_tol);
    k.nu += qn.value;
    k.eta += qe.value;
    k.converged = k.converged && qn.converged && qe.converged;
    a = b;
  }
  if (!k.converged) throw std::runtime_error("kernels: quadrature did not converge");
  return k;
}

CoefficientTrace coefficients_perturbative(const QbmParams& p,
                                           const std::vector<double>& t_grid) {
  p.validate();
  if (t_grid.empty() || t_grid.front() < 0)
    throw std::invalid_argument("coefficients_perturbative: bad t grid");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] <= t_grid[i - 1])
      throw std::invalid_argument("coefficients_perturbative: t grid not increasing");

  const double t_max = t_grid.back();
  // Kernels decay on the cutoff and Matsubara scales; beyond that the
  // integrands contribute nothing.
  double s_decay = 30.0 / p.Gamma;
  if (p.T > 0) s_decay = std::max(s_decay, 6.0 * p.hbar * p.beta());
  const double s_cut = std::min(t_max, s_decay);

  double ds = s_cut / 4096.0;
  ds = std::min(ds, 0.05 / p.Gamma);
  if (p.Omega > 0) ds = std::min(ds, 0.05 / p.Omega);
  const long n_dense = std::max<long>(16, static_cast<long>(std::ceil(s_cut / ds)));
  ds = s_cut / n_dense;

  // cumulative trapezoid over the dense grid
  std::vector<double> cs_cos_eta(n_dense + 1, 0.0), cs_sin_eta(n_dense + 1, 0.0),
      cs_cos_nu(n_dense + 1, 0.0);
  double prev_ce = 0, prev_se = 0, prev_cn = 0;
  {
    const Kernels k0 = kernels(p, 0.0);
    prev_ce = k0.eta;  // cos(0) eta(0)
    prev_se = 0.0;     // sin(0) eta(0)
    prev_cn = k0.nu;
  }
  for (long i = 1; i <= n_dense; ++i) {
    const double s = i * ds;
    const Kernels k = kernels(p, s);
    const double c = std::cos(p.Omega * s);
    const double sn = (p.Omega > 0) ? std::sin(p.Omega * s) / p.Omega : s;
    const double ce = c * k.eta, se = sn * k.eta, cn = c * k.nu;
    cs_cos_eta[i] = cs_cos_eta[i - 1] + 0.5 * ds * (prev_ce + ce);
    cs_sin_eta[i] = cs_sin_eta[i - 1] + 0.5 * ds * (prev_se + se);
    cs_cos_nu[i] = cs_cos_nu[i - 1] + 0.5 * ds * (prev_cn + cn);
    prev_ce = ce;
    prev_se = se;
    prev_cn = cn;
  }

  auto interp = [&](const std::vector<double>& c, double t) {
    if (t >= s_cut) return c[n_dense];  // kernels negligible past the cut
    const double u = t / ds;
    const long i = std::min<long>(static_cast<long>(u), n_dense - 1);
    const double w = u - i;
    return (1.0 - w) * c[i] + w * c[i + 1];
  };

  CoefficientTrace out;
  for (double t : t_grid) {
    out.t.push_back(t);
    out.Omega_ren_sq.push_back(-(2.0 / p.M) * interp(cs_cos_eta, t));
    out.gamma.push_back((1.0 / p.M) * interp(cs_sin_eta, t));
    out.D.push_back(interp(cs_cos_nu, t) / p.hbar);
    out.f.push_back(-(1.0 / p.M) * interp(cs_sin_eta, t));
  }
  return out;
}

double PositionGridState::trace() const {
  return rho.diagonal().sum().real() * dx();
}

double PositionGridState::purity() const { return rho.squaredNorm() * dx() * dx(); }

void PositionGridState::validate() const {
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("PositionGridState: n must be a power of two");
  if (rho.rows() != n || rho.cols() != n)
    throw std::invalid_argument("PositionGridState: matrix size mismatch");
  if (x_max <= x_min) throw std::invalid_argument("PositionGridState: empty box");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("PositionGridState: not Hermitian");
  if (std::abs(trace() - 1.0) > 1e-8)
    throw std::invalid_argument("PositionGridState: trace != 1");
}

PositionGridState PositionGridState::gaussian(
    double x0, double p0, double sigma_x, double x_min, double x_max, int n,
    std::function<double(double)> potential, double hbar) {
  PositionGridState st;
  st.x_min = x_min;
  st.x_max = x_max;
  st.n = n;
  st.potential = std::move(potential);
  Vec psi(n);
  const double dx = (x_max - x_min) / n;
  for (int i = 0; i < n; ++i) {
    const double x = x_min + i * dx;
    psi(i) = std::exp(cxd(-0.25 * (x - x0) * (x - x0) / (sigma_x * sigma_x),
                          p0 * x / hbar));
  }
  psi /= psi.norm() * std::sqrt(dx);
  st.rho = psi * psi.adjoint();
  return st;
}

PositionGridState PositionGridState::cat(double x0, double sigma_x,
                                         double x_min, double x_max, int n,
                                         std::function<double(double)> potential,
                                         double hbar) {
  (void)hbar;
  PositionGridState st;
  st.x_min = x_min;
  st.x_max = x_max;
  st.n = n;
  st.potential = std::move(potential);
  Vec psi(n);
  const double dx = (x_max - x_min) / n;
  for (int i = 0; i < n; ++i) {
    const double x = x_min + i * dx;
    psi(i) = std::exp(-0.25 * (x - x0) * (x - x0) / (sigma_x * sigma_x)) +
             std::exp(-0.25 * (x + x0) * (x + x0) / (sigma_x * sigma_x));
  }
  psi /= psi.norm() * std::sqrt(dx);
  st.rho = psi * psi.adjoint();
  return st;
}

RVec PositionGridState::position_density() const {
  return rho.diagonal().real();
}

double PositionGridState::mean_x() const {
  double m = 0.0;
  for (int i = 0; i < n; ++i) m += x(i) * rho(i, i).real();
  return m * dx();
}

double PositionGridState::var_x() const {
  const double m = mean_x();
  double v = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = x(i) - m;
    v += d * d * rho(i, i).real();
  }
  return v * dx();
}

EvolveReport high_t_evolve(PositionGridState& state, const QbmParams& p,
                           double dt, int steps, const EvolveOptions& opt) {
  p.validate();
  state.validate();
  if (dt <= 0 || steps < 0) throw std::invalid_argument("high_t_evolve: dt/steps");
  const int n = state.n;
  const double dx = state.dx();
  const double gamma = p.gamma0;
  const double dcoef = p.diffusion() / (p.hbar * p.hbar);  // 2 M g kB T / hbar^2

  EvolveReport rep;
  // fastest resolved scales: grid kinetic energy and thermal energy
  const double kmax = kPi / dx;
  const double om_grid = p.hbar * kmax * kmax / (2.0 * p.M);
  const double thermal = (p.T > 0) ? p.kB * p.T / p.hbar : 0.0;
  if (dt > 0.1 / std::max(om_grid, 1e-300) ||
      (thermal > 0 && dt > 0.1 / thermal))
    rep.dt_warning = true;

  FftPlans plans(n, n);
  const double trace0 = state.trace();

  // precomputed factors
  Mat kin_half(n, n), pot_dec(n, n);
  for (int a = 0; a < n; ++a) {
    const double ka = dft_wavenumber(a, n, dx);
    for (int b = 0; b < n; ++b) {
      const double kb = dft_wavenumber(b, n, dx);
      kin_half(a, b) = std::exp(
          cxd(0.0, -p.hbar * (ka * ka - kb * kb) * 0.5 * dt / (2.0 * p.M)));
    }
  }
  std::vector<double> vx(n), kx(n);
  for (int i = 0; i < n; ++i) {
    vx[i] = state.potential ? state.potential(state.x(i)) : 0.0;
    kx[i] = dft_wavenumber(i, n, dx);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double y = state.x(i) - state.x(j);
      double f = opt.decoherence ? std::exp(-dcoef * y * y * dt) : 1.0;
      cxd ph = std::exp(cxd(0.0, -(vx[i] - vx[j]) * dt / p.hbar));
      pot_dec(i, j) = f * ph;
    }

  auto kinetic_half = [&](Mat& r) {
    plans.cols_forward(r);
    plans.rows_forward(r);
    r.array() *= kin_half.array();
    plans.rows_backward(r);
    plans.cols_backward(r);
    r /= static_cast<double>(n) * n;
  };

  // -gamma (x-x')(d_x - d_x') rho, plus the optional anomalous term
  // -i f (x-x')(d_x + d_x') rho, both via spectral derivatives
  auto drift = [&](const Mat& r, Mat& out) {
    Mat dxr = r, dxpr = r;
    plans.cols_forward(dxr);
    for (int a = 0; a < n; ++a) dxr.row(a) *= cxd(0.0, kx[a]);
    plans.cols_backward(dxr);
    dxr /= static_cast<double>(n);
    plans.rows_forward(dxpr);
    for (int b = 0; b < n; ++b) dxpr.col(b) *= cxd(0.0, kx[b]);
    plans.rows_backward(dxpr);
    dxpr /= static_cast<double>(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double y = state.x(i) - state.x(j);
        cxd g = -gamma * y * (dxr(i, j) - dxpr(i, j));
        if (opt.include_anomalous)
          g += cxd(0.0, -opt.anomalous_f) * y * (dxr(i, j) + dxpr(i, j));
        out(i, j) = g;
      }
  };

  Mat g1(n, n), g2(n, n);
  for (int s = 0; s < steps; ++s) {
    if (opt.kinetic) kinetic_half(state.rho);
    state.rho.array() *= pot_dec.array();
    if (opt.relaxation && gamma != 0.0) {
      drift(state.rho, g1);
      Mat mid = state.rho + 0.5 * dt * g1;
      drift(mid, g2);
      state.rho += dt * g2;
    }
    if (opt.kinetic) kinetic_half(state.rho);

    const double tr = state.trace();
    rep.trace_drift = std::max(rep.trace_drift, std::abs(tr - trace0));
    if (rep.trace_drift > 1e-4)
      throw std::runtime_error("high_t_evolve: trace drift exceeded 1e-4");
  }

  double edge = 0.0;
  for (int i = 0; i < n; ++i)
    if (i < 5 || i >= n - 5) edge += state.rho(i, i).real() * dx;
  rep.max_edge_density = edge;
  rep.leakage_warning = edge > 1e-6;
  return rep;
}

DecoherenceTime decoherence_time(const QbmParams& p, double separation) {
  p.validate();
  if (separation <= 0) throw std::invalid_argument("decoherence_time: dx > 0");
  if (p.T <= 0)
    throw std::invalid_argument("decoherence_time: undefined at T = 0");
  DecoherenceTime r;
  r.lambda_t = p.hbar / std::sqrt(2.0 * p.M * p.kB * p.T);
  r.ratio_to_relaxation = (separation / r.lambda_t) * (separation / r.lambda_t);
  r.tau_d = 1.0 / (p.gamma0 * r.ratio_to_relaxation);
  return r;
}

}  // namespace qbm
}  // namespace einselect
