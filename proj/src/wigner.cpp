#include "einselect/wigner.hpp"

#include <cmath>

#include "einselect/fft.hpp"

namespace einselect {
namespace wigner {

Potential Potential::free_particle() { return Potential{}; }

Potential Potential::harmonic(double m, double omega) {
  Potential p;
  p.poly = {0.0, 0.0, 0.5 * m * omega * omega};
  return p;
}

Potential Potential::driven_pendulum(double kappa, double l, double a) {
  Potential p;
  p.pend_kappa = kappa;
  p.pend_l = l;
  if (a != 0.0) p.poly = {0.0, 0.0, 0.5 * a};
  return p;
}

Potential Potential::driven_double_well(double A, double B, double C, double f) {
  Potential p;
  p.poly = {0.0, 0.0, -B, 0.0, A};
  p.drive_amp = C;
  p.drive_freq = f;
  return p;
}

double Potential::value(double x, double t) const {
  double v = 0.0, xp = 1.0;
  for (double c : poly) {
    v += c * xp;
    xp *= x;
  }
  if (cos_amp != 0.0) v += cos_amp * std::cos(cos_freq * x + cos_phase);
  if (pend_kappa != 0.0) v -= pend_kappa * std::cos(x - pend_l * std::sin(t));
  if (drive_amp != 0.0) v += drive_amp * std::cos(drive_freq * t) * x;
  return v;
}

double Potential::d1(double x, double t) const {
  double v = 0.0, xp = 1.0;
  for (size_t k = 1; k < poly.size(); ++k) {
    v += poly[k] * static_cast<double>(k) * xp;
    xp *= x;
  }
  if (cos_amp != 0.0) v -= cos_amp * cos_freq * std::sin(cos_freq * x + cos_phase);
  if (pend_kappa != 0.0) v += pend_kappa * std::sin(x - pend_l * std::sin(t));
  if (drive_amp != 0.0) v += drive_amp * std::cos(drive_freq * t);
  return v;
}

double Potential::d3(double x, double t) const {
  double v = 0.0, xp = 1.0;
  for (size_t k = 3; k < poly.size(); ++k) {
    v += poly[k] * static_cast<double>(k * (k - 1) * (k - 2)) * xp;
    xp *= x;
  }
  if (cos_amp != 0.0) {
    const double w = cos_freq;
    v += cos_amp * w * w * w * std::sin(w * x + cos_phase);
  }
  if (pend_kappa != 0.0) v -= pend_kappa * std::sin(x - pend_l * std::sin(t));
  return v;
}

namespace {

bool power_of_two(int n) { return n > 1 && (n & (n - 1)) == 0; }

}  // namespace

WignerGrid WignerGrid::zeros(int nx, int np, double x_min, double x_max,
                             double hbar, Potential pot, double mass) {
  if (!power_of_two(nx) || !power_of_two(np))
    throw std::invalid_argument("WignerGrid: nx, np must be powers of two");
  if (x_max <= x_min) throw std::invalid_argument("WignerGrid: empty box");
  WignerGrid g;
  g.nx = nx;
  g.np = np;
  g.x_min = x_min;
  g.dx = (x_max - x_min) / nx;
  g.hbar = hbar;
  g.dp = 2.0 * kPi * hbar / (nx * g.dx);
  g.p_min = -0.5 * np * g.dp;
  g.mass = mass;
  g.potential = std::move(pot);
  g.w = RMat::Zero(nx, np);
  return g;
}

void WignerGrid::validate() const {
  if (!power_of_two(nx) || !power_of_two(np))
    throw std::invalid_argument("WignerGrid: nx, np must be powers of two");
  if (std::abs(dp * nx * dx - 2.0 * kPi * hbar) > 1e-9 * 2.0 * kPi * hbar)
    throw std::invalid_argument("WignerGrid: p grid is not the dual of the x grid");
  if (std::abs(normalization() - 1.0) > 1e-8)
    throw std::invalid_argument("WignerGrid: not normalized");
}

double WignerGrid::mean_x() const {
  double m = 0.0;
  for (int i = 0; i < nx; ++i) m += x(i) * w.row(i).sum();
  return m * cell();
}

double WignerGrid::mean_p() const {
  double m = 0.0;
  for (int j = 0; j < np; ++j) m += p(j) * w.col(j).sum();
  return m * cell();
}

double WignerGrid::var_x() const {
  const double mx = mean_x();
  double v = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double d = x(i) - mx;
    v += d * d * w.row(i).sum();
  }
  return v * cell();
}

double WignerGrid::var_p() const {
  const double mp = mean_p();
  double v = 0.0;
  for (int j = 0; j < np; ++j) {
    const double d = p(j) - mp;
    v += d * d * w.col(j).sum();
  }
  return v * cell();
}

WignerGrid wigner_transform(const qbm::PositionGridState& rho, double hbar,
                            Potential pot, double mass) {
  rho.validate();
  const int n = rho.n;
  const double dx = rho.dx();

  // Band-limited upsampling of rho onto the half-step grid: the slice
  // rho(x - y/2, x + y/2) then lands on sample points for every y = m dx.
  const int n2 = 2 * n;
  Mat fine = Mat::Zero(n2, n2);
  {
    Mat f = rho.rho;
    FftPlans plans(n, n);
    plans.cols_forward(f);
    plans.rows_forward(f);
    const int h = n / 2;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const int a2 = (a <= h) ? a : a + n;
        const int b2 = (b <= h) ? b : b + n;
        fine(a2, b2) = f(a, b);
      }
    // split the Nyquist frequency symmetrically
    for (int b = 0; b < n2; ++b) {
      const cxd v = fine(h, b);
      fine(h, b) = 0.5 * v;
      fine(h + n, b) = 0.5 * v;
    }
    for (int a = 0; a < n2; ++a) {
      const cxd v = fine(a, h);
      fine(a, h) = 0.5 * v;
      fine(a, h + n) = 0.5 * v;
    }
    FftPlans plans2(n2, n2);
    plans2.cols_backward(fine);
    plans2.rows_backward(fine);
    fine /= static_cast<double>(n) * n;  // preserves original sample values
  }

  WignerGrid g =
      WignerGrid::zeros(n, n, rho.x_min, rho.x_max, hbar, std::move(pot), mass);
  FftPlans col_plans(n, n);
  Mat chi(n, n);  // chi(m, i): y index m is column-contiguous
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m) {
      const int ms = (m < n / 2) ? m : m - n;  // signed y index
      const int ia = ((2 * i - ms) % n2 + n2) % n2;
      const int ib = ((2 * i + ms) % n2 + n2) % n2;
      chi(m, i) = fine(ia, ib);
    }
  col_plans.cols_backward(chi);  // sum_m chi(m) e^{+2 pi i j' m / n}
  const double scale = dx / (2.0 * kPi * hbar);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int jp = ((j - n / 2) % n + n) % n;
      g.w(i, j) = chi(jp, i).real() * scale;
    }
  return g;
}

WignerGrid build_cat(int nx, int np, double x_min, double x_max, double hbar,
                     double x0, double xi, CatKind kind, Potential pot,
                     double mass) {
  if (xi <= 0.0 || x0 < 0.0)
    throw std::invalid_argument("build_cat: need xi > 0, x0 >= 0");
  WignerGrid g =
      WignerGrid::zeros(nx, np, x_min, x_max, hbar, std::move(pot), mass);

  const double sp = hbar / xi;  // momentum width scale of each packet
  if (kind == CatKind::position) {
    if (g.dx > 0.25 * xi || (x0 > 0 && g.dp > 0.25 * hbar / (2.0 * x0)))
      throw std::invalid_argument("build_cat: fringes or packets unresolvable");
  } else {
    if (g.dp > 0.25 * sp || (x0 > 0 && g.dx > 0.25 * hbar / (2.0 * x0)))
      throw std::invalid_argument("build_cat: fringes or packets unresolvable");
  }

  // W = G(a - a0, b) + G(a + a0, b) + 2 e^{-a^2/xa^2 - b^2/xb^2} cos(2 a0 b / hbar)
  // in the (separation, conjugate) frame; the interference peak is twice
  // the packet peak, as the transform of the two-packet pure state gives.
  auto assemble = [&](double a, double b, double a0, double xa, double xb) {
    const double g1 = std::exp(-(a - a0) * (a - a0) / (xa * xa) - b * b / (xb * xb));
    const double g2 = std::exp(-(a + a0) * (a + a0) / (xa * xa) - b * b / (xb * xb));
    const double fr = 2.0 * std::exp(-a * a / (xa * xa) - b * b / (xb * xb)) *
                      std::cos(2.0 * a0 * b / hbar);
    return g1 + g2 + fr;
  };

  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < np; ++j) {
      if (kind == CatKind::position)
        g.w(i, j) = assemble(g.x(i), g.p(j), x0, xi, sp);
      else
        g.w(i, j) = assemble(g.p(j), g.x(i), x0, sp, xi);
    }
  g.renormalize();
  return g;
}

namespace {

struct StepMultipliers {
  // kinetic: exp(-i k_a (p_j / M) tau), for tau = dt/2 and dt
  Mat kin_half, kin_full;
  // static part of the potential/diffusion multiplier, (m, i) layout
  Mat pot_static;
  std::vector<double> kx, ym;
};

}  // namespace

EvolveStats evolve(WignerGrid& grid, EvolveMode mode, double D, double dt,
                   int steps) {
  grid.validate();
  if (D < 0 || dt <= 0 || steps < 0)
    throw std::invalid_argument("evolve: bad D/dt/steps");
  const int nx = grid.nx, np = grid.np;
  const double hbar = grid.hbar, M = grid.mass;
  const double dy = 2.0 * kPi * hbar / (np * grid.dp);
  const Potential& pot = grid.potential;
  const bool driven = pot.time_dependent();

  StepMultipliers mult;
  mult.kx.resize(nx);
  for (int a = 0; a < nx; ++a) mult.kx[a] = dft_wavenumber(a, nx, grid.dx);
  mult.ym.resize(np);
  for (int m = 0; m < np; ++m) {
    const int ms = (m < np / 2) ? m : m - np;
    mult.ym[m] = ms * dy;
  }

  mult.kin_half.resize(nx, np);
  mult.kin_full.resize(nx, np);
  for (int a = 0; a < nx; ++a)
    for (int j = 0; j < np; ++j) {
      const double ph = mult.kx[a] * (grid.p(j) / M);
      mult.kin_half(a, j) = std::polar(1.0, -ph * 0.5 * dt);
      mult.kin_full(a, j) = std::polar(1.0, -ph * dt);
    }

  // time-independent pieces of the potential multiplier, with diffusion
  Potential stat = pot;
  stat.pend_kappa = 0.0;
  stat.drive_amp = 0.0;
  mult.pot_static.resize(nx, np);  // (i, m) layout
  for (int i = 0; i < nx; ++i)
    for (int m = 0; m < np; ++m) {
      const double y = mult.ym[m];
      const double damp = std::exp(-D * y * y * dt / (hbar * hbar));
      double phase;
      if (mode == EvolveMode::moyal)
        phase = -(stat.value(grid.x(i) - 0.5 * y, 0.0) -
                  stat.value(grid.x(i) + 0.5 * y, 0.0)) *
                dt / hbar;
      else
        phase = stat.d1(grid.x(i), 0.0) * y * dt / hbar;
      mult.pot_static(i, m) = damp * std::polar(1.0, phase);
    }

  FftPlans plans(nx, np);  // (x, p) layout
  Mat c = grid.w.cast<cxd>();

  auto kinetic = [&](const Mat& k) {
    plans.cols_forward(c);
    c.array() *= k.array();
    plans.cols_backward(c);
    c /= static_cast<double>(nx);
  };

  auto potential_step = [&](double t_mid) {
    plans.rows_forward(c);  // FFT over the p index: c(i, m) with y_m dual to p
    c.array() *= mult.pot_static.array();
    if (driven) {
      if (pot.drive_amp != 0.0 && mode == EvolveMode::moyal) {
        // a drive linear in x shifts momentum rigidly: phase C cos(f t) y
        const double amp = pot.drive_amp * std::cos(pot.drive_freq * t_mid);
        for (int m = 0; m < np; ++m)
          c.col(m) *= std::polar(1.0, amp * mult.ym[m] * dt / hbar);
      }
      if (pot.pend_kappa != 0.0 && mode == EvolveMode::moyal) {
        // V(x - y/2) - V(x + y/2) = -2 kappa sin(x - l sin t) sin(y/2)
        const double phi = pot.pend_l * std::sin(t_mid);
        std::vector<double> sy(np);
        for (int m = 0; m < np; ++m) sy[m] = std::sin(0.5 * mult.ym[m]);
        for (int i = 0; i < nx; ++i) {
          const double a =
              2.0 * pot.pend_kappa * std::sin(grid.x(i) - phi) * dt / hbar;
          for (int m = 0; m < np; ++m)
            c(i, m) *= std::polar(1.0, a * sy[m]);
        }
      }
      if (mode == EvolveMode::liouville) {
        // time-dependent part of the classical force; phases walk as powers
        for (int i = 0; i < nx; ++i) {
          double f = 0.0;
          if (pot.pend_kappa != 0.0)
            f += pot.pend_kappa *
                 std::sin(grid.x(i) - pot.pend_l * std::sin(t_mid));
          if (pot.drive_amp != 0.0)
            f += pot.drive_amp * std::cos(pot.drive_freq * t_mid);
          if (f == 0.0) continue;
          const cxd z = std::polar(1.0, f * dy * dt / hbar);
          cxd zp(1.0, 0.0);
          for (int m = 0; m < np / 2; ++m) {
            c(i, m) *= zp;
            zp *= z;
          }
          cxd zn = std::polar(1.0, -f * dy * dt / hbar * (np / 2.0));
          for (int m = np / 2; m < np; ++m) {
            c(i, m) *= zn;
            zn *= z;
          }
        }
      }
    }
    plans.rows_backward(c);
    c /= static_cast<double>(np);
  };

  EvolveStats stats;
  if (steps > 0) {
    kinetic(mult.kin_half);
    for (int s = 0; s < steps; ++s) {
      potential_step(grid.time + 0.5 * dt);
      if (s + 1 < steps)
        kinetic(mult.kin_full);
      else
        kinetic(mult.kin_half);
      grid.time += dt;
    }
    grid.w = c.real();
  }

  const double norm = grid.normalization();
  stats.norm_drift = std::abs(norm - 1.0);
  stats.min_w = grid.w.minCoeff();
  if (stats.norm_drift > 1e-5)
    throw std::runtime_error("evolve: normalization drift exceeded 1e-5");
  return stats;
}

PurityReport linear_entropy(const WignerGrid& grid) {
  const double purity =
      2.0 * kPi * grid.hbar * grid.w.squaredNorm() * grid.cell();
  return {purity, 1.0 - purity};
}

RateReport entropy_production_rate(const std::vector<double>& t,
                                   const std::vector<double>& purity,
                                   double t1, double t2) {
  if (t.size() != purity.size() || t.size() < 2)
    throw std::invalid_argument("entropy_production_rate: bad series");
  std::vector<double> xs, ys;
  bool monotone = true;
  double prev = 0.0;
  bool first = true;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t1 || t[i] > t2) continue;
    if (purity[i] <= 0)
      throw std::invalid_argument("entropy_production_rate: purity <= 0");
    if (!first && purity[i] > prev + 1e-12) monotone = false;
    prev = purity[i];
    first = false;
    xs.push_back(t[i]);
    ys.push_back(-std::log(purity[i]));
  }
  if (xs.size() < 2)
    throw std::invalid_argument("entropy_production_rate: window too narrow");
  return {linear_fit(xs, ys).slope, monotone};
}

ScaleReport scale_report(double Lambda, double Delta_p0, double chi,
                         double I_action, double gamma, double lambda_T,
                         double hbar) {
  if (Lambda <= 0 || Delta_p0 <= 0 || chi <= 0 || I_action <= 0 || gamma <= 0 ||
      lambda_T <= 0 || hbar <= 0)
    throw std::invalid_argument("scale_report: all inputs must be positive");
  ScaleReport r;
  r.t_hbar = std::log(Delta_p0 * chi / hbar) / Lambda;
  r.t_r = std::log(I_action / hbar) / Lambda;
  r.sub_planck_a = hbar * hbar / I_action;
  r.ell_c = lambda_T * std::sqrt(Lambda / (2.0 * gamma));
  r.sigma_c = hbar / r.ell_c;
  return r;
}

FeatureScales measure_feature_scales(const WignerGrid& grid, double quantile) {
  const int nx = grid.nx, np = grid.np;
  Mat c = grid.w.cast<cxd>();
  FftPlans plans(nx, np);
  plans.cols_forward(c);
  plans.rows_forward(c);

  const double dy = 2.0 * kPi * grid.hbar / (np * grid.dp);
  // marginal spectral power along each axis
  RVec px = RVec::Zero(nx / 2 + 1), py = RVec::Zero(np / 2 + 1);
  for (int a = 0; a < nx; ++a) {
    const int fa = std::min(a, nx - a);
    for (int m = 0; m < np; ++m) {
      const int fm = std::min(m, np - m);
      const double w2 = std::norm(c(a, m));
      px(fa) += w2;
      py(fm) += w2;
    }
  }
  auto radius = [&](const RVec& pw, double unit) {
    const double total = pw.sum();
    double cum = 0.0;
    for (int r = 0; r < pw.size(); ++r) {
      cum += pw(r);
      if (cum >= quantile * total) return std::max(r, 1) * unit;
    }
    return (pw.size() - 1.0) * unit;
  };
  FeatureScales f;
  const double kx99 = radius(px, 2.0 * kPi / (nx * grid.dx));
  const double y99 = radius(py, dy);
  f.dx_struct = 1.0 / kx99;
  f.dp_struct = grid.hbar / y99;
  return f;
}

double correction_diagnostic(const WignerGrid& grid) {
  const int nx = grid.nx, np = grid.np;
  const double hbar = grid.hbar;
  const double dy = 2.0 * kPi * hbar / (np * grid.dp);

  FftPlans chi_plans(np, nx);
  Mat chi1 = grid.w.cast<cxd>().transpose();
  chi_plans.cols_forward(chi1);
  Mat chi3 = chi1;
  for (int m = 0; m < np; ++m) {
    const int ms = (m < np / 2) ? m : m - np;
    if (ms == np / 2 || -ms == np / 2) {  // drop Nyquist for odd derivatives
      chi1.row(m).setZero();
      chi3.row(m).setZero();
      continue;
    }
    const cxd iy(0.0, ms * dy / hbar);
    chi1.row(m) *= iy;
    chi3.row(m) *= iy * iy * iy;
  }
  chi_plans.cols_backward(chi1);
  chi_plans.cols_backward(chi3);
  chi1 /= static_cast<double>(np);
  chi3 /= static_cast<double>(np);

  const double wmax = grid.w.cwiseAbs().maxCoeff();
  double num = 0.0, den = 0.0;
  long count = 0;
  for (int i = 0; i < nx; ++i) {
    const double v1 = grid.potential.d1(grid.x(i), grid.time);
    const double v3 = grid.potential.d3(grid.x(i), grid.time);
    for (int j = 0; j < np; ++j) {
      if (std::abs(grid.w(i, j)) <= 0.01 * wmax) continue;
      num += std::abs(hbar * hbar / 24.0 * v3 * chi3(j, i).real());
      den += std::abs(v1 * chi1(j, i).real());
      ++count;
    }
  }
  if (count == 0 || den == 0.0) return 0.0;
  return num / den;
}

}  // namespace wigner
}  // namespace einselect
