#include "einselect/sieve.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace einselect {
namespace sieve {

GaussianCandidate::GaussianCandidate(double s, double m, double omega,
                                     double hb, double x0, double p0)
    : center_x(x0), center_p(p0), squeeze(s), M(m), Omega(omega), hbar(hb) {
  if (s <= 0 || m <= 0 || omega <= 0 || hb <= 0)
    throw std::invalid_argument("GaussianCandidate: positive s, M, Omega, hbar");
}

double purity_loss_rate(const GaussianCandidate& c, const qbm::QbmParams& p) {
  p.validate();
  const double eta = 2.0 * p.M * p.gamma0;
  return -4.0 * eta * p.kB * p.T / (p.hbar * p.hbar) * c.var_x();
}

GridLossRate purity_loss_rate(const qbm::PositionGridState& state,
                              const qbm::QbmParams& p) {
  p.validate();
  state.validate();
  const double eta = 2.0 * p.M * p.gamma0;
  const double pre = 4.0 * eta * p.kB * p.T / (p.hbar * p.hbar);
  const double pur = state.purity();
  GridLossRate r{0.0, pur < 1.0 - 1e-8};
  const int n = state.n;
  const double dx = state.dx();
  if (!r.mixed_input) {
    r.rate = -pre * state.var_x();
    return r;
  }
  // Tr(rho^2 x^2) - Tr((rho x)^2), with the grid measure dx per trace sum
  double t1 = 0.0, t2r = 0.0;
  cxd t2(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cxd rij = state.rho(i, j), rji = state.rho(j, i);
      const double xi = state.x(i), xj = state.x(j);
      t1 += (rij * rji).real() * xj * xj;
      t2 += rij * xj * rji * xi;
    }
  t2r = t2.real();
  r.rate = -pre * (t1 - t2r) * dx * dx + 2.0 * p.gamma0 * pur;
  return r;
}

double cycle_averaged_loss(const GaussianCandidate& c, double D) {
  return -2.0 * D * (c.var_x() + c.var_p() / (c.M * c.Omega * c.M * c.Omega));
}

namespace {

struct Scored {
  double purity;
  double entropy;
};

Scored score_qbm(const GaussianCandidate& g, const QbmDynamics& dyn,
                 double horizon) {
  const double sx_max =
      std::sqrt(std::max(g.var_x(), g.var_p() / (g.M * g.Omega * g.M * g.Omega)));
  double half = dyn.box_half;
  if (half <= 0.0) half = std::abs(g.center_x) + 8.0 * sx_max;
  double dt = dyn.dt;
  if (dt <= 0.0) dt = 2.0 * kPi / g.Omega / 2048.0;
  const int steps = std::max(1, static_cast<int>(std::lround(horizon / dt)));
  dt = horizon / steps;

  auto pot = [m = g.M, om = g.Omega](double x) { return 0.5 * m * om * om * x * x; };
  qbm::PositionGridState st = qbm::PositionGridState::gaussian(
      g.center_x, g.center_p, std::sqrt(g.var_x()), -half, half, dyn.grid_n,
      pot, g.hbar);
  qbm::high_t_evolve(st, dyn.params, dt, steps);

  Scored s;
  s.purity = st.purity();
  Eigen::SelfAdjointEigenSolver<Mat> es(st.rho * st.dx(), Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > 1e-12) h -= lam * std::log2(lam);
  }
  s.entropy = h;
  return s;
}

Scored score_spinbath(const Vec& amps, const SpinBathDynamics& dyn,
                      double horizon) {
  spinbath::SpinBathParams params(dyn.couplings, dyn.env, amps(0), amps(1));
  const DensityMatrix rho = spinbath::evolve_reduced(params, horizon);
  return {hilbert::purity(rho), hilbert::von_neumann_entropy(rho)};
}

Scored score_wigner(const GaussianCandidate& g, const WignerDynamics& dyn,
                    double horizon) {
  const double sx_max =
      std::sqrt(std::max(g.var_x(), g.var_p() / (g.M * g.Omega * g.M * g.Omega)));
  double half = dyn.box_half;
  if (half <= 0.0) half = std::abs(g.center_x) + 8.0 * sx_max;
  double dt = dyn.dt;
  if (dt <= 0.0) dt = 2.0 * kPi / g.Omega / 2048.0;
  const int steps = std::max(1, static_cast<int>(std::lround(horizon / dt)));
  dt = horizon / steps;

  // Gaussian in the G ~ exp(-x^2/xi^2) convention: Var x = xi^2/2
  const double xi = std::sqrt(2.0 * g.var_x());
  wigner::WignerGrid grid = wigner::WignerGrid::zeros(
      dyn.nx, dyn.np, -half, half, g.hbar, dyn.potential, dyn.mass);
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.np; ++j) {
      const double x = grid.x(i) - g.center_x, p = grid.p(j) - g.center_p;
      grid.w(i, j) = std::exp(-x * x / (xi * xi) -
                              p * p * xi * xi / (g.hbar * g.hbar));
    }
  grid.renormalize();
  wigner::evolve(grid, wigner::EvolveMode::moyal, dyn.D, dt, steps);
  const double pur = wigner::linear_entropy(grid).purity;
  return {pur, 1.0 - pur};  // linear entropy stands in for vN on this route
}

}  // namespace

std::vector<SieveOutcome> run_sieve(const std::vector<SieveCandidate>& candidates,
                                    const SieveDynamics& dynamics,
                                    double horizon, SieveScore score) {
  if (candidates.empty())
    throw std::invalid_argument("run_sieve: no candidates");
  if (horizon <= 0) throw std::invalid_argument("run_sieve: horizon > 0");

  std::vector<SieveOutcome> out;
  for (size_t idx = 0; idx < candidates.size(); ++idx) {
    const auto& cand = candidates[idx];
    SieveOutcome o;
    o.label = cand.label;
    o.candidate_index = static_cast<int>(idx);
    try {
      Scored s{};
      if (std::holds_alternative<QbmDynamics>(dynamics)) {
        s = score_qbm(std::get<GaussianCandidate>(cand.payload),
                      std::get<QbmDynamics>(dynamics), horizon);
      } else if (std::holds_alternative<SpinBathDynamics>(dynamics)) {
        s = score_spinbath(std::get<Vec>(cand.payload),
                           std::get<SpinBathDynamics>(dynamics), horizon);
      } else {
        s = score_wigner(std::get<GaussianCandidate>(cand.payload),
                         std::get<WignerDynamics>(dynamics), horizon);
      }
      o.purity_after = s.purity;
      o.entropy_gained = s.entropy;
    } catch (const std::exception& e) {
      o.ok = false;
      o.error = e.what();
    }
    out.push_back(std::move(o));
  }

  std::stable_sort(out.begin(), out.end(), [&](const SieveOutcome& a,
                                               const SieveOutcome& b) {
    if (a.ok != b.ok) return a.ok;  // failures sink to the bottom
    if (score == SieveScore::purity) return a.purity_after > b.purity_after;
    return a.entropy_gained < b.entropy_gained;
  });

  // tied candidates (within 1e-6 on the active score) share a rank
  int rank = 0;
  for (size_t i = 0; i < out.size(); ++i) {
    if (i > 0) {
      const double prev = (score == SieveScore::purity) ? out[i - 1].purity_after
                                                        : out[i - 1].entropy_gained;
      const double cur = (score == SieveScore::purity) ? out[i].purity_after
                                                       : out[i].entropy_gained;
      if (std::abs(cur - prev) > 1e-6 || out[i].ok != out[i - 1].ok)
        rank = static_cast<int>(i);
    }
    out[i].rank = rank;
  }
  return out;
}

InfoRates gaussian_info_rates(double I_action, const qbm::QbmParams& p) {
  p.validate();
  if (I_action < 1.0)
    throw std::invalid_argument("gaussian_info_rates: I >= 1 (hbar units)");
  if (p.Omega <= 0)
    throw std::invalid_argument("gaussian_info_rates: needs Omega > 0");
  InfoRates r;
  r.i_dot = p.gamma0 * p.kB * p.T / (p.hbar * p.Omega);
  r.h_infinite = (I_action == 1.0);
  r.h_dot = r.h_infinite
                ? std::numeric_limits<double>::infinity()
                : r.i_dot * std::log2((I_action + 1.0) / (I_action - 1.0));
  r.purity_dot = r.i_dot / (I_action * I_action);
  return r;
}

}  // namespace sieve
}  // namespace einselect
