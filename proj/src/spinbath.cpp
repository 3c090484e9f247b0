#include "einselect/spinbath.hpp"

#include <cmath>

namespace einselect {
namespace spinbath {

SpinBathParams::SpinBathParams(std::vector<double> g,
                               std::vector<std::pair<cxd, cxd>> e, cxd a_in,
                               cxd b_in, double hbar_in)
    : couplings(std::move(g)), env(std::move(e)), a(a_in), b(b_in), hbar(hbar_in) {
  if (couplings.size() != env.size())
    throw std::invalid_argument("SpinBathParams: couplings/env length mismatch");
  if (couplings.empty() || couplings.size() > 24)
    throw std::invalid_argument("SpinBathParams: need 1 <= N <= 24 spins");
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12)
    throw std::invalid_argument("SpinBathParams: system state not normalized");
  for (const auto& [al, be] : env)
    if (std::abs(std::norm(al) + std::norm(be) - 1.0) > 1e-12)
      throw std::invalid_argument("SpinBathParams: env spin not normalized");
  if (hbar <= 0.0) throw std::invalid_argument("SpinBathParams: hbar > 0");
}

SpinBathParams SpinBathParams::random(int n, cxd a, cxd b, double g0, Rng& rng) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> g(n);
  std::vector<std::pair<cxd, cxd>> env(n);
  for (int k = 0; k < n; ++k) {
    g[k] = g0 * u(rng);
    const Vec s = haar_state(2, rng);
    env[k] = {s(0), s(1)};
  }
  return SpinBathParams(std::move(g), std::move(env), a, b);
}

cxd decoherence_factor(const SpinBathParams& params, double t) {
  cxd r(1.0, 0.0);
  for (int k = 0; k < params.spins(); ++k) {
    const double imbalance =
        std::norm(params.env[k].first) - std::norm(params.env[k].second);
    const double phase = 2.0 * params.couplings[k] * t;
    r *= cxd(std::cos(phase), imbalance * std::sin(phase));
  }
  return r;
}

DensityMatrix evolve_reduced(const SpinBathParams& params, double t) {
  const cxd r = decoherence_factor(params, t);
  Mat m(2, 2);
  m(0, 0) = std::norm(params.a);
  m(1, 1) = std::norm(params.b);
  m(0, 1) = params.a * std::conj(params.b) * r;
  m(1, 0) = std::conj(m(0, 1));
  return DensityMatrix(std::move(m), {2});
}

Coherence asymptotic_coherence(const SpinBathParams& params) {
  Coherence c{1.0, 1.0};
  for (int k = 0; k < params.spins(); ++k) {
    const double pa = std::norm(params.env[k].first);
    const double pb = std::norm(params.env[k].second);
    c.bound *= 0.5 * (1.0 + (pa - pb) * (pa - pb));
    // sum_j p_j^2 factorizes over spins for a product initial state
    c.time_avg *= pa * pa + pb * pb;
  }
  return c;
}

std::vector<BlochPoint> bloch_trajectory(const SpinBathParams& params,
                                         const std::vector<double>& times) {
  std::vector<BlochPoint> out;
  out.reserve(times.size());
  const cxd ab = params.a * std::conj(params.b);
  const double z = std::norm(params.a) - std::norm(params.b);
  for (double t : times) {
    const cxd w = ab * decoherence_factor(params, t);
    out.push_back({2.0 * w.real(), 2.0 * w.imag(), z});
  }
  return out;
}

DephasingResult dephasing_ensemble(const PhaseSampler& sampler,
                                   const PureState& state, int n_realizations,
                                   Rng& rng) {
  if (n_realizations < 1)
    throw std::invalid_argument("dephasing_ensemble: need >= 1 realizations");
  if (state.subsystems() != 2)
    throw std::invalid_argument("dephasing_ensemble: expects an S (x) A state");
  const int ds = state.dims[0], da = state.dims[1];

  DephasingResult res;
  Mat avg = Mat::Zero(state.dim(), state.dim());
  for (int r = 0; r < n_realizations; ++r) {
    const RVec phases = sampler(da, rng);
    if (phases.size() != da)
      throw std::invalid_argument("dephasing_ensemble: sampler returned wrong size");
    Vec v = state.amplitudes;
    for (int s = 0; s < ds; ++s)
      for (int j = 0; j < da; ++j)
        v(static_cast<long>(s) * da + j) *= std::exp(cxd(0, phases(j)));
    const Mat proj = v * v.adjoint();
    res.purities.push_back(proj.squaredNorm());
    avg += proj;
  }
  avg /= static_cast<double>(n_realizations);
  avg = (avg + avg.adjoint().eval()) / 2.0;
  res.average = DensityMatrix(std::move(avg), state.dims, state.labels);
  return res;
}

}  // namespace spinbath
}  // namespace einselect
