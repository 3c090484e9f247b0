#include "einselect/measurement.hpp"

#include <cmath>

namespace einselect {
namespace measurement {

PureState cnot_apply(const PureState& state, CnotDirection direction) {
  if (state.dims != std::vector<int>{2, 2})
    throw std::invalid_argument("cnot_apply: needs a 2-qubit state");
  Vec out(4);
  const Vec& a = state.amplitudes;
  if (direction == CnotDirection::logical) {
    // |c t> -> |c, t xor c>
    out(0) = a(0);
    out(1) = a(1);
    out(2) = a(3);
    out(3) = a(2);
  } else {
    // roles reversed: target register controls
    out(0) = a(0);
    out(1) = a(3);
    out(2) = a(2);
    out(3) = a(1);
  }
  return PureState(std::move(out), state.dims, state.labels);
}

CShiftSpec::CShiftSpec(int n, int N, int G)
    : system_dim(n), apparatus_dim(N), gain(G) {
  if (n < 2 || N < 2) throw std::invalid_argument("CShiftSpec: dims >= 2");
  if (G < 1) throw std::invalid_argument("CShiftSpec: gain >= 1");
}

PureState cshift_apply(const CShiftSpec& spec, const PureState& state) {
  if (state.dims != std::vector<int>{spec.system_dim, spec.apparatus_dim})
    throw std::invalid_argument("cshift_apply: state dims do not match spec");
  const int n = spec.system_dim, N = spec.apparatus_dim, G = spec.gain;
  Vec out(static_cast<long>(n) * N);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < N; ++k)
      out(static_cast<long>(j) * N + (k + static_cast<long>(G) * j) % N) =
          state.amplitudes(static_cast<long>(j) * N + k);
  return PureState(std::move(out), state.dims, state.labels);
}

Mat conjugate_basis(int dim) {
  if (dim < 2) throw std::invalid_argument("conjugate_basis: dim >= 2");
  Mat b(dim, dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int l = 0; l < dim; ++l)
    for (int k = 0; k < dim; ++k)
      b(l, k) = norm * std::exp(cxd(0, 2.0 * kPi * k * l / dim));
  return b;
}

ActionReport premeasurement_action(const std::vector<double>& probabilities,
                                   const std::vector<double>& overlaps) {
  if (probabilities.size() != overlaps.size() || probabilities.empty())
    throw std::invalid_argument("premeasurement_action: paired inputs required");
  double psum = 0.0, action = 0.0;
  for (size_t j = 0; j < probabilities.size(); ++j) {
    if (overlaps[j] < 0.0 || overlaps[j] > 1.0 + 1e-12)
      throw std::invalid_argument("premeasurement_action: overlap outside [0,1]");
    psum += probabilities[j];
    action += probabilities[j] * std::acos(std::min(overlaps[j], 1.0));
  }
  if (std::abs(psum - 1.0) > 1e-9)
    throw std::invalid_argument("premeasurement_action: probabilities must sum to 1");
  const double n = static_cast<double>(probabilities.size());
  ActionReport r;
  r.action = action;
  r.lower_bound = std::asin(std::sqrt(1.0 - 1.0 / n));
  r.per_bit = action / std::log2(n);
  return r;
}

Vec ApparatusPacket::amplitudes_at(int apparatus_dim, int l) const {
  Vec a = Vec::Zero(apparatus_dim);
  if (dispersion <= 0.0) {
    a(((l % apparatus_dim) + apparatus_dim) % apparatus_dim) = 1.0;
    return a;
  }
  const int reach = static_cast<int>(std::ceil(6.0 * dispersion));
  for (int j = -reach; j <= reach; ++j) {
    const int idx = (((l + j) % apparatus_dim) + apparatus_dim) % apparatus_dim;
    a(idx) += std::exp(-0.5 * j * j / (dispersion * dispersion));
  }
  a /= a.norm();
  return a;
}

Vec ApparatusPacket::amplitudes(int apparatus_dim) const {
  return amplitudes_at(apparatus_dim, center);
}

AmplifyResult amplify(const CShiftSpec& spec, const ApparatusPacket& packet,
                      const PureState& system) {
  if (system.dim() != spec.system_dim)
    throw std::invalid_argument("amplify: system dim mismatch");
  const int n = spec.system_dim, N = spec.apparatus_dim, G = spec.gain;

  std::vector<Vec> records(n);
  for (int k = 0; k < n; ++k)
    records[k] = packet.amplitudes_at(N, packet.center + G * k);

  Vec joint = Vec::Zero(static_cast<long>(n) * N);
  for (int k = 0; k < n; ++k)
    joint.segment(static_cast<long>(k) * N, N) = system.amplitudes(k) * records[k];

  RMat dist(n, n);
  for (int k = 0; k < n; ++k)
    for (int kp = 0; kp < n; ++kp)
      dist(k, kp) = std::norm(records[k].dot(records[kp]));

  AmplifyResult r{PureState(std::move(joint), {n, N}), std::move(dist),
                  spec.wraps()};
  return r;
}

DensityMatrix observer_description(ObserverPrior prior,
                                   const std::vector<PureState>& states,
                                   const std::vector<double>& probs,
                                   std::optional<int> outcome) {
  if (states.empty() || states.size() != probs.size())
    throw std::invalid_argument("observer_description: states/probs mismatch");
  const int n = static_cast<int>(states.size());
  const int d = static_cast<int>(states.front().dim());
  for (const auto& s : states)
    if (s.dim() != d)
      throw std::invalid_argument("observer_description: uneven system dims");
  double psum = 0.0;
  for (double p : probs) psum += p;
  if (std::abs(psum - 1.0) > 1e-9)
    throw std::invalid_argument("observer_description: probs must sum to 1");

  if (prior == ObserverPrior::outsider && outcome)
    throw std::invalid_argument("observer_description: outsider takes no outcome");
  if (prior != ObserverPrior::outsider) {
    if (!outcome)
      throw std::invalid_argument("observer_description: outcome required");
    if (*outcome < 0 || *outcome >= n)
      throw std::invalid_argument("observer_description: invalid outcome index");
  }

  const int dp = n + 1;  // prior register; index n = |A_rho>
  const long full = static_cast<long>(dp) * n * d;
  auto basis_prior = [&](int i) {
    Vec v = Vec::Zero(dp);
    v(i) = 1.0;
    return v;
  };
  auto basis_rec = [&](int i) {
    Vec v = Vec::Zero(n);
    v(i) = 1.0;
    return v;
  };

  Mat out = Mat::Zero(full, full);
  auto add_term = [&](double w, int prior_idx, int rec_idx, const Vec& sys) {
    Vec v = Vec::Zero(full);
    const Vec pv = basis_prior(prior_idx), rv = basis_rec(rec_idx);
    for (int a = 0; a < dp; ++a) {
      if (pv(a) == cxd(0, 0)) continue;
      for (int b = 0; b < n; ++b) {
        if (rv(b) == cxd(0, 0)) continue;
        v.segment((static_cast<long>(a) * n + b) * d, d) = pv(a) * rv(b) * sys;
      }
    }
    out.noalias() += w * (v * v.adjoint());
  };

  switch (prior) {
    case ObserverPrior::insider:
      add_term(1.0, *outcome, *outcome, states[*outcome].amplitudes);
      break;
    case ObserverPrior::discoverer:
      add_term(1.0, n, *outcome, states[*outcome].amplitudes);
      break;
    case ObserverPrior::outsider:
      for (int i = 0; i < n; ++i) add_term(probs[i], n, i, states[i].amplitudes);
      break;
  }
  return DensityMatrix(std::move(out), {dp, n, d},
                       {"A_rho", "A", "S"});
}

}  // namespace measurement
}  // namespace einselect
