#include "einselect/darwinism.hpp"

#include <cmath>

namespace einselect {
namespace darwinism {

BranchState::BranchState(cxd a_in, cxd b_in, std::vector<Vec> r0,
                         std::vector<Vec> r1)
    : a(a_in), b(b_in), records0(std::move(r0)), records1(std::move(r1)) {
  if (records0.size() != records1.size())
    throw std::invalid_argument("BranchState: record lists of unequal length");
  if (records0.size() > 20)
    throw std::invalid_argument("BranchState: N <= 20");
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12)
    throw std::invalid_argument("BranchState: |a|^2 + |b|^2 != 1");
  for (const auto& rs : {std::cref(records0), std::cref(records1)})
    for (const Vec& r : rs.get())
      if (r.size() != 2 || std::abs(r.squaredNorm() - 1.0) > 1e-12)
        throw std::invalid_argument("BranchState: records must be qubit states");
}

BranchState BranchState::ghz(cxd a, cxd b, int n) {
  Vec zero(2), one(2);
  zero << 1.0, 0.0;
  one << 0.0, 1.0;
  return BranchState(a, b, std::vector<Vec>(n, zero), std::vector<Vec>(n, one));
}

PureState build_branch_state(const BranchState& spec) {
  const int n = spec.environment_size();
  const long dim = 1L << (n + 1);
  Vec branch0 = Vec::Ones(1), branch1 = Vec::Ones(1);
  for (int k = 0; k < n; ++k) {
    Vec next0(branch0.size() * 2), next1(branch1.size() * 2);
    for (long i = 0; i < branch0.size(); ++i) {
      next0.segment(2 * i, 2) = branch0(i) * spec.records0[k];
      next1.segment(2 * i, 2) = branch1(i) * spec.records1[k];
    }
    branch0 = std::move(next0);
    branch1 = std::move(next1);
  }
  Vec amps = Vec::Zero(dim);
  amps.head(dim / 2) = spec.a * branch0;
  amps.tail(dim / 2) = spec.b * branch1;
  amps /= amps.norm();
  return PureState(std::move(amps), std::vector<int>(n + 1, 2));
}

Partition Partition::singletons(int n) {
  Partition p;
  for (int i = 0; i < n; ++i) p.fragments.push_back({i});
  return p;
}

Partition Partition::whole(int n) {
  Partition p;
  p.fragments.emplace_back();
  for (int i = 0; i < n; ++i) p.fragments.back().push_back(i);
  return p;
}

void Partition::validate(int n) const {
  std::vector<bool> seen(n, false);
  for (const auto& f : fragments)
    for (int i : f) {
      if (i < 0 || i >= n || seen[i])
        throw std::invalid_argument("Partition: not disjoint/in-range");
      seen[i] = true;
    }
  for (bool s : seen)
    if (!s) throw std::invalid_argument("Partition: not exhaustive");
}

namespace {

std::vector<int> fragment_with_system(const std::vector<int>& fragment) {
  std::vector<int> keep = {0};
  for (int e : fragment) keep.push_back(e + 1);  // env qubit e lives at slot e+1
  return keep;
}

}  // namespace

double fragment_mutual_info(const PureState& state,
                            const std::vector<int>& fragment, InfoMode mode,
                            const Mat& system_basis) {
  if (fragment.empty())
    throw std::invalid_argument("fragment_mutual_info: empty fragment");
  for (int e : fragment)
    if (e < 0 || e + 1 >= state.subsystems())
      throw std::invalid_argument("fragment_mutual_info: index out of range");

  const DensityMatrix rho_sek =
      hilbert::partial_trace(state, fragment_with_system(fragment));
  if (mode == InfoMode::symmetric)
    return hilbert::mutual_information(rho_sek, {0});

  Mat basis = system_basis;
  if (basis.size() == 0) basis = Mat::Identity(2, 2);
  // J(S:E_k) = H(E_k) - H(E_k | S measured in `basis`)
  return hilbert::measured_mutual_information(rho_sek, 0, basis);
}

RedundancyResult redundancy_ratio(const PureState& state,
                                  const Partition& partition, InfoMode mode,
                                  const Mat& system_basis) {
  partition.validate(state.subsystems() - 1);
  const DensityMatrix rho_s = hilbert::partial_trace(state, {0});
  const double hs = hilbert::von_neumann_entropy(rho_s);
  if (hs < 1e-9)
    throw std::invalid_argument("redundancy_ratio: H(S) = 0, ratio undefined");

  // fragment reduced states do not depend on the measurement basis
  std::vector<DensityMatrix> rho_sek;
  for (const auto& frag : partition.fragments)
    rho_sek.push_back(
        hilbert::partial_trace(state, fragment_with_system(frag)));

  auto total = [&](const Mat& basis) {
    double sum = 0.0;
    for (const auto& rk : rho_sek)
      sum += (mode == InfoMode::symmetric)
                 ? hilbert::mutual_information(rk, {0})
                 : hilbert::measured_mutual_information(rk, 0, basis);
    return sum / hs;
  };

  RedundancyResult r;
  if (mode == InfoMode::symmetric) {
    r.ratio = total(Mat());
    return r;
  }
  if (system_basis.size() != 0) {
    r.system_basis = system_basis;
    r.ratio = total(system_basis);
    return r;
  }
  // Optimize over the system qubit basis: angle grid then refinement.
  auto basis_of = [](double th, double ph) {
    Mat b(2, 2);
    b(0, 0) = std::cos(th / 2);
    b(1, 0) = std::sin(th / 2) * std::exp(cxd(0, ph));
    b(0, 1) = -std::sin(th / 2) * std::exp(cxd(0, -ph));
    b(1, 1) = std::cos(th / 2);
    return b;
  };
  double best = -1.0;
  RVec best_p(2);
  for (double th = 0.0; th <= kPi + 1e-9; th += kPi / 24)
    for (double ph = 0.0; ph < kPi; ph += kPi / 24) {
      const double v = total(basis_of(th, ph));
      if (v > best) {
        best = v;
        best_p << th, ph;
      }
    }
  const RVec refined = nelder_mead(
      [&](const RVec& p) { return -total(basis_of(p(0), p(1))); }, best_p, 0.05,
      300, 1e-12);
  if (total(basis_of(refined(0), refined(1))) > best) best_p = refined;
  r.system_basis = basis_of(best_p(0), best_p(1));
  r.ratio = total(r.system_basis);
  return r;
}

double action_distance(const std::vector<Vec>& records_a,
                       const std::vector<Vec>& records_b) {
  if (records_a.size() != records_b.size())
    throw std::invalid_argument("action_distance: unequal record counts");
  double d = 0.0;
  for (size_t k = 0; k < records_a.size(); ++k) {
    if (records_a[k].size() != records_b[k].size())
      throw std::invalid_argument("action_distance: subsystem dim mismatch");
    const double ov = std::min(std::abs(records_a[k].dot(records_b[k])), 1.0);
    d += std::acos(ov);
  }
  return d / (kPi / 2);
}

cxd decoherence_functional(const DensityMatrix& rho,
                           const std::vector<Mat>& chain_alpha,
                           const std::vector<Mat>& chain_beta,
                           const std::vector<Mat>& unitaries) {
  if (chain_alpha.size() != chain_beta.size())
    throw std::invalid_argument("decoherence_functional: chain length mismatch");
  if (!unitaries.empty() && unitaries.size() != chain_alpha.size())
    throw std::invalid_argument("decoherence_functional: need one unitary per slot");
  auto check_projector = [&](const Mat& p) {
    if (p.rows() != rho.dim() || p.cols() != rho.dim())
      throw std::invalid_argument("decoherence_functional: projector dim");
    if ((p - p.adjoint()).cwiseAbs().maxCoeff() > 1e-10 ||
        (p * p - p).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("decoherence_functional: not a projector");
  };
  Mat m = rho.matrix;
  for (size_t s = 0; s < chain_alpha.size(); ++s) {
    check_projector(chain_alpha[s]);
    check_projector(chain_beta[s]);
    if (!unitaries.empty()) {
      m = unitaries[s] * m * unitaries[s].adjoint();
    }
    m = chain_alpha[s] * m * chain_beta[s];
  }
  return m.trace();
}

long record_rle_size(const std::vector<int>& outcomes) {
  if (outcomes.empty()) return 0;
  long runs = 1;
  for (size_t i = 1; i < outcomes.size(); ++i)
    if (outcomes[i] != outcomes[i - 1]) ++runs;
  return runs;
}

std::vector<CnotSweepRow> cnot_redundancy_sweep(cxd a, cxd b, int n_env) {
  if (n_env < 1 || n_env > 18)
    throw std::invalid_argument("cnot_redundancy_sweep: 1 <= N <= 18");
  const Mat hadamard = [] {
    Mat h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
  }();

  std::vector<CnotSweepRow> rows;
  // after m c-nots the first m environment qubits copy the pointer branch
  for (int m = 0; m <= n_env; ++m) {
    Vec zero(2), one(2);
    zero << 1.0, 0.0;
    one << 0.0, 1.0;
    std::vector<Vec> r0(n_env, zero), r1(n_env, zero);
    for (int k = 0; k < m; ++k) r1[k] = one;
    const PureState psi = build_branch_state(BranchState(a, b, r0, r1));

    CnotSweepRow row;
    row.n_cnots = m;
    const Partition part = Partition::singletons(n_env);
    if (m == 0) {
      // no environment correlations at all
      row.r_i = 0.0;
      row.r_j_pointer = 0.0;
      row.r_j_conjugate = 0.0;
    } else {
      row.r_i = redundancy_ratio(psi, part, InfoMode::symmetric).ratio;
      row.r_j_pointer =
          redundancy_ratio(psi, part, InfoMode::measured, Mat::Identity(2, 2))
              .ratio;
      row.r_j_conjugate =
          redundancy_ratio(psi, part, InfoMode::measured, hadamard).ratio;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace darwinism
}  // namespace einselect
