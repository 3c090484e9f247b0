#pragma once

#include "einselect/hilbert.hpp"

namespace einselect {
namespace darwinism {

/// System qubit correlated with N environment qubits:
/// a |0>|r^0_1 ... r^0_N> + b |1>|r^1_1 ... r^1_N>.
struct BranchState {
  cxd a, b;
  std::vector<Vec> records0;  // per-subsystem record for the |0> branch
  std::vector<Vec> records1;  // ... and for the |1> branch

  BranchState(cxd a_in, cxd b_in, std::vector<Vec> r0, std::vector<Vec> r1);

  int environment_size() const { return static_cast<int>(records0.size()); }

  /// Orthogonal-record branch state |0...0> vs |1...1>.
  static BranchState ghz(cxd a, cxd b, int n);
};

PureState build_branch_state(const BranchState& spec);

/// Disjoint, exhaustive grouping of the environment qubits.
struct Partition {
  std::vector<std::vector<int>> fragments;  // environment indices, 0-based

  static Partition singletons(int n);
  static Partition whole(int n);
  void validate(int n) const;
};

enum class InfoMode { symmetric, measured };

/// I(S:E_k) (symmetric) or J(S:E_k) (system measured in `system_basis`)
/// for the given environment fragment; indices refer to environment qubits.
double fragment_mutual_info(const PureState& state,
                            const std::vector<int>& fragment, InfoMode mode,
                            const Mat& system_basis = Mat());

struct RedundancyResult {
  double ratio;
  Mat system_basis;  // basis used (measured mode)
};

/// R = sum_k info(S:E_k) / H(S) over the partition. In measured mode an
/// empty basis requests optimization over the system qubit basis.
RedundancyResult redundancy_ratio(const PureState& state,
                                  const Partition& partition, InfoMode mode,
                                  const Mat& system_basis = Mat());

/// Action needed to map one product record configuration onto another,
/// in units of (pi/2) hbar: sum_k arccos|<a_k|b_k>| / (pi/2).
double action_distance(const std::vector<Vec>& records_a,
                       const std::vector<Vec>& records_b);

/// D([P_alpha],[P_beta]) = Tr(P^n_a U_n ... P^1_a U_1 rho U_1^+ P^1_b ... P^n_b)
/// for projector chains with unitaries applied before each time slot.
cxd decoherence_functional(const DensityMatrix& rho,
                           const std::vector<Mat>& chain_alpha,
                           const std::vector<Mat>& chain_beta,
                           const std::vector<Mat>& unitaries);

/// Run-length size of an outcome sequence. A stand-in for algorithmic
/// complexity, which is uncomputable: constant records compress to O(1),
/// random ones stay O(n). Not a normative complexity measure.
long record_rle_size(const std::vector<int>& outcomes);

struct CnotSweepRow {
  int n_cnots;
  double r_i;
  double r_j_pointer;
  double r_j_conjugate;
};

/// Redundancy growth under a scripted sequence of system-to-environment
/// c-nots acting on |psi> = (a|0> + b|1>)|0...0>.
std::vector<CnotSweepRow> cnot_redundancy_sweep(cxd a, cxd b, int n_env);

}  // namespace darwinism
}  // namespace einselect
