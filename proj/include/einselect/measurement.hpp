#pragma once

#include "einselect/hilbert.hpp"

namespace einselect {
namespace measurement {

enum class CnotDirection { logical, conjugate };

/// Two-qubit controlled-not. `logical` takes qubit 0 as the control;
/// `conjugate` is the same interaction read in the complementary bases,
/// where the roles of control and target are reversed.
PureState cnot_apply(const PureState& state, CnotDirection direction);

/// Controlled shift |s_j>|A_k> -> |s_j>|A_{(k + G j) mod N}>.
struct CShiftSpec {
  int system_dim = 2;     // n
  int apparatus_dim = 2;  // N
  int gain = 1;           // G >= 1

  CShiftSpec(int n, int N, int G);
  bool wraps() const { return static_cast<long>(system_dim) * gain > apparatus_dim; }
};

PureState cshift_apply(const CShiftSpec& spec, const PureState& state);

/// Unitary whose k-th column is |B_k> = N^{-1/2} sum_l exp(2 pi i k l / N)|A_l>.
Mat conjugate_basis(int dim);

struct ActionReport {
  double action;       // units of hbar
  double lower_bound;  // arcsin sqrt(1 - 1/N)
  double per_bit;      // action / lg N
};

/// Expected interaction action needed to correlate records with outcomes:
/// I = sum_j |alpha_j|^2 arccos |<A_0|A_j>|.
ActionReport premeasurement_action(const std::vector<double>& probabilities,
                                   const std::vector<double>& overlaps);

/// Apparatus packet peaked at `center` with discrete-Gaussian spread
/// alpha(j) ~ exp(-j^2 / 2 Delta^2), truncated at |j| <= 6 Delta.
struct ApparatusPacket {
  int center = 0;
  double dispersion = 0.0;  // Delta; 0 means a delta packet

  Vec amplitudes(int apparatus_dim) const;        // packet at `center`
  Vec amplitudes_at(int apparatus_dim, int l) const;  // shift-covariant copy
};

struct AmplifyResult {
  PureState joint;   // system (x) apparatus
  RMat distinguishability;  // |<a_{l+Gk}|a_{l+Gk'}>|^2
  bool wrapped;      // n G > N: records wrap around the pointer
};

/// Premeasurement with gain: sum_k c_k |s_k>|a_{center + G k}>, with the
/// pairwise record overlaps reported.
AmplifyResult amplify(const CShiftSpec& spec, const ApparatusPacket& packet,
                      const PureState& system);

enum class ObserverPrior { insider, discoverer, outsider };

/// Classical-measurement descriptions over A_rho (x) A (x) S. The prior
/// register has dimension N+1; its last basis state is the ensemble
/// record |A_rho>. `outcome` is required for the discoverer and for the
/// insider, and must be absent for the outsider.
DensityMatrix observer_description(ObserverPrior prior,
                                   const std::vector<PureState>& states,
                                   const std::vector<double>& probs,
                                   std::optional<int> outcome);

}  // namespace measurement
}  // namespace einselect
