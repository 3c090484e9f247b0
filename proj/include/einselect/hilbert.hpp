#pragma once

#include <optional>
#include <string>
#include <vector>

#include "einselect/numeric.hpp"

namespace einselect {

/// Normalized pure state over an ordered tensor product of subsystems.
/// Subsystem 0 is the leftmost factor; amplitudes are stored row-major
/// over the multi-index (i0, i1, ...).
struct PureState {
  Vec amplitudes;
  std::vector<int> dims;
  std::vector<std::string> labels;  // optional, empty or one per subsystem

  PureState() = default;
  PureState(Vec amps, std::vector<int> d,
            std::vector<std::string> names = {});

  int subsystems() const { return static_cast<int>(dims.size()); }
  long dim() const { return amplitudes.size(); }
};

/// Hermitian, unit-trace, positive-semidefinite matrix over a labeled
/// tensor-product space. PSD is checked up to -1e-10 on the spectrum.
struct DensityMatrix {
  Mat matrix;
  std::vector<int> dims;
  std::vector<std::string> labels;

  DensityMatrix() = default;
  DensityMatrix(Mat m, std::vector<int> d,
                std::vector<std::string> names = {});

  int subsystems() const { return static_cast<int>(dims.size()); }
  long dim() const { return matrix.rows(); }

  static DensityMatrix from_pure(const PureState& psi);
};

struct SchmidtForm {
  RVec coefficients;            // non-negative, sorted descending
  std::vector<Vec> left_basis;  // orthonormal
  std::vector<Vec> right_basis;
  bool degenerate = false;  // repeated coefficients: basis is non-unique
};

namespace hilbert {

PureState tensor_product(const PureState& a, const PureState& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced density matrix over the kept subsystems (order preserved).
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep);
DensityMatrix partial_trace(const PureState& psi, const std::vector<int>& keep);

/// -sum lambda lg lambda in bits; eigenvalues below 1e-12 are clamped to 0.
double von_neumann_entropy(const DensityMatrix& rho);

double purity(const DensityMatrix& rho);

/// Schmidt decomposition across the bipartition (left | complement).
SchmidtForm schmidt_decompose(const PureState& psi,
                              const std::vector<int>& left);
PureState schmidt_reconstruct(const SchmidtForm& f);

struct Conditional {
  DensityMatrix state;  // over the unmeasured subsystems
  double probability;
};

/// State of the remaining subsystems given a projector outcome on
/// subsystem `measured`: rho_rest = Tr_measured(Pi rho) / p, p = Tr(Pi rho).
Conditional conditional_state(const DensityMatrix& rho, const Mat& projector,
                              int measured);

/// Symmetric mutual information I(A:B) in bits across the bipartition
/// (cut | complement).
double mutual_information(const DensityMatrix& rho,
                          const std::vector<int>& cut);

/// J_A(S:A) = H(rho_S) - sum_j p_j H(rho_{S|j}) for a projective
/// measurement of subsystem `measured` in the given orthonormal basis
/// (columns of `basis`).
double measured_mutual_information(const DensityMatrix& rho, int measured,
                                   const Mat& basis);

struct DiscordResult {
  double discord;   // I - J, bits
  double symmetric; // I(S:A)
  double accessible;// J at the reported basis
  Mat basis;        // measurement basis used (columns)
};

/// Quantum discord dI_A(S|A) = I(S:A) - J_A(S:A). With `basis` empty the
/// measurement basis is optimized (coarse angle grid + Nelder-Mead);
/// optimization supports measured dimension <= 4.
DiscordResult discord(const DensityMatrix& rho, int measured,
                      const Mat& basis = Mat());

}  // namespace hilbert
}  // namespace einselect
