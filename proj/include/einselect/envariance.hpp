#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "einselect/hilbert.hpp"

namespace einselect {
namespace envariance {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Bipartite pure state in Schmidt form: sum_k alpha_k |s_k>|e_k>.
struct SchmidtState {
  Vec coefficients;  // alpha_k, complex; sum |alpha_k|^2 = 1
  std::vector<std::string> system_labels;
  std::vector<std::string> env_labels;

  explicit SchmidtState(Vec alphas, std::vector<std::string> sys = {},
                        std::vector<std::string> env = {});

  int branches() const { return static_cast<int>(coefficients.size()); }
  PureState to_state() const;  // over [N, N] with the Schmidt bases as standard
};

struct EnvarianceCheck {
  bool envariant;
  std::optional<Mat> counter_unitary;  // acts on the environment factor
};

/// Tests whether u_system can be undone by an environment-only unitary on
/// this state. Schmidt-phase unitaries always can; unitaries that rotate
/// between distinct-|alpha| Schmidt states cannot.
EnvarianceCheck check_envariance(const SchmidtState& state, const Mat& u_system);

/// Swap of branches k <-> j followed by the matching counterswap on the
/// environment: net effect exchanges alpha_k and alpha_j.
SchmidtState swap_counterswap(const SchmidtState& state, int k, int j,
                              double swap_phase = 0.0);

/// Amplitudes |alpha_k|^2 = m_k / M given exactly by integer multiplicities.
struct FineGraining {
  std::vector<long> multiplicities;  // m_k >= 0
  long total = 0;                    // M = sum m_k

  explicit FineGraining(std::vector<long> m);
};

struct BornResult {
  std::vector<BigRat> probabilities;  // m_k / M, exact
  bool swap_verified;   // equal-amplitude swappability held across the state
  long fine_grained_terms;  // M
};

/// Fine-graining derivation of the Born weights: builds the fine-grained
/// joint state symbolically, verifies envariant swappability of its equal-
/// amplitude terms, and reads off p(s_k) = m_k / M.
/// `via_counterweight` routes the resolution through an auxiliary register
/// instead of the apparatus, which must give identical probabilities.
BornResult born_from_finegraining(const FineGraining& grain,
                                  bool via_counterweight = false);

/// Best rational approximation m/M to a real weight with denominator <= max_den,
/// with the achieved gap reported (used for incommensurate |alpha|^2).
struct RationalApprox {
  BigRat value;
  double gap;
};
RationalApprox approximate_weight(double alpha2, long max_den = 10000);

struct FrequencyDistribution {
  std::vector<BigRat> exact;    // p_N(n) for n = 0..N, exact
  std::vector<double> gaussian; // de Moivre-Laplace approximation
  long ensemble_size;
};

/// Exact record-frequency distribution p_N(n) = C(N,n) a^n (1-a)^(N-n)
/// for a = alpha2 (a rational), alongside its Gaussian approximation.
FrequencyDistribution frequency_distribution(const BigRat& alpha2,
                                             long ensemble_size);

/// P(|n/N - alpha2| > eps) as an exact rational tail sum.
BigRat tail_probability(const FrequencyDistribution& dist, const BigRat& alpha2,
                        const BigRat& eps);

/// Total-variation distance (1/2) sum |p_exact - p_gauss|.
double total_variation_vs_gaussian(const FrequencyDistribution& dist);

BigInt binomial(long n, long k);

}  // namespace envariance
}  // namespace einselect
