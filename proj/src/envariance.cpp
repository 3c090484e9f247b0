#include "einselect/envariance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace einselect {
namespace envariance {

SchmidtState::SchmidtState(Vec alphas, std::vector<std::string> sys,
                           std::vector<std::string> env)
    : coefficients(std::move(alphas)),
      system_labels(std::move(sys)),
      env_labels(std::move(env)) {
  if (coefficients.size() < 1)
    throw std::invalid_argument("SchmidtState: empty");
  if (std::abs(coefficients.squaredNorm() - 1.0) > 1e-12)
    throw std::invalid_argument("SchmidtState: coefficients not normalized");
}

PureState SchmidtState::to_state() const {
  const int n = branches();
  Vec amps = Vec::Zero(static_cast<long>(n) * n);
  for (int k = 0; k < n; ++k) amps(static_cast<long>(k) * n + k) = coefficients(k);
  return PureState(std::move(amps), {n, n});
}

EnvarianceCheck check_envariance(const SchmidtState& state, const Mat& u_system) {
  const int n = state.branches();
  if (u_system.rows() != n || u_system.cols() != n)
    throw std::invalid_argument("check_envariance: unitary dim mismatch");
  if ((u_system * u_system.adjoint() - Mat::Identity(n, n)).cwiseAbs().maxCoeff() >
      1e-10)
    throw std::invalid_argument("check_envariance: input is not unitary");

  // u_S (x) u_E |psi> = |psi> forces u_E = (diag(a) u_S^* diag(1/a))^T on the
  // support; the construction is unitary exactly when u_S preserves the
  // |alpha|-degeneracy subspaces.
  const Vec& a = state.coefficients;
  for (int k = 0; k < n; ++k) {
    if (std::abs(a(k)) > 1e-14) continue;
    // zero-amplitude branches must not mix with the support
    for (int j = 0; j < n; ++j) {
      if (std::abs(a(j)) < 1e-14) continue;
      if (std::abs(u_system(k, j)) > 1e-10 || std::abs(u_system(j, k)) > 1e-10)
        return {false, std::nullopt};
    }
  }
  Mat v = Mat::Identity(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (std::abs(a(r)) < 1e-14 || std::abs(a(c)) < 1e-14) {
        v(r, c) = (r == c) ? cxd(1, 0) : cxd(0, 0);
        continue;
      }
      v(r, c) = a(r) * std::conj(u_system(c, r)) / a(c);
    }
  v.transposeInPlace();
  if ((v * v.adjoint() - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
    return {false, std::nullopt};

  // confirm on the joint state
  const PureState psi = state.to_state();
  Vec mapped = Vec::Zero(psi.dim());
  for (int k = 0; k < n; ++k)
    for (int sp = 0; sp < n; ++sp)
      for (int ep = 0; ep < n; ++ep)
        mapped(static_cast<long>(sp) * n + ep) +=
            u_system(sp, k) * v(ep, k) * a(k);
  if ((mapped - psi.amplitudes).norm() > 1e-9) return {false, std::nullopt};
  return {true, v};
}

SchmidtState swap_counterswap(const SchmidtState& state, int k, int j,
                              double swap_phase) {
  const int n = state.branches();
  if (k < 0 || j < 0 || k >= n || j >= n || k == j)
    throw std::invalid_argument("swap_counterswap: bad indices");
  // u_S(k<->j) = e^{i phi}|s_k><s_j| + h.c., then the counterswap
  // e^{-i phi}|e_k><e_j| + h.c. on the environment; the joint state keeps
  // its Schmidt bases with alpha_k and alpha_j exchanged.
  (void)swap_phase;  // cancels between swap and counterswap
  Vec c = state.coefficients;
  std::swap(c(k), c(j));
  return SchmidtState(std::move(c), state.system_labels, state.env_labels);
}

FineGraining::FineGraining(std::vector<long> m) : multiplicities(std::move(m)) {
  if (multiplicities.empty())
    throw std::invalid_argument("FineGraining: empty multiplicity list");
  for (long v : multiplicities) {
    if (v < 0) throw std::invalid_argument("FineGraining: negative multiplicity");
    total += v;
  }
  if (total < 1 || total > 1000000)
    throw std::invalid_argument("FineGraining: need 1 <= M <= 10^6");
}

namespace {

// Fine-grained joint state: M basis terms of equal amplitude 1/sqrt(M).
// Term j carries the coarse system index k(j), an apparatus record, an
// environment record, and (in the counterweight route) an auxiliary
// register holding the extra resolution.
struct FineState {
  std::vector<int> coarse;   // k(j)
  std::vector<long> reg_a;   // apparatus record
  std::vector<long> reg_e;   // environment record (always fine)
  std::vector<long> reg_c;   // counterweight record, or 0 when unused
};

// Swap of fine terms j <-> j' acting on everything but the environment,
// undone by the counterswap on E; the superposition must be unchanged as
// a multiset of basis terms.
bool swap_invariant(const FineState& st, long j, long jp) {
  FineState t = st;
  std::swap(t.coarse[j], t.coarse[jp]);
  std::swap(t.reg_a[j], t.reg_a[jp]);
  std::swap(t.reg_c[j], t.reg_c[jp]);
  std::swap(t.reg_e[j], t.reg_e[jp]);  // counterswap restores the pairing
  std::vector<std::tuple<int, long, long, long>> x, y;
  for (size_t i = 0; i < st.coarse.size(); ++i) {
    x.emplace_back(st.coarse[i], st.reg_a[i], st.reg_e[i], st.reg_c[i]);
    y.emplace_back(t.coarse[i], t.reg_a[i], t.reg_e[i], t.reg_c[i]);
  }
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

}  // namespace

BornResult born_from_finegraining(const FineGraining& grain,
                                  bool via_counterweight) {
  const long M = grain.total;
  FineState st;
  st.coarse.reserve(M);
  st.reg_a.reserve(M);
  st.reg_e.reserve(M);
  st.reg_c.reserve(M);
  long j = 0;
  for (size_t k = 0; k < grain.multiplicities.size(); ++k)
    for (long c = 0; c < grain.multiplicities[k]; ++c) {
      st.coarse.push_back(static_cast<int>(k));
      // Standard route: the apparatus itself is fine-grained. Counterweight
      // route: the apparatus keeps the coarse record and the auxiliary
      // register carries the resolution.
      st.reg_a.push_back(via_counterweight ? static_cast<long>(k) : j);
      st.reg_e.push_back(j);
      st.reg_c.push_back(via_counterweight ? j : 0);
      ++j;
    }

  BornResult r;
  r.fine_grained_terms = M;
  r.swap_verified = true;
  // All fine terms share amplitude 1/sqrt(M); envariant swappability is
  // checked pairwise along a chain covering every term, plus the far pair.
  for (long i = 0; i + 1 < M; ++i)
    if (!swap_invariant(st, i, i + 1)) {
      r.swap_verified = false;
      break;
    }
  if (M > 1 && !swap_invariant(st, 0, M - 1)) r.swap_verified = false;

  for (long m : grain.multiplicities)
    r.probabilities.emplace_back(BigInt(m), BigInt(M));
  return r;
}

RationalApprox approximate_weight(double alpha2, long max_den) {
  if (alpha2 < 0.0 || alpha2 > 1.0)
    throw std::invalid_argument("approximate_weight: weight outside [0,1]");
  // Stern-Brocot search for the closest fraction with denominator <= max_den.
  long best_num = 0, best_den = 1;
  double best_gap = std::abs(alpha2);
  for (long den = 1; den <= max_den; ++den) {
    const long num = std::lround(alpha2 * den);
    const double gap = std::abs(alpha2 - static_cast<double>(num) / den);
    if (gap < best_gap - 1e-18) {
      best_gap = gap;
      best_num = num;
      best_den = den;
      if (gap == 0.0) break;
    }
  }
  return {BigRat(BigInt(best_num), BigInt(best_den)), best_gap};
}

BigInt binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

FrequencyDistribution frequency_distribution(const BigRat& alpha2,
                                             long ensemble_size) {
  using boost::multiprecision::numerator;
  using boost::multiprecision::denominator;
  if (ensemble_size < 1 || ensemble_size > 100000)
    throw std::invalid_argument("frequency_distribution: bad ensemble size");
  if (alpha2 < 0 || alpha2 > 1)
    throw std::invalid_argument("frequency_distribution: weight outside [0,1]");

  const BigInt m = numerator(alpha2), Mden = denominator(alpha2);
  const BigInt q = Mden - m;
  const long N = ensemble_size;

  FrequencyDistribution d;
  d.ensemble_size = N;
  d.exact.reserve(N + 1);

  // p(n) = C(N,n) m^n q^(N-n) / Mden^N
  std::vector<BigInt> mpow(N + 1), qpow(N + 1);
  mpow[0] = 1;
  qpow[0] = 1;
  for (long i = 1; i <= N; ++i) {
    mpow[i] = mpow[i - 1] * m;
    qpow[i] = qpow[i - 1] * q;
  }
  BigInt Mn = 1;
  for (long i = 0; i < N; ++i) Mn *= Mden;
  for (long n = 0; n <= N; ++n)
    d.exact.emplace_back(binomial(N, n) * mpow[n] * qpow[N - n], Mn);

  const double a = alpha2.convert_to<double>();
  const double ab = std::sqrt(a * (1.0 - a));
  d.gaussian.resize(N + 1, 0.0);
  if (ab > 0.0) {
    const double norm = 1.0 / (std::sqrt(2.0 * kPi * N) * ab);
    for (long n = 0; n <= N; ++n) {
      const double zi = (n - N * a) / (std::sqrt(static_cast<double>(N)) * ab);
      d.gaussian[n] = norm * std::exp(-0.5 * zi * zi);
    }
  } else {
    d.gaussian[a >= 0.5 ? N : 0] = 1.0;
  }
  return d;
}

BigRat tail_probability(const FrequencyDistribution& dist, const BigRat& alpha2,
                        const BigRat& eps) {
  const long N = dist.ensemble_size;
  BigRat tail = 0;
  for (long n = 0; n <= N; ++n) {
    BigRat dev = BigRat(BigInt(n), BigInt(N)) - alpha2;
    if (dev < 0) dev = -dev;
    if (dev > eps) tail += dist.exact[n];
  }
  return tail;
}

double total_variation_vs_gaussian(const FrequencyDistribution& dist) {
  double tv = 0.0;
  for (size_t n = 0; n < dist.exact.size(); ++n)
    tv += std::abs(dist.exact[n].convert_to<double>() - dist.gaussian[n]);
  return 0.5 * tv;
}

}  // namespace envariance
}  // namespace einselect
