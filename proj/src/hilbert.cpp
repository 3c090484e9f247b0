#include "einselect/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace einselect {

namespace {

void check_dims(const std::vector<int>& dims, long n, const char* who) {
  if (dims.empty()) throw std::invalid_argument(std::string(who) + ": no subsystems");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument(std::string(who) + ": bad subsystem dim");
  if (total_dim(dims) != n)
    throw std::invalid_argument(std::string(who) + ": dims do not match size");
}

}  // namespace

PureState::PureState(Vec amps, std::vector<int> d, std::vector<std::string> names)
    : amplitudes(std::move(amps)), dims(std::move(d)), labels(std::move(names)) {
  check_dims(dims, amplitudes.size(), "PureState");
  if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-12)
    throw std::invalid_argument("PureState: not normalized");
  if (!labels.empty() && labels.size() != dims.size())
    throw std::invalid_argument("PureState: label count mismatch");
}

DensityMatrix::DensityMatrix(Mat m, std::vector<int> d, std::vector<std::string> names)
    : matrix(std::move(m)), dims(std::move(d)), labels(std::move(names)) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("DensityMatrix: not square");
  check_dims(dims, matrix.rows(), "DensityMatrix");
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(matrix.trace().real() - 1.0) > 1e-12 ||
      std::abs(matrix.trace().imag()) > 1e-12)
    throw std::invalid_argument("DensityMatrix: trace != 1");
  // Spectrum check is O(d^3); skip above 512 where callers construct from
  // already-valid states.
  if (matrix.rows() <= 512) {
    Eigen::SelfAdjointEigenSolver<Mat> es(matrix, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
  if (!labels.empty() && labels.size() != dims.size())
    throw std::invalid_argument("DensityMatrix: label count mismatch");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.amplitudes * psi.amplitudes.adjoint(), psi.dims,
                       psi.labels);
}

namespace hilbert {

PureState tensor_product(const PureState& a, const PureState& b) {
  Vec out(a.dim() * b.dim());
  for (long i = 0; i < a.dim(); ++i)
    out.segment(i * b.dim(), b.dim()) = a.amplitudes(i) * b.amplitudes;
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  std::vector<std::string> labels;
  if (!a.labels.empty() && !b.labels.empty()) {
    labels = a.labels;
    labels.insert(labels.end(), b.labels.begin(), b.labels.end());
  }
  return PureState(std::move(out), std::move(dims), std::move(labels));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  const long da = a.dim(), db = b.dim();
  Mat out(da * db, da * db);
  for (long i = 0; i < da; ++i)
    for (long j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a.matrix(i, j) * b.matrix;
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  std::vector<std::string> labels;
  if (!a.labels.empty() && !b.labels.empty()) {
    labels = a.labels;
    labels.insert(labels.end(), b.labels.begin(), b.labels.end());
  }
  return DensityMatrix(std::move(out), std::move(dims), std::move(labels));
}

namespace {

struct Split {
  std::vector<int> keep;           // sorted kept subsystem indices
  std::vector<int> kdims, edims;   // kept / traced dims
  std::vector<long> kstride, estride;  // strides in the full space
  long kdim = 1, edim = 1;

  Split(const std::vector<int>& dims, std::vector<int> keep_in) {
    keep = std::move(keep_in);
    std::sort(keep.begin(), keep.end());
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
      throw std::invalid_argument("partial_trace: duplicate index");
    const auto strides = strides_of(dims);
    size_t ki = 0;
    for (int s = 0; s < static_cast<int>(dims.size()); ++s) {
      if (ki < keep.size() && keep[ki] == s) {
        kdims.push_back(dims[s]);
        kstride.push_back(strides[s]);
        kdim *= dims[s];
        ++ki;
      } else {
        edims.push_back(dims[s]);
        estride.push_back(strides[s]);
        edim *= dims[s];
      }
    }
    if (ki != keep.size())
      throw std::invalid_argument("partial_trace: index out of range");
  }

  // offset in the full space of the a-th kept multi-index
  long koffset(long a) const {
    long off = 0;
    for (int k = static_cast<int>(kdims.size()) - 1; k >= 0; --k) {
      off += (a % kdims[k]) * kstride[k];
      a /= kdims[k];
    }
    return off;
  }
  long eoffset(long e) const {
    long off = 0;
    for (int k = static_cast<int>(edims.size()) - 1; k >= 0; --k) {
      off += (e % edims[k]) * estride[k];
      e /= edims[k];
    }
    return off;
  }
};

std::vector<std::string> kept_labels(const std::vector<std::string>& labels,
                                     const std::vector<int>& keep) {
  if (labels.empty()) return {};
  std::vector<std::string> out;
  for (int k : keep) out.push_back(labels[k]);
  return out;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep) {
  Split sp(rho.dims, keep);
  std::vector<long> koff(sp.kdim), eoff(sp.edim);
  for (long a = 0; a < sp.kdim; ++a) koff[a] = sp.koffset(a);
  for (long e = 0; e < sp.edim; ++e) eoff[e] = sp.eoffset(e);

  Mat out = Mat::Zero(sp.kdim, sp.kdim);
  for (long a = 0; a < sp.kdim; ++a)
    for (long b = 0; b < sp.kdim; ++b) {
      cxd acc(0, 0);
      for (long e = 0; e < sp.edim; ++e)
        acc += rho.matrix(koff[a] + eoff[e], koff[b] + eoff[e]);
      out(a, b) = acc;
    }
  // symmetrize away roundoff
  out = (out + out.adjoint().eval()) / 2.0;
  return DensityMatrix(std::move(out), sp.kdims, kept_labels(rho.labels, keep));
}

DensityMatrix partial_trace(const PureState& psi, const std::vector<int>& keep) {
  Split sp(psi.dims, keep);
  std::vector<long> koff(sp.kdim), eoff(sp.edim);
  for (long a = 0; a < sp.kdim; ++a) koff[a] = sp.koffset(a);
  for (long e = 0; e < sp.edim; ++e) eoff[e] = sp.eoffset(e);

  Mat out = Mat::Zero(sp.kdim, sp.kdim);
  for (long e = 0; e < sp.edim; ++e) {
    Vec slice(sp.kdim);
    for (long a = 0; a < sp.kdim; ++a) slice(a) = psi.amplitudes(koff[a] + eoff[e]);
    out.noalias() += slice * slice.adjoint();
  }
  out = (out + out.adjoint().eval()) / 2.0;
  return DensityMatrix(std::move(out), sp.kdims, kept_labels(psi.labels, keep));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > 1e-12) h -= lam * std::log2(lam);
  }
  return h;
}

double purity(const DensityMatrix& rho) {
  return rho.matrix.squaredNorm();  // Tr rho^2 for Hermitian rho
}

SchmidtForm schmidt_decompose(const PureState& psi,
                              const std::vector<int>& left) {
  Split sp(psi.dims, left);  // kept = left side, traced = right side
  std::vector<long> loff(sp.kdim), roff(sp.edim);
  for (long a = 0; a < sp.kdim; ++a) loff[a] = sp.koffset(a);
  for (long e = 0; e < sp.edim; ++e) roff[e] = sp.eoffset(e);
  if (sp.edim == 1)
    throw std::invalid_argument("schmidt_decompose: bipartition must be proper");

  Mat a(sp.kdim, sp.edim);
  for (long l = 0; l < sp.kdim; ++l)
    for (long r = 0; r < sp.edim; ++r) a(l, r) = psi.amplitudes(loff[l] + roff[r]);

  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtForm f;
  f.coefficients = svd.singularValues();
  for (long i = 0; i < f.coefficients.size(); ++i) {
    f.left_basis.push_back(svd.matrixU().col(i));
    f.right_basis.push_back(svd.matrixV().col(i).conjugate());
  }
  for (long i = 0; i + 1 < f.coefficients.size(); ++i)
    if (f.coefficients(i) - f.coefficients(i + 1) < 1e-8 &&
        f.coefficients(i) > 1e-8)
      f.degenerate = true;
  return f;
}

PureState schmidt_reconstruct(const SchmidtForm& f) {
  const long dl = f.left_basis.front().size(), dr = f.right_basis.front().size();
  Vec out = Vec::Zero(dl * dr);
  for (long i = 0; i < f.coefficients.size(); ++i)
    for (long l = 0; l < dl; ++l)
      out.segment(l * dr, dr) +=
          f.coefficients(i) * f.left_basis[i](l) * f.right_basis[i];
  return PureState(std::move(out),
                   {static_cast<int>(dl), static_cast<int>(dr)});
}

Conditional conditional_state(const DensityMatrix& rho, const Mat& projector,
                              int measured) {
  if (measured < 0 || measured >= rho.subsystems())
    throw std::invalid_argument("conditional_state: bad subsystem index");
  if (projector.rows() != rho.dims[measured] ||
      projector.cols() != rho.dims[measured])
    throw std::invalid_argument("conditional_state: projector dim mismatch");
  if ((projector - projector.adjoint()).cwiseAbs().maxCoeff() > 1e-10 ||
      (projector * projector - projector).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("conditional_state: not a projector");

  // Embed the projector and trace out the measured subsystem.
  const auto strides = strides_of(rho.dims);
  const long n = rho.dim();
  const long ms = strides[measured];
  const int md = rho.dims[measured];
  Mat pr = Mat::Zero(n, n);
  for (long i = 0; i < n; ++i) {
    const int mi = static_cast<int>((i / ms) % md);
    for (int mj = 0; mj < md; ++mj) {
      const cxd pij = projector(mi, mj);
      if (pij == cxd(0, 0)) continue;
      const long j = i + (static_cast<long>(mj) - mi) * ms;
      pr.row(i) += pij * rho.matrix.row(j);
    }
  }
  const double p = pr.trace().real();
  if (p < 1e-14)
    throw std::runtime_error("conditional_state: outcome probability ~ 0");

  std::vector<int> keep;
  for (int s = 0; s < rho.subsystems(); ++s)
    if (s != measured) keep.push_back(s);
  if (keep.empty())
    throw std::invalid_argument("conditional_state: nothing left to condition");

  Split sp(rho.dims, keep);
  std::vector<long> koff(sp.kdim), eoff(sp.edim);
  for (long a = 0; a < sp.kdim; ++a) koff[a] = sp.koffset(a);
  for (long e = 0; e < sp.edim; ++e) eoff[e] = sp.eoffset(e);
  Mat out = Mat::Zero(sp.kdim, sp.kdim);
  for (long a = 0; a < sp.kdim; ++a)
    for (long b = 0; b < sp.kdim; ++b) {
      cxd acc(0, 0);
      for (long e = 0; e < sp.edim; ++e)
        acc += pr(koff[a] + eoff[e], koff[b] + eoff[e]);
      out(a, b) = acc / p;
    }
  out = (out + out.adjoint().eval()) / 2.0;
  return {DensityMatrix(std::move(out), sp.kdims,
                        kept_labels(rho.labels, keep)),
          p};
}

double mutual_information(const DensityMatrix& rho,
                          const std::vector<int>& cut) {
  std::vector<int> rest;
  std::vector<int> sorted = cut;
  std::sort(sorted.begin(), sorted.end());
  for (int s = 0; s < rho.subsystems(); ++s)
    if (!std::binary_search(sorted.begin(), sorted.end(), s)) rest.push_back(s);
  if (rest.empty() || cut.empty())
    throw std::invalid_argument("mutual_information: improper bipartition");
  return von_neumann_entropy(partial_trace(rho, cut)) +
         von_neumann_entropy(partial_trace(rho, rest)) -
         von_neumann_entropy(rho);
}

double measured_mutual_information(const DensityMatrix& rho, int measured,
                                   const Mat& basis) {
  const int d = rho.dims[measured];
  if (basis.rows() != d || basis.cols() != d)
    throw std::invalid_argument("measured_mutual_information: basis shape");
  std::vector<int> rest;
  for (int s = 0; s < rho.subsystems(); ++s)
    if (s != measured) rest.push_back(s);
  const double hs = von_neumann_entropy(partial_trace(rho, rest));

  double cond = 0.0;
  for (int j = 0; j < d; ++j) {
    const Vec b = basis.col(j);
    const Mat proj = b * b.adjoint();
    // probability-weighted entropy; skip negligible outcomes
    const auto strides = strides_of(rho.dims);
    (void)strides;
    try {
      const Conditional c = conditional_state(rho, proj, measured);
      cond += c.probability * von_neumann_entropy(c.state);
    } catch (const std::runtime_error&) {
      // p ~ 0 contributes nothing
    }
  }
  return hs - cond;
}

namespace {

// Unitary basis from d(d-1) Givens angles (theta, phi per pair).
Mat givens_basis(int d, const RVec& params) {
  Mat u = Mat::Identity(d, d);
  int idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double th = params(idx++), ph = params(idx++);
      Mat g = Mat::Identity(d, d);
      g(i, i) = std::cos(th);
      g(j, j) = std::cos(th);
      g(i, j) = -std::sin(th) * std::exp(cxd(0, -ph));
      g(j, i) = std::sin(th) * std::exp(cxd(0, ph));
      u = g * u;
    }
  return u;
}

}  // namespace

DiscordResult discord(const DensityMatrix& rho, int measured, const Mat& basis) {
  DiscordResult r;
  std::vector<int> cutA = {measured};
  r.symmetric = mutual_information(rho, cutA);

  if (basis.size() != 0) {
    r.basis = basis;
    r.accessible = measured_mutual_information(rho, measured, basis);
    r.discord = r.symmetric - r.accessible;
    return r;
  }

  const int d = rho.dims[measured];
  if (d > 4)
    throw std::invalid_argument("discord: optimization limited to dim <= 4");

  double best = -1e300;
  RVec best_params;
  auto eval = [&](const RVec& p) {
    return -measured_mutual_information(rho, measured, givens_basis(d, p));
  };

  if (d == 2) {
    // polar/azimuthal grid at 2 degrees, then refinement
    const double step = 2.0 * kPi / 180.0;
    for (double th = 0.0; th <= kPi / 2 + 1e-9; th += step)
      for (double ph = 0.0; ph < kPi; ph += step) {
        RVec p(2);
        p << th, ph;
        const double j = -eval(p);
        if (j > best) {
          best = j;
          best_params = p;
        }
      }
  } else {
    Rng rng(0x5eedULL + d);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int npar = d * (d - 1);
    for (int trial = 0; trial < 60; ++trial) {
      RVec p(npar);
      for (int i = 0; i < npar; ++i)
        p(i) = (i % 2 == 0 ? kPi / 2 : 2 * kPi) * u01(rng);
      const double j = -eval(p);
      if (j > best) {
        best = j;
        best_params = p;
      }
    }
  }
  const RVec refined = nelder_mead(eval, best_params, 0.02, 600, 1e-14);
  if (-eval(refined) > best) best_params = refined;

  r.basis = givens_basis(d, best_params);
  r.accessible = measured_mutual_information(rho, measured, r.basis);
  r.discord = r.symmetric - r.accessible;
  return r;
}

}  // namespace hilbert
}  // namespace einselect
