#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace einselect {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Multi-index arithmetic over tensor-product spaces.
// Subsystem 0 is the leftmost factor and the most significant index.

inline std::vector<long> strides_of(const std::vector<int>& dims) {
  std::vector<long> s(dims.size());
  long acc = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    s[k] = acc;
    acc *= dims[k];
  }
  return s;
}

inline long total_dim(const std::vector<int>& dims) {
  long d = 1;
  for (int x : dims) d *= x;
  return d;
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (G7, K15) quadrature.

namespace detail {
// nodes/weights on [-1, 1]
inline const double gk_nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,
    0.741531185599394,  0.864864423359769,  0.949107912342759,
    0.991455371120813};
inline const double gk_wk[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline const double gk_wg[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct GkResult {
  double value;
  double error;
};

inline GkResult gk15(const std::function<double(double)>& f, double a,
                     double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double k = 0.0, g = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double fx = f(c + h * gk_nodes[i]);
    k += gk_wk[i] * fx;
    if (i % 2 == 1) g += gk_wg[i / 2] * fx;
  }
  return {k * h, std::abs(k - g) * h};
}

inline double adapt(const std::function<double(double)>& f, double a, double b,
                    double tol, int depth, bool& converged) {
  const GkResult r = gk15(f, a, b);
  if (r.error <= tol || depth >= 48) {
    if (r.error > tol && depth >= 48) converged = false;
    return r.value;
  }
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth + 1, converged) +
         adapt(f, c, b, 0.5 * tol, depth + 1, converged);
}
}  // namespace detail

struct Quadrature {
  double value = 0.0;
  bool converged = true;
};

// Integrates f over [a, b]; tolerance is applied to the absolute error
// scaled by a first-pass estimate of |integral|.
inline Quadrature integrate(const std::function<double(double)>& f, double a,
                            double b, double rel_tol = 1e-9,
                            double abs_floor = 1e-300) {
  Quadrature q;
  const detail::GkResult first = detail::gk15(f, a, b);
  const double scale = std::max(std::abs(first.value), abs_floor);
  q.value = detail::adapt(f, a, b, std::max(rel_tol * scale, abs_floor), 0,
                          q.converged);
  return q;
}

// ---------------------------------------------------------------------------
// Nelder-Mead simplex minimizer (small dimension, smooth landscapes).

inline RVec nelder_mead(const std::function<double(const RVec&)>& f, RVec x0,
                        double step, int max_iter = 400, double ftol = 1e-12) {
  const int n = static_cast<int>(x0.size());
  std::vector<RVec> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (int i = 1; i <= n; ++i) pts[i](i - 1) += step;
  for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);

  for (int it = 0; it < max_iter; ++it) {
    // order
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return val[a] < val[b]; });
    std::vector<RVec> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      p2[i] = pts[idx[i]];
      v2[i] = val[idx[i]];
    }
    pts.swap(p2);
    val.swap(v2);
    if (std::abs(val[n] - val[0]) < ftol * (std::abs(val[0]) + ftol)) break;

    RVec centroid = RVec::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[i];
    centroid /= n;

    const RVec xr = centroid + (centroid - pts[n]);
    const double fr = f(xr);
    if (fr < val[0]) {
      const RVec xe = centroid + 2.0 * (centroid - pts[n]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[n] = xe;
        val[n] = fe;
      } else {
        pts[n] = xr;
        val[n] = fr;
      }
    } else if (fr < val[n - 1]) {
      pts[n] = xr;
      val[n] = fr;
    } else {
      const RVec xc = centroid + 0.5 * (pts[n] - centroid);
      const double fc = f(xc);
      if (fc < val[n]) {
        pts[n] = xc;
        val[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          val[i] = f(pts[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (val[i] < val[best]) best = i;
  return pts[best];
}

// ---------------------------------------------------------------------------
// Least-squares line fit.

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LineFit linear_fit(const std::vector<double>& x,
                          const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: need >= 2 paired samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit r;
  r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  r.intercept = (sy - r.slope * sx) / n;
  return r;
}

// ---------------------------------------------------------------------------
// Random states and unitaries (Haar measure).

inline Vec haar_state(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cxd(g(rng), g(rng));
  v /= v.norm();
  return v;
}

inline Mat haar_unitary(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = cxd(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    cxd d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace einselect
