#pragma once

#include <fftw3.h>

#include "einselect/numeric.hpp"

namespace einselect {

/// Batched 1D FFTs over the rows/columns of a fixed-size complex matrix.
/// Plans are created once (FFTW_ESTIMATE | FFTW_UNALIGNED) and executed
/// against caller buffers of the same column-major layout.
class FftPlans {
 public:
  FftPlans(int rows, int cols) : rows_(rows), cols_(cols) {
    Mat dummy(rows, cols);
    auto* d = reinterpret_cast<fftw_complex*>(dummy.data());
    const int nr[1] = {rows};
    const int nc[1] = {cols};
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    // columns are contiguous in Eigen's column-major storage
    col_fwd_ = fftw_plan_many_dft(1, nr, cols, d, nullptr, 1, rows, d, nullptr,
                                  1, rows, FFTW_FORWARD, flags);
    col_bwd_ = fftw_plan_many_dft(1, nr, cols, d, nullptr, 1, rows, d, nullptr,
                                  1, rows, FFTW_BACKWARD, flags);
    row_fwd_ = fftw_plan_many_dft(1, nc, rows, d, nullptr, rows, 1, d, nullptr,
                                  rows, 1, FFTW_FORWARD, flags);
    row_bwd_ = fftw_plan_many_dft(1, nc, rows, d, nullptr, rows, 1, d, nullptr,
                                  rows, 1, FFTW_BACKWARD, flags);
  }
  ~FftPlans() {
    fftw_destroy_plan(col_fwd_);
    fftw_destroy_plan(col_bwd_);
    fftw_destroy_plan(row_fwd_);
    fftw_destroy_plan(row_bwd_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  /// Unnormalized transforms; backward followed by forward scales by n.
  void cols_forward(Mat& m) const { run(col_fwd_, m); }
  void cols_backward(Mat& m) const { run(col_bwd_, m); }
  void rows_forward(Mat& m) const { run(row_fwd_, m); }
  void rows_backward(Mat& m) const { run(row_bwd_, m); }

 private:
  void run(fftw_plan p, Mat& m) const {
    if (m.rows() != rows_ || m.cols() != cols_)
      throw std::invalid_argument("FftPlans: matrix shape mismatch");
    auto* d = reinterpret_cast<fftw_complex*>(m.data());
    fftw_execute_dft(p, d, d);
  }
  int rows_, cols_;
  fftw_plan col_fwd_, col_bwd_, row_fwd_, row_bwd_;
};

/// Angular wavenumber for DFT bin m of n samples with spacing d.
inline double dft_wavenumber(int m, int n, double d) {
  const int wrapped = (m <= n / 2) ? m : m - n;
  return 2.0 * kPi * wrapped / (n * d);
}

}  // namespace einselect
