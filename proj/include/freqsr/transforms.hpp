#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace freqsr {

// Orthonormal DCT-II basis, basis(u, x) = a(u) sqrt(2/N) cos((2x+1) u pi / 2N)
// with a(0) = 1/sqrt(2), a(u>0) = 1. For N = 8 this is exactly the JPEG
// Annex-A scaling (1/4 C(u) C(v) in 2-D).
template <typename Scalar, int N>
const Eigen::Matrix<Scalar, N, N, Eigen::RowMajor>& dct_basis() {
  static const auto basis = [] {
    Eigen::Matrix<Scalar, N, N, Eigen::RowMajor> m;
    const long double pi = std::numbers::pi_v<long double>;
    for (int u = 0; u < N; ++u) {
      const long double a = (u == 0 ? 1.0L / std::sqrt(2.0L) : 1.0L) * std::sqrt(2.0L / N);
      for (int x = 0; x < N; ++x) {
        m(u, x) = static_cast<Scalar>(a * std::cos((2 * x + 1) * u * pi / (2 * N)));
      }
    }
    return m;
  }();
  return basis;
}

template <int N, typename Derived>
Eigen::Matrix<typename Derived::Scalar, N, N, Eigen::RowMajor> fdct(const Eigen::MatrixBase<Derived>& spatial) {
  using Scalar = typename Derived::Scalar;
  const auto& d = dct_basis<Scalar, N>();
  return d * spatial * d.transpose();
}

template <int N, typename Derived>
Eigen::Matrix<typename Derived::Scalar, N, N, Eigen::RowMajor> idct(const Eigen::MatrixBase<Derived>& coeffs) {
  using Scalar = typename Derived::Scalar;
  const auto& d = dct_basis<Scalar, N>();
  return d.transpose() * coeffs * d;
}

template <typename Derived>
auto fdct8(const Eigen::MatrixBase<Derived>& spatial) {
  return fdct<8>(spatial);
}
template <typename Derived>
auto idct8(const Eigen::MatrixBase<Derived>& coeffs) {
  return idct<8>(coeffs);
}
template <typename Derived>
auto fdct16(const Eigen::MatrixBase<Derived>& spatial) {
  return fdct<16>(spatial);
}
template <typename Derived>
auto idct16(const Eigen::MatrixBase<Derived>& coeffs) {
  return idct<16>(coeffs);
}

}  // namespace freqsr
