#pragma once

// Brute-force reference math for tests. Deliberately independent of the
// library's basis matrices and conversion matrices: every transform here is
// a literal double sum over the cosine definition.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "freqsr/dct_model.hpp"

namespace freqsr::testing {

using Dense = Eigen::MatrixXd;

inline double dct_alpha(int u) { return u == 0 ? std::sqrt(0.5) : 1.0; }

// F(u,v) = (2/N) a(u) a(v) sum_x sum_y f(x,y) cos((2x+1)u pi/2N) cos((2y+1)v pi/2N)
inline Dense brute_fdct(const Dense& f) {
  const int n = static_cast<int>(f.rows());
  Dense out(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      double sum = 0.0;
      for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
          sum += f(x, y) * std::cos((2 * x + 1) * u * std::numbers::pi / (2 * n)) *
                 std::cos((2 * y + 1) * v * std::numbers::pi / (2 * n));
        }
      }
      out(u, v) = 2.0 / n * dct_alpha(u) * dct_alpha(v) * sum;
    }
  }
  return out;
}

inline Dense brute_idct(const Dense& coeffs) {
  const int n = static_cast<int>(coeffs.rows());
  Dense out(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      double sum = 0.0;
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          sum += dct_alpha(u) * dct_alpha(v) * coeffs(u, v) * std::cos((2 * x + 1) * u * std::numbers::pi / (2 * n)) *
                 std::cos((2 * y + 1) * v * std::numbers::pi / (2 * n));
        }
      }
      out(x, y) = 2.0 / n * sum;
    }
  }
  return out;
}

// Zero-pad an 8x8 spectrum to 16x16 scaled by 2 (sqrt 2 per axis), inverse
// transform, split into four tiles and forward transform each tile.
// Returns tiles in order (0,0), (0,1), (1,0), (1,1).
inline std::vector<Dense> brute_upsample_block(const Dense& block8) {
  Dense padded = Dense::Zero(16, 16);
  padded.topLeftCorner(8, 8) = 2.0 * block8;
  const Dense spatial = brute_idct(padded);
  std::vector<Dense> tiles;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) tiles.push_back(brute_fdct(spatial.block(8 * a, 8 * b, 8, 8)));
  }
  return tiles;
}

inline Dense random_dense(std::mt19937_64& rng, int rows, int cols, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Dense m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = u(rng);
  }
  return m;
}

inline DctPlane random_plane(std::mt19937_64& rng, int rows, int cols, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  DctPlane p(rows, cols);
  for (double& v : p.coeffs()) v = u(rng);
  return p;
}

}  // namespace freqsr::testing
