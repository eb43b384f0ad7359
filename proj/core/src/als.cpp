#include "crossfeat/als.hpp"

#include <cmath>

#include "crossfeat/error.hpp"
#include "crossfeat/rng.hpp"

namespace crossfeat {

namespace {

// The objective decouples across embedding dimensions: row d of every a_i and
// b_k only interacts with row d of C. Each half-step therefore has the closed
// form A[d][i] = <B[d], C[d, i*]> / <B[d], B[d]> (and symmetrically for B).
double als_fit_once(const Matrix& c, std::size_t m, std::size_t n, SplitMix64& rng,
                    std::size_t max_iters, double tol, double c_norm2) {
  const std::size_t d_rows = c.rows;
  std::vector<double> a(d_rows * m), b(d_rows * n);
  for (auto& v : a) v = rng.next_gaussian();
  for (auto& v : b) v = rng.next_gaussian();

  auto residual = [&] {
    double s = 0.0;
    for (std::size_t d = 0; d < d_rows; ++d) {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          double e = a[d * m + i] * b[d * n + k] - c.at(d, i * n + k);
          s += e * e;
        }
      }
    }
    return s;
  };

  double prev = residual();
  for (std::size_t it = 0; it < max_iters; ++it) {
    for (std::size_t d = 0; d < d_rows; ++d) {
      double bb = 0.0;
      for (std::size_t k = 0; k < n; ++k) bb += b[d * n + k] * b[d * n + k];
      for (std::size_t i = 0; i < m; ++i) {
        double bc = 0.0;
        for (std::size_t k = 0; k < n; ++k) bc += b[d * n + k] * c.at(d, i * n + k);
        a[d * m + i] = bb > 0.0 ? bc / bb : 0.0;
      }
    }
    for (std::size_t d = 0; d < d_rows; ++d) {
      double aa = 0.0;
      for (std::size_t i = 0; i < m; ++i) aa += a[d * m + i] * a[d * m + i];
      for (std::size_t k = 0; k < n; ++k) {
        double ac = 0.0;
        for (std::size_t i = 0; i < m; ++i) ac += a[d * m + i] * c.at(d, i * n + k);
        b[d * n + k] = aa > 0.0 ? ac / aa : 0.0;
      }
    }
    double cur = residual();
    if (prev - cur <= tol * std::max(1.0, c_norm2)) {
      prev = cur;
      break;
    }
    prev = cur;
  }
  return prev;
}

}  // namespace

double cin_residual(const Matrix& c, std::size_t m, std::size_t n, std::size_t restarts,
                    std::uint64_t seed, std::size_t max_iters, double tol) {
  if (c.rows == 0 || m == 0 || n == 0 || c.cols != m * n) {
    throw Error(Errc::bad_argument, "C must be D x (m*n) with positive dims");
  }
  if (restarts == 0) throw Error(Errc::bad_argument, "restarts must be >= 1");
  double c_norm2 = 0.0;
  for (double v : c.data) {
    if (!std::isfinite(v)) throw Error(Errc::bad_argument, "C contains non-finite entries");
    c_norm2 += v * v;
  }
  if (c_norm2 == 0.0) return 0.0;  // zero target is exactly representable

  SplitMix64 rng(derive_seed(seed, "cin-als"));
  double best = -1.0;
  for (std::size_t r = 0; r < restarts; ++r) {
    double res = als_fit_once(c, m, n, rng, max_iters, tol, c_norm2);
    if (best < 0.0 || res < best) best = res;
  }
  return best / c_norm2;
}

}  // namespace crossfeat
