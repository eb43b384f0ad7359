#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace crossfeat {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Probes whether C (D x m*n, column ik at index i*n + k) is an entry-wise
// product family: alternating least squares fits columns a_i of A (D x m) and
// b_k of B (D x n) minimizing sum_ik ||a_i o b_k - c_ik||^2 and the result is
// the best relative residual over `restarts` random initializations,
// residual / ||C||_F^2. A residual at numerical zero certifies
// representability; a floor bounded away from zero witnesses that no
// embedding pair (A, B) can reproduce the crossing.
double cin_residual(const Matrix& c, std::size_t m, std::size_t n, std::size_t restarts,
                    std::uint64_t seed, std::size_t max_iters = 500, double tol = 1e-13);

}  // namespace crossfeat
