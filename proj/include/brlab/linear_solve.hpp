// Copyright 2026 The brlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include "brlab/errors.hpp"

namespace brlab::detail {

// Row-major dense n x n matrix.
template <typename Scalar>
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<Scalar> a;

  explicit DenseMatrix(std::size_t size) : n(size), a(size * size, Scalar(0)) {}
  Scalar& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const {
    return a[r * n + c];
  }
};

// Gaussian elimination. Floating scalars use partial pivoting; exact scalars
// take the first nonzero pivot. Throws InternalError on a singular matrix.
template <typename Scalar>
std::vector<Scalar> gaussian_solve(DenseMatrix<Scalar> m, std::vector<Scalar> b) {
  const std::size_t n = m.n;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    if constexpr (std::is_floating_point_v<Scalar>) {
      Scalar best = 0;
      for (std::size_t r = col; r < n; ++r) {
        if (std::abs(m(r, col)) > best) {
          best = std::abs(m(r, col));
          pivot = r;
        }
      }
      if (best == 0) pivot = n;
    } else {
      for (std::size_t r = col; r < n; ++r) {
        if (m(r, col) != 0) {
          pivot = r;
          break;
        }
      }
    }
    if (pivot == n) throw InternalError("singular linear system");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(pivot, c), m(col, c));
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m(r, col) == 0) continue;
      const Scalar f = m(r, col) / m(col, col);
      for (std::size_t c = col; c < n; ++c) m(r, c) -= f * m(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<Scalar> x(n, Scalar(0));
  for (std::size_t i = n; i-- > 0;) {
    Scalar s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m(i, c) * x[c];
    x[i] = s / m(i, i);
  }
  return x;
}

}  // namespace brlab::detail
