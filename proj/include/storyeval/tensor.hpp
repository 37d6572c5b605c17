// Copyright 2026 The storyeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

namespace storyeval {

/// Dense row-major matrix. Kernels below take raw pointers with leading
/// dimensions so head-sliced views (stride = model width) work in place.
template <typename S>
struct Tensor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<S> v;

  Tensor() = default;
  Tensor(std::size_t r, std::size_t c) { resize(r, c); }

  void resize(std::size_t r, std::size_t c) {
    rows = r;
    cols = c;
    v.assign(r * c, S(0));
  }
  void zero() { std::fill(v.begin(), v.end(), S(0)); }
  S* row(std::size_t r) { return v.data() + r * cols; }
  const S* row(std::size_t r) const { return v.data() + r * cols; }
  S* data() { return v.data(); }
  const S* data() const { return v.data(); }
  std::size_t size() const { return v.size(); }
  bool empty() const { return v.empty(); }
};

/// C = A(M x K) * B(K x N), accumulating into C when accumulate is set.
/// The k-inner / j-vector loop order keeps every inner access contiguous.
template <typename S>
void gemm_nn(std::size_t M, std::size_t N, std::size_t K, const S* A,
             std::size_t lda, const S* B, std::size_t ldb, S* C,
             std::size_t ldc, bool accumulate) {
  for (std::size_t i = 0; i < M; ++i) {
    S* c = C + i * ldc;
    if (!accumulate)
      for (std::size_t j = 0; j < N; ++j) c[j] = S(0);
    const S* a = A + i * lda;
    for (std::size_t k = 0; k < K; ++k) {
      const S aik = a[k];
      const S* b = B + k * ldb;
      for (std::size_t j = 0; j < N; ++j) c[j] += aik * b[j];
    }
  }
}

/// C = A^T * B where A is K x M and B is K x N.
template <typename S>
void gemm_tn(std::size_t M, std::size_t N, std::size_t K, const S* A,
             std::size_t lda, const S* B, std::size_t ldb, S* C,
             std::size_t ldc, bool accumulate) {
  if (!accumulate)
    for (std::size_t i = 0; i < M; ++i)
      for (std::size_t j = 0; j < N; ++j) C[i * ldc + j] = S(0);
  for (std::size_t k = 0; k < K; ++k) {
    const S* a = A + k * lda;
    const S* b = B + k * ldb;
    for (std::size_t i = 0; i < M; ++i) {
      const S aki = a[i];
      S* c = C + i * ldc;
      for (std::size_t j = 0; j < N; ++j) c[j] += aki * b[j];
    }
  }
}

template <typename S>
void transpose(std::size_t rows, std::size_t cols, const S* A, std::size_t lda,
               S* out, std::size_t ldo) {
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j * ldo + i] = A[i * lda + j];
}

/// C = A(M x K) * B^T where B is N x K. B is transposed into scratch first;
/// a dot-product formulation would block vectorization of the reduction.
template <typename S>
void gemm_nt(std::size_t M, std::size_t N, std::size_t K, const S* A,
             std::size_t lda, const S* B, std::size_t ldb, S* C,
             std::size_t ldc, bool accumulate, std::vector<S>& scratch) {
  scratch.resize(K * N);
  transpose(N, K, B, ldb, scratch.data(), N);
  gemm_nn(M, N, K, A, lda, scratch.data(), N, C, ldc, accumulate);
}

}  // namespace storyeval
