// Copyright 2026 The OnOff Privacy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test-only helpers. The oracles here work from first principles (explicit
// matrix products, power iteration, entropies) and never call the closed
// forms they are used to check.

#ifndef ONOFF_TESTS_TEST_UTIL_H_
#define ONOFF_TESTS_TEST_UTIL_H_

#include <array>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "onoff/markov.h"

#define ONOFF_CONCAT_INNER(a, b) a##b
#define ONOFF_CONCAT(a, b) ONOFF_CONCAT_INNER(a, b)

#define ASSERT_OK(expr) ASSERT_TRUE((expr).ok()) << (expr).status()
#define EXPECT_OK(expr) EXPECT_TRUE((expr).ok())

#define ASSERT_OK_AND_ASSIGN(lhs, expr)                         \
  auto ONOFF_CONCAT(status_or_, __LINE__) = (expr);             \
  ASSERT_TRUE(ONOFF_CONCAT(status_or_, __LINE__).ok())          \
      << ONOFF_CONCAT(status_or_, __LINE__).status();           \
  lhs = *std::move(ONOFF_CONCAT(status_or_, __LINE__))

namespace onoff::testing {

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Matrix3 = std::array<std::array<double, 3>, 3>;

inline MarkovModel Model(double alpha, double beta) {
  return *MarkovModel::Create(alpha, beta);
}

inline Matrix2 TransitionMatrix(double alpha, double beta) {
  return {{{1 - alpha, alpha}, {beta, 1 - beta}}};
}

template <size_t N>
std::array<std::array<double, N>, N> Multiply(
    const std::array<std::array<double, N>, N>& x,
    const std::array<std::array<double, N>, N>& y) {
  std::array<std::array<double, N>, N> out{};
  for (size_t i = 0; i < N; ++i) {
    for (size_t k = 0; k < N; ++k) {
      for (size_t j = 0; j < N; ++j) out[i][j] += x[i][k] * y[k][j];
    }
  }
  return out;
}

inline Matrix2 MatrixPower(const Matrix2& m, int t) {
  Matrix2 out = {{{1, 0}, {0, 1}}};
  for (int i = 0; i < t; ++i) out = Multiply(out, m);
  return out;
}

// Left fixed point of a 2x2 stochastic matrix by repeated multiplication.
inline std::array<double, 2> PowerIterateStationary(const Matrix2& m) {
  std::array<double, 2> pi = {0.5, 0.5};
  for (int i = 0; i < 10000; ++i) {
    pi = {pi[0] * m[0][0] + pi[1] * m[1][0], pi[0] * m[0][1] + pi[1] * m[1][1]};
  }
  return pi;
}

inline double Entropy2(double p) {
  double h = 0.0;
  for (double q : {p, 1 - p}) {
    if (q > 0) h -= q * std::log2(q);
  }
  return h;
}

// 0, 0.05, ..., 1 (or any step that divides 1), computed from integers.
inline std::vector<double> Grid(int divisions) {
  std::vector<double> out;
  for (int i = 0; i <= divisions; ++i) out.push_back(i / double(divisions));
  return out;
}

}  // namespace onoff::testing

#endif  // ONOFF_TESTS_TEST_UTIL_H_
