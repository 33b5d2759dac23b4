// Copyright 2026 The weylkit Authors
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

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <vector>

#include "weylkit/util.hpp"

namespace weylkit {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;

/// Density matrices are plain dense complex matrices; hermiticity and unit
/// trace are the caller's contract, positivity is never enforced.
using DensityMatrix = DenseMatrix;

inline void require_square(const DenseMatrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
}

inline void require_same_dim(const DenseMatrix& a, const DenseMatrix& b,
                             const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline bool is_hermitian(const DenseMatrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline std::vector<Complex> eigenvalues(const DenseMatrix& m) {
  require_square(m, "eigenvalues");
  Eigen::ComplexEigenSolver<DenseMatrix> solver(m, false);
  std::vector<Complex> out(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + m.rows());
  return out;
}

inline std::vector<double> eigenvalues_hermitian(const DenseMatrix& m) {
  require_square(m, "eigenvalues_hermitian");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m,
                                                    Eigen::EigenvaluesOnly);
  std::vector<double> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + m.rows());
  return out;
}

}  // namespace weylkit
