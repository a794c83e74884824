// Copyright 2026 The occam-icl Authors.
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

#ifndef OCCAM_NUMERICS_LINALG_HPP_
#define OCCAM_NUMERICS_LINALG_HPP_

#include <cmath>
#include <cstddef>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SVD>

#include "occam/numerics/errors.hpp"

namespace occam {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kPinvRelativeCutoff = 1e-10;

/// Cholesky pivots below this fraction of the Gram trace signal singularity.
inline constexpr double kGramPivotRelativeCutoff = 1e-12;

enum class GramMode {
  kRowGram,     ///< A Aᵀ
  kColumnGram,  ///< Aᵀ A
};

/// Moore-Penrose solve A†y. For underdetermined systems this is the
/// minimum-Euclidean-norm interpolator.
inline Vector pinv_apply(const Matrix& a, const Vector& y) {
  if (a.rows() != y.size()) throw DomainError("pinv_apply: A.rows != |y|");
  if (a.cols() == 0) return Vector(0);
  if (a.rows() == 0) return Vector::Zero(a.cols());
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kPinvRelativeCutoff);
  return svd.solve(y);
}

/// Relative residual ‖y − Π y‖ / ‖y‖ of projecting y onto range(A).
/// Zero for y = 0.
inline double projection_residual(const Matrix& a, const Vector& y) {
  const double norm = y.norm();
  if (norm == 0.0) return 0.0;
  const Vector fitted = a * pinv_apply(a, y);
  return (y - fitted).norm() / norm;
}

/// ln det of A Aᵀ or Aᵀ A via Cholesky.
inline double log_det_gram(const Matrix& a, GramMode mode) {
  const Matrix gram = mode == GramMode::kRowGram
                          ? Matrix(a * a.transpose())
                          : Matrix(a.transpose() * a);
  if (gram.rows() == 0) return 0.0;
  const double trace = gram.trace();
  const double cutoff = kGramPivotRelativeCutoff * trace;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success || !(trace > 0.0)) {
    throw SingularityError("log_det_gram: Gram matrix is not positive definite");
  }
  const Matrix& l = llt.matrixLLT();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double pivot = l(i, i) * l(i, i);
    if (!(pivot >= cutoff)) {
      throw SingularityError("log_det_gram: rank-deficient Gram matrix");
    }
    log_det += std::log(pivot);
  }
  return log_det;
}

}  // namespace occam

#endif  // OCCAM_NUMERICS_LINALG_HPP_
