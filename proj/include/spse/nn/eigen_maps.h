// Copyright 2026 The spse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPSE_NN_EIGEN_MAPS_H_
#define SPSE_NN_EIGEN_MAPS_H_

#include <Eigen/Dense>

namespace spse::nn {

using MatRM =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<MatRM>;
using CMapRM = Eigen::Map<const MatRM>;
// Row-major view whose consecutive rows are `stride` floats apart.
using StridedMapRM = Eigen::Map<MatRM, 0, Eigen::OuterStride<>>;
using CStridedMapRM = Eigen::Map<const MatRM, 0, Eigen::OuterStride<>>;

// acc += column sums of m, one row at a time. Eigen's vectorized reductions
// peel by buffer alignment, which makes their rounding depend on where the
// allocator put the data; row-wise accumulation does not.
template <typename Derived>
void AddColumnSums(const Eigen::MatrixBase<Derived>& m, float* acc) {
  Eigen::Map<Eigen::RowVectorXf> out(acc, m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) out += m.row(r);
}

}  // namespace spse::nn

#endif  // SPSE_NN_EIGEN_MAPS_H_
