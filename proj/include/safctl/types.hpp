#pragma once

#include <Eigen/Dense>

namespace safctl {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVec = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using MatX = Mat<double>;
using VecX = Vec<double>;

// Numerical tolerances used across the toolbox.
namespace tol {
inline constexpr double kDare = 1e-12;          // DARE fixed-point convergence (inf norm)
inline constexpr int kDareMaxIter = 1'000'000;
inline constexpr double kRankRel = 1e-10;       // singular values below max(m,n)*smax*kRankRel are zero
inline constexpr double kDecompZero = 1e-9;     // uncontrollable block of W^-1*B must vanish to this
inline constexpr double kCondLimit = 1e12;      // basis rejection threshold
inline constexpr double kKnapsack = 1e-9;       // budget equality on projected green times
inline constexpr double kFilter = 1e-12;        // filter Riccati convergence
}  // namespace tol

}  // namespace safctl
