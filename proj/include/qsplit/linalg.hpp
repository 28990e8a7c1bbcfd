#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace qsplit {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Rng = std::mt19937_64;

inline constexpr double kRankThreshold = 1e-10;

Mat kron(const Mat& a, const Mat& b);

/// ||lhs - rhs||_F / ||lhs||_F, and 0 when both vanish.
double rel_residual(const Mat& lhs, const Mat& rhs);
double op_norm(const Mat& a);

Mat hermitian_part(const Mat& a);

/// Functional calculus on a Hermitian positive semidefinite matrix; the
/// eigenvalues below rel_threshold * max are treated as zero.
Mat psd_sqrt(const Mat& a);
Mat psd_pinv(const Mat& a, double rel_threshold = kRankThreshold);
Mat psd_pinv_sqrt(const Mat& a, double rel_threshold = kRankThreshold);
/// Orthonormal columns spanning the support of a Hermitian PSD matrix,
/// together with the corresponding eigenvalues (ascending order preserved).
struct Support {
  Mat vectors;
  Eigen::VectorXd values;
};
Support psd_support(const Mat& a, double rel_threshold = kRankThreshold);

/// Orthonormal basis (columns) of {x : a x = 0}.
Mat null_space(const Mat& a, double rel_threshold = kRankThreshold);
int numerical_rank(const Mat& a, double rel_threshold = kRankThreshold);

Mat random_matrix(int rows, int cols, Rng& rng);
CVec random_vector(int n, Rng& rng);

/// Groups sorted values into clusters separated by gaps > split_gap. Returns
/// cluster start indices plus a final sentinel.
std::vector<int> cluster_sorted(const Eigen::VectorXd& sorted, double split_gap);

}  // namespace qsplit
