#include "qsplit/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace qsplit {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double rel_residual(const Mat& lhs, const Mat& rhs) {
  const double diff = (lhs - rhs).norm();
  const double scale = lhs.norm();
  if (diff == 0.0) return 0.0;
  if (scale == 0.0) return diff / std::max(rhs.norm(), 1e-300);
  return diff / scale;
}

double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

Mat hermitian_part(const Mat& a) { return (a + a.adjoint()) / 2.0; }

namespace {

template <class F>
Mat calculus(const Mat& a, double rel_threshold, F f) {
  if (a.size() == 0) return a;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(a));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cut = rel_threshold * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd g(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) g(k) = ev(k) > cut ? f(ev(k)) : 0.0;
  return es.eigenvectors() * g.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Mat psd_sqrt(const Mat& a) {
  return calculus(a, 0.0, [](double x) { return std::sqrt(x); });
}

Mat psd_pinv(const Mat& a, double t) {
  return calculus(a, t, [](double x) { return 1.0 / x; });
}

Mat psd_pinv_sqrt(const Mat& a, double t) {
  return calculus(a, t, [](double x) { return 1.0 / std::sqrt(x); });
}

Support psd_support(const Mat& a, double t) {
  Support s;
  if (a.size() == 0) {
    s.vectors = Mat(a.rows(), 0);
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(a));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cut = t * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > cut) keep.push_back(k);
  s.vectors = Mat(a.rows(), static_cast<Eigen::Index>(keep.size()));
  s.values = Eigen::VectorXd(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    s.vectors.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
    s.values(static_cast<Eigen::Index>(j)) = ev(keep[j]);
  }
  return s;
}

Mat null_space(const Mat& a, double t) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return Mat::Identity(n, n);
  // reduce to a square triangular factor first; it has the same right singular vectors
  Mat r = a;
  if (a.rows() > n) {
    Eigen::HouseholderQR<Mat> qr(a);
    r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  }
  Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = t * std::max(s(0), 1e-300);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

int numerical_rank(const Mat& a, double t) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  const double cut = t * s(0);
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > cut) ++r;
  return r;
}

Mat random_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> nd;
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = nd(rng);
      const double im = nd(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

CVec random_vector(int n, Rng& rng) { return random_matrix(n, 1, rng).col(0); }

std::vector<int> cluster_sorted(const Eigen::VectorXd& v, double split_gap) {
  std::vector<int> starts;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (k == 0 || v(k) - v(k - 1) > split_gap) starts.push_back(static_cast<int>(k));
  starts.push_back(static_cast<int>(v.size()));
  return starts;
}

}  // namespace qsplit
