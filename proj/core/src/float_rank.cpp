#include "aqe/linalg/float_rank.hpp"

#include <Eigen/SVD>

namespace aqe {

namespace {

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  // Pad to a square-or-taller matrix so the full V is always available.
  const auto n = static_cast<Eigen::Index>(std::max(rows.size(), cols));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

std::size_t count_rank(const Eigen::VectorXd& sv, double relative_threshold) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > relative_threshold * sv(0)) ++rank;
  }
  return rank;
}

}  // namespace

std::size_t float_rank(const std::vector<std::vector<double>>& rows, std::size_t cols, double relative_threshold) {
  if (rows.empty() || cols == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(rows, cols));
  return count_rank(svd.singularValues(), relative_threshold);
}

std::vector<std::vector<double>> float_kernel(const std::vector<std::vector<double>>& rows, std::size_t cols,
                                              double relative_threshold) {
  std::vector<std::vector<double>> basis;
  if (cols == 0) return basis;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(rows, cols), Eigen::ComputeFullV);
  const std::size_t rank = rows.empty() ? 0 : count_rank(svd.singularValues(), relative_threshold);
  const Eigen::MatrixXd& v = svd.matrixV();
  for (std::size_t k = rank; k < cols; ++k) {
    std::vector<double> vec(cols);
    for (std::size_t i = 0; i < cols; ++i) vec[i] = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    basis.push_back(std::move(vec));
  }
  return basis;
}

}  // namespace aqe
