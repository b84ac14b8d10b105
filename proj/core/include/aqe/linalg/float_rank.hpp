#pragma once

#include <cstddef>
#include <vector>

namespace aqe {

/// Numerical rank: singular values above `relative_threshold` times the largest one.
std::size_t float_rank(const std::vector<std::vector<double>>& rows, std::size_t cols,
                       double relative_threshold = 1e-9);

/// Orthonormal basis of the numerical right kernel under the same threshold.
std::vector<std::vector<double>> float_kernel(const std::vector<std::vector<double>>& rows, std::size_t cols,
                                              double relative_threshold = 1e-9);

}  // namespace aqe
