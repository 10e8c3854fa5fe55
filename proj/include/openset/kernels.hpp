#pragma once

#include <span>
#include <vector>

#include "openset/matrix.hpp"

namespace openset::kernels {

// Dense kernels behind training and scoring. The `serial` namespace holds
// the plain reference loops; the unqualified versions split the outer loop
// across OpenMP threads. Every output element is accumulated by one thread
// in the same index order as the reference, so both paths return
// bit-identical results for any thread count.

/// Below this many multiply-adds the parallel kernels stay single threaded.
inline constexpr std::size_t kParallelMinWork = 1 << 14;

namespace serial {

/// d = A x - b
std::vector<double> residual(const Matrix& a, std::span<const double> x, std::span<const double> b);
/// sum_i exp(d_i^2)
double exp_loss(std::span<const double> d);
/// g_j = sum_i 2 exp(d_i^2) d_i A_ij
std::vector<double> exp_loss_gradient(const Matrix& a, std::span<const double> d);
/// S = F W
Matrix scores(const Matrix& features, const Matrix& weights);

}  // namespace serial

std::vector<double> residual(const Matrix& a, std::span<const double> x, std::span<const double> b);
double exp_loss(std::span<const double> d);
std::vector<double> exp_loss_gradient(const Matrix& a, std::span<const double> d);
Matrix scores(const Matrix& features, const Matrix& weights);

}  // namespace openset::kernels
