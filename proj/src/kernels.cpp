#include "openset/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace openset::kernels {

namespace {

inline double row_dot(std::span<const double> row, std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
    return acc;
}

inline double gradient_weight(double d) { return 2.0 * std::exp(d * d) * d; }

// Accumulates g[j] += w_i * A_ij for j in [begin, end), i ascending.
inline void accumulate_columns(const Matrix& a, std::span<const double> w, std::span<double> g,
                               std::size_t begin, std::size_t end) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto row = a.row(i);
        const double wi = w[i];
        for (std::size_t j = begin; j < end; ++j) g[j] += wi * row[j];
    }
}

inline void score_row(const Matrix& features, const Matrix& weights, Matrix& out, std::size_t i) {
    auto dst = out.row(i);
    const auto src = features.row(i);
    for (std::size_t k = 0; k < features.cols(); ++k) {
        const double f = src[k];
        const auto wrow = weights.row(k);
        for (std::size_t j = 0; j < weights.cols(); ++j) dst[j] += f * wrow[j];
    }
}

constexpr std::size_t kColumnBlock = 64;

}  // namespace

namespace serial {

std::vector<double> residual(const Matrix& a, std::span<const double> x, std::span<const double> b) {
    std::vector<double> d(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) d[i] = row_dot(a.row(i), x) - b[i];
    return d;
}

double exp_loss(std::span<const double> d) {
    double total = 0.0;
    for (double di : d) total += std::exp(di * di);
    return total;
}

std::vector<double> exp_loss_gradient(const Matrix& a, std::span<const double> d) {
    std::vector<double> w(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) w[i] = gradient_weight(d[i]);
    std::vector<double> g(a.cols(), 0.0);
    accumulate_columns(a, w, g, 0, a.cols());
    return g;
}

Matrix scores(const Matrix& features, const Matrix& weights) {
    Matrix out(features.rows(), weights.cols());
    for (std::size_t i = 0; i < features.rows(); ++i) score_row(features, weights, out, i);
    return out;
}

}  // namespace serial

std::vector<double> residual(const Matrix& a, std::span<const double> x, std::span<const double> b) {
    std::vector<double> d(a.rows());
    const auto n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static) if (a.rows() * a.cols() >= kParallelMinWork)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto r = static_cast<std::size_t>(i);
        d[r] = row_dot(a.row(r), x) - b[r];
    }
    return d;
}

double exp_loss(std::span<const double> d) {
    if (d.size() < kParallelMinWork) return serial::exp_loss(d);
    std::vector<double> terms(d.size());
    const auto n = static_cast<std::ptrdiff_t>(d.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) terms[i] = std::exp(d[i] * d[i]);
    double total = 0.0;
    for (double t : terms) total += t;
    return total;
}

std::vector<double> exp_loss_gradient(const Matrix& a, std::span<const double> d) {
    std::vector<double> w(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) w[i] = gradient_weight(d[i]);
    std::vector<double> g(a.cols(), 0.0);
    const auto blocks = static_cast<std::ptrdiff_t>((a.cols() + kColumnBlock - 1) / kColumnBlock);
#pragma omp parallel for schedule(static) if (a.rows() * a.cols() >= kParallelMinWork && blocks > 1)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
        const std::size_t begin = static_cast<std::size_t>(blk) * kColumnBlock;
        const std::size_t end = std::min(begin + kColumnBlock, a.cols());
        accumulate_columns(a, w, g, begin, end);
    }
    return g;
}

Matrix scores(const Matrix& features, const Matrix& weights) {
    Matrix out(features.rows(), weights.cols());
    const auto n = static_cast<std::ptrdiff_t>(features.rows());
    const std::size_t work = features.rows() * features.cols() * weights.cols();
#pragma omp parallel for schedule(static) if (work >= kParallelMinWork)
    for (std::ptrdiff_t i = 0; i < n; ++i) score_row(features, weights, out, static_cast<std::size_t>(i));
    return out;
}

}  // namespace openset::kernels
