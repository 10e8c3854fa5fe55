#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include "openset/kernels.hpp"
#include "openset/rng.hpp"

using namespace openset;

namespace {

Matrix random_matrix(Xoshiro256& rng, std::size_t rows, std::size_t cols, double lo = 0.0,
                     double hi = 1.0) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (auto& v : m.row(i)) v = rng.uniform(lo, hi);
    }
    return m;
}

std::vector<double> random_vector(Xoshiro256& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

struct Shape {
    std::size_t rows, cols;
};

}  // namespace

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
    Xoshiro256 rng(2024);
    // Small shapes stay serial, the large ones cross kParallelMinWork.
    const std::vector<Shape> shapes = {{3, 2}, {17, 5}, {800, 32}, {2000, 100}, {300, 513}};
    for (int threads : {1, 2, 4, 7}) {
        omp_set_num_threads(threads);
        for (const auto& s : shapes) {
            CAPTURE(threads);
            CAPTURE(s.rows);
            CAPTURE(s.cols);
            const Matrix a = random_matrix(rng, s.rows, s.cols);
            const auto x = random_vector(rng, s.cols, -0.05, 0.05);
            const auto b = random_vector(rng, s.rows, -0.2, 1.0);

            const auto d_ref = kernels::serial::residual(a, x, b);
            const auto d_par = kernels::residual(a, x, b);
            CHECK(d_ref == d_par);
            CHECK(kernels::serial::exp_loss(d_ref) == kernels::exp_loss(d_par));
            CHECK(kernels::serial::exp_loss_gradient(a, d_ref) == kernels::exp_loss_gradient(a, d_par));

            const Matrix w = random_matrix(rng, s.cols, 11, -1.0, 1.0);
            CHECK(kernels::serial::scores(a, w) == kernels::scores(a, w));
        }
    }
    omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("long residual vectors take the parallel loss path") {
    Xoshiro256 rng(9);
    omp_set_num_threads(3);
    const auto d = random_vector(rng, kernels::kParallelMinWork * 2, -1.0, 1.0);
    CHECK(kernels::serial::exp_loss(d) == kernels::exp_loss(d));
    omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("serial reference loops compute the textbook formulas") {
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    const std::vector<double> x = {1, 1};
    const std::vector<double> b = {1, 1};
    const auto d = kernels::serial::residual(a, x, b);
    CHECK(d == std::vector<double>{2, 6});
    CHECK(kernels::serial::exp_loss(d) == doctest::Approx(std::exp(4.0) + std::exp(36.0)));

    const auto g = kernels::serial::exp_loss_gradient(a, d);
    const double w0 = 2 * std::exp(4.0) * 2;
    const double w1 = 2 * std::exp(36.0) * 6;
    CHECK(g[0] == doctest::Approx(w0 * 1 + w1 * 3));
    CHECK(g[1] == doctest::Approx(w0 * 2 + w1 * 4));

    const Matrix w = Matrix::from_rows({{1, 0, 2}, {0, 1, -1}});
    CHECK(kernels::serial::scores(a, w) == Matrix::from_rows({{1, 2, 0}, {3, 4, 2}}));
}
