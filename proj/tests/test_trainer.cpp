#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "openset/error.hpp"
#include "openset/rng.hpp"
#include "openset/trainer.hpp"

using namespace openset;

namespace {

oracle::Rows to_rows(const Matrix& m) {
    oracle::Rows rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) rows[i].assign(m.row(i).begin(), m.row(i).end());
    return rows;
}

Matrix random_unit_matrix(Xoshiro256& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (auto& v : m.row(i)) v = rng.uniform();
    }
    return m;
}

std::vector<double> random_unit_vector(Xoshiro256& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform();
    return v;
}

FeatureSet toy_set(const std::vector<std::vector<double>>& feats, const std::vector<std::string>& labels) {
    std::vector<FeatureRecord> recs;
    for (std::size_t i = 0; i < feats.size(); ++i) {
        recs.push_back({"r" + std::to_string(i), labels[i], feats[i]});
    }
    return FeatureSet(std::move(recs), feats.front().size());
}

const std::string U(kUnlabeled);

}  // namespace

TEST_CASE("residual examples") {
    CHECK(residual(Matrix::from_rows({{1}}), std::vector<double>{1}, std::vector<double>{1}) ==
          std::vector<double>{0});
    CHECK(residual(Matrix::identity(2), std::vector<double>{2, 3}, std::vector<double>{0, 0}) ==
          std::vector<double>{2, 3});
    CHECK(residual(Matrix::from_rows({{1, 2}, {3, 4}}), std::vector<double>{1, 1},
                   std::vector<double>{1, 1}) == std::vector<double>{2, 6});
}

TEST_CASE("residual rejects mismatched shapes naming both") {
    CHECK_THROWS_WITH_AS(residual(Matrix(2, 3), std::vector<double>{1, 2}, std::vector<double>{0, 0}),
                         doctest::Contains("2x3"), ShapeError);
    CHECK_THROWS_AS(residual(Matrix(2, 2), std::vector<double>{1, 2}, std::vector<double>{0}), ShapeError);
}

TEST_CASE("loss examples") {
    CHECK(loss(Matrix::identity(4), std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 3, 4}) == 4.0);
    CHECK(loss(Matrix::from_rows({{1}}), std::vector<double>{1}, std::vector<double>{0}) ==
          doctest::Approx(2.718281828).epsilon(1e-9));
    CHECK(loss(Matrix::identity(2), std::vector<double>{0.5, 0}, std::vector<double>{0, 0}) ==
          doctest::Approx(2.284025417).epsilon(1e-9));
}

TEST_CASE("loss overflow asks for normalization") {
    CHECK_THROWS_WITH_AS(loss(Matrix::from_rows({{100}}), std::vector<double>{1}, std::vector<double>{0}),
                         doctest::Contains("normalized"), NumericError);
}

TEST_CASE("gradient examples") {
    CHECK(loss_gradient(Matrix::identity(3), std::vector<double>{1, 0, 0}, std::vector<double>{1, 0, 0}) ==
          std::vector<double>{0, 0, 0});
    const auto g = loss_gradient(Matrix::from_rows({{1}}), std::vector<double>{1}, std::vector<double>{0});
    CHECK(g[0] == doctest::Approx(5.436563657).epsilon(1e-9));
}

TEST_CASE("gradient agrees with central finite differences") {
    Xoshiro256 rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.next() % 10;
        const std::size_t m = 1 + rng.next() % 10;
        const Matrix a = random_unit_matrix(rng, n, m);
        const auto x = random_unit_vector(rng, m);
        const auto b = random_unit_vector(rng, n);

        const auto g = loss_gradient(a, x, b);
        const auto fd = oracle::fd_gradient(to_rows(a), x, b, 1e-6);
        std::vector<double> diff(m);
        for (std::size_t j = 0; j < m; ++j) diff[j] = g[j] - fd[j];
        CHECK(oracle::max_abs(diff) / oracle::max_abs(g) < 1e-5);
        CHECK(loss(a, x, b) == doctest::Approx(oracle::exp_loss(to_rows(a), x, b)).epsilon(1e-12));
    }
}

TEST_CASE("loss is bounded below by the row count") {
    Xoshiro256 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.next() % 10;
        const std::size_t m = 1 + rng.next() % 10;
        const Matrix a = random_unit_matrix(rng, n, m);
        const auto x = random_unit_vector(rng, m);
        const auto b = random_unit_vector(rng, n);
        CHECK(loss(a, x, b) >= static_cast<double>(n));
    }
}

TEST_CASE("identity features reach the perfect-fit floor") {
    TrainConfig cfg;
    cfg.epochs = 5000;
    const auto result = train_class(Matrix::identity(3), std::vector<double>{1, 0, 0}, cfg, 3);
    CHECK(result.final_loss <= 3.0 + 1e-6);
    const auto fit = residual(Matrix::identity(3), result.weights, std::vector<double>{1, 0, 0});
    CHECK(oracle::max_abs(fit) < 1e-3);
}

TEST_CASE("an exact starting point stays put") {
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.tol = 0.0;
    const Matrix a = Matrix::from_rows({{1, 0}, {0, 2}, {1, 1}});
    const std::vector<double> x0 = {0.5, 0.25};
    const std::vector<double> b = {0.5, 0.5, 0.75};
    const auto result = train_class_from(a, b, cfg, x0);
    CHECK(result.weights == x0);
    CHECK(result.final_loss == 3.0);
    CHECK(result.epochs_used == 1);
}

TEST_CASE("accepted losses never increase") {
    Xoshiro256 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.next() % 30;
        const std::size_t m = 2 + rng.next() % 10;
        const Matrix a = random_unit_matrix(rng, n, m);
        auto b = random_unit_vector(rng, n);
        TrainConfig cfg;
        cfg.epochs = 300;
        cfg.lr0 = 1.0;  // large enough to force backtracking
        const auto result = train_class(a, b, cfg, trial);
        for (std::size_t k = 1; k < result.trace.size(); ++k) {
            CHECK(result.trace[k].loss <= result.trace[k - 1].loss);
            CHECK(result.trace[k].learning_rate <= result.trace[k - 1].learning_rate);
            CHECK(result.trace[k].epoch == result.trace[k - 1].epoch + 1);
        }
        CHECK(result.final_loss >= static_cast<double>(n));
    }
}

TEST_CASE("training is deterministic per seed") {
    Xoshiro256 rng(8);
    const Matrix a = random_unit_matrix(rng, 20, 6);
    const auto b = random_unit_vector(rng, 20);
    TrainConfig cfg;
    const auto r1 = train_class(a, b, cfg, 77);
    const auto r2 = train_class(a, b, cfg, 77);
    CHECK(r1.weights == r2.weights);
    CHECK(initial_weights(6, 0.01, 5) == initial_weights(6, 0.01, 5));
    for (double v : initial_weights(50, 0.01, 5)) {
        CHECK(v >= -0.01);
        CHECK(v <= 0.01);
    }
}

TEST_CASE("a non-finite initial loss is reported") {
    TrainConfig cfg;
    const Matrix a = Matrix::from_rows({{1e3, 1e3}});
    CHECK_THROWS_AS(train_class_from(a, std::vector<double>{0}, cfg, {1.0, 1.0}), NumericError);
}

TEST_CASE("backtracking gives up after the retry budget") {
    // 1e300 * 0.5^60 is still far too large: every candidate overflows.
    TrainConfig cfg;
    cfg.lr0 = 1e300;
    cfg.lr_shrink = 0.5;
    cfg.epochs = 5;
    const auto result = train_class_from(Matrix::from_rows({{1.0}}), std::vector<double>{0.0}, cfg, {0.5});
    CHECK(result.stop == StopReason::LearningRateUnderflow);
    CHECK(result.epochs_used == 0);
    CHECK(result.weights == std::vector<double>{0.5});
    CHECK(result.trace.size() == 1);
}

TEST_CASE("config validation") {
    TrainConfig cfg;
    cfg.lr_shrink = 1.0;
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.epochs = 0;
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.lr0 = -1;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("six-record toy model ranks each labeled record's class first") {
    const auto data = toy_set({{1, 0, 0, 0.1}, {0, 1, 0, 0.1}, {0, 0, 1, 0.1},
                               {0.3, 0.3, 0.3, 1}, {0.2, 0.4, 0.3, 1}, {0.35, 0.25, 0.3, 1}},
                              {"c1", "c2", "c3", U, U, U});
    TrainConfig cfg;
    cfg.epochs = 5000;
    const auto model = train_model(data, build_target_matrix(data), cfg);
    CHECK(model.class_count() == 3);
    CHECK(model.weights.rows() == 4);
    for (std::size_t i = 0; i < 3; ++i) {
        std::size_t top = 0;
        double best = -1e300;
        for (std::size_t j = 0; j < 3; ++j) {
            double s = 0;
            for (std::size_t k = 0; k < 4; ++k) s += data.records()[i].features[k] * model.weights(k, j);
            if (s > best) {
                best = s;
                top = j;
            }
        }
        CHECK(top == i);
    }
}

TEST_CASE("train_model rejects zero classes and mismatched rows") {
    const auto data = toy_set({{0, 1}, {1, 0}}, {"a", "b"});
    TargetMatrix empty;
    empty.values = Matrix(2, 0);
    CHECK_THROWS(train_model(data, empty, TrainConfig{}));
    TargetMatrix short_rows = build_target_matrix(toy_set({{0, 1}}, {"a"}));
    CHECK_THROWS_AS(train_model(data, short_rows, TrainConfig{}), ShapeError);
}

TEST_CASE("class columns are independent of column order") {
    SynthSpec spec{4, 2, 8, 6, 1, 0.2, 3};
    const auto data = generate_synthetic(spec).first;
    const auto targets = build_target_matrix(data);
    TrainConfig cfg;
    cfg.epochs = 200;
    std::vector<std::vector<TraceEntry>> traces;
    const auto model = train_model(data, targets, cfg, &traces);
    CHECK(traces.size() == 4);

    // Reverse the columns; class j lands at 3 - j and must keep seed + j.
    TargetMatrix reversed = targets;
    std::reverse(reversed.class_names.begin(), reversed.class_names.end());
    for (std::size_t j = 0; j < 4; ++j) reversed.values.set_column(j, targets.values.column(3 - j));
    for (std::size_t j = 0; j < 4; ++j) {
        const auto col = reversed.values.column(j);
        auto r = train_class(data.feature_matrix(), col, cfg, cfg.seed + (3 - j));
        CHECK(r.weights == model.weights.column(3 - j));
    }

    const auto again = train_model(data, targets, cfg);
    CHECK(again.weights == model.weights);
}

TEST_CASE("condition-number oracle on known matrices") {
    CHECK(oracle::condition_number({{1, 0}, {0, 1}}) == doctest::Approx(1.0));
    CHECK(oracle::condition_number({{3, 0}, {0, 0.5}}) == doctest::Approx(6.0));
    CHECK(oracle::condition_number({{2, 1}, {1, 2}}) == doctest::Approx(3.0));
}
