#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "openset/dataset.hpp"
#include "openset/error.hpp"
#include "openset/rng.hpp"
#include "openset/targets.hpp"

using namespace openset;

namespace {

FeatureSet labeled_set(const std::vector<std::string>& labels) {
    std::vector<FeatureRecord> recs;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        recs.push_back({"img" + std::to_string(i), labels[i], {0.0, 1.0}});
    }
    return FeatureSet(std::move(recs), 2);
}

const std::string U(kUnlabeled);

}  // namespace

TEST_CASE("six-image example: three labeled classes and three unlabeled rows") {
    const auto data = labeled_set({"c1", "c2", "c3", U, U, U});
    const auto t = build_target_matrix(data, -0.2);
    const Matrix expected = Matrix::from_rows({{1, 0, 0},
                                               {0, 1, 0},
                                               {0, 0, 1},
                                               {-0.2, -0.2, -0.2},
                                               {-0.2, -0.2, -0.2},
                                               {-0.2, -0.2, -0.2}});
    CHECK(t.values == expected);
    CHECK(t.class_names == std::vector<std::string>{"c1", "c2", "c3"});
    CHECK(t.negative_value == -0.2);
}

TEST_CASE("all-labeled data gives a pure one-hot matrix") {
    const auto data = labeled_set({"a", "b", "a", "a", "b"});
    const auto t = build_target_matrix(data);
    CHECK(t.values.rows() == 5);
    CHECK(t.values.cols() == 2);
    const auto col_a = t.values.column(0);
    const auto col_b = t.values.column(1);
    CHECK(std::accumulate(col_a.begin(), col_a.end(), 0.0) == 3.0);
    CHECK(std::accumulate(col_b.begin(), col_b.end(), 0.0) == 2.0);
}

TEST_CASE("zero negative value yields all-zero irrelevant rows") {
    const auto t = build_target_matrix(labeled_set({"a", U}), 0.0);
    CHECK(t.values(1, 0) == 0.0);
    CHECK(negative_value_is_ambiguous(0.0));
    CHECK(negative_value_is_ambiguous(1.0));
    CHECK_FALSE(negative_value_is_ambiguous(-0.2));
    CHECK_THROWS_AS(t.row_kinds(), ConfigError);
}

TEST_CASE("1/N_class negative value is reachable through the same builder") {
    const auto t = build_target_matrix(labeled_set({"a", "b", "c", "d", U}), 1.0 / 4.0);
    for (std::size_t j = 0; j < 4; ++j) CHECK(t.values(4, j) == 0.25);
}

TEST_CASE("builder needs labeled data and a finite negative value") {
    CHECK_THROWS_AS(build_target_matrix(labeled_set({U, U})), std::invalid_argument);
    CHECK_THROWS_AS(build_target_matrix(labeled_set({"a"}), std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(build_plus_one_targets(labeled_set({U})), std::invalid_argument);
}

TEST_CASE("row kinds recover the labeled/unlabeled partition") {
    Xoshiro256 rng(17);
    const std::vector<std::string> names = {"a", "b", "c", U};
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::string> labels = {"a"};
        const int n = 1 + static_cast<int>(rng.next() % 30);
        for (int i = 0; i < n; ++i) labels.push_back(names[rng.next() % names.size()]);
        const double v = rng.uniform(-1.0, -0.01);
        const auto data = labeled_set(labels);
        const auto t = build_target_matrix(data, v);
        const auto kinds = t.row_kinds();

        std::size_t one_hot = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const bool labeled = labels[i] != U;
            CHECK((kinds[i] == RowKind::OneHot) == labeled);
            one_hot += labeled;
        }
        CHECK(one_hot == data.labeled_count());
        for (std::size_t j = 0; j < t.class_names.size(); ++j) {
            std::size_t hot = 0;
            for (std::size_t i = 0; i < labels.size(); ++i) hot += t.values(i, j) == 1.0;
            CHECK(hot == static_cast<std::size_t>(
                             std::count(labels.begin(), labels.end(), t.class_names[j])));
        }
    }
}

TEST_CASE("plus-one targets put unlabeled rows in the catch-all column") {
    const auto t = build_plus_one_targets(labeled_set({"c1", U, U}));
    CHECK(t.values == Matrix::from_rows({{1, 0}, {0, 1}, {0, 1}}));
    CHECK(t.class_names == std::vector<std::string>{"c1", std::string(kCatchAllClass)});
}

TEST_CASE("plus-one targets on the six-image example") {
    const auto t = build_plus_one_targets(labeled_set({"c1", "c2", "c3", U, U, U}));
    CHECK(t.values == Matrix::from_rows({{1, 0, 0, 0},
                                         {0, 1, 0, 0},
                                         {0, 0, 1, 0},
                                         {0, 0, 0, 1},
                                         {0, 0, 0, 1},
                                         {0, 0, 0, 1}}));
}

TEST_CASE("plus-one targets without unlabeled rows leave the catch-all empty") {
    const auto t = build_plus_one_targets(labeled_set({"a", "b"}));
    CHECK(t.values.cols() == 3);
    CHECK(t.values.column(2) == std::vector<double>{0, 0});
}
