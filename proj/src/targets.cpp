#include "openset/targets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "openset/error.hpp"

namespace openset {

namespace {

std::unordered_map<std::string, std::size_t> column_index(const std::vector<std::string>& names) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t j = 0; j < names.size(); ++j) index.emplace(names[j], j);
    return index;
}

void require_labeled(const FeatureSet& data) {
    if (data.labeled_count() == 0) {
        throw std::invalid_argument("target matrix needs at least one labeled record");
    }
}

std::size_t label_column(const std::unordered_map<std::string, std::size_t>& index,
                         const FeatureRecord& rec) {
    const auto it = index.find(rec.label);
    if (it == index.end()) {
        throw ConfigError("record '" + rec.id + "' has label '" + rec.label +
                          "' missing from class_names");
    }
    return it->second;
}

}  // namespace

bool negative_value_is_ambiguous(double negative_value) {
    return negative_value == 0.0 || negative_value == 1.0;
}

std::vector<RowKind> TargetMatrix::row_kinds() const {
    if (negative_value_is_ambiguous(negative_value)) {
        throw ConfigError("negative_value " + std::to_string(negative_value) +
                          " makes irrelevant rows indistinguishable from one-hot rows");
    }
    std::vector<RowKind> kinds(values.rows());
    for (std::size_t i = 0; i < values.rows(); ++i) {
        const auto row = values.row(i);
        const bool negative =
            std::all_of(row.begin(), row.end(), [&](double v) { return v == negative_value; });
        kinds[i] = negative ? RowKind::Negative : RowKind::OneHot;
    }
    return kinds;
}

TargetMatrix build_target_matrix(const FeatureSet& data, double negative_value) {
    require_labeled(data);
    if (!std::isfinite(negative_value)) throw std::invalid_argument("negative_value must be finite");

    TargetMatrix t;
    t.class_names = data.class_names();
    t.negative_value = negative_value;
    t.values = Matrix(data.size(), t.class_names.size());
    const auto index = column_index(t.class_names);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& rec = data.records()[i];
        if (rec.is_labeled()) {
            t.values(i, label_column(index, rec)) = 1.0;
        } else {
            std::fill(t.values.row(i).begin(), t.values.row(i).end(), negative_value);
        }
    }
    return t;
}

TargetMatrix build_plus_one_targets(const FeatureSet& data) {
    require_labeled(data);

    TargetMatrix t;
    t.class_names = data.class_names();
    t.class_names.emplace_back(kCatchAllClass);
    t.negative_value = 0.0;
    t.values = Matrix(data.size(), t.class_names.size());
    const auto index = column_index(data.class_names());
    const std::size_t catch_all = t.class_names.size() - 1;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& rec = data.records()[i];
        t.values(i, rec.is_labeled() ? label_column(index, rec) : catch_all) = 1.0;
    }
    return t;
}

}  // namespace openset
