#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "openset/dataset.hpp"
#include "openset/matrix.hpp"

namespace openset {

inline constexpr double kDefaultNegativeTarget = -0.2;

/// Class name of the extra column used by the "+1 class" baseline.
inline constexpr std::string_view kCatchAllClass = "__IRRELEVANT__";

enum class RowKind { OneHot, Negative };

/// Training targets, one row per record and one column per class.
struct TargetMatrix {
    Matrix values;
    std::vector<std::string> class_names;
    double negative_value = kDefaultNegativeTarget;

    /// Recovers the labeled/unlabeled partition from the row contents.
    /// Throws ConfigError when negative_value is 0 or 1, since those rows
    /// cannot be told apart from one-hot rows.
    std::vector<RowKind> row_kinds() const;
};

/// True for the values (0 and 1) that make negative rows ambiguous.
bool negative_value_is_ambiguous(double negative_value);

/// One-hot rows for labeled records, rows filled with `negative_value` for
/// unlabeled ones.
TargetMatrix build_target_matrix(const FeatureSet& data,
                                 double negative_value = kDefaultNegativeTarget);

/// N_class + 1 columns; unlabeled rows are hot in the trailing catch-all column.
TargetMatrix build_plus_one_targets(const FeatureSet& data);

}  // namespace openset
