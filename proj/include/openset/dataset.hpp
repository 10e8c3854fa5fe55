#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "openset/matrix.hpp"

namespace openset {

/// Label carried by images that belong to none of the known classes.
inline constexpr std::string_view kUnlabeled = "__UNLABELED__";

struct FeatureRecord {
    std::string id;
    std::string label;
    std::vector<double> features;

    bool is_labeled() const { return label != kUnlabeled; }

    friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

/// An ordered corpus of equally sized, normalized feature vectors.
///
/// `class_names` lists the labels (excluding the unlabeled marker) in order
/// of first appearance. Instances are immutable once built.
class FeatureSet {
public:
    FeatureSet() = default;
    /// Validates the records and derives `class_names`. Throws FormatError on
    /// ragged dimensions, duplicate ids or invalid labels.
    FeatureSet(std::vector<FeatureRecord> records, std::size_t dim);

    const std::vector<FeatureRecord>& records() const { return records_; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const std::vector<std::string>& class_names() const { return class_names_; }

    std::size_t labeled_count() const;
    std::size_t unlabeled_count() const { return size() - labeled_count(); }

    /// N_img x D matrix of the feature vectors in record order.
    Matrix feature_matrix() const;

    /// Records satisfying `pred`, same order, same dim.
    template <typename Pred>
    FeatureSet filter(Pred pred) const {
        std::vector<FeatureRecord> kept;
        for (const auto& r : records_) {
            if (pred(r)) kept.push_back(r);
        }
        return FeatureSet(std::move(kept), dim_);
    }

    friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

private:
    std::vector<FeatureRecord> records_;
    std::size_t dim_ = 0;
    std::vector<std::string> class_names_;
};

struct SynthSpec {
    int n_rel = 10;
    int n_irr = 10;
    int dim = 32;
    int per_class_train = 40;
    int per_class_val = 10;
    double spread = 0.25;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Per-image min-max scaling onto [0, 1]; a constant vector maps to zeros.
/// Throws std::invalid_argument naming the first non-finite index.
std::vector<double> normalize_features(std::span<const double> raw);

/// Checks the label charset rule: the marker, or a non-empty name without
/// commas and without leading/trailing whitespace.
bool is_valid_label(std::string_view label);

FeatureSet load_feature_set(const std::filesystem::path& path);
FeatureSet parse_feature_csv(std::string_view text, std::string_view source = "<memory>");

void write_feature_set(const FeatureSet& set, const std::filesystem::path& path);
std::string format_feature_csv(const FeatureSet& set);

/// Relevant classes are named R00, R01, ...; irrelevant categories carry the
/// unlabeled marker in both halves. Draw order: all category means
/// (relevant first, D uniforms each), then the training images category by
/// category, then the validation images in the same order.
std::pair<FeatureSet, FeatureSet> generate_synthetic(const SynthSpec& spec);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace openset
