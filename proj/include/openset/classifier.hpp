#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "openset/dataset.hpp"
#include "openset/thresholds.hpp"
#include "openset/trainer.hpp"

namespace openset {

/// Raw linear scores of one image. top_class is the smallest index
/// attaining the maximum.
struct ScoreVector {
    std::string id;
    std::vector<double> scores;
    std::size_t top_class = 0;
    double top_score = 0.0;
};

struct Decision {
    std::string id;
    /// Class name when Relevant, std::nullopt when Irrelevant.
    std::optional<std::string> assigned_class;
    std::size_t top_class = 0;
    double top_score = 0.0;
    double threshold = 0.0;

    bool is_relevant() const { return assigned_class.has_value(); }
};

/// Fills top_class / top_score from `scores` (first index wins ties).
ScoreVector make_score_vector(std::string id, std::vector<double> scores);

ScoreVector score(const ClassifierModel& model, std::span<const double> features,
                  std::string id = {});

/// Scores every record (rows of F W) in record order.
std::vector<ScoreVector> score_set(const ClassifierModel& model, const FeatureSet& data);

/// Relevant iff top_score >= threshold of the top class.
Decision decide(const ScoreVector& sv, const ThresholdSet& thresholds);

/// Argmax-then-threshold decision for every record, input order preserved.
std::vector<Decision> classify_set(const ClassifierModel& model, const FeatureSet& data,
                                   const ThresholdSet& thresholds);

/// Header `id,verdict,top_class,top_score,threshold`; verdict is the class
/// name or `Irrelevant`, top_class is the winning class name.
std::string format_decisions_csv(const std::vector<Decision>& decisions,
                                 const std::vector<std::string>& class_names);

}  // namespace openset
