#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "openset/classifier.hpp"
#include "openset/dataset.hpp"
#include "openset/roc.hpp"
#include "openset/thresholds.hpp"
#include "openset/trainer.hpp"

namespace openset {

struct ClassTally {
    std::size_t correct = 0;
    std::size_t total = 0;
};

struct ConfigEcho {
    double negative_value = kDefaultNegativeTarget;
    std::string strategy;
    std::optional<double> constraint;
    std::uint64_t seed = 0;
};

struct EvalReport {
    std::string method;
    double relevant_accuracy = 0.0;
    double irrelevant_accuracy = 0.0;
    double cumulative_accuracy = 0.0;
    std::size_t relevant_correct = 0;
    std::size_t relevant_total = 0;
    std::size_t irrelevant_correct = 0;
    std::size_t irrelevant_total = 0;
    /// Set when the corresponding denominator is zero; the accuracy is then 1.
    bool relevant_undefined = false;
    bool irrelevant_undefined = false;
    std::map<std::string, ClassTally> per_class;
    ConfigEcho config;
};

struct HarnessConfig {
    TrainConfig train;
    double negative_value = kDefaultNegativeTarget;
};

/// Scores decisions against the validation labels. A relevant record is
/// correct only when accepted into its own class; an irrelevant record is
/// correct when rejected.
EvalReport evaluate_decisions(const std::vector<Decision>& decisions, const FeatureSet& val,
                              std::string method = {});

EvalReport evaluate(const ClassifierModel& model, const ThresholdSet& thresholds,
                    const FeatureSet& val, std::string method = {});

/// Hybrid targets, thresholds from `strategy`.
EvalReport run_our_method(const FeatureSet& train, const FeatureSet& val, const HarnessConfig& cfg,
                          Strategy strategy, std::optional<double> constraint = std::nullopt);

/// Labeled training records only, one-hot targets, normal thresholds.
EvalReport run_only_labeled(const FeatureSet& train, const FeatureSet& val,
                            const HarnessConfig& cfg);

/// Extra catch-all class for the unlabeled records; rejection by argmax.
EvalReport run_plus_one(const FeatureSet& train, const FeatureSet& val, const HarnessConfig& cfg);

/// Argmax-only decisions of a "+1 class" model (last column = catch-all).
std::vector<Decision> classify_plus_one(const ClassifierModel& model, const FeatureSet& data);

struct ComparisonRow {
    EvalReport report;
    std::optional<std::string> error;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    std::string dataset;
};

inline constexpr const char* kMethodOurs = "our_method";
inline constexpr const char* kMethodOursRoc = "our_method_roc";
inline constexpr const char* kMethodPlusOne = "plus_one";
inline constexpr const char* kMethodOnlyLabeled = "only_labeled";

/// The four methods on one train/val pair. Without `constraint` the ROC row
/// uses the unconstrained optimum. A failing row carries its error and the
/// others are still produced.
ComparisonTable run_comparison(const FeatureSet& train, const FeatureSet& val,
                               const HarnessConfig& cfg,
                               std::optional<double> constraint = std::nullopt);

}  // namespace openset
