#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "openset/classifier.hpp"
#include "openset/dataset.hpp"
#include "openset/thresholds.hpp"
#include "openset/trainer.hpp"

namespace openset {

/// Training scores at one class column, split by what the image is.
struct ClassScorePool {
    std::size_t class_index = 0;
    /// Relevant images of this class that also argmax to it.
    std::vector<double> positives;
    /// Irrelevant images that argmax to this class.
    std::vector<double> negatives;
    /// Every relevant image of this class, whatever its argmax.
    std::vector<double> true_class_scores;
};

struct RocPoint {
    double threshold = 0.0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    double trr = 0.0;
    double frr = 0.0;
};

/// Points are ordered by decreasing threshold, which is also increasing
/// (FRR, TRR): the first is the (0, 0) sentinel and the last is (1, 1).
struct RocCurve {
    std::size_t class_index = 0;
    std::int64_t positives = 0;
    std::int64_t negatives = 0;
    std::vector<RocPoint> points;
    double auc = 0.0;
};

struct Rates {
    double trr = 0.0;
    double frr = 0.0;
};

/// TRR = TP/(TP+FN), FRR = FP/(FP+TN); an empty denominator gives 0.
Rates trr_frr(std::int64_t tp, std::int64_t fn, std::int64_t fp, std::int64_t tn);

/// One pool per model class; each training record lands in at most one
/// pool (its argmax class).
std::vector<ClassScorePool> collect_pools(const ClassifierModel& model, const FeatureSet& train);

/// Thrown when a pool side needed for the requested computation is empty.
class FallbackNeeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Candidate thresholds are the distinct pool scores plus a sentinel just
/// above the maximum; a score counts as relevant when >= threshold. Area by
/// the trapezoidal rule, evaluated on integer counts so it equals the
/// Mann-Whitney statistic exactly.
RocCurve build_roc(const ClassScorePool& pool);

/// min(positives).
double normal_threshold(const ClassScorePool& pool);

struct RocChoice {
    double threshold = 0.0;
    RocPoint point;
};

/// Picks the point maximizing TRR - FRR, optionally subject to TRR >= q.
/// Ties go to the higher TRR, then the lower threshold.
RocChoice roc_threshold(const RocCurve& curve, std::optional<double> min_trr = std::nullopt);

/// Operating point of `threshold` on the pool (positives vs negatives).
Rates pool_rates(const ClassScorePool& pool, double threshold);

/// Per-class thresholds from the training set. `constraint` is required for
/// RocConstrained and ignored otherwise. Strategy::None yields
/// kThresholdAlways everywhere.
ThresholdSet calibrate(const ClassifierModel& model, const FeatureSet& train, Strategy strategy,
                       std::optional<double> constraint = std::nullopt);

/// Same, reusing pools the caller already collected.
ThresholdSet calibrate_pools(const ClassifierModel& model,
                             const std::vector<ClassScorePool>& pools, Strategy strategy,
                             std::optional<double> constraint = std::nullopt);

/// `class,threshold,trr,frr` rows for every class with a curve.
std::string format_roc_points_csv(const std::vector<RocCurve>& curves,
                                  const std::vector<std::string>& class_names);
/// `class,auc,positives,negatives` rows.
std::string format_roc_summary_csv(const std::vector<RocCurve>& curves,
                                   const std::vector<std::string>& class_names);

/// Curves for every pool that has both sides populated.
std::vector<RocCurve> build_all_curves(const std::vector<ClassScorePool>& pools);

}  // namespace openset
