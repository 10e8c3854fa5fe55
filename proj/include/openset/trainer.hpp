#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "openset/dataset.hpp"
#include "openset/matrix.hpp"
#include "openset/targets.hpp"

namespace openset {

struct TrainConfig {
    int epochs = 500;
    double lr0 = 0.1;
    double lr_shrink = 0.5;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    double init_scale = 0.01;

    void validate() const;
};

/// Retries of one epoch before backtracking gives up.
inline constexpr int kMaxBacktracks = 60;
/// Learning rates below this end training.
inline constexpr double kMinLearningRate = 1e-18;

enum class StopReason { MaxEpochs, Converged, LearningRateUnderflow };

std::string to_string(StopReason reason);
StopReason stop_reason_from_string(const std::string& text);

struct TraceEntry {
    std::size_t class_index = 0;
    int epoch = 0;
    double loss = 0.0;
    double learning_rate = 0.0;
};

struct ClassTrainResult {
    std::vector<double> weights;
    std::vector<TraceEntry> trace;
    StopReason stop = StopReason::MaxEpochs;
    int epochs_used = 0;
    double final_loss = 0.0;
};

struct TrainMeta {
    TrainConfig config;
    double negative_value = kDefaultNegativeTarget;
    std::string target_kind = "hybrid";
    std::vector<double> final_losses;
    std::vector<int> epochs_used;
    std::vector<StopReason> stop_reasons;
};

/// One linear scorer per class: column j of `weights` belongs to class_names[j].
struct ClassifierModel {
    std::vector<std::string> class_names;
    std::size_t dim = 0;
    Matrix weights;  // dim x N_class
    TrainMeta meta;

    std::size_t class_count() const { return class_names.size(); }
};

/// d = A x - b. Throws ShapeError naming both shapes on mismatch.
std::vector<double> residual(const Matrix& a, std::span<const double> x, std::span<const double> b);

/// Squared-exponential loss sum_i exp(d_i^2). Throws NumericError when the
/// sum overflows, which only happens for unnormalized inputs.
double loss(const Matrix& a, std::span<const double> x, std::span<const double> b);

/// Analytic gradient of loss(): g_j = sum_i 2 exp(d_i^2) d_i A_ij.
std::vector<double> loss_gradient(const Matrix& a, std::span<const double> x, std::span<const double> b);

/// Fits one class column by gradient descent with a backtracking step size.
///
/// Each epoch proposes x - 0.5 * eta * grad. The proposal is accepted when
/// its loss does not exceed the current loss; otherwise eta is multiplied by
/// lr_shrink and the epoch retried, at most kMaxBacktracks times. eta never
/// grows. Training stops after cfg.epochs accepted steps, when the relative
/// loss change drops below cfg.tol, or when backtracking fails.
ClassTrainResult train_class(const Matrix& features, std::span<const double> target,
                             const TrainConfig& cfg, std::uint64_t class_seed,
                             std::size_t class_index = 0);

/// Same schedule starting from explicit weights instead of a seeded draw.
ClassTrainResult train_class_from(const Matrix& features, std::span<const double> target,
                                  const TrainConfig& cfg, std::vector<double> initial,
                                  std::size_t class_index = 0);

/// Seeded uniform draw in [-init_scale, init_scale].
std::vector<double> initial_weights(std::size_t dim, double init_scale, std::uint64_t class_seed);

/// Trains every target column (class j seeded with cfg.seed + j). Classes
/// run concurrently; the result does not depend on the thread count.
ClassifierModel train_model(const FeatureSet& data, const TargetMatrix& targets,
                            const TrainConfig& cfg);

/// Same as train_model, also returning the per-class traces.
ClassifierModel train_model(const FeatureSet& data, const TargetMatrix& targets,
                            const TrainConfig& cfg, std::vector<std::vector<TraceEntry>>* traces);

}  // namespace openset
