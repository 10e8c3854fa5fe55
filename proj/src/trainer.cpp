#include "openset/trainer.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

#include "openset/error.hpp"
#include "openset/kernels.hpp"
#include "openset/rng.hpp"

namespace openset {

void TrainConfig::validate() const {
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (!(lr0 > 0.0) || !std::isfinite(lr0)) throw std::invalid_argument("lr0 must be finite and > 0");
    if (!(lr_shrink > 0.0 && lr_shrink < 1.0)) throw std::invalid_argument("lr_shrink must lie in (0, 1)");
    if (!(tol >= 0.0) || !std::isfinite(tol)) throw std::invalid_argument("tol must be finite and >= 0");
    if (!(init_scale > 0.0) || !std::isfinite(init_scale)) {
        throw std::invalid_argument("init_scale must be finite and > 0");
    }
}

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::MaxEpochs: return "max_epochs";
        case StopReason::Converged: return "converged";
        case StopReason::LearningRateUnderflow: return "lr_underflow";
    }
    return "unknown";
}

StopReason stop_reason_from_string(const std::string& text) {
    if (text == "max_epochs") return StopReason::MaxEpochs;
    if (text == "converged") return StopReason::Converged;
    if (text == "lr_underflow") return StopReason::LearningRateUnderflow;
    throw std::invalid_argument("unknown stop reason '" + text + "'");
}

namespace {

void check_shapes(const Matrix& a, std::span<const double> x, std::span<const double> b) {
    if (a.cols() != x.size() || a.rows() != b.size()) {
        throw ShapeError("shape mismatch: A is " + a.shape_string() + ", x has " +
                         std::to_string(x.size()) + " entries, b has " + std::to_string(b.size()));
    }
}

double checked_loss(std::span<const double> d) {
    const double value = kernels::exp_loss(d);
    if (!std::isfinite(value)) {
        throw NumericError("squared-exponential loss overflowed; check that features are normalized");
    }
    return value;
}

}  // namespace

std::vector<double> residual(const Matrix& a, std::span<const double> x, std::span<const double> b) {
    check_shapes(a, x, b);
    return kernels::residual(a, x, b);
}

double loss(const Matrix& a, std::span<const double> x, std::span<const double> b) {
    return checked_loss(residual(a, x, b));
}

std::vector<double> loss_gradient(const Matrix& a, std::span<const double> x, std::span<const double> b) {
    const auto d = residual(a, x, b);
    auto g = kernels::exp_loss_gradient(a, d);
    for (double v : g) {
        if (!std::isfinite(v)) {
            throw NumericError("loss gradient overflowed; check that features are normalized");
        }
    }
    return g;
}

std::vector<double> initial_weights(std::size_t dim, double init_scale, std::uint64_t class_seed) {
    Xoshiro256 rng(class_seed);
    std::vector<double> x(dim);
    for (auto& v : x) v = rng.uniform(-init_scale, init_scale);
    return x;
}

ClassTrainResult train_class_from(const Matrix& features, std::span<const double> target,
                                  const TrainConfig& cfg, std::vector<double> initial,
                                  std::size_t class_index) {
    cfg.validate();
    check_shapes(features, initial, target);

    ClassTrainResult result;
    result.weights = std::move(initial);
    auto& x = result.weights;

    auto d = kernels::residual(features, x, target);
    double current = checked_loss(d);
    double eta = cfg.lr0;
    result.trace.push_back({class_index, 0, current, eta});

    std::vector<double> candidate(x.size());
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto grad = kernels::exp_loss_gradient(features, d);

        bool accepted = false;
        double candidate_loss = 0.0;
        std::vector<double> candidate_d;
        for (int attempt = 0; attempt <= kMaxBacktracks; ++attempt) {
            for (std::size_t j = 0; j < x.size(); ++j) candidate[j] = x[j] - 0.5 * eta * grad[j];
            candidate_d = kernels::residual(features, candidate, target);
            candidate_loss = kernels::exp_loss(candidate_d);
            if (std::isfinite(candidate_loss) && candidate_loss <= current) {
                accepted = true;
                break;
            }
            eta *= cfg.lr_shrink;
            if (eta < kMinLearningRate) break;
        }
        if (!accepted) {
            result.stop = StopReason::LearningRateUnderflow;
            break;
        }

        const double change = std::abs(current - candidate_loss) / current;
        x.swap(candidate);
        d = std::move(candidate_d);
        current = candidate_loss;
        result.epochs_used = epoch;
        result.trace.push_back({class_index, epoch, current, eta});
        if (change < cfg.tol) {
            result.stop = StopReason::Converged;
            break;
        }
    }
    result.final_loss = current;
    return result;
}

ClassTrainResult train_class(const Matrix& features, std::span<const double> target,
                             const TrainConfig& cfg, std::uint64_t class_seed,
                             std::size_t class_index) {
    cfg.validate();
    return train_class_from(features, target, cfg,
                            initial_weights(features.cols(), cfg.init_scale, class_seed), class_index);
}

ClassifierModel train_model(const FeatureSet& data, const TargetMatrix& targets,
                            const TrainConfig& cfg) {
    return train_model(data, targets, cfg, nullptr);
}

ClassifierModel train_model(const FeatureSet& data, const TargetMatrix& targets,
                            const TrainConfig& cfg, std::vector<std::vector<TraceEntry>>* traces) {
    cfg.validate();
    const std::size_t classes = targets.class_names.size();
    if (classes == 0 || targets.values.cols() == 0) {
        throw std::invalid_argument("cannot train a model with zero classes");
    }
    if (targets.values.rows() != data.size()) {
        throw ShapeError("target matrix has " + std::to_string(targets.values.rows()) +
                         " rows but the feature set has " + std::to_string(data.size()) + " records");
    }
    if (targets.values.cols() != classes) {
        throw ShapeError("target matrix has " + std::to_string(targets.values.cols()) +
                         " columns for " + std::to_string(classes) + " class names");
    }

    const Matrix features = data.feature_matrix();
    std::vector<ClassTrainResult> results(classes);
    std::vector<std::exception_ptr> errors(classes);

    const auto n = static_cast<std::ptrdiff_t>(classes);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t c = 0; c < n; ++c) {
        const auto j = static_cast<std::size_t>(c);
        try {
            const auto column = targets.values.column(j);
            results[j] = train_class(features, column, cfg, cfg.seed + j, j);
        } catch (...) {
            errors[j] = std::current_exception();
        }
    }

    for (std::size_t j = 0; j < classes; ++j) {
        if (!errors[j]) continue;
        try {
            std::rethrow_exception(errors[j]);
        } catch (const std::exception& e) {
            throw std::runtime_error("class '" + targets.class_names[j] + "': " + e.what());
        }
    }

    ClassifierModel model;
    model.class_names = targets.class_names;
    model.dim = data.dim();
    model.weights = Matrix(data.dim(), classes);
    model.meta.config = cfg;
    model.meta.negative_value = targets.negative_value;
    if (traces) traces->assign(classes, {});
    for (std::size_t j = 0; j < classes; ++j) {
        model.weights.set_column(j, results[j].weights);
        model.meta.final_losses.push_back(results[j].final_loss);
        model.meta.epochs_used.push_back(results[j].epochs_used);
        model.meta.stop_reasons.push_back(results[j].stop);
        if (traces) (*traces)[j] = std::move(results[j].trace);
    }
    return model;
}

}  // namespace openset
