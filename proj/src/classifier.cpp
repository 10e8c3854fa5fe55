#include "openset/classifier.hpp"

#include <stdexcept>

#include "openset/dataset.hpp"
#include "openset/error.hpp"
#include "openset/kernels.hpp"

namespace openset {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Normal: return "normal";
        case Strategy::RocOptimal: return "roc";
        case Strategy::RocConstrained: return "roc-constrained";
        case Strategy::None: return "none";
    }
    return "unknown";
}

Strategy strategy_from_string(const std::string& text) {
    if (text == "normal") return Strategy::Normal;
    if (text == "roc" || text == "roc_optimal") return Strategy::RocOptimal;
    if (text == "roc-constrained" || text == "roc_constrained") return Strategy::RocConstrained;
    if (text == "none") return Strategy::None;
    throw std::invalid_argument("unknown threshold strategy '" + text + "'");
}

std::string to_string(ThresholdSource s) {
    switch (s) {
        case ThresholdSource::Normal: return "normal";
        case ThresholdSource::Roc: return "roc";
        case ThresholdSource::NoNegatives: return "fallback_no_negatives";
        case ThresholdSource::NoPositives: return "fallback_no_positives";
        case ThresholdSource::NeverClaims: return "fallback_never_claims";
        case ThresholdSource::Disabled: return "disabled";
    }
    return "unknown";
}

ThresholdSource threshold_source_from_string(const std::string& text) {
    for (auto s : {ThresholdSource::Normal, ThresholdSource::Roc, ThresholdSource::NoNegatives,
                   ThresholdSource::NoPositives, ThresholdSource::NeverClaims,
                   ThresholdSource::Disabled}) {
        if (to_string(s) == text) return s;
    }
    throw std::invalid_argument("unknown threshold source '" + text + "'");
}

ThresholdSet ThresholdSet::uniform(const std::vector<std::string>& class_names, double value,
                                   Strategy strategy) {
    ThresholdSet set;
    set.class_names = class_names;
    set.thresholds.assign(class_names.size(), value);
    set.provenance.assign(class_names.size(), ThresholdProvenance{ThresholdSource::Disabled, {}, {}, {}});
    set.strategy = strategy;
    return set;
}

ScoreVector make_score_vector(std::string id, std::vector<double> scores) {
    ScoreVector sv;
    sv.id = std::move(id);
    sv.scores = std::move(scores);
    if (sv.scores.empty()) throw std::invalid_argument("score vector without classes");
    sv.top_class = 0;
    sv.top_score = sv.scores[0];
    for (std::size_t j = 1; j < sv.scores.size(); ++j) {
        if (sv.scores[j] > sv.top_score) {
            sv.top_score = sv.scores[j];
            sv.top_class = j;
        }
    }
    return sv;
}

ScoreVector score(const ClassifierModel& model, std::span<const double> features, std::string id) {
    if (features.size() != model.dim) {
        throw ShapeError("feature vector has dimension " + std::to_string(features.size()) +
                         " but the model expects " + std::to_string(model.dim));
    }
    std::vector<double> s(model.class_count(), 0.0);
    for (std::size_t k = 0; k < model.dim; ++k) {
        const auto wrow = model.weights.row(k);
        for (std::size_t j = 0; j < s.size(); ++j) s[j] += features[k] * wrow[j];
    }
    return make_score_vector(std::move(id), std::move(s));
}

std::vector<ScoreVector> score_set(const ClassifierModel& model, const FeatureSet& data) {
    if (!data.empty() && data.dim() != model.dim) {
        throw ShapeError("feature set has dimension " + std::to_string(data.dim()) +
                         " but the model expects " + std::to_string(model.dim));
    }
    const Matrix s = kernels::scores(data.feature_matrix(), model.weights);
    std::vector<ScoreVector> out;
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto row = s.row(i);
        out.push_back(make_score_vector(data.records()[i].id, {row.begin(), row.end()}));
    }
    return out;
}

Decision decide(const ScoreVector& sv, const ThresholdSet& thresholds) {
    if (sv.top_class >= thresholds.size()) {
        throw ConfigError("no threshold for class index " + std::to_string(sv.top_class));
    }
    Decision d;
    d.id = sv.id;
    d.top_class = sv.top_class;
    d.top_score = sv.top_score;
    d.threshold = thresholds.thresholds[sv.top_class];
    if (sv.top_score >= d.threshold) {
        d.assigned_class = sv.top_class < thresholds.class_names.size()
                               ? thresholds.class_names[sv.top_class]
                               : std::to_string(sv.top_class);
    }
    return d;
}

std::vector<Decision> classify_set(const ClassifierModel& model, const FeatureSet& data,
                                   const ThresholdSet& thresholds) {
    if (thresholds.class_names != model.class_names || thresholds.size() != model.class_count()) {
        throw ConfigError("threshold set does not cover the model's classes");
    }
    std::vector<Decision> out;
    out.reserve(data.size());
    for (const auto& sv : score_set(model, data)) out.push_back(decide(sv, thresholds));
    return out;
}

std::string format_decisions_csv(const std::vector<Decision>& decisions,
                                 const std::vector<std::string>& class_names) {
    std::string out = "id,verdict,top_class,top_score,threshold\n";
    for (const auto& d : decisions) {
        out += d.id;
        out += ',';
        out += d.is_relevant() ? *d.assigned_class : std::string("Irrelevant");
        out += ',';
        out += d.top_class < class_names.size() ? class_names[d.top_class] : std::to_string(d.top_class);
        out += ',';
        out += format_double(d.top_score);
        out += ',';
        out += format_double(d.threshold);
        out += '\n';
    }
    return out;
}

}  // namespace openset
