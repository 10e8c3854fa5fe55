#include "openset/harness.hpp"

#include <stdexcept>

#include "openset/error.hpp"
#include "openset/targets.hpp"

namespace openset {

namespace {

double ratio_or_one(std::size_t num, std::size_t den) {
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

EvalReport evaluate_decisions(const std::vector<Decision>& decisions, const FeatureSet& val,
                              std::string method) {
    if (val.empty()) throw std::invalid_argument("cannot evaluate on an empty validation set");
    if (decisions.size() != val.size()) {
        throw ShapeError("got " + std::to_string(decisions.size()) + " decisions for " +
                         std::to_string(val.size()) + " validation records");
    }
    EvalReport report;
    report.method = std::move(method);
    for (std::size_t i = 0; i < val.size(); ++i) {
        const auto& rec = val.records()[i];
        const auto& d = decisions[i];
        if (rec.is_labeled()) {
            const bool ok = d.is_relevant() && *d.assigned_class == rec.label;
            auto& tally = report.per_class[rec.label];
            ++tally.total;
            ++report.relevant_total;
            if (ok) {
                ++tally.correct;
                ++report.relevant_correct;
            }
        } else {
            auto& tally = report.per_class[std::string(kUnlabeled)];
            ++tally.total;
            ++report.irrelevant_total;
            if (!d.is_relevant()) {
                ++tally.correct;
                ++report.irrelevant_correct;
            }
        }
    }
    report.relevant_undefined = report.relevant_total == 0;
    report.irrelevant_undefined = report.irrelevant_total == 0;
    report.relevant_accuracy = ratio_or_one(report.relevant_correct, report.relevant_total);
    report.irrelevant_accuracy = ratio_or_one(report.irrelevant_correct, report.irrelevant_total);
    report.cumulative_accuracy =
        ratio_or_one(report.relevant_correct + report.irrelevant_correct, val.size());
    return report;
}

EvalReport evaluate(const ClassifierModel& model, const ThresholdSet& thresholds,
                    const FeatureSet& val, std::string method) {
    if (val.empty()) throw std::invalid_argument("cannot evaluate on an empty validation set");
    EvalReport report = evaluate_decisions(classify_set(model, val, thresholds), val, std::move(method));
    report.config.negative_value = model.meta.negative_value;
    report.config.strategy = to_string(thresholds.strategy);
    report.config.constraint = thresholds.constraint;
    report.config.seed = model.meta.config.seed;
    return report;
}

EvalReport run_our_method(const FeatureSet& train, const FeatureSet& val, const HarnessConfig& cfg,
                          Strategy strategy, std::optional<double> constraint) {
    const auto targets = build_target_matrix(train, cfg.negative_value);
    const auto model = train_model(train, targets, cfg.train);
    const auto thresholds = calibrate(model, train, strategy, constraint);
    return evaluate(model, thresholds, val,
                    strategy == Strategy::Normal ? kMethodOurs : kMethodOursRoc);
}

EvalReport run_only_labeled(const FeatureSet& train, const FeatureSet& val,
                            const HarnessConfig& cfg) {
    const FeatureSet labeled = train.filter([](const FeatureRecord& r) { return r.is_labeled(); });
    const auto targets = build_target_matrix(labeled, cfg.negative_value);
    auto model = train_model(labeled, targets, cfg.train);
    model.meta.target_kind = "only_labeled";
    const auto thresholds = calibrate(model, labeled, Strategy::Normal);
    return evaluate(model, thresholds, val, kMethodOnlyLabeled);
}

std::vector<Decision> classify_plus_one(const ClassifierModel& model, const FeatureSet& data) {
    if (model.class_count() < 2) throw ConfigError("+1 class model needs a catch-all column");
    const std::size_t catch_all = model.class_count() - 1;
    std::vector<Decision> out;
    out.reserve(data.size());
    for (const auto& sv : score_set(model, data)) {
        Decision d;
        d.id = sv.id;
        d.top_class = sv.top_class;
        d.top_score = sv.top_score;
        d.threshold = kThresholdAlways;
        if (sv.top_class != catch_all) d.assigned_class = model.class_names[sv.top_class];
        out.push_back(std::move(d));
    }
    return out;
}

EvalReport run_plus_one(const FeatureSet& train, const FeatureSet& val, const HarnessConfig& cfg) {
    const auto targets = build_plus_one_targets(train);
    auto model = train_model(train, targets, cfg.train);
    model.meta.target_kind = "plus_one";
    EvalReport report = evaluate_decisions(classify_plus_one(model, val), val, kMethodPlusOne);
    report.config.negative_value = targets.negative_value;
    report.config.strategy = "argmax";
    report.config.seed = cfg.train.seed;
    return report;
}

ComparisonTable run_comparison(const FeatureSet& train, const FeatureSet& val,
                               const HarnessConfig& cfg, std::optional<double> constraint) {
    ComparisonTable table;
    table.dataset = std::to_string(train.size()) + " train / " + std::to_string(val.size()) +
                    " val records, " + std::to_string(train.class_names().size()) +
                    " classes, dim " + std::to_string(train.dim());

    const auto failed_row = [](const char* method, const std::exception& e) {
        ComparisonRow row;
        row.report.method = method;
        row.error = e.what();
        return row;
    };

    // Both rows of our method share one trained model.
    try {
        const auto targets = build_target_matrix(train, cfg.negative_value);
        const auto model = train_model(train, targets, cfg.train);
        const auto pools = collect_pools(model, train);
        try {
            table.rows.push_back(
                {evaluate(model, calibrate_pools(model, pools, Strategy::Normal), val, kMethodOurs), {}});
        } catch (const std::exception& e) {
            table.rows.push_back(failed_row(kMethodOurs, e));
        }
        try {
            const Strategy s = constraint ? Strategy::RocConstrained : Strategy::RocOptimal;
            table.rows.push_back(
                {evaluate(model, calibrate_pools(model, pools, s, constraint), val, kMethodOursRoc), {}});
        } catch (const std::exception& e) {
            table.rows.push_back(failed_row(kMethodOursRoc, e));
        }
    } catch (const std::exception& e) {
        table.rows.push_back(failed_row(kMethodOurs, e));
        table.rows.push_back(failed_row(kMethodOursRoc, e));
    }

    try {
        table.rows.push_back({run_plus_one(train, val, cfg), {}});
    } catch (const std::exception& e) {
        table.rows.push_back(failed_row(kMethodPlusOne, e));
    }
    try {
        table.rows.push_back({run_only_labeled(train, val, cfg), {}});
    } catch (const std::exception& e) {
        table.rows.push_back(failed_row(kMethodOnlyLabeled, e));
    }
    return table;
}

}  // namespace openset
