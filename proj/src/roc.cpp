#include "openset/roc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "openset/error.hpp"

namespace openset {

Rates trr_frr(std::int64_t tp, std::int64_t fn, std::int64_t fp, std::int64_t tn) {
    if (tp < 0 || fn < 0 || fp < 0 || tn < 0) throw std::invalid_argument("negative confusion count");
    Rates r;
    if (tp + fn > 0) r.trr = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (fp + tn > 0) r.frr = static_cast<double>(fp) / static_cast<double>(fp + tn);
    return r;
}

std::vector<ClassScorePool> collect_pools(const ClassifierModel& model, const FeatureSet& train) {
    std::vector<ClassScorePool> pools(model.class_count());
    for (std::size_t c = 0; c < pools.size(); ++c) pools[c].class_index = c;

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t c = 0; c < model.class_names.size(); ++c) index.emplace(model.class_names[c], c);

    const auto scores = score_set(model, train);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto& rec = train.records()[i];
        const auto& sv = scores[i];
        if (!rec.is_labeled()) {
            pools[sv.top_class].negatives.push_back(sv.top_score);
            continue;
        }
        const auto it = index.find(rec.label);
        if (it == index.end()) continue;  // class the model was not trained on
        const std::size_t truth = it->second;
        pools[truth].true_class_scores.push_back(sv.scores[truth]);
        if (sv.top_class == truth) pools[truth].positives.push_back(sv.top_score);
    }
    return pools;
}

namespace {

std::int64_t count_at_least(const std::vector<double>& sorted_ascending, double threshold) {
    const auto it = std::lower_bound(sorted_ascending.begin(), sorted_ascending.end(), threshold);
    return static_cast<std::int64_t>(sorted_ascending.end() - it);
}

RocPoint make_point(double threshold, const std::vector<double>& pos, const std::vector<double>& neg) {
    RocPoint p;
    p.threshold = threshold;
    p.tp = count_at_least(pos, threshold);
    p.fp = count_at_least(neg, threshold);
    const auto P = static_cast<std::int64_t>(pos.size());
    const auto N = static_cast<std::int64_t>(neg.size());
    const Rates r = trr_frr(p.tp, P - p.tp, p.fp, N - p.fp);
    p.trr = r.trr;
    p.frr = r.frr;
    return p;
}

}  // namespace

RocCurve build_roc(const ClassScorePool& pool) {
    if (pool.positives.empty()) throw FallbackNeeded("pool has no positive scores");
    if (pool.negatives.empty()) throw FallbackNeeded("pool has no negative scores");

    std::vector<double> pos = pool.positives;
    std::vector<double> neg = pool.negatives;
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());

    std::vector<double> candidates;
    candidates.reserve(pos.size() + neg.size() + 1);
    candidates.insert(candidates.end(), pos.begin(), pos.end());
    candidates.insert(candidates.end(), neg.begin(), neg.end());
    std::sort(candidates.begin(), candidates.end(), std::greater<>());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    candidates.insert(candidates.begin(),
                      std::nextafter(candidates.front(), std::numeric_limits<double>::infinity()));

    RocCurve curve;
    curve.class_index = pool.class_index;
    curve.positives = static_cast<std::int64_t>(pos.size());
    curve.negatives = static_cast<std::int64_t>(neg.size());
    curve.points.reserve(candidates.size());
    for (double t : candidates) curve.points.push_back(make_point(t, pos, neg));

    // Twice the trapezoid area in units of 1/(P*N); exact in integers.
    std::int64_t twice_area = 0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const auto& a = curve.points[k - 1];
        const auto& b = curve.points[k];
        twice_area += (b.fp - a.fp) * (b.tp + a.tp);
    }
    curve.auc = static_cast<double>(twice_area) /
                (2.0 * static_cast<double>(curve.positives) * static_cast<double>(curve.negatives));
    return curve;
}

double normal_threshold(const ClassScorePool& pool) {
    if (pool.positives.empty()) throw FallbackNeeded("pool has no positive scores");
    return *std::min_element(pool.positives.begin(), pool.positives.end());
}

RocChoice roc_threshold(const RocCurve& curve, std::optional<double> min_trr) {
    if (curve.points.empty()) throw std::invalid_argument("empty ROC curve");
    if (min_trr && !(*min_trr >= 0.0 && *min_trr <= 1.0)) {
        throw std::invalid_argument("TRR constraint must lie in [0, 1]");
    }
    const std::int64_t P = curve.positives;
    const std::int64_t N = curve.negatives;
    const RocPoint* best = nullptr;
    std::int64_t best_gap = 0;
    double max_trr = 0.0;
    for (const auto& p : curve.points) {
        max_trr = std::max(max_trr, p.trr);
        if (min_trr && p.trr < *min_trr) continue;
        // (TRR - FRR) * P * N, compared exactly.
        const std::int64_t gap = p.tp * N - p.fp * P;
        const bool better = best == nullptr || gap > best_gap ||
                            (gap == best_gap && (p.tp > best->tp ||
                                                 (p.tp == best->tp && p.threshold < best->threshold)));
        if (better) {
            best = &p;
            best_gap = gap;
        }
    }
    if (best == nullptr) {
        throw std::invalid_argument("no ROC point reaches TRR " + format_double(*min_trr) +
                                    "; the maximum achievable TRR is " + format_double(max_trr));
    }
    return {best->threshold, *best};
}

Rates pool_rates(const ClassScorePool& pool, double threshold) {
    const auto at_least = [&](const std::vector<double>& v) {
        return static_cast<std::int64_t>(
            std::count_if(v.begin(), v.end(), [&](double s) { return s >= threshold; }));
    };
    const std::int64_t tp = at_least(pool.positives);
    const std::int64_t fp = at_least(pool.negatives);
    return trr_frr(tp, static_cast<std::int64_t>(pool.positives.size()) - tp, fp,
                   static_cast<std::int64_t>(pool.negatives.size()) - fp);
}

ThresholdSet calibrate_pools(const ClassifierModel& model, const std::vector<ClassScorePool>& pools,
                             Strategy strategy, std::optional<double> constraint) {
    if (pools.size() != model.class_count()) {
        throw ConfigError("expected one score pool per model class");
    }
    if (strategy == Strategy::RocConstrained && !constraint) {
        throw std::invalid_argument("roc-constrained calibration requires a TRR constraint");
    }
    if (strategy == Strategy::None) {
        return ThresholdSet::uniform(model.class_names, kThresholdAlways, Strategy::None);
    }

    ThresholdSet set;
    set.class_names = model.class_names;
    set.strategy = strategy;
    if (strategy == Strategy::RocConstrained) set.constraint = constraint;

    for (const auto& pool : pools) {
        const std::string& name = model.class_names[pool.class_index];
        ThresholdProvenance prov;
        double threshold = 0.0;
        try {
            if (pool.positives.empty()) {
                if (pool.true_class_scores.empty()) {
                    threshold = kThresholdNever;
                    prov.source = ThresholdSource::NeverClaims;
                } else {
                    threshold = *std::min_element(pool.true_class_scores.begin(),
                                                  pool.true_class_scores.end());
                    prov.source = ThresholdSource::NoPositives;
                }
            } else if (strategy == Strategy::Normal || pool.negatives.empty()) {
                threshold = normal_threshold(pool);
                prov.source = strategy == Strategy::Normal ? ThresholdSource::Normal
                                                           : ThresholdSource::NoNegatives;
                const Rates r = pool_rates(pool, threshold);
                prov.trr = r.trr;
                prov.frr = r.frr;
            } else {
                const RocCurve curve = build_roc(pool);
                const RocChoice choice = roc_threshold(
                    curve, strategy == Strategy::RocConstrained ? constraint : std::nullopt);
                threshold = choice.threshold;
                prov.source = ThresholdSource::Roc;
                prov.trr = choice.point.trr;
                prov.frr = choice.point.frr;
                prov.auc = curve.auc;
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("class '" + name + "': " + e.what());
        }
        set.thresholds.push_back(threshold);
        set.provenance.push_back(prov);
    }
    return set;
}

ThresholdSet calibrate(const ClassifierModel& model, const FeatureSet& train, Strategy strategy,
                       std::optional<double> constraint) {
    return calibrate_pools(model, collect_pools(model, train), strategy, constraint);
}

std::vector<RocCurve> build_all_curves(const std::vector<ClassScorePool>& pools) {
    std::vector<RocCurve> curves;
    for (const auto& pool : pools) {
        if (!pool.positives.empty() && !pool.negatives.empty()) curves.push_back(build_roc(pool));
    }
    return curves;
}

std::string format_roc_points_csv(const std::vector<RocCurve>& curves,
                                  const std::vector<std::string>& class_names) {
    std::string out = "class,threshold,trr,frr\n";
    for (const auto& curve : curves) {
        for (const auto& p : curve.points) {
            out += class_names.at(curve.class_index) + "," + format_double(p.threshold) + "," +
                   format_double(p.trr) + "," + format_double(p.frr) + "\n";
        }
    }
    return out;
}

std::string format_roc_summary_csv(const std::vector<RocCurve>& curves,
                                   const std::vector<std::string>& class_names) {
    std::string out = "class,auc,positives,negatives\n";
    for (const auto& curve : curves) {
        out += class_names.at(curve.class_index) + "," + format_double(curve.auc) + "," +
               std::to_string(curve.positives) + "," + std::to_string(curve.negatives) + "\n";
    }
    return out;
}

}  // namespace openset
