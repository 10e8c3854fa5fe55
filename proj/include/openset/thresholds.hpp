#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace openset {

/// Finite stand-ins for +/- infinity so threshold files stay plain JSON.
inline constexpr double kThresholdNever = std::numeric_limits<double>::max();
inline constexpr double kThresholdAlways = std::numeric_limits<double>::lowest();

enum class Strategy { Normal, RocOptimal, RocConstrained, None };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& text);

/// How a class's threshold was obtained.
enum class ThresholdSource {
    Normal,           // lowest correctly classified relevant score
    Roc,              // chosen ROC point
    NoNegatives,      // ROC requested, no irrelevant evidence: normal threshold
    NoPositives,      // class never won a correct image: lowest true-class score
    NeverClaims,      // no relevant score at all: threshold saturated
    Disabled,         // strategy none
};

std::string to_string(ThresholdSource s);
ThresholdSource threshold_source_from_string(const std::string& text);

struct ThresholdProvenance {
    ThresholdSource source = ThresholdSource::Normal;
    std::optional<double> trr;  // training operating point, when defined
    std::optional<double> frr;
    std::optional<double> auc;
};

struct ThresholdSet {
    std::vector<std::string> class_names;
    std::vector<double> thresholds;
    std::vector<ThresholdProvenance> provenance;
    Strategy strategy = Strategy::Normal;
    std::optional<double> constraint;

    std::size_t size() const { return thresholds.size(); }

    /// Thresholds that accept (kThresholdAlways) or reject (kThresholdNever)
    /// every score.
    static ThresholdSet uniform(const std::vector<std::string>& class_names, double value,
                                Strategy strategy = Strategy::None);
};

}  // namespace openset
