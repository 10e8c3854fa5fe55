#include "openset/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "openset/error.hpp"
#include "openset/rng.hpp"

namespace openset {

std::vector<double> normalize_features(std::span<const double> raw) {
    if (raw.empty()) throw std::invalid_argument("cannot normalize an empty feature vector");
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw[i])) {
            throw std::invalid_argument("non-finite feature at index " + std::to_string(i));
        }
    }
    const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    std::vector<double> out(raw.size(), 0.0);
    if (range == 0.0) return out;
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - lo) / range;
    return out;
}

bool is_valid_label(std::string_view label) {
    if (label == kUnlabeled) return true;
    if (label.empty()) return false;
    if (label.find(',') != std::string_view::npos) return false;
    const auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
    };
    return !is_space(label.front()) && !is_space(label.back());
}

FeatureSet::FeatureSet(std::vector<FeatureRecord> records, std::size_t dim)
    : records_(std::move(records)), dim_(dim) {
    std::unordered_set<std::string> ids;
    std::unordered_set<std::string> seen_classes;
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (r.features.size() != dim_) {
            throw FormatError("record " + std::to_string(i) + " ('" + r.id + "') has " +
                              std::to_string(r.features.size()) + " features, expected " +
                              std::to_string(dim_));
        }
        if (!ids.insert(r.id).second) {
            throw FormatError("duplicate record id '" + r.id + "'");
        }
        if (!is_valid_label(r.label)) {
            throw FormatError("record '" + r.id + "' has invalid label '" + r.label + "'");
        }
        if (r.is_labeled() && seen_classes.insert(r.label).second) {
            class_names_.push_back(r.label);
        }
    }
}

std::size_t FeatureSet::labeled_count() const {
    return static_cast<std::size_t>(
        std::count_if(records_.begin(), records_.end(), [](const auto& r) { return r.is_labeled(); }));
}

Matrix FeatureSet::feature_matrix() const {
    Matrix m(records_.size(), dim_);
    for (std::size_t i = 0; i < records_.size(); ++i) {
        std::copy(records_[i].features.begin(), records_[i].features.end(), m.row(i).begin());
    }
    return m;
}

void SynthSpec::validate() const {
    if (n_rel < 1) throw std::invalid_argument("n_rel must be >= 1");
    if (n_irr < 0) throw std::invalid_argument("n_irr must be >= 0");
    if (dim < 2) throw std::invalid_argument("dim must be >= 2");
    if (per_class_train < 1) throw std::invalid_argument("per_class_train must be >= 1");
    if (per_class_val < 0) throw std::invalid_argument("per_class_val must be >= 0");
    if (!(spread > 0.0) || !std::isfinite(spread)) throw std::invalid_argument("spread must be > 0");
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

std::string where(std::string_view source, std::size_t line_no) {
    return std::string(source) + ": row " + std::to_string(line_no);
}

}  // namespace

FeatureSet parse_feature_csv(std::string_view text, std::string_view source) {
    std::vector<FeatureRecord> records;
    std::size_t dim = 0;
    bool have_header = false;
    std::size_t line_no = 0;
    std::unordered_set<std::string> ids;

    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        const auto cells = split_commas(line);
        if (!have_header) {
            if (cells.size() < 3 || cells[0] != "id" || cells[1] != "label") {
                throw FormatError(where(source, line_no) +
                                  ": missing header 'id,label,f0,...'");
            }
            for (std::size_t k = 2; k < cells.size(); ++k) {
                if (cells[k] != "f" + std::to_string(k - 2)) {
                    throw FormatError(where(source, line_no) + ": header column " +
                                      std::to_string(k) + " should be f" + std::to_string(k - 2));
                }
            }
            dim = cells.size() - 2;
            have_header = true;
            continue;
        }

        if (cells.size() != dim + 2) {
            throw FormatError(where(source, line_no) + ": expected " + std::to_string(dim + 2) +
                              " cells, found " + std::to_string(cells.size()));
        }
        FeatureRecord rec;
        rec.id = std::string(cells[0]);
        rec.label = std::string(cells[1]);
        if (rec.id.empty()) throw FormatError(where(source, line_no) + ": empty id");
        if (!ids.insert(rec.id).second) {
            throw FormatError(where(source, line_no) + ": duplicate id '" + rec.id + "'");
        }
        if (!is_valid_label(rec.label)) {
            throw FormatError(where(source, line_no) + ": invalid label '" + rec.label + "'");
        }
        std::vector<double> raw(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            const auto cell = cells[k + 2];
            const char* first = cell.data();
            const char* last = cell.data() + cell.size();
            if (first != last && *first == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, last, raw[k]);
            if (cell.empty() || ec != std::errc() || ptr != last) {
                throw FormatError(where(source, line_no) + ": non-numeric feature f" +
                                  std::to_string(k) + " '" + std::string(cell) + "'");
            }
        }
        try {
            rec.features = normalize_features(raw);
        } catch (const std::invalid_argument& e) {
            throw FormatError(where(source, line_no) + ": " + e.what());
        }
        records.push_back(std::move(rec));
    }
    if (!have_header) throw FormatError(std::string(source) + ": missing header 'id,label,f0,...'");
    return FeatureSet(std::move(records), dim);
}

FeatureSet load_feature_set(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open feature file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_feature_csv(buf.str(), path.string());
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string format_feature_csv(const FeatureSet& set) {
    std::string out = "id,label";
    for (std::size_t k = 0; k < set.dim(); ++k) out += ",f" + std::to_string(k);
    out += '\n';
    for (const auto& r : set.records()) {
        out += r.id;
        out += ',';
        out += r.label;
        for (double v : r.features) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

void write_feature_set(const FeatureSet& set, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write feature file " + path.string());
    out << format_feature_csv(set);
    if (!out) throw FormatError("write failed for " + path.string());
}

namespace {

std::string category_name(char prefix, int index) {
    std::string digits = std::to_string(index);
    if (digits.size() < 2) digits.insert(0, 2 - digits.size(), '0');
    return std::string(1, prefix) + digits;
}

std::string image_id(std::string_view split, const std::string& category, int index) {
    std::string digits = std::to_string(index);
    if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
    return std::string(split) + "-" + category + "-" + digits;
}

}  // namespace

std::pair<FeatureSet, FeatureSet> generate_synthetic(const SynthSpec& spec) {
    spec.validate();
    Xoshiro256 rng(spec.seed);
    const int categories = spec.n_rel + spec.n_irr;
    const auto dim = static_cast<std::size_t>(spec.dim);

    std::vector<std::vector<double>> means(categories, std::vector<double>(dim));
    for (auto& mean : means) {
        for (auto& v : mean) v = rng.uniform();
    }

    const auto draw_split = [&](std::string_view split, int per_class) {
        std::vector<FeatureRecord> records;
        records.reserve(static_cast<std::size_t>(categories) * per_class);
        std::vector<double> raw(dim);
        for (int c = 0; c < categories; ++c) {
            const bool relevant = c < spec.n_rel;
            const std::string category =
                relevant ? category_name('R', c) : category_name('I', c - spec.n_rel);
            for (int i = 0; i < per_class; ++i) {
                for (std::size_t k = 0; k < dim; ++k) raw[k] = rng.gaussian(means[c][k], spec.spread);
                records.push_back({image_id(split, category, i),
                                   relevant ? category : std::string(kUnlabeled),
                                   normalize_features(raw)});
            }
        }
        return FeatureSet(std::move(records), dim);
    };

    FeatureSet train = draw_split("train", spec.per_class_train);
    FeatureSet val = draw_split("val", spec.per_class_val);
    return {std::move(train), std::move(val)};
}

}  // namespace openset
