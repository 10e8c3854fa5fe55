#include "openset/serialize.hpp"

#include <fstream>
#include <sstream>

#include "openset/error.hpp"

namespace openset {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> read_optional(const Json& doc, const char* key) {
    if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
    return doc.at(key).get<double>();
}

void expect_format(const Json& doc, const char* format) {
    if (!doc.is_object() || doc.value("format", std::string()) != format) {
        throw FormatError(std::string("document is not a ") + format + " file");
    }
}

}  // namespace

Json to_json(const ClassifierModel& model) {
    Json weights = Json::array();
    for (std::size_t j = 0; j < model.class_count(); ++j) weights.push_back(model.weights.column(j));

    Json stops = Json::array();
    for (auto s : model.meta.stop_reasons) stops.push_back(to_string(s));

    const auto& cfg = model.meta.config;
    Json doc;
    doc["format"] = "openset-model";
    doc["version"] = 1;
    doc["class_names"] = model.class_names;
    doc["dim"] = model.dim;
    doc["negative_value"] = model.meta.negative_value;
    doc["weights"] = std::move(weights);
    doc["train_meta"] = {
        {"target_kind", model.meta.target_kind},
        {"config",
         {{"epochs", cfg.epochs},
          {"lr0", cfg.lr0},
          {"lr_shrink", cfg.lr_shrink},
          {"tol", cfg.tol},
          {"seed", cfg.seed},
          {"init_scale", cfg.init_scale}}},
        {"final_losses", model.meta.final_losses},
        {"epochs_used", model.meta.epochs_used},
        {"stop_reasons", std::move(stops)},
    };
    return doc;
}

ClassifierModel model_from_json(const Json& doc) {
    expect_format(doc, "openset-model");
    try {
        ClassifierModel model;
        model.class_names = doc.at("class_names").get<std::vector<std::string>>();
        model.dim = doc.at("dim").get<std::size_t>();
        model.meta.negative_value = doc.at("negative_value").get<double>();
        const auto& cols = doc.at("weights");
        if (cols.size() != model.class_names.size()) {
            throw FormatError("model has " + std::to_string(cols.size()) + " weight columns for " +
                              std::to_string(model.class_names.size()) + " classes");
        }
        model.weights = Matrix(model.dim, model.class_names.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const auto col = cols[j].get<std::vector<double>>();
            if (col.size() != model.dim) {
                throw FormatError("weight column " + std::to_string(j) + " has length " +
                                  std::to_string(col.size()) + ", expected " + std::to_string(model.dim));
            }
            model.weights.set_column(j, col);
        }
        const auto& meta = doc.at("train_meta");
        model.meta.target_kind = meta.at("target_kind").get<std::string>();
        const auto& cfg = meta.at("config");
        model.meta.config.epochs = cfg.at("epochs").get<int>();
        model.meta.config.lr0 = cfg.at("lr0").get<double>();
        model.meta.config.lr_shrink = cfg.at("lr_shrink").get<double>();
        model.meta.config.tol = cfg.at("tol").get<double>();
        model.meta.config.seed = cfg.at("seed").get<std::uint64_t>();
        model.meta.config.init_scale = cfg.at("init_scale").get<double>();
        model.meta.final_losses = meta.at("final_losses").get<std::vector<double>>();
        model.meta.epochs_used = meta.at("epochs_used").get<std::vector<int>>();
        for (const auto& s : meta.at("stop_reasons")) {
            model.meta.stop_reasons.push_back(stop_reason_from_string(s.get<std::string>()));
        }
        return model;
    } catch (const Json::exception& e) {
        throw FormatError(std::string("malformed model file: ") + e.what());
    }
}

Json to_json(const ThresholdSet& thresholds) {
    Json classes = Json::array();
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
        const auto& p = thresholds.provenance.at(j);
        classes.push_back({{"name", thresholds.class_names.at(j)},
                           {"threshold", thresholds.thresholds[j]},
                           {"source", to_string(p.source)},
                           {"trr", optional_number(p.trr)},
                           {"frr", optional_number(p.frr)},
                           {"auc", optional_number(p.auc)}});
    }
    Json doc;
    doc["format"] = "openset-thresholds";
    doc["version"] = 1;
    doc["strategy"] = to_string(thresholds.strategy);
    doc["constraint"] = optional_number(thresholds.constraint);
    doc["classes"] = std::move(classes);
    return doc;
}

ThresholdSet thresholds_from_json(const Json& doc) {
    expect_format(doc, "openset-thresholds");
    try {
        ThresholdSet set;
        set.strategy = strategy_from_string(doc.at("strategy").get<std::string>());
        set.constraint = read_optional(doc, "constraint");
        for (const auto& c : doc.at("classes")) {
            set.class_names.push_back(c.at("name").get<std::string>());
            set.thresholds.push_back(c.at("threshold").get<double>());
            ThresholdProvenance p;
            p.source = threshold_source_from_string(c.at("source").get<std::string>());
            p.trr = read_optional(c, "trr");
            p.frr = read_optional(c, "frr");
            p.auc = read_optional(c, "auc");
            set.provenance.push_back(p);
        }
        return set;
    } catch (const Json::exception& e) {
        throw FormatError(std::string("malformed threshold file: ") + e.what());
    }
}

Json to_json(const EvalReport& report) {
    Json per_class = Json::object();
    for (const auto& [name, tally] : report.per_class) {
        per_class[name] = {{"correct", tally.correct}, {"total", tally.total}};
    }
    Json doc;
    doc["format"] = "openset-report";
    doc["version"] = 1;
    doc["method"] = report.method;
    doc["relevant_accuracy"] = report.relevant_accuracy;
    doc["irrelevant_accuracy"] = report.irrelevant_accuracy;
    doc["cumulative_accuracy"] = report.cumulative_accuracy;
    doc["relevant_correct"] = report.relevant_correct;
    doc["relevant_total"] = report.relevant_total;
    doc["irrelevant_correct"] = report.irrelevant_correct;
    doc["irrelevant_total"] = report.irrelevant_total;
    doc["relevant_undefined"] = report.relevant_undefined;
    doc["irrelevant_undefined"] = report.irrelevant_undefined;
    doc["per_class"] = std::move(per_class);
    doc["config"] = {{"negative_value", report.config.negative_value},
                     {"strategy", report.config.strategy},
                     {"constraint", optional_number(report.config.constraint)},
                     {"seed", report.config.seed}};
    return doc;
}

EvalReport report_from_json(const Json& doc) {
    expect_format(doc, "openset-report");
    try {
        EvalReport r;
        r.method = doc.at("method").get<std::string>();
        r.relevant_accuracy = doc.at("relevant_accuracy").get<double>();
        r.irrelevant_accuracy = doc.at("irrelevant_accuracy").get<double>();
        r.cumulative_accuracy = doc.at("cumulative_accuracy").get<double>();
        r.relevant_correct = doc.at("relevant_correct").get<std::size_t>();
        r.relevant_total = doc.at("relevant_total").get<std::size_t>();
        r.irrelevant_correct = doc.at("irrelevant_correct").get<std::size_t>();
        r.irrelevant_total = doc.at("irrelevant_total").get<std::size_t>();
        r.relevant_undefined = doc.at("relevant_undefined").get<bool>();
        r.irrelevant_undefined = doc.at("irrelevant_undefined").get<bool>();
        for (const auto& [name, tally] : doc.at("per_class").items()) {
            r.per_class[name] = {tally.at("correct").get<std::size_t>(),
                                 tally.at("total").get<std::size_t>()};
        }
        const auto& cfg = doc.at("config");
        r.config.negative_value = cfg.at("negative_value").get<double>();
        r.config.strategy = cfg.at("strategy").get<std::string>();
        r.config.constraint = read_optional(cfg, "constraint");
        r.config.seed = cfg.at("seed").get<std::uint64_t>();
        return r;
    } catch (const Json::exception& e) {
        throw FormatError(std::string("malformed report file: ") + e.what());
    }
}

Json to_json(const ComparisonTable& table) {
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        Json r = to_json(row.report);
        r.erase("format");
        r.erase("version");
        r["error"] = row.error ? Json(*row.error) : Json(nullptr);
        rows.push_back(std::move(r));
    }
    Json doc;
    doc["format"] = "openset-comparison";
    doc["version"] = 1;
    doc["dataset"] = table.dataset;
    doc["rows"] = std::move(rows);
    return doc;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    out << text;
    if (!out) throw FormatError("write failed for " + path.string());
}

}  // namespace openset
