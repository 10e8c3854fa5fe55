// Command-line front end: synth, train, calibrate, eval, compare.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "openset/classifier.hpp"
#include "openset/dataset.hpp"
#include "openset/harness.hpp"
#include "openset/roc.hpp"
#include "openset/serialize.hpp"
#include "openset/targets.hpp"
#include "openset/trainer.hpp"

namespace fs = std::filesystem;
using namespace openset;

namespace {

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
}

void add_train_options(CLI::App* cmd, TrainConfig& cfg) {
    cmd->add_option("--epochs", cfg.epochs, "Maximum accepted steps per class")->capture_default_str();
    cmd->add_option("--lr", cfg.lr0, "Initial learning rate")->capture_default_str();
    cmd->add_option("--lr-shrink", cfg.lr_shrink, "Backtracking factor in (0,1)")->capture_default_str();
    cmd->add_option("--tol", cfg.tol, "Relative loss-change stopping tolerance")->capture_default_str();
    cmd->add_option("--init-scale", cfg.init_scale, "Half-width of the uniform weight init")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Open-set low-shot classifier head: training, ROC calibration and evaluation"};
    app.require_subcommand(1);

    // synth
    SynthSpec synth;
    std::string synth_out;
    auto* synth_cmd = app.add_subcommand("synth", "Write a seeded synthetic train.csv / val.csv pair");
    synth_cmd->add_option("--n-rel", synth.n_rel, "Relevant categories")->capture_default_str();
    synth_cmd->add_option("--n-irr", synth.n_irr, "Irrelevant categories")->capture_default_str();
    synth_cmd->add_option("--dim", synth.dim, "Feature dimension")->capture_default_str();
    synth_cmd->add_option("--per-class-train", synth.per_class_train)->capture_default_str();
    synth_cmd->add_option("--per-class-val", synth.per_class_val)->capture_default_str();
    synth_cmd->add_option("--spread", synth.spread, "Per-category noise std-dev")->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "Output directory")->required();

    // train
    TrainConfig train_cfg;
    double negative = kDefaultNegativeTarget;
    std::string train_path, model_out;
    auto* train_cmd = app.add_subcommand("train", "Train the classifier head on a feature CSV");
    train_cmd->add_option("--train", train_path)->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--negative", negative, "Target value of unlabeled rows")->capture_default_str();
    add_train_options(train_cmd, train_cfg);
    train_cmd->add_option("--seed", train_cfg.seed)->capture_default_str();
    train_cmd->add_option("--out", model_out, "Model JSON path")->required();

    // calibrate
    std::string cal_model, cal_train, cal_strategy, cal_out, cal_dump;
    std::optional<double> cal_constraint;
    auto* cal_cmd = app.add_subcommand("calibrate", "Derive per-class rejection thresholds");
    cal_cmd->add_option("--model", cal_model)->required()->check(CLI::ExistingFile);
    cal_cmd->add_option("--train", cal_train)->required()->check(CLI::ExistingFile);
    cal_cmd->add_option("--strategy", cal_strategy)
        ->required()
        ->check(CLI::IsMember({"normal", "roc", "roc-constrained"}));
    cal_cmd->add_option("--constraint", cal_constraint, "Minimum training TRR for roc-constrained")
        ->check(CLI::Range(0.0, 1.0));
    cal_cmd->add_option("--out", cal_out, "Threshold JSON path")->required();
    cal_cmd->add_option("--roc-dump", cal_dump, "Directory for roc_points.csv / roc_summary.csv");

    // eval
    std::string ev_model, ev_thresholds, ev_val, ev_out, ev_decisions;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model and thresholds on a validation CSV");
    eval_cmd->add_option("--model", ev_model)->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--thresholds", ev_thresholds)->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--val", ev_val)->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--out", ev_out, "Report JSON path")->required();
    eval_cmd->add_option("--decisions", ev_decisions, "Optional per-record decisions CSV");

    // compare
    HarnessConfig cmp_cfg;
    std::string cmp_train, cmp_val, cmp_out;
    std::optional<double> cmp_constraint;
    auto* cmp_cmd = app.add_subcommand("compare", "Run all four methods on one train/val pair");
    cmp_cmd->add_option("--train", cmp_train)->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("--val", cmp_val)->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("--constraint", cmp_constraint, "TRR constraint for the ROC row")
        ->check(CLI::Range(0.0, 1.0));
    cmp_cmd->add_option("--negative", cmp_cfg.negative_value)->capture_default_str();
    add_train_options(cmp_cmd, cmp_cfg.train);
    cmp_cmd->add_option("--seed", cmp_cfg.train.seed)->required();
    cmp_cmd->add_option("--out", cmp_out, "Comparison JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*synth_cmd) {
            const auto [train, val] = generate_synthetic(synth);
            ensure_dir(synth_out);
            write_feature_set(train, fs::path(synth_out) / "train.csv");
            write_feature_set(val, fs::path(synth_out) / "val.csv");
        } else if (*train_cmd) {
            if (negative_value_is_ambiguous(negative)) {
                std::cerr << "warning: --negative " << negative
                          << " makes irrelevant target rows look like one-hot rows\n";
            }
            const auto data = load_feature_set(train_path);
            const auto model = train_model(data, build_target_matrix(data, negative), train_cfg);
            write_text_file(model_out, dump(to_json(model)));
        } else if (*cal_cmd) {
            const Strategy strategy = strategy_from_string(cal_strategy);
            if (strategy == Strategy::RocConstrained && !cal_constraint) {
                throw std::invalid_argument("--strategy roc-constrained requires --constraint");
            }
            const auto model = model_from_json(read_json_file(cal_model));
            const auto train = load_feature_set(cal_train);
            const auto pools = collect_pools(model, train);
            const auto thresholds = calibrate_pools(model, pools, strategy, cal_constraint);
            write_text_file(cal_out, dump(to_json(thresholds)));
            if (!cal_dump.empty()) {
                ensure_dir(cal_dump);
                const auto curves = build_all_curves(pools);
                write_text_file(fs::path(cal_dump) / "roc_points.csv",
                                format_roc_points_csv(curves, model.class_names));
                write_text_file(fs::path(cal_dump) / "roc_summary.csv",
                                format_roc_summary_csv(curves, model.class_names));
            }
        } else if (*eval_cmd) {
            const auto model = model_from_json(read_json_file(ev_model));
            const auto thresholds = thresholds_from_json(read_json_file(ev_thresholds));
            const auto val = load_feature_set(ev_val);
            const auto decisions = classify_set(model, val, thresholds);
            const auto report = evaluate(model, thresholds, val, "eval");
            write_text_file(ev_out, dump(to_json(report)));
            if (!ev_decisions.empty()) {
                write_text_file(ev_decisions, format_decisions_csv(decisions, model.class_names));
            }
        } else if (*cmp_cmd) {
            const auto train = load_feature_set(cmp_train);
            const auto val = load_feature_set(cmp_val);
            const auto table = run_comparison(train, val, cmp_cfg, cmp_constraint);
            write_text_file(cmp_out, dump(to_json(table)));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
