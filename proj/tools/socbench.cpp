// socbench: preprocess driving-cycle data, benchmark the seven SOC
// regressors, and emit plot-ready prediction traces.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "socbench/bench.hpp"

namespace {

struct CommonArgs {
    std::string data_dir = "out";
    std::string out_dir = "out";
    std::string config_path;
    std::vector<std::string> models;
    bool all_models = false;
    std::size_t kfold = 5;
    std::uint64_t seed = 42;
};

void add_bench_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--data", args.data_dir, "Directory with a preprocessed artifact")
        ->capture_default_str();
    cmd->add_option("--out", args.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--config", args.config_path, "JSON file with hyperparameter overrides");
    cmd->add_option("--models", args.models, "Comma-separated model keys")->delimiter(',');
    cmd->add_flag("--all", args.all_models, "Run all seven models");
    cmd->add_option("--kfold", args.kfold, "Cross-validation folds")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Benchmark seed")->capture_default_str();
}

soc::BenchConfig make_bench_config(const CommonArgs& args) {
    soc::BenchConfig config;
    config.kfold = args.kfold;
    config.seed = args.seed;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw soc::Error(soc::ErrorCode::FileNotFound, args.config_path);
        config.overrides = nlohmann::json::parse(in);
    }
    if (args.all_models) {
        config.models = soc::all_model_keys();
    } else if (!args.models.empty()) {
        config.models = args.models;
        for (const auto& key : config.models) soc::display_name(key);  // validate
    } else {
        throw soc::Error(soc::ErrorCode::InvalidConfig, "pass --models LIST or --all");
    }
    return config;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw soc::Error(soc::ErrorCode::FileNotFound, "cannot open " + path + " for writing");
    out << content;
}

void write_report(const soc::BenchmarkReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_text(dir + "/report.json", soc::report_to_json(report).dump(2) + "\n");
    write_text(dir + "/report.csv", soc::report_to_csv(report));
    write_text(dir + "/manifest.json", report.manifest.dump(2) + "\n");
}

void print_metrics(const char* split, const soc::MetricsReport& m) {
    std::printf("%-12s MSE %.4f  RMSE %.4f  R2 %.4f  MAE %.4f  (n=%zu)\n", split, m.mse,
                m.rmse, m.r2, m.mae, m.n);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SOC regression benchmark harness"};
    app.require_subcommand(1);

    // preprocess
    soc::PreprocessConfig pre;
    std::string pre_out = "out";
    auto* cmd_pre = app.add_subcommand("preprocess", "Clean, select, split, standardize");
    cmd_pre->add_option("--input", pre.input_path, "Input CSV path");
    cmd_pre->add_option("--synthetic", pre.synthetic_rows,
                        "Generate N synthetic coulomb-counting rows instead of reading a file");
    cmd_pre->add_option("--features", pre.synthetic_features, "Synthetic feature count")
        ->capture_default_str();
    cmd_pre->add_option("--seed", pre.seed, "Pipeline seed")->capture_default_str();
    std::string delim = ",";
    cmd_pre->add_option("--delimiter", delim, "Field delimiter")->capture_default_str();
    cmd_pre->add_flag("--decimal-comma", pre.decimal_comma, "Parse 3,14-style decimals");
    cmd_pre->add_option("--target", pre.target_name, "Target column name")
        ->capture_default_str();
    cmd_pre->add_option("--z-threshold", pre.z_threshold, "Outlier z-score threshold")
        ->capture_default_str();
    cmd_pre->add_option("--corr-threshold", pre.corr_threshold,
                        "Minimum |Pearson r| with target")->capture_default_str();
    cmd_pre->add_option("--variance-threshold", pre.variance_threshold,
                        "Minimum feature variance")->capture_default_str();
    cmd_pre->add_flag("--paper-faithful", pre.paper_faithful,
                      "Fit the standardizer on all rows instead of the train split");
    cmd_pre->add_option("--out", pre_out, "Output directory")->capture_default_str();

    // benchmark
    CommonArgs bench_args;
    auto* cmd_bench = app.add_subcommand("benchmark", "Train and score the requested models");
    add_bench_flags(cmd_bench, bench_args);

    // subset
    CommonArgs subset_args;
    std::size_t subset_n = 32067;
    std::uint64_t subset_seed = 42;
    auto* cmd_subset =
        app.add_subcommand("subset", "Benchmark on a seeded n-row subsample");
    add_bench_flags(cmd_subset, subset_args);
    cmd_subset->add_option("--n", subset_n, "Subsample size")->capture_default_str();
    cmd_subset->add_option("--subset-seed", subset_seed, "Subsample seed")
        ->capture_default_str();

    // plot-data
    CommonArgs plot_args;
    std::string plot_model;
    auto* cmd_plot =
        app.add_subcommand("plot-data", "Write a predicted-vs-actual test-split trace");
    add_bench_flags(cmd_plot, plot_args);
    cmd_plot->add_option("--model", plot_model, "Model key")->required();

    // train
    CommonArgs train_args;
    std::string train_model_key;
    auto* cmd_train = app.add_subcommand("train", "Train one model and save it as JSON");
    add_bench_flags(cmd_train, train_args);
    cmd_train->add_option("--model", train_model_key, "Model key")->required();

    // evaluate
    CommonArgs eval_args;
    std::string model_file;
    auto* cmd_eval =
        app.add_subcommand("evaluate", "Score a saved model on an artifact's splits");
    add_bench_flags(cmd_eval, eval_args);
    cmd_eval->add_option("--model-file", model_file, "Saved model JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_pre->parsed()) {
            if (delim.size() != 1)
                throw soc::Error(soc::ErrorCode::InvalidConfig,
                                 "--delimiter must be a single character");
            pre.delimiter = delim[0];
            const auto artifact = soc::run_preprocess(pre);
            soc::save_artifact(artifact, pre_out);
            std::printf("wrote %s/{train,val,test}.csv and manifest.json "
                        "(train %zu, val %zu, test %zu rows; %zu features)\n",
                        pre_out.c_str(), artifact.train.n_rows(), artifact.val.n_rows(),
                        artifact.test.n_rows(), artifact.scaler.feature_names.size());
        } else if (cmd_bench->parsed()) {
            const auto config = make_bench_config(bench_args);
            const auto artifact = soc::load_artifact(bench_args.data_dir);
            const auto report = soc::run_benchmark(artifact, config);
            std::fputs(soc::render_table(report).c_str(), stdout);
            write_report(report, bench_args.out_dir);
        } else if (cmd_subset->parsed()) {
            const auto config = make_bench_config(subset_args);
            const auto artifact = soc::load_artifact(subset_args.data_dir);
            const auto report = soc::run_subset(artifact, subset_n, subset_seed, config);
            std::fputs(soc::render_table(report).c_str(), stdout);
            write_report(report, subset_args.out_dir);
        } else if (cmd_plot->parsed()) {
            plot_args.models = {plot_model};
            const auto config = make_bench_config(plot_args);
            const auto artifact = soc::load_artifact(plot_args.data_dir);
            const auto trace = soc::plot_trace(artifact, plot_model, config);
            std::filesystem::create_directories(plot_args.out_dir);
            const std::string path = plot_args.out_dir + "/trace_" + plot_model + ".csv";
            soc::trace_to_csv(trace, path);
            std::printf("wrote %s (%zu rows)\n", path.c_str(), trace.size());
        } else if (cmd_train->parsed()) {
            train_args.models = {train_model_key};
            const auto config = make_bench_config(train_args);
            const auto artifact = soc::load_artifact(train_args.data_dir);
            auto trained = soc::train_model(train_model_key, artifact, config);
            print_metrics("validation", soc::score_on_frame(*trained.model, artifact.val));
            print_metrics("test", soc::score_on_frame(*trained.model, artifact.test));
            nlohmann::json doc = trained.model->to_json();
            doc["training_details"] = trained.details;
            std::filesystem::create_directories(train_args.out_dir);
            const std::string path =
                train_args.out_dir + "/model_" + train_model_key + ".json";
            write_text(path, doc.dump(2) + "\n");
            std::printf("wrote %s\n", path.c_str());
        } else if (cmd_eval->parsed()) {
            std::ifstream in(model_file);
            if (!in) throw soc::Error(soc::ErrorCode::FileNotFound, model_file);
            const auto model = soc::load_model(nlohmann::json::parse(in));
            const auto artifact = soc::load_artifact(eval_args.data_dir);
            std::printf("%s\n", model->name().c_str());
            print_metrics("validation", soc::score_on_frame(*model, artifact.val));
            print_metrics("test", soc::score_on_frame(*model, artifact.test));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
