#include "socbench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "socbench/frame.hpp"
#include "socbench/linear.hpp"
#include "socbench/nn.hpp"
#include "socbench/synthetic.hpp"
#include "socbench/transformer.hpp"
#include "socbench/tree.hpp"

namespace soc {

namespace {

// external bagging-random-forest baseline the subset experiment compares to
constexpr double kBaselineMae = 0.280;
constexpr double kBaselineRmse = 0.519;

template <typename T>
T get_or(const nlohmann::json& doc, const std::string& key, T fallback) {
    if (doc.is_object() && doc.contains(key) && !doc.at(key).is_null())
        return doc.at(key).get<T>();
    return fallback;
}

nlohmann::json model_overrides(const BenchConfig& config, const std::string& key) {
    if (config.overrides.is_object() && config.overrides.contains("models") &&
        config.overrides.at("models").contains(key))
        return config.overrides.at("models").at(key);
    return nlohmann::json::object();
}

}  // namespace

nlohmann::json PreprocessConfig::to_json() const {
    return {{"input_path", input_path},
            {"delimiter", std::string(1, delimiter)},
            {"decimal_comma", decimal_comma},
            {"target_name", target_name},
            {"synthetic_rows", synthetic_rows},
            {"synthetic_features", synthetic_features},
            {"seed", seed},
            {"corr_threshold", corr_threshold},
            {"variance_threshold", variance_threshold},
            {"z_threshold", z_threshold},
            {"train_fraction", train_fraction},
            {"val_fraction", val_fraction},
            {"test_fraction", test_fraction},
            {"paper_faithful", paper_faithful}};
}

PreprocessConfig PreprocessConfig::from_json(const nlohmann::json& doc) {
    PreprocessConfig c;
    c.input_path = doc.at("input_path").get<std::string>();
    c.delimiter = doc.at("delimiter").get<std::string>().at(0);
    c.decimal_comma = doc.at("decimal_comma").get<bool>();
    c.target_name = doc.at("target_name").get<std::string>();
    c.synthetic_rows = doc.at("synthetic_rows").get<std::size_t>();
    c.synthetic_features = doc.at("synthetic_features").get<std::size_t>();
    c.seed = doc.at("seed").get<std::uint64_t>();
    c.corr_threshold = doc.at("corr_threshold").get<double>();
    c.variance_threshold = doc.at("variance_threshold").get<double>();
    c.z_threshold = doc.at("z_threshold").get<double>();
    c.train_fraction = doc.at("train_fraction").get<double>();
    c.val_fraction = doc.at("val_fraction").get<double>();
    c.test_fraction = doc.at("test_fraction").get<double>();
    c.paper_faithful = doc.at("paper_faithful").get<bool>();
    return c;
}

nlohmann::json BenchConfig::to_json() const {
    return {{"models", models}, {"kfold", kfold}, {"seed", seed}, {"overrides", overrides}};
}

BenchConfig BenchConfig::from_json(const nlohmann::json& doc) {
    BenchConfig c;
    c.models = doc.at("models").get<std::vector<std::string>>();
    c.kfold = doc.at("kfold").get<std::size_t>();
    c.seed = doc.at("seed").get<std::uint64_t>();
    c.overrides = doc.value("overrides", nlohmann::json());
    return c;
}

PreprocessArtifact run_preprocess(const PreprocessConfig& config) {
    PreprocessArtifact artifact;
    nlohmann::json manifest;
    manifest["preprocess_config"] = config.to_json();

    Frame raw;
    if (!config.input_path.empty()) {
        auto loaded = load_csv(config.input_path, config.delimiter, config.target_name,
                               config.decimal_comma);
        raw = std::move(loaded.frame);
        manifest["csv_dropped_rows"] = loaded.dropped_rows;
        manifest["csv_dropped_columns"] = loaded.dropped_columns;
    } else {
        if (config.synthetic_rows == 0)
            throw Error(ErrorCode::InvalidConfig, "neither input path nor synthetic rows given");
        raw = generate_synthetic(config.synthetic_rows, config.synthetic_features, config.seed);
    }
    manifest["input_rows"] = raw.n_rows();
    manifest["input_features"] = raw.n_cols() - 1;

    auto staged = [](const char* stage, auto&& fn) {
        try {
            return fn();
        } catch (const Error& e) {
            throw Error(e.code(), std::string("[") + stage + "] " + e.what());
        }
    };

    auto [selected_frame, selection] = staged("select_features", [&] {
        return select_features(raw, config.corr_threshold, config.variance_threshold);
    });
    artifact.selection = selection;
    manifest["selected_features"] = selection.selected;
    nlohmann::json dropped = nlohmann::json::array();
    for (const auto& [name, reason] : selection.dropped)
        dropped.push_back({{"feature", name}, {"reason", reason}});
    manifest["dropped_features"] = dropped;

    auto [clean_frame, removed] = staged("remove_outliers", [&] {
        return remove_outliers(selected_frame, config.z_threshold);
    });
    manifest["outlier_rows_removed"] = removed;

    SplitSpec spec{config.train_fraction, config.val_fraction, config.test_fraction,
                   config.seed};
    auto parts = staged("split", [&] { return split(clean_frame, spec); });

    staged("standardize", [&] {
        artifact.scaler =
            fit_standardizer(config.paper_faithful ? clean_frame : parts.train);
        artifact.train = apply_standardizer(parts.train, artifact.scaler);
        artifact.val = apply_standardizer(parts.val, artifact.scaler);
        artifact.test = apply_standardizer(parts.test, artifact.scaler);
        return 0;
    });

    manifest["split_rows"] = {{"train", artifact.train.n_rows()},
                              {"val", artifact.val.n_rows()},
                              {"test", artifact.test.n_rows()}};
    manifest["standardizer"] = {{"features", artifact.scaler.feature_names},
                                {"means", artifact.scaler.means},
                                {"stds", artifact.scaler.stds}};
    artifact.manifest = std::move(manifest);
    return artifact;
}

void save_artifact(const PreprocessArtifact& artifact, const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_csv(artifact.train, dir + "/train.csv");
    write_csv(artifact.val, dir + "/val.csv");
    write_csv(artifact.test, dir + "/test.csv");
    std::ofstream out(dir + "/manifest.json");
    out << artifact.manifest.dump(2) << '\n';
}

PreprocessArtifact load_artifact(const std::string& dir) {
    std::ifstream in(dir + "/manifest.json");
    if (!in) throw Error(ErrorCode::FileNotFound, dir + "/manifest.json");
    nlohmann::json manifest = nlohmann::json::parse(in);
    const auto target =
        manifest.at("preprocess_config").at("target_name").get<std::string>();

    PreprocessArtifact artifact;
    artifact.train = load_csv(dir + "/train.csv", ',', target).frame;
    artifact.val = load_csv(dir + "/val.csv", ',', target).frame;
    artifact.test = load_csv(dir + "/test.csv", ',', target).frame;
    artifact.scaler.feature_names =
        manifest.at("standardizer").at("features").get<std::vector<std::string>>();
    artifact.scaler.means = manifest.at("standardizer").at("means").get<std::vector<double>>();
    artifact.scaler.stds = manifest.at("standardizer").at("stds").get<std::vector<double>>();
    artifact.manifest = std::move(manifest);
    return artifact;
}

std::vector<std::string> all_model_keys() {
    return {"tree", "mlp", "transformer_full", "transformer_attention",
            "linear", "lasso", "transformer_positional"};
}

std::string display_name(const std::string& key) {
    if (key == "tree") return "Decision Tree";
    if (key == "mlp") return "Neural Network Regression";
    if (key == "transformer_full")
        return "Transformer (Self-Attention + Positional Encoding)";
    if (key == "transformer_attention") return "Transformer (Self-Attention)";
    if (key == "transformer_positional") return "Transformer (Positional Encoding)";
    if (key == "linear") return "Linear Regression";
    if (key == "lasso") return "Lasso Regression";
    throw Error(ErrorCode::InvalidConfig, "unknown model key " + key);
}

GridSpec default_grid(const std::string& key, const BenchConfig& config) {
    const nlohmann::json opts = model_overrides(config, key);
    GridSpec grid;
    if (key == "tree") {
        std::vector<nlohmann::json> depths = {4, 8, 16, 32, nullptr};
        if (opts.contains("max_depth_grid"))
            depths = opts.at("max_depth_grid").get<std::vector<nlohmann::json>>();
        grid.axes.emplace_back("max_depth", depths);
    } else if (key == "lasso") {
        std::vector<nlohmann::json> lambdas = {0.001, 0.01, 0.1, 1.0, 10.0};
        if (opts.contains("lambda_grid"))
            lambdas = opts.at("lambda_grid").get<std::vector<nlohmann::json>>();
        grid.axes.emplace_back("lambda", lambdas);
    }
    // linear regression: the empty grid ("fit once with defaults")
    return grid;
}

std::unique_ptr<Model> make_model(const std::string& key, const BenchConfig& config,
                                  const Candidate& candidate) {
    const nlohmann::json opts = model_overrides(config, key);

    if (key == "linear") return std::make_unique<LinearModel>();

    if (key == "lasso") {
        double lambda = get_or(opts, "lambda", 0.1);
        if (candidate.contains("lambda")) lambda = candidate.at("lambda").get<double>();
        return std::make_unique<LassoModel>(lambda, get_or(opts, "tol", 1e-6),
                                            get_or<std::size_t>(opts, "max_iter", 10000));
    }

    if (key == "tree") {
        TreeConfig tc;
        nlohmann::json depth = opts.value("max_depth", nlohmann::json());
        if (candidate.contains("max_depth")) depth = candidate.at("max_depth");
        if (!depth.is_null()) tc.max_depth = depth.get<std::size_t>();
        tc.min_samples_split = get_or<std::size_t>(opts, "min_samples_split", 2);
        tc.min_samples_leaf = get_or<std::size_t>(opts, "min_samples_leaf", 1);
        return std::make_unique<DecisionTreeModel>(tc);
    }

    TrainConfig train_config;
    train_config.epochs = get_or<std::size_t>(opts, "epochs", 100);
    train_config.batch_size = get_or<std::size_t>(opts, "batch_size", 1000);
    train_config.patience = get_or<std::size_t>(opts, "patience", 5);
    train_config.min_delta = get_or(opts, "min_delta", 0.0);
    AdamConfig adam_config;
    adam_config.learning_rate = get_or(opts, "learning_rate", 0.001);
    // each model draws from its own seed stream so runs stay reproducible
    // per model regardless of which subset of models is requested
    const auto keys = all_model_keys();
    const std::size_t index = static_cast<std::size_t>(
        std::find(keys.begin(), keys.end(), key) - keys.begin());
    const std::uint64_t seed =
        get_or<std::uint64_t>(opts, "seed", config.seed + 1000 * index);

    if (key == "mlp") return std::make_unique<MlpModel>(train_config, adam_config, seed);

    TransformerConfig tf;
    tf.seed = seed;
    tf.d_model = get_or<std::size_t>(opts, "d_model", 32);
    tf.n_heads = get_or<std::size_t>(opts, "n_heads", 4);
    tf.dropout_rate = get_or(opts, "dropout_rate", 0.1);
    tf.hidden_units = get_or<std::size_t>(opts, "hidden_units", 64);
    tf.learned_positional = get_or(opts, "learned_positional", false);
    if (key == "transformer_full") tf.variant = TransformerVariant::Full;
    else if (key == "transformer_attention") tf.variant = TransformerVariant::AttentionOnly;
    else if (key == "transformer_positional") tf.variant = TransformerVariant::PositionalOnly;
    else throw Error(ErrorCode::InvalidConfig, "unknown model key " + key);
    return std::make_unique<TransformerModel>(tf, train_config, adam_config);
}

TrainedModel train_model(const std::string& key, const PreprocessArtifact& artifact,
                         const BenchConfig& config) {
    const Matrix Xtr(artifact.train.n_rows(), artifact.train.n_cols() - 1,
                     artifact.train.feature_matrix());
    const Vector ytr = artifact.train.target();
    const Matrix Xval(artifact.val.n_rows(), artifact.val.n_cols() - 1,
                      artifact.val.feature_matrix());
    const Vector yval = artifact.val.target();

    TrainedModel out;
    Candidate best = Candidate::object();

    const GridSpec grid = default_grid(key, config);
    const bool neural = key == "mlp" || key.starts_with("transformer");
    if (!neural) {
        // baselines go through grid search + k-fold CV even when the grid is
        // empty (one candidate, k fits), mirroring the selection procedure
        auto factory = [&](const Candidate& candidate) {
            return make_model(key, config, candidate);
        };
        const CVResult cv = grid_search(factory, grid, Xtr, ytr, config.kfold, config.seed);
        best = cv.candidates[cv.best_index].candidate;
        out.details["cv_best_candidate"] = best;
        out.details["cv_best_mean_mse"] = cv.candidates[cv.best_index].mean_mse;
        out.details["cv_fits"] = cv.total_fits;
    }

    out.model = make_model(key, config, best);
    if (auto* mlp = dynamic_cast<MlpModel*>(out.model.get())) {
        mlp->fit_with_validation(Xtr, ytr, Xval, yval);
        out.details["epochs_run"] = mlp->history().train_loss.size();
        out.details["early_stopped"] = mlp->history().early_stopped;
    } else if (auto* tf = dynamic_cast<TransformerModel*>(out.model.get())) {
        tf->fit_with_validation(Xtr, ytr, Xval, yval);
        out.details["epochs_run"] = tf->history().train_loss.size();
        out.details["early_stopped"] = tf->history().early_stopped;
    } else {
        out.model->fit(Xtr, ytr);
        if (auto* lasso = dynamic_cast<LassoModel*>(out.model.get()))
            out.details["converged"] = lasso->converged();
        if (auto* linear = dynamic_cast<LinearModel*>(out.model.get()))
            out.details["rank_deficient"] = linear->rank_deficient();
    }
    return out;
}

namespace {

void sort_rows(std::vector<BenchRow>& rows) {
    // ascending test MSE; failures sink to the bottom in input order
    std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        if (a.failed != b.failed) return !a.failed;
        if (a.failed) return false;
        return a.test_metrics->mse < b.test_metrics->mse;
    });
}

}  // namespace

MetricsReport score_on_frame(const Model& model, const Frame& frame) {
    const Matrix X(frame.n_rows(), frame.n_cols() - 1, frame.feature_matrix());
    return score(frame.target(), model.predict(X));
}

BenchmarkReport run_benchmark(const PreprocessArtifact& artifact, const BenchConfig& config) {
    BenchmarkReport report;
    nlohmann::json timing = nlohmann::json::object();

    for (const auto& key : config.models) {
        BenchRow row;
        row.key = key;
        row.model = display_name(key);
        const auto start = std::chrono::steady_clock::now();
        try {
            TrainedModel fitted = train_model(key, artifact, config);
            row.details = fitted.details;
            row.val_metrics = score_on_frame(*fitted.model, artifact.val);
            row.test_metrics = score_on_frame(*fitted.model, artifact.test);
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        timing[key] = row.wall_seconds;
        report.rows.push_back(std::move(row));
    }
    sort_rows(report.rows);

    report.manifest = artifact.manifest;
    report.manifest["bench_config"] = config.to_json();
    report.manifest["wall_seconds"] = timing;
    return report;
}

BenchmarkReport run_subset(const PreprocessArtifact& artifact, std::size_t n,
                           std::uint64_t seed, const BenchConfig& config) {
    const std::size_t total =
        artifact.train.n_rows() + artifact.val.n_rows() + artifact.test.n_rows();
    if (n > total)
        throw Error(ErrorCode::SubsetTooLarge,
                    "requested " + std::to_string(n) + " of " + std::to_string(total));

    PreprocessArtifact sub = artifact;
    if (n < total) {
        // proportional per-split subsample, remainder to train
        std::mt19937_64 rng(seed);
        auto take = [&](const Frame& frame, std::size_t want) {
            std::vector<std::size_t> idx(frame.n_rows());
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), rng);
            idx.resize(want);
            std::sort(idx.begin(), idx.end());
            return frame.select_rows(idx);
        };
        const std::size_t n_val = n * artifact.val.n_rows() / total;
        const std::size_t n_test = n * artifact.test.n_rows() / total;
        const std::size_t n_train = n - n_val - n_test;
        if (n_train == 0 || n_val == 0 || n_test == 0)
            throw Error(ErrorCode::InvalidSize, "subset too small for three splits");
        sub.train = take(artifact.train, n_train);
        sub.val = take(artifact.val, n_val);
        sub.test = take(artifact.test, n_test);
    }

    BenchmarkReport report = run_benchmark(sub, config);
    for (auto& row : report.rows) {
        if (!row.failed)
            row.subset_pass = row.test_metrics->mae <= kBaselineMae &&
                              row.test_metrics->rmse <= kBaselineRmse;
    }
    report.manifest["subset"] = {{"n", n}, {"seed", seed}};
    return report;
}

namespace {

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

void render_one_table(const BenchmarkReport& report, const char* split, std::string& out) {
    std::vector<BenchRow> rows = report.rows;
    std::stable_sort(rows.begin(), rows.end(), [&](const BenchRow& a, const BenchRow& b) {
        const auto& ma = std::string(split) == "test" ? a.test_metrics : a.val_metrics;
        const auto& mb = std::string(split) == "test" ? b.test_metrics : b.val_metrics;
        if (a.failed != b.failed) return !a.failed;
        if (a.failed || !ma || !mb) return false;
        return ma->mse < mb->mse;
    });

    std::size_t width = 8;
    for (const auto& row : rows) width = std::max(width, row.model.size());

    out += std::string("[") + split + " split]\n";
    char line[512];
    std::snprintf(line, sizeof(line), "%-*s  %10s  %10s  %10s  %10s\n",
                  static_cast<int>(width), "ML Model", "MSE", "RMSE", "R2", "MAE");
    out += line;
    for (const auto& row : rows) {
        const auto& m = std::string(split) == "test" ? row.test_metrics : row.val_metrics;
        if (row.failed || !m) {
            std::snprintf(line, sizeof(line), "%-*s  FAILED (%s)\n",
                          static_cast<int>(width), row.model.c_str(), row.error.c_str());
        } else {
            std::string suffix;
            if (row.subset_pass)
                suffix = *row.subset_pass ? "  [beats external baseline]"
                                          : "  [behind external baseline]";
            std::snprintf(line, sizeof(line), "%-*s  %10s  %10s  %10s  %10s%s\n",
                          static_cast<int>(width), row.model.c_str(), fmt4(m->mse).c_str(),
                          fmt4(m->rmse).c_str(), fmt4(m->r2).c_str(), fmt4(m->mae).c_str(),
                          suffix.c_str());
        }
        out += line;
    }
}

nlohmann::json metrics_json(const MetricsReport& m) {
    return {{"mse", m.mse}, {"rmse", m.rmse}, {"r2", m.r2}, {"mae", m.mae}, {"n", m.n}};
}

}  // namespace

std::string render_table(const BenchmarkReport& report) {
    std::string out;
    render_one_table(report, "test", out);
    out += '\n';
    render_one_table(report, "validation", out);
    return out;
}

nlohmann::json report_to_json(const BenchmarkReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json r = {{"key", row.key}, {"model", row.model}, {"failed", row.failed}};
        if (row.failed) {
            r["error"] = row.error;
        } else {
            r["test"] = metrics_json(*row.test_metrics);
            r["validation"] = metrics_json(*row.val_metrics);
            r["details"] = row.details;
        }
        if (row.subset_pass) r["beats_external_baseline"] = *row.subset_pass;
        rows.push_back(std::move(r));
    }
    return {{"rows", rows}};
}

std::string report_to_csv(const BenchmarkReport& report) {
    std::string out = "model,split,mse,rmse,r2,mae\n";
    char buf[64];
    for (const auto& row : report.rows) {
        if (row.failed) continue;
        for (const auto& [split, m] :
             {std::pair{"test", *row.test_metrics}, std::pair{"validation", *row.val_metrics}}) {
            out += '"' + row.model + "\"," + split;
            for (double v : {m.mse, m.rmse, m.r2, m.mae}) {
                std::snprintf(buf, sizeof(buf), ",%.17g", v);
                out += buf;
            }
            out += '\n';
        }
    }
    return out;
}

std::vector<TracePoint> plot_trace(const PreprocessArtifact& artifact,
                                   const std::string& model_key, const BenchConfig& config) {
    TrainedModel fitted = train_model(model_key, artifact, config);
    const Matrix X(artifact.test.n_rows(), artifact.test.n_cols() - 1,
                   artifact.test.feature_matrix());
    const Vector pred = fitted.model->predict(X);
    const Vector& actual = artifact.test.target();

    std::vector<TracePoint> trace(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) trace[i] = {i, actual[i], pred[i]};
    return trace;
}

void trace_to_csv(const std::vector<TracePoint>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::FileNotFound, "cannot open " + path + " for writing");
    out << "index,actual_soc,predicted_soc\n";
    char buf[128];
    for (const auto& point : trace) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", point.index, point.actual,
                      point.predicted);
        out << buf;
    }
}

BenchmarkReport replay_from_manifest(const nlohmann::json& manifest) {
    const auto pre = PreprocessConfig::from_json(manifest.at("preprocess_config"));
    const auto bench = BenchConfig::from_json(manifest.at("bench_config"));
    PreprocessArtifact artifact = run_preprocess(pre);
    if (manifest.contains("subset"))
        return run_subset(artifact, manifest.at("subset").at("n").get<std::size_t>(),
                          manifest.at("subset").at("seed").get<std::uint64_t>(), bench);
    return run_benchmark(artifact, bench);
}

std::unique_ptr<Model> load_model(const nlohmann::json& doc) {
    const auto type = doc.at("type").get<std::string>();
    if (type == "linear") return std::make_unique<LinearModel>(LinearModel::from_json(doc));
    if (type == "lasso") return std::make_unique<LassoModel>(LassoModel::from_json(doc));
    if (type == "tree")
        return std::make_unique<DecisionTreeModel>(DecisionTreeModel::from_json(doc));
    if (type == "mlp") return std::make_unique<MlpModel>(MlpModel::from_json(doc));
    if (type == "transformer")
        return std::make_unique<TransformerModel>(TransformerModel::from_json(doc));
    throw Error(ErrorCode::InvalidConfig, "unknown model type " + type);
}

}  // namespace soc
