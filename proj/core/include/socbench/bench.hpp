#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "socbench/metrics.hpp"
#include "socbench/model.hpp"
#include "socbench/model_selection.hpp"
#include "socbench/pipeline.hpp"

namespace soc {

struct PreprocessConfig {
    std::string input_path;            // empty => synthetic
    char delimiter = ',';
    bool decimal_comma = false;
    std::string target_name = "soc";
    std::size_t synthetic_rows = 0;
    std::size_t synthetic_features = 10;
    std::uint64_t seed = 0;
    double corr_threshold = 0.05;
    double variance_threshold = 1e-8;
    double z_threshold = 3.0;
    double train_fraction = 0.70;
    double val_fraction = 0.15;
    double test_fraction = 0.15;
    bool paper_faithful = false;  // standardizer fitted on the whole frame

    nlohmann::json to_json() const;
    static PreprocessConfig from_json(const nlohmann::json& doc);
};

struct PreprocessArtifact {
    Frame train, val, test;  // standardized features, untouched target
    StandardizationParams scaler;
    FeatureSelectionReport selection;
    nlohmann::json manifest;  // config + counts + params; replays the run
};

PreprocessArtifact run_preprocess(const PreprocessConfig& config);
void save_artifact(const PreprocessArtifact& artifact, const std::string& dir);
PreprocessArtifact load_artifact(const std::string& dir);

struct BenchConfig {
    std::vector<std::string> models;  // canonical keys; see all_model_keys()
    std::size_t kfold = 5;
    std::uint64_t seed = 42;
    nlohmann::json overrides;  // parsed --config file, may be null

    nlohmann::json to_json() const;
    static BenchConfig from_json(const nlohmann::json& doc);
};

struct BenchRow {
    std::string key;    // canonical model key
    std::string model;  // display name (Table-style)
    bool failed = false;
    std::string error;
    std::optional<MetricsReport> val_metrics;
    std::optional<MetricsReport> test_metrics;
    nlohmann::json details;       // chosen hyperparameters etc.
    double wall_seconds = 0.0;    // manifest only, kept out of report.json
    std::optional<bool> subset_pass;  // vs external baseline thresholds
};

struct BenchmarkReport {
    std::vector<BenchRow> rows;  // sorted ascending by test MSE
    nlohmann::json manifest;
};

/// Canonical model keys in Table-1 order for --all.
std::vector<std::string> all_model_keys();
std::string display_name(const std::string& key);

/// Build a fresh estimator for a key, honoring config-file overrides.
std::unique_ptr<Model> make_model(const std::string& key, const BenchConfig& config,
                                  const Candidate& candidate = Candidate::object());
/// Default hyperparameter grid for a key (empty for models fit once).
GridSpec default_grid(const std::string& key, const BenchConfig& config);

/// Grid search (where the key has a grid) on the train split, then the final
/// fit; neural models train against the validation split directly.
struct TrainedModel {
    std::unique_ptr<Model> model;
    nlohmann::json details;  // chosen candidate, CV stats, epochs, flags
};
TrainedModel train_model(const std::string& key, const PreprocessArtifact& artifact,
                         const BenchConfig& config);

MetricsReport score_on_frame(const Model& model, const Frame& frame);

BenchmarkReport run_benchmark(const PreprocessArtifact& artifact, const BenchConfig& config);

/// Seeded n-row subsample of every split (proportional), then the full
/// benchmark; rows annotated against the external baseline thresholds
/// MAE 0.280 / RMSE 0.519.
BenchmarkReport run_subset(const PreprocessArtifact& artifact, std::size_t n,
                           std::uint64_t seed, const BenchConfig& config);

std::string render_table(const BenchmarkReport& report);
nlohmann::json report_to_json(const BenchmarkReport& report);
std::string report_to_csv(const BenchmarkReport& report);

struct TracePoint {
    std::size_t index;
    double actual;
    double predicted;
};
/// Test-split predicted-vs-actual trace for one model.
std::vector<TracePoint> plot_trace(const PreprocessArtifact& artifact,
                                   const std::string& model_key, const BenchConfig& config);
void trace_to_csv(const std::vector<TracePoint>& trace, const std::string& path);

/// Re-run preprocess + benchmark from a saved benchmark manifest.
BenchmarkReport replay_from_manifest(const nlohmann::json& manifest);

}  // namespace soc
