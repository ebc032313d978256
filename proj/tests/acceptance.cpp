// Acceptance gate: one pass/fail line per criterion. argv[1] must be the
// path to the command-line benchmark binary (used for the end-to-end
// criteria); everything else exercises the library directly.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "oracles.hpp"
#include "socbench/bench.hpp"
#include "socbench/linear.hpp"
#include "socbench/metrics.hpp"
#include "socbench/transformer.hpp"
#include "socbench/tree.hpp"

using namespace soc;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
std::vector<std::string> g_notes;

void note(const std::string& message) { g_notes.push_back(message); }

bool require(bool ok, const std::string& what) {
    if (!ok) note("failed: " + what);
    return ok;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// ---- criterion 1: regression metrics against an independent oracle ----

bool criterion_metrics() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    std::normal_distribution<double> gauss;
    bool ok = true;
    for (int rep = 0; rep < 100 && ok; ++rep) {
        Vector y(1000), pred(1000);
        for (std::size_t i = 0; i < 1000; ++i) {
            y[i] = gauss(rng);
            pred[i] = y[i] + 0.5 * gauss(rng);
        }
        const auto got = score(y, pred);
        const auto want = oracle::metrics(y, pred);
        ok = ok && require(std::abs(got.mse - want.mse) < 1e-12, "mse oracle");
        ok = ok && require(std::abs(got.rmse - want.rmse) < 1e-12, "rmse oracle");
        ok = ok && require(std::abs(got.mae - want.mae) < 1e-12, "mae oracle");
        ok = ok && require(std::abs(got.r2 - want.r2) < 1e-12, "r2 oracle");
    }
    const auto hand = score({1.0, 3.0}, {2.0, 2.0});
    ok = ok && require(hand.mse == 1.0 && hand.rmse == 1.0 && hand.mae == 1.0 &&
                           hand.r2 == 0.0,
                       "hand-checked two-point case");
    return ok && require(seconds_since(start) < 1.0, "metrics time budget");
}

// ---- criterion 2: least squares against a QR oracle ----

bool criterion_ols() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1002);
    std::normal_distribution<double> gauss;
    bool ok = true;
    for (int rep = 0; rep < 50 && ok; ++rep) {
        Matrix X = oracle::random_matrix(200, 5, rng);
        Vector y(200);
        for (double& v : y) v = gauss(rng);

        const auto got = ols_fit(X, y);
        const auto [want_intercept, want_coefs] = oracle::least_squares_qr(X, y);
        ok = ok && require(std::abs(got.intercept - want_intercept) < 1e-8,
                           "intercept vs QR oracle");
        for (std::size_t j = 0; j < 5; ++j)
            ok = ok && require(std::abs(got.coefficients[j] - want_coefs[j]) < 1e-8,
                               "coefficient vs QR oracle");

        // residuals orthogonal to every feature column (relative check)
        const Vector pred = linear_predict(got.intercept, got.coefficients, X);
        for (std::size_t j = 0; j < 5; ++j) {
            double dot = 0.0, xnorm = 0.0, rnorm = 0.0;
            for (std::size_t i = 0; i < 200; ++i) {
                const double r = y[i] - pred[i];
                dot += X(i, j) * r;
                xnorm += X(i, j) * X(i, j);
                rnorm += r * r;
            }
            const double denom = std::max(std::sqrt(xnorm * rnorm), 1e-12);
            ok = ok && require(std::abs(dot) / denom < 1e-8, "residual orthogonality");
        }
    }
    return ok && require(seconds_since(start) < 5.0, "least-squares time budget");
}

// ---- criterion 3: lasso optimality conditions ----

bool criterion_lasso() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1003);
    std::normal_distribution<double> gauss;
    bool ok = true;
    const double tol = 1e-8;
    for (int rep = 0; rep < 20 && ok; ++rep) {
        Matrix X = oracle::random_matrix(120, 6, rng);
        oracle::standardize(X);
        Vector y(120);
        for (std::size_t i = 0; i < 120; ++i)
            y[i] = 1.5 * X(i, 0) - 0.8 * X(i, 2) + 0.3 * gauss(rng);

        const double lambda = 0.05 * (1 + rep % 4);
        const auto fit = lasso_fit(X, y, lambda, tol, 200000);
        ok = ok && require(fit.converged, "coordinate descent converged");

        // KKT: |(1/n) x_j^T r| == lambda on the active set, <= lambda off it
        Vector r(120);
        for (std::size_t i = 0; i < 120; ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < 6; ++j) dot += X(i, j) * fit.coefficients[j];
            r[i] = y[i] - fit.intercept - dot;
        }
        for (std::size_t j = 0; j < 6; ++j) {
            double g = 0.0;
            for (std::size_t i = 0; i < 120; ++i) g += X(i, j) * r[i];
            g /= 120.0;
            if (fit.coefficients[j] != 0.0) {
                const double sign = fit.coefficients[j] > 0 ? 1.0 : -1.0;
                ok = ok && require(std::abs(g - sign * lambda) <= 10 * tol,
                                   "stationarity on the active set");
            } else {
                ok = ok && require(std::abs(g) <= lambda + 10 * tol,
                                   "subgradient bound off the active set");
            }
        }
    }

    // lambda = 0 recovers least squares
    {
        Matrix X = oracle::random_matrix(150, 4, rng);
        oracle::standardize(X);
        Vector y(150);
        for (std::size_t i = 0; i < 150; ++i) y[i] = 2.0 * X(i, 0) - X(i, 1) + 0.1 * gauss(rng);
        const auto ols = ols_fit(X, y);
        const auto l0 = lasso_fit(X, y, 0.0, 1e-10, 500000);
        ok = ok && require(std::abs(l0.intercept - ols.intercept) < 1e-6, "lambda=0 intercept");
        for (std::size_t j = 0; j < 4; ++j)
            ok = ok && require(std::abs(l0.coefficients[j] - ols.coefficients[j]) < 1e-6,
                               "lambda=0 coefficients");

        // lambda >= lambda_max zeroes every coefficient, intercept = mean(y)
        const double lmax = lasso_lambda_max(X, y);
        const auto dead = lasso_fit(X, y, lmax * 1.0001, 1e-10, 1000);
        double ybar = std::accumulate(y.begin(), y.end(), 0.0) / 150.0;
        for (double b : dead.coefficients)
            ok = ok && require(b == 0.0, "all-zero solution at lambda_max");
        ok = ok && require(dead.intercept == ybar, "null-model intercept is the target mean");
    }
    return ok && require(seconds_since(start) < 10.0, "lasso time budget");
}

// ---- criterion 4: decision tree against an exhaustive-split oracle ----

bool tree_equal(const TreeNode& got, const oracle::OracleTree& want) {
    if (got.is_leaf != want.is_leaf) return false;
    if (got.is_leaf) return std::abs(got.value - want.value) < 1e-12;
    return got.feature_index == want.feature &&
           std::abs(got.threshold - want.threshold) < 1e-12 &&
           tree_equal(*got.left, *want.left) && tree_equal(*got.right, *want.right);
}

bool criterion_tree() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1004);
    std::uniform_int_distribution<std::size_t> nd(5, 50), pd(1, 3);
    std::normal_distribution<double> gauss;
    bool ok = true;
    for (int rep = 0; rep < 30 && ok; ++rep) {
        const std::size_t n = nd(rng), p = pd(rng);
        Matrix X = oracle::random_matrix(n, p, rng);
        Vector y(n);
        for (double& v : y) v = gauss(rng);

        TreeConfig config;
        config.max_depth = 2;
        auto got = tree_fit(X, y, config);
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        auto want = oracle::tree_oracle(X, y, idx, 2);
        ok = ok && require(tree_equal(*got, *want), "structural match with the oracle");
    }

    Matrix X = oracle::random_matrix(200, 3, rng);
    Vector y(200);
    for (double& v : y) v = gauss(rng);
    auto full = tree_fit(X, y, TreeConfig{});
    ok = ok && require(score(y, tree_predict(*full, X)).mse == 0.0,
                       "unlimited depth memorizes the training set");
    return ok && require(seconds_since(start) < 10.0, "tree time budget");
}

// ---- criterion 5: backprop gradients against finite differences ----

bool criterion_gradients() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    {
        std::mt19937_64 rng(1005);
        auto net = build_mlp(24, rng);
        std::size_t param_count = 0;
        for (Param* p : net.params()) param_count += p->value.size();
        ok = ok && require(param_count == 1085, "feed-forward parameter count");

        std::normal_distribution<double> gauss;
        Matrix x(3, 24);
        for (auto& v : x.data) v = gauss(rng);
        Tensor target({3, 1, 1});
        for (auto& v : target.data()) v = gauss(rng);
        auto result = gradcheck::check_params(net, reshape_input(x), target, 1e-5, 1e-3);
        ok = ok && require(result.checked > 500, "enough unmasked coordinates");
        ok = ok && require(result.max_rel_error < 1e-4, "feed-forward gradient accuracy");
    }
    {
        TransformerConfig config;
        config.variant = TransformerVariant::Full;
        config.d_model = 4;
        config.n_heads = 2;
        config.hidden_units = 4;
        auto net = build_transformer(3, config);
        std::mt19937_64 rng(1006);
        std::normal_distribution<double> gauss;
        Matrix x(3, 3);
        for (auto& v : x.data) v = gauss(rng);
        Tensor target({3, 1, 1});
        for (auto& v : target.data()) v = gauss(rng);
        auto result = gradcheck::check_params(net, reshape_input(x), target, 1e-5, 1e-3);
        ok = ok && require(result.checked > 50, "enough unmasked transformer coordinates");
        ok = ok && require(result.max_rel_error < 1e-3, "transformer gradient accuracy");
    }
    return ok && require(seconds_since(start) < 30.0, "gradient-check time budget");
}

// ---- criterion 6: attention weights form probability rows ----

bool criterion_attention() {
    std::mt19937_64 rng(1007);
    std::normal_distribution<double> gauss;
    bool ok = true;

    MultiHeadAttention mha(8, 2, rng);
    Tensor x({2, 5, 8});
    for (auto& v : x.data()) v = gauss(rng);
    (void)mha.forward(x, x, x);
    const Tensor& attn = mha.attention_weights();
    for (std::size_t bh = 0; bh < attn.dim(0); ++bh)
        for (std::size_t i = 0; i < attn.dim(1); ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < attn.dim(2); ++j) sum += attn.at(bh, i, j);
            ok = ok && require(std::abs(sum - 1.0) < 1e-12, "softmax rows sum to one");
        }

    Tensor single({3, 1, 8});
    for (auto& v : single.data()) v = gauss(rng);
    (void)mha.forward(single, single, single);
    for (double w : mha.attention_weights().data())
        ok = ok && require(w == 1.0, "length-1 attention weight is exactly one");
    return ok;
}

// ---- criteria 7 and 8: the end-to-end command-line run ----

struct CliRun {
    fs::path dir;
    bool ok = false;
    double seconds = 0.0;
};

CliRun run_cli_benchmark(const fs::path& data_dir, const fs::path& out_dir) {
    CliRun run;
    run.dir = out_dir;
    fs::create_directories(out_dir);
    const auto start = std::chrono::steady_clock::now();
    const std::string cmd = g_cli + " benchmark --all --data " + data_dir.string() +
                            " --out " + out_dir.string() + " > " +
                            (out_dir / "table.txt").string();
    run.ok = std::system(cmd.c_str()) == 0;
    run.seconds = seconds_since(start);
    return run;
}

bool criterion_end_to_end(fs::path& out_first, double& cli_seconds) {
    const fs::path base = fs::temp_directory_path() / "socbench_acceptance";
    fs::remove_all(base);
    const fs::path data = base / "data";
    fs::create_directories(data);

    const auto start = std::chrono::steady_clock::now();
    const std::string pre = g_cli + " preprocess --synthetic 10000 --seed 7 --out " +
                            data.string() + " > " + (base / "preprocess.log").string();
    bool ok = require(std::system(pre.c_str()) == 0, "preprocess run succeeds");
    if (!ok) return false;

    CliRun run = run_cli_benchmark(data, base / "run1");
    ok = ok && require(run.ok, "benchmark run succeeds");
    cli_seconds = seconds_since(start);
    ok = ok && require(cli_seconds < 300.0, "end-to-end time budget");
    if (!ok) return false;
    out_first = run.dir;

    const auto doc = nlohmann::json::parse(slurp((run.dir / "report.json").string()));
    const auto& rows = doc.at("rows");
    ok = ok && require(rows.size() == 7, "exactly seven comparison rows");

    const std::string table = slurp((run.dir / "table.txt").string());
    for (const auto& row : rows) {
        ok = ok && require(!row.at("failed").get<bool>(),
                           "every model trains: " + row.at("model").get<std::string>());
        if (row.at("failed").get<bool>()) continue;
        const double mse = row.at("test").at("mse").get<double>();
        const double rmse = row.at("test").at("rmse").get<double>();
        ok = ok && require(fmt4(rmse) == fmt4(std::sqrt(mse)),
                           "rendered RMSE is the root of the rendered MSE");
        ok = ok &&
             require(table.find(row.at("model").get<std::string>()) != std::string::npos,
                     "table lists " + row.at("model").get<std::string>());
        const double r2 = row.at("test").at("r2").get<double>();
        if (row.at("key") == "tree")
            ok = ok && require(r2 >= 0.99, "decision tree test fit quality");
        if (row.at("key") == "mlp")
            ok = ok && require(r2 >= 0.95, "feed-forward network test fit quality");
    }
    return ok;
}

bool criterion_reproducible(const fs::path& out_first) {
    const fs::path base = fs::temp_directory_path() / "socbench_acceptance";
    CliRun rerun = run_cli_benchmark(base / "data", base / "run2");
    bool ok = require(rerun.ok, "second benchmark run succeeds");
    if (!ok) return false;

    const std::string a = slurp((out_first / "report.json").string());
    const std::string b = slurp((rerun.dir / "report.json").string());
    ok = ok && require(!a.empty() && a == b, "report bytes identical across runs");

    // replaying the manifest reproduces the same report
    const auto manifest =
        nlohmann::json::parse(slurp((out_first / "manifest.json").string()));
    const auto replayed = replay_from_manifest(manifest);
    ok = ok && require(report_to_json(replayed).dump(2) + "\n" == a,
                       "manifest replay reproduces the report");
    return ok;
}

// ---- criterion 9: early stopping semantics ----

bool criterion_early_stopping() {
    std::mt19937_64 rng(1009);
    auto net = build_mlp(1, rng);
    Matrix X(1, 1, std::vector<double>{1.0});
    Vector y_train{100.0}, y_val{-100.0};

    Adam opt;
    TrainConfig config;
    config.epochs = 100;
    config.patience = 5;
    config.shuffle_seed = 1;
    auto history = train(net, X, y_train, X, y_val, config, opt);

    bool ok = require(history.val_loss.size() >= 2, "training ran");
    for (std::size_t e = 1; e < history.val_loss.size() && ok; ++e)
        ok = require(history.val_loss[e] > history.val_loss[e - 1],
                     "validation loss worsens monotonically (test premise)");
    ok = ok && require(history.early_stopped, "early stopping triggered");
    ok = ok && require(history.val_loss.size() == config.patience + 1,
                       "stops after exactly patience+1 epochs");
    ok = ok && require(history.best_epoch == 0, "best epoch is the first");

    const double val_now =
        mse_loss(net.forward(reshape_input(X), false), Tensor({1, 1, 1}, y_val)).first;
    ok = ok && require(val_now == history.val_loss[0], "first-epoch weights restored");
    return ok;
}

// ---- criterion 10 (reported only): external driving-cycle dataset ----

void criterion_real_dataset() {
    const char* path = std::getenv("SOCBENCH_REAL_DATA");
    if (path == nullptr || !fs::exists(path)) {
        std::cout << "criterion 10 (real dataset, informational): SKIP"
                     " (set SOCBENCH_REAL_DATA to a driving-cycle csv)\n";
        return;
    }
    try {
        PreprocessConfig pre;
        pre.input_path = path;
        pre.seed = 42;
        auto artifact = run_preprocess(pre);
        BenchConfig bench;
        bench.models = {"tree", "linear", "lasso"};
        const std::size_t total =
            artifact.train.n_rows() + artifact.val.n_rows() + artifact.test.n_rows();
        const auto report = run_subset(artifact, std::min<std::size_t>(32067, total), 42, bench);

        const auto& best = report.rows.front();
        const bool tree_first = best.key == "tree";
        const bool beats = best.subset_pass.value_or(false);
        std::cout << "criterion 10 (real dataset, informational): "
                  << (tree_first && beats ? "PASS" : "REPORTED")
                  << " (best=" << best.model
                  << " rmse=" << fmt4(best.test_metrics->rmse)
                  << " mae=" << fmt4(best.test_metrics->mae) << ")\n";
    } catch (const std::exception& e) {
        std::cout << "criterion 10 (real dataset, informational): REPORTED (error: "
                  << e.what() << ")\n";
    }
}

bool report(int index, const std::string& label, bool ok) {
    std::cout << "criterion " << index << " (" << label << "): " << (ok ? "PASS" : "FAIL")
              << '\n';
    for (const auto& msg : g_notes) std::cout << "    " << msg << '\n';
    g_notes.clear();
    std::cout.flush();
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-cli-binary>\n";
        return 2;
    }
    g_cli = argv[1];

    int failures = 0;
    auto gate = [&](int index, const std::string& label, bool ok) {
        if (!report(index, label, ok)) ++failures;
    };

    gate(1, "regression metrics vs oracle", criterion_metrics());
    gate(2, "least squares vs QR oracle", criterion_ols());
    gate(3, "lasso optimality conditions", criterion_lasso());
    gate(4, "decision tree vs exhaustive oracle", criterion_tree());
    gate(5, "backprop gradient checks", criterion_gradients());
    gate(6, "attention probability rows", criterion_attention());

    fs::path first_out;
    double cli_seconds = 0.0;
    gate(7, "end-to-end synthetic benchmark", criterion_end_to_end(first_out, cli_seconds));
    bool repro_ok = false;
    if (!first_out.empty())
        repro_ok = criterion_reproducible(first_out);
    else
        note("skipped: the end-to-end run left no output to compare");
    gate(8, "byte-identical reproducibility", repro_ok);
    gate(9, "early stopping contract", criterion_early_stopping());
    criterion_real_dataset();

    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all gating criteria passed\n";
    return 0;
}
